"""Entropies, conditional entropies, mutual information, and distribution
distance bounds, computed uniformly over empirical datasets and exact joint
tables.

All entropies are base-2 (bits). The 0*log(0) convention is enforced by
skipping zero cells, and conditional entropy is always computed as a
difference of joint entropies so no 0/0 conditional cell can arise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dataset import Alphabet, DiscreteDataset
from .models import JointDistribution

#: Float slack for equality-style checks against exact sources.
EXACT_TOL = 1e-12


class DistributionSource:
    """Answers marginal-probability queries over variable subsets.

    Subclasses provide ``_dense_marginal``; entropy values are cached per
    sorted variable tuple, which the greedy learner leans on heavily.
    Sources are immutable and safe for concurrent use.
    """

    p: int
    alphabet: Alphabet

    def __init__(self) -> None:
        self._entropy_cache: dict[tuple[int, ...], float] = {}

    def check_subset(self, variables: Iterable[int]) -> tuple[int, ...]:
        out = tuple(sorted(set(variables)))
        for v in out:
            if not 0 <= v < self.p:
                raise IndexError(f"variable index {v} out of range for p={self.p}")
        return out

    def dense_marginal(self, variables: Iterable[int]) -> np.ndarray:
        """Marginal over the sorted variable subset, mixed-radix indexed with
        the lowest variable as the most significant digit."""
        return self._dense_marginal(self.check_subset(variables))

    def _dense_marginal(self, variables: tuple[int, ...]) -> np.ndarray:
        raise NotImplementedError

    def entropy_bits(self, variables: tuple[int, ...]) -> float:
        got = self._entropy_cache.get(variables)
        if got is None:
            got = _entropy_of_probs(self._marginal_probs_sparse(variables))
            self._entropy_cache[variables] = got
        return got

    def _marginal_probs_sparse(self, variables: tuple[int, ...]) -> np.ndarray:
        """Probabilities of the nonzero marginal cells, any order."""
        dense = self._dense_marginal(variables)
        return dense[dense > 0]


class EmpiricalSource(DistributionSource):
    """Plug-in distribution of a dataset."""

    def __init__(self, ds: DiscreteDataset):
        super().__init__()
        self.dataset = ds
        self.p = ds.p
        self.alphabet = ds.alphabet

    def _dense_marginal(self, variables: tuple[int, ...]) -> np.ndarray:
        return self.dataset.dense_marginal(variables)

    def _marginal_probs_sparse(self, variables: tuple[int, ...]) -> np.ndarray:
        _, counts = self.dataset.joint_counts(variables)
        return counts / self.dataset.n


class ExactSource(DistributionSource):
    """Exact distribution backed by a dense joint table."""

    def __init__(self, joint: JointDistribution):
        super().__init__()
        self.joint = joint
        self.p = joint.p
        self.alphabet = joint.alphabet

    def _dense_marginal(self, variables: tuple[int, ...]) -> np.ndarray:
        return self.joint.dense_marginal(variables)


def _entropy_of_probs(probs: np.ndarray) -> float:
    nz = probs[probs > 0]
    if nz.size == 0:
        return 0.0
    return float(-np.dot(nz, np.log2(nz)))


def entropy(src: DistributionSource, variables: Iterable[int]) -> float:
    """Joint entropy of the marginal on ``variables``, in bits; 0 for the
    empty set."""
    return src.entropy_bits(src.check_subset(variables))


def conditional_entropy(src: DistributionSource, i: int, given: Iterable[int]) -> float:
    """H(X_i | X_given) in bits, as entropy(given + i) - entropy(given)."""
    given_t = src.check_subset(given)
    if i in given_t:
        raise ValueError(f"target variable {i} appears in the conditioning set")
    joint_t = src.check_subset(given_t + (i,))
    return src.entropy_bits(joint_t) - src.entropy_bits(given_t)


def mutual_information(src: DistributionSource, i: int, j: int) -> float:
    """I(X_i; X_j) = H(X_i) - H(X_i | X_j), in bits."""
    if i == j:
        raise ValueError("mutual information needs two distinct variables")
    return entropy(src, (i,)) - conditional_entropy(src, i, (j,))


def _aligned_marginals(
    p_src: DistributionSource, q_src: DistributionSource, variables: Iterable[int]
) -> tuple[np.ndarray, np.ndarray, int]:
    if p_src.alphabet.symbols != q_src.alphabet.symbols:
        raise ValueError("sources must share one alphabet to be compared")
    a = p_src.check_subset(variables)
    b = q_src.check_subset(variables)
    if a != b:
        raise ValueError("variable subset invalid for one of the sources")
    return p_src.dense_marginal(a), q_src.dense_marginal(a), len(a)


def l1_distance(
    p_src: DistributionSource, q_src: DistributionSource, variables: Iterable[int]
) -> float:
    """Total variational distance sum |P - Q| over the marginal on
    ``variables``; lies in [0, 2]."""
    pm, qm, _ = _aligned_marginals(p_src, q_src, variables)
    return float(np.abs(pm - qm).sum())


@dataclass(frozen=True)
class EntropyL1Report:
    """Outcome of the entropy-vs-L1 continuity check.

    ``applicable`` is False when the L1 distance exceeds 1/2, outside the
    bound's validity region; ``holds`` is then vacuously True.
    """

    lhs: float
    rhs: float
    l1: float
    applicable: bool
    holds: bool


def check_entropy_l1_bound(
    p_src: DistributionSource, q_src: DistributionSource, variables: Iterable[int]
) -> EntropyL1Report:
    """Check |H(P) - H(Q)| <= -||P-Q||_1 log2(||P-Q||_1 / M) on the marginal,
    where M is the number of cells of the marginal's outcome space."""
    pm, qm, nvars = _aligned_marginals(p_src, q_src, variables)
    cells = p_src.alphabet.size**nvars
    l1 = float(np.abs(pm - qm).sum())
    lhs = abs(_entropy_of_probs(pm) - _entropy_of_probs(qm))
    rhs = 0.0 if l1 == 0.0 else -l1 * math.log2(l1 / cells)
    applicable = l1 <= 0.5
    holds = (not applicable) or (lhs <= rhs + EXACT_TOL)
    return EntropyL1Report(lhs=lhs, rhs=rhs, l1=l1, applicable=applicable, holds=holds)


@dataclass(frozen=True)
class PinskerReport:
    """Outcome of the KL-vs-L1 check; an infinite KL holds vacuously."""

    kl_bits: float
    l1: float
    holds: bool


def check_pinsker(
    p_src: DistributionSource, q_src: DistributionSource, variables: Iterable[int]
) -> PinskerReport:
    """Check D(P||Q) >= ||P-Q||_1^2 / (2 ln 2) with the KL divergence in bits."""
    pm, qm, _ = _aligned_marginals(p_src, q_src, variables)
    l1 = float(np.abs(pm - qm).sum())
    support = pm > 0
    if np.any(qm[support] == 0):
        kl = math.inf
    else:
        kl = float(np.dot(pm[support], np.log2(pm[support] / qm[support])))
    holds = math.isinf(kl) or kl >= l1 * l1 / (2.0 * math.log(2)) - EXACT_TOL
    return PinskerReport(kl_bits=kl, l1=l1, holds=holds)
