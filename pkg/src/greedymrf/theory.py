"""Closed-form guarantee calculators and empirical measurement of the two
structural assumptions (non-degeneracy gap, correlation-decay profile) on
small exact models.

The calculators evaluate their formulas literally. Entropy-flavored constants
are quoted in bits; where a formula mixes in the natural-log constant ln 2
(the tree decay rate), that is evaluated as ln 2. The sample-size bound is
astronomically loose by design and is never used to size experiments here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataset import CapacityError
from .entropy import ExactSource, conditional_entropy
from .models import JointDistribution, MarkovGraph, graph_distance

#: Largest node degree for which the full gap enumeration is attempted.
GAP_DEGREE_CAP = 12
#: Largest variable count for one decay-profile deviation evaluation.
DECAY_VARS_CAP = 16


@dataclass(frozen=True)
class BoundReport:
    """One evaluated closed-form bound, with its inputs echoed back."""

    name: str
    inputs: dict[str, float]
    value: float
    formula: str


def decay_threshold(epsilon: float, max_degree: int, alphabet_size: int) -> float:
    """Required correlation-decay level eps^2 * q^(-2(D+1)^2) / 64.

    Greedy picks are safe once the decay function has fallen below this;
    extreme degrees underflow to 0.0, which is reported as-is.
    """
    if epsilon <= 0 or max_degree < 0 or alphabet_size < 2:
        raise ValueError("need epsilon > 0, max_degree >= 0, alphabet_size >= 2")
    return epsilon**2 * float(alphabet_size) ** (-2 * (max_degree + 1) ** 2) / 64.0


def sample_size_bound(
    epsilon: float,
    max_degree: int,
    alphabet_size: int,
    num_vars: int,
    delta: float,
    log_base2: bool = True,
) -> int:
    """Samples sufficient for uniformly accurate conditional entropies:
    2^15 * eps^-4 * q^(4(D+2)) * ((D+2) log(2q) + 2 log(p/delta)), rounded up.

    The information logs default to base 2 to match bit entropies; the
    natural-log reading is available behind ``log_base2=False``.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if epsilon <= 0 or num_vars < 1 or alphabet_size < 2 or max_degree < 0:
        raise ValueError("invalid bound inputs")
    log = math.log2 if log_base2 else math.log
    d2 = max_degree + 2
    value = (
        2.0**15
        * epsilon**-4
        * float(alphabet_size) ** (4 * d2)
        * (d2 * log(2 * alphabet_size) + 2 * log(num_vars / delta))
    )
    return math.ceil(value)


@dataclass(frozen=True)
class IsingGuarantee:
    epsilon: float
    girth_bound: float


def ising_guarantee(beta: float, max_degree: int) -> IsingGuarantee:
    """Recovery constants for a zero-field Ising model with couplings of
    magnitude at least beta: the driving epsilon 2^-10 sinh^2(2 beta) and the
    girth above which recovery is guaranteed,
    (2^15 / ln 2) * (D^2 ln 2 - ln sinh(2 beta))."""
    limit = math.log(2.0) / (2.0 * max_degree) if max_degree > 0 else math.inf
    if not 0.0 < beta < limit:
        raise ValueError(
            f"beta must lie in (0, ln(2)/(2*max_degree)) = (0, {limit:.6g}); got {beta}"
        )
    eps = 2.0**-10 * math.sinh(2.0 * beta) ** 2
    g = 2.0**15 / math.log(2.0) * (max_degree**2 * math.log(2.0) - math.log(math.sinh(2.0 * beta)))
    return IsingGuarantee(epsilon=eps, girth_bound=g)


def ising_nondegeneracy_epsilon(beta: float, gamma: float, max_degree: int) -> float:
    """Non-degeneracy constant implied by exponential decay on an Ising model
    with beta < |theta| < gamma: 2^-7 e^(-6 gamma D) sinh^2(2 beta)."""
    if not 0.0 < beta < gamma:
        raise ValueError("need 0 < beta < gamma")
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    return 2.0**-7 * math.exp(-6.0 * gamma * max_degree) * math.sinh(2.0 * beta) ** 2


def all_bound_reports(
    epsilon: float | None = None,
    beta: float | None = None,
    gamma: float | None = None,
    max_degree: int | None = None,
    alphabet_size: int | None = None,
    num_vars: int | None = None,
    delta: float | None = None,
    log_base2: bool = True,
) -> list[BoundReport]:
    """Every bound computable from the supplied inputs, as reports."""
    out: list[BoundReport] = []
    if epsilon is not None and max_degree is not None and alphabet_size is not None:
        out.append(
            BoundReport(
                name="decay_threshold",
                inputs={"epsilon": epsilon, "max_degree": max_degree, "alphabet_size": alphabet_size},
                value=decay_threshold(epsilon, max_degree, alphabet_size),
                formula="epsilon^2 * q^(-2(D+1)^2) / 64",
            )
        )
        if num_vars is not None and delta is not None:
            out.append(
                BoundReport(
                    name="sample_size_bound",
                    inputs={
                        "epsilon": epsilon,
                        "max_degree": max_degree,
                        "alphabet_size": alphabet_size,
                        "num_vars": num_vars,
                        "delta": delta,
                    },
                    value=float(
                        sample_size_bound(
                            epsilon, max_degree, alphabet_size, num_vars, delta, log_base2
                        )
                    ),
                    formula="2^15 eps^-4 q^(4(D+2)) ((D+2) log 2q + 2 log p/delta)",
                )
            )
    if beta is not None and max_degree is not None:
        guarantee = ising_guarantee(beta, max_degree)
        out.append(
            BoundReport(
                name="ising_epsilon",
                inputs={"beta": beta, "max_degree": max_degree},
                value=guarantee.epsilon,
                formula="2^-10 sinh^2(2 beta)",
            )
        )
        out.append(
            BoundReport(
                name="ising_girth_bound",
                inputs={"beta": beta, "max_degree": max_degree},
                value=guarantee.girth_bound,
                formula="(2^15/ln 2)(D^2 ln 2 - ln sinh 2 beta)",
            )
        )
        if gamma is not None:
            out.append(
                BoundReport(
                    name="ising_nondegeneracy_epsilon",
                    inputs={"beta": beta, "gamma": gamma, "max_degree": max_degree},
                    value=ising_nondegeneracy_epsilon(beta, gamma, max_degree),
                    formula="2^-7 e^(-6 gamma D) sinh^2(2 beta)",
                )
            )
    return out


def nondegeneracy_gap(joint: JointDistribution, g: MarkovGraph, i: int) -> float:
    """Smallest conditional-entropy gain any true neighbor provides, in bits.

    Minimizes, over sub-neighborhoods A of node i, remaining neighbors j, and
    two-hop vertices l adjacent to j, both gap families
    H(X_i|X_A) - H(X_i|X_A, X_j) and H(X_i|X_A, X_l) - H(X_i|X_A, X_j, X_l).
    The model satisfies the non-degeneracy condition for any epsilon strictly
    below the returned value. An isolated vertex yields +inf (empty minimand).
    """
    if not 0 <= i < g.p:
        raise IndexError(f"vertex {i} out of range")
    nbrs = g.neighbors(i)
    if len(nbrs) > GAP_DEGREE_CAP:
        raise CapacityError(f"degree {len(nbrs)} exceeds gap enumeration cap {GAP_DEGREE_CAP}")
    src = ExactSource(joint)
    best = math.inf
    for size in range(len(nbrs)):
        for sub in combinations(nbrs, size):
            base = set(sub)
            h_base = conditional_entropy(src, i, base)
            for j in nbrs:
                if j in base:
                    continue
                gap = h_base - conditional_entropy(src, i, base | {j})
                best = min(best, gap)
                for l in g.neighbors(j):
                    if l == i:
                        continue
                    h_l = conditional_entropy(src, i, base | {l})
                    h_jl = conditional_entropy(src, i, base | {j, l})
                    best = min(best, h_l - h_jl)
    return best


def model_gap(joint: JointDistribution, g: MarkovGraph) -> float:
    """Non-degeneracy gap minimized over every vertex of the graph."""
    return min(nondegeneracy_gap(joint, g, i) for i in range(g.p))


@dataclass(frozen=True)
class DecayProfile:
    """Worst-case influence of a far conditioning set on a node's local joint,
    mapped by the hop distance of the set."""

    node: int
    by_distance: dict[int, float]

    def is_monotone_decreasing(self) -> bool:
        ds = sorted(self.by_distance)
        return all(
            self.by_distance[a] >= self.by_distance[b] for a, b in zip(ds, ds[1:])
        )


def decay_profile(
    joint: JointDistribution, g: MarkovGraph, i: int, max_set_size: int = 2
) -> DecayProfile:
    """Measure max |P(local | x_B) - P(local)| per distance d(i, B).

    ``local`` is node i with its one- and two-hop neighborhoods; B ranges over
    nonempty subsets of the remaining vertices up to ``max_set_size``. Since
    the condition quantifies over all sets, bounding |B| makes the reported
    values a lower bound on the true worst case.
    """
    if not 0 <= i < g.p:
        raise IndexError(f"vertex {i} out of range")
    one_hop = set(g.neighbors(i))
    two_hop = {w for j in one_hop for w in g.neighbors(j)} - one_hop - {i}
    local = tuple(sorted({i} | one_hop | two_hop))
    rest = [v for v in range(g.p) if v not in local]
    q = joint.alphabet.size
    p_local = joint.dense_marginal(local)
    worst: dict[int, float] = {}
    for size in range(1, max_set_size + 1):
        for b_set in combinations(rest, size):
            if len(local) + len(b_set) > DECAY_VARS_CAP:
                raise CapacityError("decay measurement exceeds the variable cap")
            dist = min(graph_distance(g, i, b) for b in b_set)
            if math.isinf(dist):
                continue
            union = tuple(sorted(local + b_set))
            m = joint.dense_marginal(union).reshape((q,) * len(union))
            # Move the B axes to the back so rows index the local assignment.
            b_axes = tuple(union.index(b) for b in b_set)
            l_axes = tuple(union.index(v) for v in local)
            m = np.transpose(m, l_axes + b_axes).reshape(q ** len(local), q ** len(b_set))
            p_b = m.sum(axis=0)
            ok = p_b > 0
            cond = m[:, ok] / p_b[ok]
            dev = float(np.abs(cond - p_local[:, None]).max())
            key = int(dist)
            worst[key] = max(worst.get(key, 0.0), dev)
    return DecayProfile(node=i, by_distance=worst)
