"""Greedy neighborhood selection by conditional-entropy descent, the pruning
post-process, symmetrization into a graph, and the Chow-Liu tree baseline.

Per node, the greedy pass starts from an empty conditioning set and repeatedly
adds the candidate giving the lowest conditional entropy of the node, stopping
as soon as the best remaining candidate improves the current conditional
entropy by no more than epsilon/2. On finite samples this can admit spurious
vertices; the prune step removes candidates whose deletion costs no more than
epsilon/2 of conditional entropy, weakest contributor first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .entropy import DistributionSource, conditional_entropy, mutual_information
from .models import MarkovGraph

STOP_THRESHOLD = "threshold"
STOP_CAP = "cap"
STOP_EXHAUSTED = "exhausted"

TIE_BREAK_LOWEST = "lowest_index"


@dataclass(frozen=True)
class LearnerConfig:
    epsilon: float
    max_neighborhood: int | None = None
    tie_break: str = TIE_BREAK_LOWEST
    symmetrization: str = "AND"

    def __post_init__(self) -> None:
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.max_neighborhood is not None and self.max_neighborhood < 1:
            raise ValueError("neighborhood cap must be >= 1 when present")
        if self.tie_break != TIE_BREAK_LOWEST:
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")
        if self.symmetrization not in ("AND", "OR"):
            raise ValueError("symmetrization must be 'AND' or 'OR'")

    @staticmethod
    def with_degree_hint(epsilon: float, degree_hint: int, **kw) -> "LearnerConfig":
        """Cap the per-node neighborhood at twice the expected degree."""
        return LearnerConfig(epsilon, max_neighborhood=2 * degree_hint, **kw)


@dataclass(frozen=True)
class Pick:
    vertex: int
    entropy_before: float
    entropy_after: float


@dataclass(frozen=True)
class NeighborhoodTrace:
    node: int
    picks: tuple[Pick, ...]
    stop_reason: str

    @property
    def picked(self) -> tuple[int, ...]:
        return tuple(p.vertex for p in self.picks)


@dataclass(frozen=True)
class LearnResult:
    traces: tuple[NeighborhoodTrace, ...]
    graph: MarkovGraph
    asymmetric_pairs: tuple[tuple[int, int], ...]
    config: LearnerConfig
    pruned: dict[int, tuple[int, ...]] | None = field(default=None)

    def to_dict(self) -> dict:
        """JSON-ready document: traces, edges, asymmetric pairs, config echo."""
        doc = {
            "config": {
                "epsilon": self.config.epsilon,
                "max_neighborhood": self.config.max_neighborhood,
                "tie_break": self.config.tie_break,
                "symmetrization": self.config.symmetrization,
            },
            "num_vars": self.graph.p,
            "edges": [list(e) for e in self.graph.sorted_edges()],
            "asymmetric_pairs": [list(pair) for pair in self.asymmetric_pairs],
            "traces": [
                {
                    "node": t.node,
                    "stop_reason": t.stop_reason,
                    "picks": [
                        {
                            "vertex": p.vertex,
                            "entropy_before": p.entropy_before,
                            "entropy_after": p.entropy_after,
                        }
                        for p in t.picks
                    ],
                }
                for t in self.traces
            ],
        }
        if self.pruned is not None:
            doc["pruned_neighborhoods"] = {
                str(i): list(v) for i, v in sorted(self.pruned.items())
            }
        return doc


def greedy_neighborhood(
    src: DistributionSource, i: int, cfg: LearnerConfig
) -> NeighborhoodTrace:
    """Grow the estimated neighborhood of node ``i`` one argmin pick at a time.

    A candidate is accepted only if it lowers the current conditional entropy
    by strictly more than epsilon/2; ties in the argmin go to the lowest
    vertex index.
    """
    if src.p < 2:
        raise ValueError("need at least two variables")
    if not 0 <= i < src.p:
        raise IndexError(f"vertex {i} out of range for p={src.p}")
    cap = cfg.max_neighborhood if cfg.max_neighborhood is not None else src.p - 1
    chosen: list[int] = []
    picks: list[Pick] = []
    current = conditional_entropy(src, i, chosen)
    while True:
        candidates = [k for k in range(src.p) if k != i and k not in chosen]
        if not candidates:
            reason = STOP_EXHAUSTED
            break
        if len(chosen) >= cap:
            reason = STOP_CAP
            break
        best_k = -1
        best_h = None
        for k in candidates:
            h = conditional_entropy(src, i, chosen + [k])
            if best_h is None or h < best_h:
                best_h = h
                best_k = k
        if best_h < current - cfg.epsilon / 2.0:
            picks.append(Pick(vertex=best_k, entropy_before=current, entropy_after=best_h))
            chosen.append(best_k)
            current = best_h
        else:
            reason = STOP_THRESHOLD
            break
    return NeighborhoodTrace(node=i, picks=tuple(picks), stop_reason=reason)


def symmetrize(
    neighborhoods: Sequence[Iterable[int]], p: int, rule: str
) -> tuple[MarkovGraph, tuple[tuple[int, int], ...]]:
    """Combine directed neighborhood estimates into an undirected edge set.

    AND keeps {i, j} only when each endpoint selected the other; OR keeps the
    pair when either did. Ordered pairs present in one direction only are
    reported regardless of the rule.
    """
    sets = [set(nb) for nb in neighborhoods]
    asym = []
    edges = set()
    for i in range(p):
        for j in sorted(sets[i]):
            if i in sets[j]:
                edges.add((min(i, j), max(i, j)))
            else:
                asym.append((i, j))
                if rule == "OR":
                    edges.add((min(i, j), max(i, j)))
    return MarkovGraph(p, edges), tuple(sorted(asym))


def learn_structure(src: DistributionSource, cfg: LearnerConfig) -> LearnResult:
    """Run the greedy pass for every vertex and symmetrize the estimates."""
    traces = tuple(greedy_neighborhood(src, i, cfg) for i in range(src.p))
    graph, asym = symmetrize([t.picked for t in traces], src.p, cfg.symmetrization)
    return LearnResult(traces=traces, graph=graph, asymmetric_pairs=asym, config=cfg)


def prune_neighborhood(
    src: DistributionSource, i: int, candidate_set: Iterable[int], cfg: LearnerConfig
) -> tuple[int, ...]:
    """Drop candidates that stop contributing once the rest are conditioned on.

    Each round recomputes, for every member j, the entropy cost of removing it
    from the conditioning set; the smallest contributor is deleted while its
    gain is <= epsilon/2, until the set is stable.
    """
    kept = sorted(set(candidate_set))
    for j in kept:
        if j == i:
            raise ValueError("candidate set must not contain the node itself")
    while kept:
        h_full = conditional_entropy(src, i, kept)
        gains = [
            (conditional_entropy(src, i, [k for k in kept if k != j]) - h_full, j)
            for j in kept
        ]
        gain, weakest = min(gains)
        if gain <= cfg.epsilon / 2.0:
            kept.remove(weakest)
        else:
            break
    return tuple(kept)


def prune_result(src: DistributionSource, result: LearnResult) -> LearnResult:
    """Apply per-node pruning to a learn result and re-symmetrize."""
    pruned = {
        t.node: prune_neighborhood(src, t.node, t.picked, result.config)
        for t in result.traces
    }
    graph, asym = symmetrize(
        [pruned[i] for i in range(src.p)], src.p, result.config.symmetrization
    )
    return LearnResult(
        traces=result.traces,
        graph=graph,
        asymmetric_pairs=asym,
        config=result.config,
        pruned=pruned,
    )


def chow_liu(src: DistributionSource) -> MarkovGraph:
    """Maximum spanning tree under pairwise mutual-information weights.

    Ties are broken by lexicographic edge order, so the output is a
    deterministic function of the source.
    """
    p = src.p
    if p < 2:
        raise ValueError("need at least two variables")
    scored = sorted(
        ((-mutual_information(src, u, v), u, v) for u in range(p) for v in range(u + 1, p))
    )
    parent = list(range(p))

    def find(u: int) -> int:
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    edges = []
    for _, u, v in scored:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            edges.append((u, v))
            if len(edges) == p - 1:
                break
    return MarkovGraph(p, edges)
