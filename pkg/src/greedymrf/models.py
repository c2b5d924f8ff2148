"""Markov graphs, factor graphs, zero-field Ising models, and inference backends.

The exact backend enumerates the full joint table (feasible up to the
``ENUMERATION_CAP`` of 24 binary variables); beyond that, sampling falls back
to a single-site Gibbs chain. Spins are encoded project-wide as alphabet
index 0 <-> -1 and 1 <-> +1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .dataset import Alphabet, CapacityError, DiscreteDataset, SPIN_ALPHABET

ENUMERATION_CAP = 24
_CHUNK = 1 << 20

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class MarkovGraph:
    """Undirected simple graph on vertices 0..p-1."""

    def __init__(self, p: int, edges: Iterable[Edge]):
        if p < 1:
            raise ValueError("graph needs at least one vertex")
        norm = {_norm_edge(u, v) for u, v in edges}
        for u, v in norm:
            if not (0 <= u < p and 0 <= v < p):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{p - 1}")
        self.p = p
        self.edges = frozenset(norm)
        adj: list[list[int]] = [[] for _ in range(p)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def num_vertices(self) -> int:
        return self.p

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarkovGraph):
            return NotImplemented
        return self.p == other.p and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.p, self.edges))

    def __repr__(self) -> str:
        return f"MarkovGraph(p={self.p}, |E|={len(self.edges)})"


class FactorGraph:
    """Bipartite variable/clique graph of a Markov graph.

    Vertices 0..p-1 are the variables; vertex p+k is the k-th maximal clique.
    """

    def __init__(self, p: int, cliques: Sequence[frozenset[int]]):
        self.p = p
        self.cliques = tuple(cliques)
        adj: list[list[int]] = [[] for _ in range(p + len(self.cliques))]
        for k, clique in enumerate(self.cliques):
            for v in clique:
                adj[v].append(p + k)
                adj[p + k].append(v)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def num_vertices(self) -> int:
        return self.p + len(self.cliques)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    @property
    def incidences(self) -> frozenset[Edge]:
        return frozenset(
            (v, self.p + k) for k, clique in enumerate(self.cliques) for v in clique
        )


def _bron_kerbosch(adj: Sequence[set[int]], r: set[int], p: set[int], x: set[int]) -> Iterator[frozenset[int]]:
    # Pivoted recursive expansion; fine for the sparse, small graphs used here.
    if not p and not x:
        yield frozenset(r)
        return
    pivot = max(p | x, key=lambda u: len(adj[u] & p))
    for v in list(p - adj[pivot]):
        yield from _bron_kerbosch(adj, r | {v}, p & adj[v], x & adj[v])
        p.remove(v)
        x.add(v)


def maximal_cliques(g: MarkovGraph) -> list[frozenset[int]]:
    """All maximal cliques, sorted for determinism. Isolated vertices count."""
    adj = [set(g.neighbors(u)) for u in range(g.p)]
    found = list(_bron_kerbosch(adj, set(), set(range(g.p)), set()))
    return sorted(found, key=lambda c: tuple(sorted(c)))


def factor_graph(g: MarkovGraph) -> FactorGraph:
    """Factor graph whose clique vertices are the maximal cliques of ``g``."""
    return FactorGraph(g.p, maximal_cliques(g))


def graph_distance(g: MarkovGraph | FactorGraph, u: int, v: int) -> float:
    """BFS hop distance between two vertices; math.inf if disconnected."""
    n = g.num_vertices
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"vertex out of range 0..{n - 1}")
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        w = queue.popleft()
        for x in g.neighbors(w):
            if x not in dist:
                dist[x] = dist[w] + 1
                if x == v:
                    return dist[x]
                queue.append(x)
    return math.inf


def girth(g: MarkovGraph | FactorGraph) -> float:
    """Length of the shortest cycle; math.inf for forests.

    Per-vertex BFS with cross-edge detection: every non-tree edge seen from
    root r closes a walk of length d[u]+d[w]+1 that contains a cycle no
    longer than itself, and a root on a shortest cycle reports its length
    exactly, so the minimum over roots is the girth.
    """
    best = math.inf
    n = g.num_vertices
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if dist[u] * 2 >= best:
                continue
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


@dataclass(frozen=True)
class IsingModel:
    """Zero-field Ising model: P(x) proportional to exp(sum theta_uv x_u x_v)."""

    graph: MarkovGraph
    theta: dict[Edge, float]

    def __post_init__(self) -> None:
        norm = {_norm_edge(u, v): t for (u, v), t in self.theta.items()}
        if set(norm) != set(self.graph.edges):
            raise ValueError("theta keys must be exactly the graph edges")
        if any(t == 0.0 for t in norm.values()):
            raise ValueError("edge parameters must be nonzero")
        object.__setattr__(self, "theta", norm)

    @property
    def p(self) -> int:
        return self.graph.p


class JointDistribution:
    """Dense probability table over all |alphabet|^p assignments.

    Cell index is mixed-radix with variable 0 as the most significant digit.
    """

    def __init__(self, p: int, alphabet: Alphabet, probs: np.ndarray):
        probs = np.asarray(probs, dtype=np.float64).ravel()
        if probs.size != alphabet.size**p:
            raise ValueError("probability table has wrong size")
        if probs.min() < 0:
            raise ValueError("negative probability cell")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError("probability table does not sum to 1")
        self.p = p
        self.alphabet = alphabet
        self.probs = probs
        self.probs.setflags(write=False)

    def dense_marginal(self, variables: Sequence[int]) -> np.ndarray:
        """Exact marginal over sorted ``variables`` (same indexing as the table)."""
        variables = tuple(sorted(variables))
        for v in variables:
            if not 0 <= v < self.p:
                raise IndexError(f"variable index {v} out of range for p={self.p}")
        q = self.alphabet.size
        if not variables:
            return np.array([1.0])
        drop = tuple(ax for ax in range(self.p) if ax not in variables)
        shaped = self.probs.reshape((q,) * self.p)
        return shaped.sum(axis=drop).ravel()


def exact_joint(m: IsingModel) -> JointDistribution:
    """Enumerate the full 2^p table of a model; p is capped at ENUMERATION_CAP."""
    p = m.p
    if p > ENUMERATION_CAP:
        raise CapacityError(f"exact enumeration needs p <= {ENUMERATION_CAP}, got {p}")
    size = 1 << p
    energy = np.zeros(size, dtype=np.float64)
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        chunk = np.zeros(idx.size, dtype=np.float64)
        for (u, v), t in m.theta.items():
            # bit is 0 for spin -1, 1 for +1; product is +1 iff bits agree
            bu = (idx >> (p - 1 - u)) & 1
            bv = (idx >> (p - 1 - v)) & 1
            chunk += t * (1.0 - 2.0 * np.bitwise_xor(bu, bv))
        energy[start : start + idx.size] = chunk
    energy -= energy.max()
    w = np.exp(energy)
    return JointDistribution(p, SPIN_ALPHABET, w / w.sum())


def exact_sample(j: JointDistribution, n: int, seed: int) -> DiscreteDataset:
    """Draw n i.i.d. samples from a dense joint by inverse-CDF lookup."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(j.probs)
    cdf[-1] = 1.0
    cells = np.searchsorted(cdf, rng.random(n), side="right")
    cells = np.minimum(cells, j.probs.size - 1)
    q = j.alphabet.size
    values = np.empty((n, j.p), dtype=np.int64)
    rem = cells.copy()
    for c in range(j.p - 1, -1, -1):
        values[:, c] = rem % q
        rem //= q
    names = [f"v{k}" for k in range(j.p)]
    return DiscreteDataset(names, j.alphabet, values)


@dataclass(frozen=True)
class GibbsConfig:
    """Chain controls. ``burn_in`` / ``thinning`` are in full sweeps over all
    sites; burn_in defaults to 1000*p when left as None."""

    seed: int
    burn_in: int | None = None
    thinning: int = 10


def gibbs_full_conditional(m: IsingModel, site: int, spins: Sequence[int]) -> float:
    """P(X_site = +1 | all other spins) for +-1 spin values."""
    h = sum(t * spins[v if u == site else u] for (u, v), t in m.theta.items() if site in (u, v))
    return 1.0 / (1.0 + math.exp(-2.0 * h))


def gibbs_sample(m: IsingModel, n: int, cfg: GibbsConfig) -> DiscreteDataset:
    """Single-site Gibbs sampler; deterministic given the seed."""
    if n < 1:
        raise ValueError("need n >= 1")
    p = m.p
    burn = 1000 * p if cfg.burn_in is None else cfg.burn_in
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(p)]
    for (u, v), t in m.theta.items():
        nbrs[u].append((v, t))
        nbrs[v].append((u, t))
    rng = np.random.default_rng(cfg.seed)
    spins = [int(s) for s in rng.integers(0, 2, size=p) * 2 - 1]
    exp = math.exp

    def sweep() -> None:
        u = rng.random(p)
        for k in range(p):
            h = 0.0
            for j, t in nbrs[k]:
                h += t * spins[j]
            spins[k] = 1 if u[k] < 1.0 / (1.0 + exp(-2.0 * h)) else -1

    for _ in range(burn):
        sweep()
    values = np.empty((n, p), dtype=np.int64)
    for r in range(n):
        for _ in range(max(1, cfg.thinning)):
            sweep()
        values[r] = [(s + 1) >> 1 for s in spins]
    names = [f"v{k}" for k in range(p)]
    return DiscreteDataset(names, SPIN_ALPHABET, values)


def is_forest(g: MarkovGraph) -> bool:
    """True iff the graph has no cycle (union-find over the edge set)."""
    root = list(range(g.p))

    def find(u: int) -> int:
        while root[u] != u:
            root[u] = root[root[u]]
            u = root[u]
        return u

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        root[ru] = rv
    return True


def tree_spin_posterior(m: IsingModel, target: int, evidence: dict[int, int]) -> float:
    """P(X_target = +1 | evidence) on a tree model via upward message passing.

    ``evidence`` maps vertices to +-1 spins. Exact for forests of any size,
    which is what makes correlation-decay checks on deep trees feasible; the
    dense table backend is limited to ENUMERATION_CAP variables. Messages are
    normalized at every node so deep trees cannot overflow.
    """
    g = m.graph
    if not is_forest(g):
        raise ValueError("tree_spin_posterior requires an acyclic graph")
    for v, s in evidence.items():
        if s not in (-1, 1):
            raise ValueError(f"evidence spin for vertex {v} must be -1 or +1")
    if target in evidence:
        return 1.0 if evidence[target] == 1 else 0.0

    def message(child: int, parent: int) -> tuple[float, float]:
        # Scaled (mu(parent=-1), mu(parent=+1)) contributed by child's subtree.
        t = m.theta[_norm_edge(child, parent)]
        sub = [message(w, child) for w in g.neighbors(child) if w != parent]
        out = [0.0, 0.0]
        for pk, sp in ((0, -1), (1, 1)):
            total = 0.0
            for sc in ((evidence[child],) if child in evidence else (-1, 1)):
                val = math.exp(t * sc * sp)
                for mw in sub:
                    val *= mw[(sc + 1) >> 1]
                total += val
            out[pk] = total
        z = out[0] + out[1]
        return (out[0] / z, out[1] / z) if z > 0 else (0.0, 0.0)

    belief = [1.0, 1.0]
    for w in g.neighbors(target):
        mw = message(w, target)
        belief[0] *= mw[0]
        belief[1] *= mw[1]
    z = belief[0] + belief[1]
    if z == 0.0:
        raise ValueError("evidence has zero probability")
    return belief[1] / z


def write_edge_list(g: MarkovGraph, path: str | Path) -> None:
    """Text format: first line is p, then one 'u v' pair per line, sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.p}\n")
        for u, v in g.sorted_edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str | Path) -> MarkovGraph:
    lines = Path(path).read_text(encoding="utf-8").split()
    p = int(lines[0])
    rest = [int(x) for x in lines[1:]]
    if len(rest) % 2:
        raise ValueError(f"{path}: odd number of endpoints")
    edges = [(rest[k], rest[k + 1]) for k in range(0, len(rest), 2)]
    return MarkovGraph(p, edges)


def to_dot(g: MarkovGraph, names: Sequence[str] | None = None) -> str:
    """DOT text for external rendering; vertex order is fixed for determinism."""
    label = (lambda u: f'"{names[u]}"') if names is not None else (lambda u: str(u))
    lines = ["graph G {"]
    for u in range(g.p):
        lines.append(f"  {label(u)};")
    for u, v in g.sorted_edges():
        lines.append(f"  {label(u)} -- {label(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
