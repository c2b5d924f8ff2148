"""Discrete sample storage, CSV ingestion, and empirical probability queries.

A dataset is an immutable n x p matrix of alphabet indices plus the alphabet
itself. All probability estimation elsewhere in the package reduces to
counting rows of this matrix, so the counting backend lives here too: joint
counts over a variable subset are built as a sparse map from bit-packed
assignment keys to row counts (ceil(log2 |alphabet|) bits per variable),
which keeps queries feasible when p is large and only the query set is small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

# Widest bit-packed key we allow; queries beyond this are a usage bug.
_MAX_KEY_BITS = 62
# Dense tables over a query set are capped at this many cells.
_MAX_DENSE_CELLS = 1 << 24


class DatasetError(ValueError):
    """Base class for ingestion and dataset construction failures."""


class ParseError(DatasetError):
    """A CSV row could not be parsed (wrong field count, bad header)."""


class UnknownTokenError(DatasetError):
    """A token fell outside an explicitly supplied alphabet."""


class EmptyDatasetError(DatasetError):
    """An operation produced or received a dataset with no rows or columns."""


class CapacityError(ValueError):
    """A query or enumeration exceeds the configured dense-table caps."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct tokens with a token <-> index bijection."""

    symbols: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.symbols) < 2:
            raise DatasetError("alphabet needs at least 2 symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise DatasetError("alphabet symbols must be distinct")
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.symbols)})

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownTokenError(f"token {token!r} not in alphabet {self.symbols}") from None

    @property
    def bits_per_value(self) -> int:
        """Bits needed to pack one value of this alphabet."""
        return max(1, int(self.size - 1).bit_length())


# Spin convention used by the Ising machinery: index 0 <-> -1, index 1 <-> +1.
# Tokens are chosen so that sorted-token alphabet inference reproduces them.
SPIN_ALPHABET = Alphabet(("-1", "1"))


class DiscreteDataset:
    """Immutable table of n samples over p named discrete variables.

    ``values[r, c]`` is the alphabet index of variable ``c`` in sample ``r``.
    Instances are safe for concurrent read access.
    """

    def __init__(self, names: Sequence[str], alphabet: Alphabet, values: np.ndarray):
        values = np.asarray(values)
        if values.ndim != 2:
            raise DatasetError("values must be a 2-d array")
        n, p = values.shape
        if n < 1:
            raise EmptyDatasetError("dataset needs at least one sample row")
        if p < 1:
            raise EmptyDatasetError("dataset needs at least one variable")
        if len(names) != p:
            raise DatasetError(f"{len(names)} names for {p} columns")
        if len(set(names)) != len(names):
            raise DatasetError("variable names must be unique")
        if values.min() < 0 or values.max() >= alphabet.size:
            raise DatasetError("value index outside alphabet range")
        self.names = tuple(str(x) for x in names)
        self.alphabet = alphabet
        self.values = values.astype(np.int64, copy=True)
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteDataset):
            return NotImplemented
        return (
            self.names == other.names
            and self.alphabet.symbols == other.alphabet.symbols
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"DiscreteDataset(n={self.n}, p={self.p}, |X|={self.alphabet.size})"

    def _check_vars(self, variables: Iterable[int]) -> tuple[int, ...]:
        out = tuple(variables)
        for v in out:
            if not 0 <= v < self.p:
                raise IndexError(f"variable index {v} out of range for p={self.p}")
        return out

    def packed_codes(self, variables: Sequence[int]) -> np.ndarray:
        """Bit-packed per-row keys for the given variables, in the given order."""
        variables = self._check_vars(variables)
        shift = self.alphabet.bits_per_value
        if shift * len(variables) > _MAX_KEY_BITS:
            raise CapacityError(f"query over {len(variables)} variables exceeds key width")
        codes = np.zeros(self.n, dtype=np.int64)
        for k, v in enumerate(variables):
            codes |= self.values[:, v] << (shift * k)
        return codes

    def joint_counts(self, variables: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Sparse joint counts over ``variables``: (packed keys, row counts).

        Counts are exact integers; they sum to n.
        """
        variables = tuple(variables)
        if not variables:
            return np.zeros(1, dtype=np.int64), np.array([self.n], dtype=np.int64)
        codes = self.packed_codes(variables)
        shift = self.alphabet.bits_per_value
        span = 1 << (shift * len(variables))
        if span <= _MAX_DENSE_CELLS:
            dense = np.bincount(codes, minlength=span)
            keys = np.nonzero(dense)[0]
            return keys.astype(np.int64), dense[keys].astype(np.int64)
        keys, counts = np.unique(codes, return_counts=True)
        return keys.astype(np.int64), counts.astype(np.int64)

    def dense_marginal(self, variables: Sequence[int]) -> np.ndarray:
        """Dense empirical marginal over sorted ``variables``.

        Cell index is mixed-radix over the alphabet with the first (lowest)
        variable as the most significant digit.
        """
        variables = tuple(sorted(self._check_vars(variables)))
        q = self.alphabet.size
        cells = q ** len(variables)
        if cells > _MAX_DENSE_CELLS:
            raise CapacityError(f"dense marginal over {len(variables)} variables too large")
        out = np.zeros(cells, dtype=np.float64)
        if not variables:
            out[0] = 1.0
            return out
        keys, counts = self.joint_counts(variables)
        shift = self.alphabet.bits_per_value
        mask = (1 << shift) - 1
        idx = np.zeros_like(keys)
        for k in range(len(variables)):
            digit = (keys >> (shift * k)) & mask
            idx += digit * (q ** (len(variables) - 1 - k))
        out[idx] = counts / self.n
        return out


@dataclass(frozen=True)
class Assignment:
    """A fixed value for each variable in a sorted, duplicate-free index set."""

    vars: tuple[int, ...]
    vals: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vars) != len(self.vals):
            raise DatasetError("vars and vals must have equal length")
        if list(self.vars) != sorted(set(self.vars)):
            raise DatasetError("vars must be distinct and sorted ascending")


def empirical_prob(ds: DiscreteDataset, a: Assignment) -> float:
    """Fraction of sample rows matching the assignment; 1.0 for the empty one."""
    if not a.vars:
        return 1.0
    for v in a.vars:
        if not 0 <= v < ds.p:
            raise IndexError(f"variable index {v} out of range for p={ds.p}")
    for v, x in zip(a.vars, a.vals):
        if not 0 <= x < ds.alphabet.size:
            raise DatasetError(f"value {x} outside alphabet for variable {v}")
    match = np.all(ds.values[:, list(a.vars)] == np.asarray(a.vals), axis=1)
    return int(match.sum()) / ds.n


@dataclass(frozen=True)
class IngestOptions:
    """CSV ingestion controls.

    ``value_map`` holds ordered token->token rules applied to every cell
    before alphabet inference. ``alphabet`` forces an explicit alphabet;
    tokens outside it raise :class:`UnknownTokenError`.
    """

    value_map: tuple[tuple[str, str], ...] = ()
    alphabet: tuple[str, ...] | None = None


def _apply_map(token: str, rules: tuple[tuple[str, str], ...]) -> str:
    for src, dst in rules:
        if token == src:
            return dst
    return token


def load_csv(path: str | Path, options: IngestOptions = IngestOptions()) -> DiscreteDataset:
    """Load a header-first, comma-separated UTF-8 file into a dataset.

    The alphabet is the sorted set of distinct (post-mapping) tokens unless
    ``options.alphabet`` is given. No quoting support: cells must not
    contain commas.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln != ""]
    if not lines:
        raise ParseError(f"{path}: empty file")
    names = [t.strip() for t in lines[0].split(",")]
    p = len(names)
    rows: list[list[str]] = []
    for rownum, line in enumerate(lines[1:], start=1):
        toks = [t.strip() for t in line.split(",")]
        if len(toks) != p:
            raise ParseError(f"{path}: body row {rownum} has {len(toks)} fields, expected {p}")
        rows.append([_apply_map(t, options.value_map) for t in toks])
    if not rows:
        raise EmptyDatasetError(f"{path}: no data rows")
    if options.alphabet is not None:
        alphabet = Alphabet(tuple(options.alphabet))
    else:
        alphabet = Alphabet(tuple(sorted({t for row in rows for t in row})))
    values = np.empty((len(rows), p), dtype=np.int64)
    for r, row in enumerate(rows):
        for c, tok in enumerate(row):
            values[r, c] = alphabet.index_of(tok)
    return DiscreteDataset(names, alphabet, values)


def write_csv(ds: DiscreteDataset, path: str | Path) -> None:
    """Write a dataset back to the CSV format accepted by :func:`load_csv`."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(ds.names) + "\n")
        for row in ds.values:
            fh.write(",".join(ds.alphabet.symbols[x] for x in row) + "\n")


def remap_values(
    ds: DiscreteDataset,
    rules: tuple[tuple[str, str], ...],
    alphabet: tuple[str, ...] | None = None,
) -> DiscreteDataset:
    """Apply ordered token->token rules and re-infer (or force) the alphabet."""
    tokens = [[_apply_map(ds.alphabet.symbols[x], rules) for x in row] for row in ds.values]
    if alphabet is not None:
        alph = Alphabet(tuple(alphabet))
    else:
        alph = Alphabet(tuple(sorted({t for row in tokens for t in row})))
    values = np.array([[alph.index_of(t) for t in row] for row in tokens], dtype=np.int64)
    return DiscreteDataset(ds.names, alph, values)


def filter_participation(
    raw: DiscreteDataset, missing_symbol: str, threshold: float
) -> DiscreteDataset:
    """Keep only columns whose fraction of non-missing entries is >= threshold.

    Sample rows are never dropped; column order is preserved.
    """
    if not 0.0 <= threshold <= 1.0:
        raise DatasetError(f"threshold {threshold} outside [0, 1]")
    missing_idx = raw.alphabet.index_of(missing_symbol)
    present = (raw.values != missing_idx).sum(axis=0) / raw.n
    kept = [c for c in range(raw.p) if present[c] >= threshold]
    if not kept:
        raise EmptyDatasetError("participation filter removed every column")
    return DiscreteDataset(
        [raw.names[c] for c in kept], raw.alphabet, raw.values[:, kept]
    )
