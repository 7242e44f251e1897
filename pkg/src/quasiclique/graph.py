"""Immutable simple graphs stored as per-vertex bit rows, plus DIMACS I/O.

Row ``i`` of a :class:`Graph` is a Python ``int`` whose bit ``j`` is set iff
``{i, j}`` is an edge. Induced edge counts are then a popcount loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class VertexSet:
    """A set of vertex indices held as a bitmask."""

    mask: int = 0

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("vertex mask must be non-negative")

    @classmethod
    def of(cls, vertices: Iterable[int]) -> VertexSet:
        mask = 0
        for v in vertices:
            if v < 0:
                raise ValueError(f"negative vertex index {v}")
            mask |= 1 << v
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls((1 << n) - 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return _bits(self.mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self.mask >> v & 1)

    def __or__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.mask | other.mask)

    def __and__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.mask & other.mask)

    def issubset(self, other: VertexSet) -> bool:
        return self.mask & ~other.mask == 0

    def sorted(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"VertexSet({self.sorted()})"


def _as_mask(s: VertexSet | int | Iterable[int]) -> int:
    if isinstance(s, VertexSet):
        return s.mask
    if isinstance(s, (int, np.integer)):
        return int(s)
    return VertexSet.of(s).mask


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Build through the ``from_*`` constructors; the raw constructor checks
    symmetry and the absence of self-loops.
    """

    n: int
    rows: tuple[int, ...]
    m: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or len(self.rows) != self.n:
            raise ValueError("rows must have exactly n entries")
        limit = 1 << self.n
        total = 0
        for i, row in enumerate(self.rows):
            if row < 0 or row >= limit:
                raise ValueError(f"row {i} has bits outside [0, {self.n})")
            if row >> i & 1:
                raise ValueError(f"self-loop at vertex {i}")
            for j in _bits(row):
                if not self.rows[j] >> i & 1:
                    raise ValueError(f"asymmetric adjacency at ({i}, {j})")
            total += row.bit_count()
        object.__setattr__(self, "m", total // 2)

    @classmethod
    def _trusted(cls, n: int, rows: tuple[int, ...]) -> Graph:
        # caller guarantees symmetry and an empty diagonal
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", rows)
        object.__setattr__(g, "m", sum(r.bit_count() for r in rows) // 2)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for i, j in edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, matrix) -> Graph:
        """Build from a square symmetric 0/1 matrix (diagonal must be zero)."""
        a = np.asarray(matrix, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if a.diagonal().any():
            raise ValueError("adjacency matrix has self-loops")
        n = a.shape[0]
        if n == 0:
            return cls(0, ())
        packed = np.packbits(a, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
        return cls._trusted(n, rows)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << i) for i in range(n)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        if n < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.rows[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(i, j)`` with ``i < j`` in lexicographic order."""
        for i, row in enumerate(self.rows):
            yield from ((i, j) for j in _bits(row >> (i + 1) << (i + 1)))

    def edge_count_induced(self, s: VertexSet | int | Iterable[int]) -> int:
        mask = _as_mask(s)
        if mask >> self.n:
            raise ValueError("vertex set is not a subset of the graph's vertices")
        rows = self.rows
        return sum((rows[i] & mask).bit_count() for i in _bits(mask)) // 2

    def induced_subgraph(self, s: VertexSet | int | Iterable[int]) -> Graph:
        """Subgraph on ``s``, relabeled ``0..|s|-1`` in ascending original order."""
        mask = _as_mask(s)
        if mask >> self.n:
            raise ValueError("vertex set is not a subset of the graph's vertices")
        keep = list(_bits(mask))
        rows = []
        for i in keep:
            row = self.rows[i]
            new = 0
            for a, j in enumerate(keep):
                if row >> j & 1:
                    new |= 1 << a
            rows.append(new)
        return Graph._trusted(len(keep), tuple(rows))

    def with_edge(self, i: int, j: int) -> Graph:
        if i == j:
            raise ValueError("self-loops are not allowed")
        rows = list(self.rows)
        rows[i] |= 1 << j
        rows[j] |= 1 << i
        return Graph(self.n, tuple(rows))

    def adjacency_matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges():
            out[i, j] = out[j, i] = True
        return out

    @cached_property
    def words(self) -> np.ndarray:
        """Adjacency as an ``(n, W)`` array of little-endian uint64 words."""
        w = max(1, (self.n + 63) // 64)
        out = np.zeros((self.n, w), dtype=np.uint64)
        low = (1 << 64) - 1
        for i, row in enumerate(self.rows):
            for k in range(w):
                out[i, k] = (row >> (64 * k)) & low
        out.setflags(write=False)
        return out

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class DimacsError(ValueError):
    """Malformed DIMACS input; the message names the offending line."""


def read_dimacs(text: str | bytes) -> Graph:
    """Parse the DIMACS ascii edge format (1-based endpoints).

    Duplicate and reversed edge lines collapse to one edge.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: expected 'p edge <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer size in header") from None
            if n < 0 or m < 0:
                raise DimacsError(f"line {lineno}: negative size in header")
        elif tag == "e":
            if len(parts) != 3:
                raise DimacsError(f"line {lineno}: expected 'e <i> <j>'")
            try:
                i, j = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: non-integer endpoint") from None
            if i == j:
                raise DimacsError(f"line {lineno}: self-loop on vertex {i}")
            if n is None:
                raise DimacsError(f"line {lineno}: edge before problem line")
            if not (1 <= i <= n and 1 <= j <= n):
                raise DimacsError(f"line {lineno}: endpoint out of range 1..{n}")
            edges.add((min(i, j) - 1, max(i, j) - 1))
        else:
            raise DimacsError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise DimacsError("missing problem line")
    return Graph.from_edges(n, sorted(edges))


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {i + 1} {j + 1}" for i, j in g.edges())
    return "\n".join(lines) + "\n"
