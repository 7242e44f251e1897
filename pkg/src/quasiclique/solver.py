"""Maximum gamma-quasi-clique search.

A gamma-quasi-clique is a vertex set S whose induced subgraph has at least
``gamma * C(|S|, 2)`` edges; ``omega_gamma(G)`` is the largest such |S|.
Density tests are done in exact integer arithmetic on a rational gamma.

Three solvers share the :class:`QuasiCliqueResult` certificate format:

* :func:`brute_force` scans all 2^n subsets (n <= 22),
* :func:`exact_bb` runs ascending decision searches (compiled, bitset based),
* :func:`heuristic` grows and locally improves dense sets; a lower bound only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _search
from .gamma import GammaLike, as_gamma, is_dense, required_edges
from .graph import Graph, VertexSet, _bits

BRUTE_FORCE_CAP = 22
BRUTE_FORCE_DISPATCH = 18
DEFAULT_BUDGET = 200_000_000
DEFAULT_RESTARTS = 8


class CertificateError(AssertionError):
    pass


@dataclass(frozen=True)
class QuasiCliqueResult:
    size: int
    witness: VertexSet
    witness_edges: int
    exact: bool
    nodes_explored: int = 0
    wall_time: float = field(default=0.0, compare=False)

    def check(self, g: Graph, gamma: GammaLike) -> None:
        """Raise CertificateError unless the witness proves ``omega >= size``."""
        if len(self.witness) != self.size:
            raise CertificateError(f"witness has {len(self.witness)} vertices, size is {self.size}")
        edges = g.edge_count_induced(self.witness)
        if edges != self.witness_edges:
            raise CertificateError(f"witness has {edges} edges, recorded {self.witness_edges}")
        if not is_dense(edges, self.size, gamma):
            raise CertificateError(f"witness with {edges} edges is not {as_gamma(gamma)}-dense")

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "exact": self.exact,
            "witness": self.witness.sorted(),
            "witness_edges": self.witness_edges,
            "nodes_explored": self.nodes_explored,
        }


def _lex_key(mask: int) -> list[int]:
    return list(_bits(mask))


def _result(g: Graph, mask: int, exact: bool, nodes: int, t0: float) -> QuasiCliqueResult:
    w = VertexSet(mask)
    return QuasiCliqueResult(len(w), w, g.edge_count_induced(w), exact, nodes,
                             time.perf_counter() - t0)


def brute_force(g: Graph, gamma: GammaLike) -> QuasiCliqueResult:
    """Exhaustive scan over all vertex subsets.

    Ties go to the lexicographically smallest sorted witness.
    """
    gamma = as_gamma(gamma)
    n = g.n
    if n > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force is capped at n={BRUTE_FORCE_CAP}, got n={n}")
    t0 = time.perf_counter()
    total = 1 << n
    masks = np.arange(total, dtype=np.uint32)
    edges = np.zeros(total, dtype=np.int16)
    for v in range(n):
        lo, hi = 1 << v, 1 << (v + 1)
        lower_nbrs = np.uint32(g.rows[v] & (lo - 1))
        block = masks[lo:hi]
        edges[lo:hi] = edges[:lo] + np.bitwise_count(block & lower_nbrs)
    sizes = np.bitwise_count(masks).astype(np.int64)
    need = np.array([required_edges(r, gamma) for r in range(n + 1)], dtype=np.int64)
    feasible = edges >= need[sizes]
    best = int(sizes[feasible].max())
    cands = masks[feasible & (sizes == best)].astype(np.int64)
    # lexicographically smallest sorted vertex list == largest bit-reversed mask
    rev = np.zeros_like(cands)
    for b in range(n):
        rev |= ((cands >> b) & 1) << (n - 1 - b)
    mask = int(cands[int(np.argmax(rev))])
    return _result(g, mask, True, total, t0)


def peel_preserves_density(r: int, gamma: GammaLike) -> bool:
    """Check that deleting a minimum-degree vertex of any gamma-dense r-set
    leaves a gamma-dense (r-1)-set.

    A dense r-set with m edges has a vertex of degree <= floor(2m / r), and
    ``m - floor(2m / r)`` is non-decreasing in m, so testing the least
    admissible m suffices.
    """
    if r <= 1:
        return True
    m = required_edges(r, gamma)
    return m - (2 * m) // r >= required_edges(r - 1, gamma)


def _words(mask: int, w: int) -> np.ndarray:
    low = (1 << 64) - 1
    return np.array([(mask >> (64 * k)) & low for k in range(w)], dtype=np.uint64)


def _from_words(words: np.ndarray) -> int:
    return sum(int(x) << (64 * k) for k, x in enumerate(words))


def _degree_core(rows: list[int], mask: int, threshold: int) -> int:
    """Largest subset of ``mask`` whose members all have >= threshold neighbours inside."""
    if threshold <= 0:
        return mask
    changed = True
    while changed:
        changed = False
        for v in _bits(mask):
            if (rows[v] & mask).bit_count() < threshold:
                mask &= ~(1 << v)
                changed = True
    return mask


def exact_bb(g: Graph, gamma: GammaLike, budget: int | None = DEFAULT_BUDGET,
             warm_start: QuasiCliqueResult | None = None) -> QuasiCliqueResult:
    """Exact omega_gamma by ascending decision searches.

    Starting from a heuristic incumbent of size s, decide for r = s+1, s+2, ...
    whether an r-set with ``required_edges(r)`` edges exists, stopping at the
    first r without one. ``budget`` caps the total number of search nodes;
    when it runs out the incumbent is returned with ``exact=False``.
    """
    gamma = as_gamma(gamma)
    if gamma == 0:
        raise ValueError("exact_bb needs gamma > 0; use qc_number for gamma = 0")
    t0 = time.perf_counter()
    n = g.n
    if n == 0:
        return _result(g, 0, True, 0, t0)
    budget = 2**62 if budget is None else int(budget)
    inc = warm_start if warm_start is not None else heuristic(g, gamma)
    inc.check(g, gamma)
    best_mask = inc.witness.mask

    # relabel by descending degree, ties by index
    degs = g.degrees()
    order = sorted(range(n), key=lambda v: (-degs[v], v))
    pos = {v: a for a, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        for u in _bits(g.rows[v]):
            row |= 1 << pos[u]
        rows.append(row)
    nw = max(1, (n + 63) // 64)
    adj = np.array([_words(r, nw) for r in rows], dtype=np.uint64).reshape(n, nw)

    nodes = 0
    exact = True
    r = inc.size + 1
    while r <= n:
        need = required_edges(r, gamma)
        max_missing = r * (r - 1) // 2 - need
        # a member of a dense r-set has at least need - C(r-1, 2) neighbours in it
        cand = _degree_core(rows, (1 << n) - 1, need - (r - 1) * (r - 2) // 2)
        status = _search.EXHAUSTED
        if cand.bit_count() >= r:
            status, used, found = _search.decide(adj, r, max_missing, _words(cand, nw),
                                                 budget - nodes)
            nodes += int(used)
        if status == _search.OUT_OF_BUDGET:
            exact = False
            break
        if status == _search.FOUND:
            best_mask = VertexSet.of(order[a] for a in _bits(_from_words(found))).mask
            r += 1
            continue
        if all(peel_preserves_density(q, gamma) for q in range(r + 1, n + 1)):
            break
        r += 1
    return _result(g, best_mask, exact, nodes, t0)


def _grow(rows: list[int], degs: list[int], n: int, mask: int, edges: int,
          gamma: Fraction) -> tuple[int, int]:
    full = (1 << n) - 1
    while True:
        size = mask.bit_count()
        need = required_edges(size + 1, gamma)
        best, best_key = -1, None
        for u in _bits(full & ~mask):
            key = ((rows[u] & mask).bit_count(), degs[u], -u)
            if best_key is None or key > best_key:
                best, best_key = u, key
        if best < 0 or edges + best_key[0] < need:
            return mask, edges
        mask |= 1 << best
        edges += best_key[0]


def _drop_two_add(rows: list[int], n: int, mask: int, edges: int,
                  gamma: Fraction) -> tuple[int, int] | None:
    """Replace one member by two outsiders, keeping the set dense."""
    size = mask.bit_count()
    need = required_edges(size + 1, gamma)
    full = (1 << n) - 1
    members = sorted(_bits(mask), key=lambda x: ((rows[x] & mask).bit_count(), x))
    for x in members:
        base = mask & ~(1 << x)
        e0 = edges - (rows[x] & mask).bit_count()
        outs = [((rows[u] & base).bit_count(), u) for u in _bits(full & ~mask)]
        outs.sort(key=lambda t: (-t[0], t[1]))
        if len(outs) < 2 or e0 + outs[0][0] + outs[1][0] + 1 < need:
            continue
        for a, (da, u) in enumerate(outs[:-1]):
            if e0 + da + outs[a + 1][0] + 1 < need:
                break
            for db, w in outs[a + 1:]:
                link = rows[u] >> w & 1
                if e0 + da + db + 1 < need:
                    break
                if e0 + da + db + link >= need:
                    return base | (1 << u) | (1 << w), e0 + da + db + link
    return None


def _best_swap(rows: list[int], n: int, mask: int, edges: int) -> tuple[int, int] | None:
    """Single exchange with the largest strict gain in edge count."""
    full = (1 << n) - 1
    ins = [((rows[x] & mask).bit_count(), x) for x in _bits(mask)]
    outs = [((rows[u] & mask).bit_count(), u) for u in _bits(full & ~mask)]
    best_gain, best = 0, None
    for dx, x in ins:
        for du, u in outs:
            gain = du - (rows[u] >> x & 1) - dx
            if gain > best_gain:
                best_gain, best = gain, (x, u)
    if best is None:
        return None
    x, u = best
    return (mask & ~(1 << x)) | (1 << u), edges + best_gain


def _peel(rows: list[int], n: int, gamma: Fraction) -> tuple[int, int]:
    """Strip minimum-degree vertices from the whole graph; keep the largest dense stage."""
    mask = (1 << n) - 1
    edges = sum(r.bit_count() for r in rows) // 2
    best = (1, 0) if n else (0, 0)
    while mask:
        size = mask.bit_count()
        if is_dense(edges, size, gamma):
            best = (mask, edges)
            break
        v = min(_bits(mask), key=lambda x: ((rows[x] & mask).bit_count(), -x))
        edges -= (rows[v] & mask).bit_count()
        mask &= ~(1 << v)
    return best


def heuristic(g: Graph, gamma: GammaLike, restarts: int = DEFAULT_RESTARTS,
              rng: np.random.Generator | None = None) -> QuasiCliqueResult:
    """Greedy growth plus local search; returns a certified lower bound.

    Restart 0 seeds from the highest-degree vertex, later restarts from a
    random vertex among the top quarter by degree. Each start is grown
    greedily, then improved with drop-one/add-two moves and edge-increasing
    swaps until neither applies. A min-degree peeling of the whole graph is
    tried as one more start.
    """
    gamma = as_gamma(gamma)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    t0 = time.perf_counter()
    n = g.n
    if n == 0:
        return _result(g, 0, True, 0, t0)
    if rng is None:
        from .sampler import stream
        rng = stream(0)
    rows = list(g.rows)
    degs = g.degrees()
    ranked = sorted(range(n), key=lambda v: (-degs[v], v))
    top = ranked[:max(1, n // 4)]

    starts = [_peel(rows, n, gamma)]
    for i in range(restarts):
        v = ranked[0] if i == 0 else top[int(rng.integers(len(top)))]
        starts.append((1 << v, 0))

    best_mask, best_edges = 1 << ranked[0], 0
    for mask, edges in starts:
        for _ in range(4 * n + 4):
            mask, edges = _grow(rows, degs, n, mask, edges, gamma)
            moved = _drop_two_add(rows, n, mask, edges, gamma)
            if moved is None:
                moved = _best_swap(rows, n, mask, edges)
            if moved is None:
                break
            mask, edges = moved
        key = (mask.bit_count(), edges)
        best_key = (best_mask.bit_count(), best_edges)
        if key > best_key or (key == best_key and _lex_key(mask) < _lex_key(best_mask)):
            best_mask, best_edges = mask, edges
    size = best_mask.bit_count()
    res = _result(g, best_mask, size == n, 0, t0)
    res.check(g, gamma)
    return res


def qc_number(g: Graph, gamma: GammaLike, budget: int | None = DEFAULT_BUDGET,
              restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> QuasiCliqueResult:
    """omega_gamma(G): brute force for n <= 18, otherwise warm-started exact search.

    For gamma = 0 every set qualifies, so the answer is n.
    """
    gamma = as_gamma(gamma)
    if gamma == 0:
        t0 = time.perf_counter()
        return _result(g, (1 << g.n) - 1, True, 0, t0)
    if g.n <= BRUTE_FORCE_DISPATCH:
        return brute_force(g, gamma)
    from .sampler import stream
    warm = heuristic(g, gamma, restarts=restarts, rng=stream(seed))
    return exact_bb(g, gamma, budget=budget, warm_start=warm)
