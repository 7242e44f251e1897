import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiclique import (Constant, Graph, VertexSet, brute_force, exact_bb, heuristic,
                         qc_number, required_edges, sample)
from quasiclique.gamma import as_gamma, is_dense
from quasiclique.sampler import stream
from quasiclique.solver import CertificateError, QuasiCliqueResult, peel_preserves_density

from conftest import gnp, graphs

GAMMAS = [Fraction(1, 2), Fraction(3, 5), Fraction(3, 4), Fraction(9, 10), Fraction(1)]
gammas = st.sampled_from(GAMMAS + [Fraction(1, 3), Fraction(7, 10), Fraction(0)])


def naive_omega(g, gamma):
    """Itertools enumeration, largest size first."""
    for r in range(g.n, 0, -1):
        for s in itertools.combinations(range(g.n), r):
            if is_dense(g.edge_count_induced(s), r, gamma):
                return r
    return 0


def nx_clique_number(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return max((len(c) for c in nx.find_cliques(h)), default=0)


def test_required_edges_examples():
    assert required_edges(5, "1/2") == 5
    assert required_edges(1, "9/10") == 0
    assert required_edges(0, 1) == 0
    assert required_edges(5, "3/5") == 6
    assert required_edges(10, "7/10") == 32  # ceil(31.5)


@given(st.integers(0, 60), gammas)
def test_required_edges_is_least_dense_count(r, g):
    m = required_edges(r, g)
    assert is_dense(m, r, g)
    assert m == 0 or not is_dense(m - 1, r, g)


def test_gamma_parsing():
    assert as_gamma("7/10") == as_gamma(0.7) == as_gamma((7, 10)) == Fraction(7, 10)
    assert as_gamma("0.75") == Fraction(3, 4)
    for bad in ("3/2", -1, 1.5):
        with pytest.raises(ValueError):
            as_gamma(bad)


def test_brute_force_examples():
    assert brute_force(Graph.complete(5), 1).size == 5
    c5 = Graph.cycle(5)
    r = brute_force(c5, "1/2")
    assert r.size == 5 and r.witness_edges == 5 and r.exact
    r = brute_force(c5, "3/5")
    assert r.size == 3 and r.witness == VertexSet.of([0, 1, 2]) and r.witness_edges == 2
    assert brute_force(Graph.empty(5), "1/2").size == 1
    assert brute_force(Graph.empty(5), "1/2").witness == VertexSet.of([0])
    assert brute_force(Graph.empty(0), "1/2").size == 0


def test_brute_force_lexicographic_tie_break():
    # two disjoint edges {1,5} and {2,3}: sorted lists [1,5] < [2,3]
    g = Graph.from_edges(6, [(1, 5), (2, 3)])
    assert brute_force(g, 1).witness == VertexSet.of([1, 5])


def test_brute_force_cap():
    with pytest.raises(ValueError):
        brute_force(Graph.empty(23), "1/2")


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8), gammas)
def test_brute_force_matches_itertools(g, gamma):
    r = brute_force(g, gamma)
    r.check(g, gamma)
    assert r.size == naive_omega(g, gamma)


@settings(max_examples=200, deadline=None)
@given(graphs(min_n=1, max_n=14), st.sampled_from(GAMMAS))
def test_exact_bb_matches_brute_force(g, gamma):
    a, b = exact_bb(g, gamma), brute_force(g, gamma)
    a.check(g, gamma)
    assert a.exact and a.size == b.size


@pytest.mark.parametrize("n, p", [(20, 0.5), (21, 0.3), (22, 0.7)])
def test_exact_bb_matches_brute_force_at_cap(n, p):
    rng = np.random.default_rng(n)
    g = gnp(n, p, rng)
    for gamma in GAMMAS:
        a = exact_bb(g, gamma, warm_start=heuristic(g, gamma, restarts=1))
        assert a.exact and a.size == brute_force(g, gamma).size


def test_exact_bb_c5():
    r = exact_bb(Graph.cycle(5), "3/5")
    assert r.size == 3 and r.exact


def test_exact_bb_rejects_gamma_zero():
    with pytest.raises(ValueError):
        exact_bb(Graph.cycle(5), 0)


def test_exact_bb_budget_exhaustion():
    g = sample(Constant(0.5), 60, 3).graph
    weak = heuristic(g, "3/4", restarts=1)
    r = exact_bb(g, "3/4", budget=5, warm_start=weak)
    assert not r.exact
    assert r.size >= weak.size
    r.check(g, "3/4")


def test_exact_bb_wide_graph():
    # more than one 64-bit word per row
    g = Graph.from_edges(130, [(0, 129), (0, 70), (70, 129), (5, 6)])
    r = exact_bb(g, 1)
    assert r.size == 3 and r.witness == VertexSet.of([0, 70, 129]) and r.exact
    r = exact_bb(g.with_edge(5, 70).with_edge(6, 70).with_edge(5, 129), "5/6")
    r.check(g.with_edge(5, 70).with_edge(6, 70).with_edge(5, 129), "5/6")


def test_clique_reduction_small():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = int(rng.integers(19, 41))
        g = gnp(n, float(rng.choice([0.3, 0.5, 0.7])), rng)
        assert qc_number(g, 1).size == nx_clique_number(g)


def test_peel_lemma_holds():
    for den in range(1, 25):
        for num in range(0, den + 1):
            g = Fraction(num, den)
            assert all(peel_preserves_density(r, g) for r in range(0, 200))


def test_heuristic_complete_graph():
    for gamma in GAMMAS:
        r = heuristic(Graph.complete(5), gamma, restarts=1)
        assert r.size == 5 and r.exact


def test_heuristic_rejects_no_restarts():
    with pytest.raises(ValueError):
        heuristic(Graph.complete(3), 1, restarts=0)


@settings(max_examples=100, deadline=None)
@given(graphs(min_n=1, max_n=12), st.sampled_from(GAMMAS), st.integers(0, 2**32))
def test_heuristic_is_a_certified_lower_bound(g, gamma, seed):
    h = heuristic(g, gamma, restarts=3, rng=stream(seed))
    h.check(g, gamma)
    assert h.size <= brute_force(g, gamma).size
    assert h.exact == (h.size == g.n)


def test_heuristic_quality_on_sparse_er():
    hits = 0
    for s in range(50):
        g = sample(Constant(0.2), 60, 1000 + s).graph
        h = heuristic(g, "7/10", restarts=32, rng=stream(s))
        e = exact_bb(g, "7/10")
        assert e.exact and h.size <= e.size
        hits += h.size >= e.size - 1
    assert hits >= 45


def test_qc_number_dispatch():
    rng = np.random.default_rng(5)
    g = gnp(10, 0.5, rng)
    assert qc_number(g, "3/4") == brute_force(g, "3/4")
    r = qc_number(gnp(30, 0.4, rng), 0)
    assert r.size == 30 and r.exact
    tri = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert qc_number(tri, 1).size == 3


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=11), gammas, gammas)
def test_monotone_in_gamma(g, g1, g2):
    lo, hi = sorted((g1, g2))
    assert qc_number(g, lo).size >= qc_number(g, hi).size


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=11), gammas, st.data())
def test_monotone_in_edges(g, gamma, data):
    i, j = data.draw(st.sampled_from(list(itertools.combinations(range(g.n), 2))))
    assert qc_number(g.with_edge(i, j), gamma).size >= qc_number(g, gamma).size


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=11), gammas, st.integers(0, 2**11 - 1))
def test_induced_subgraph_bound(g, gamma, mask):
    mask &= (1 << g.n) - 1
    assert qc_number(g.induced_subgraph(mask), gamma).size <= qc_number(g, gamma).size


def test_result_check_catches_bad_certificates():
    g = Graph.cycle(5)
    with pytest.raises(CertificateError):
        QuasiCliqueResult(4, VertexSet.of([0, 1, 2, 3]), 3, False).check(g, "3/5")
    with pytest.raises(CertificateError):
        QuasiCliqueResult(3, VertexSet.of([0, 1]), 1, False).check(g, "1/2")
    with pytest.raises(CertificateError):
        QuasiCliqueResult(3, VertexSet.of([0, 1, 2]), 3, False).check(g, "1/2")


def test_to_dict():
    r = qc_number(Graph.cycle(5), "3/5")
    assert r.to_dict() == {"size": 3, "exact": True, "witness": [0, 1, 2],
                           "witness_edges": 2, "nodes_explored": 32}
