import random

import pytest

from graphboot.cliques import (
    al_scan, check_terminal, clique_process, internally_spanned_sizes, k4_closure_via_cliques,
)
from graphboot.engine import close_kr
from graphboot.graph import SimpleGraph, erdos_renyi
from graphboot.patterns import wsat_construction

from conftest import random_graph


def _replay(coll):
    """Live clique ids after each merge event, starting from the seed edges."""
    live = set(range(coll.m))
    yield set(live)
    for ev in coll.history:
        live.difference_update(ev.parts)
        live.add(ev.result)
        yield set(live)


def test_k4_minus_edge_single_item():
    g = SimpleGraph.complete(4).without_edges([(2, 3)])
    coll = clique_process(g)
    assert len(coll.items) == 1
    r, a = coll.terminal()[0]
    assert r == frozenset(range(4)) and a == g.edge_set()
    assert 2 in internally_spanned_sizes(coll) and 4 in internally_spanned_sizes(coll)


def test_triangles_sharing_a_vertex_stay_apart():
    g = SimpleGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    coll = clique_process(g)
    assert sorted(sorted(r) for r, _ in coll.terminal()) == [[0, 1, 2], [2, 3, 4]]
    assert close_kr(g, 4, trace=False)[0] == g


def test_triangle_of_cliques_merges():
    # K_4 on {0,1,2,3}, K_4 on {3,4,5,6}, K_4 on {6,7,8,0}: pairwise one shared vertex
    blocks = [(0, 1, 2, 3), (3, 4, 5, 6), (6, 7, 8, 0)]
    edges = [(a, b) for bl in blocks for i, a in enumerate(bl) for b in bl[i + 1:]]
    g = SimpleGraph.from_edges(9, edges)
    coll = clique_process(g)
    assert len(coll.items) == 1
    assert coll.terminal()[0][0] == frozenset(range(9))
    assert any(ev.kind == "triple" for ev in coll.history)


def test_closure_examples():
    c5 = SimpleGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert k4_closure_via_cliques(c5) == c5
    assert k4_closure_via_cliques(wsat_construction(8, 4)) == SimpleGraph.complete(8)
    matching = SimpleGraph.from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7)])
    assert set(internally_spanned_sizes(clique_process(matching))) == {2}


def test_al_scan_examples():
    rnd = random.Random(3)
    for _ in range(400):
        g = random_graph(rnd, 30, 0.12)
        if close_kr(g, 4, trace=False)[0].is_complete():
            break
    else:
        pytest.fail("no percolating G(30, 0.12) sample found")
    coll = clique_process(g)
    hit = al_scan(coll, 5)
    assert hit is not None and 5 <= len(hit) <= 15
    assert len(al_scan(coll, 1)) == 2  # the first seed edge already qualifies
    sparse = clique_process(SimpleGraph.from_edges(6, [(0, 1), (2, 3)]))
    assert al_scan(sparse, 3) is None
    assert al_scan(coll, 31) is None


def test_equivalence_and_terminal_properties():
    rnd = random.Random(77)
    for _ in range(1000):
        n = rnd.randint(1, 24)
        p = rnd.choice([0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5])
        g = random_graph(rnd, n, p)
        coll = clique_process(g)
        assert k4_closure_via_cliques(g) == close_kr(g, 4, trace=False)[0]
        assert check_terminal(coll) == []
        for live in _replay(coll):
            assert sum(len(coll.cliques[i][1]) for i in live) == g.m
        for ev in coll.history:
            biggest = max(len(coll.cliques[i][0]) for i in ev.parts)
            assert ev.size <= 3 * biggest
        for r, a in coll.cliques:
            assert len(a) >= 2 * len(r) - 3
            assert a <= g.edge_set()


def test_check_terminal_reports_problems():
    g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    coll = clique_process(g)
    coll.items = list(range(coll.m))  # pretend nothing merged
    problems = check_terminal(coll)
    assert any("share two vertices" in p or "triangle" in p for p in problems)


def test_percolating_instances_have_spanned_cliques_at_every_scale():
    found = 0
    for s in range(300):
        g = erdos_renyi(20, 0.2, s)
        coll = clique_process(g)
        if len(coll.items) == 1 and len(coll.terminal()[0][0]) == 20:
            found += 1
            for L in range(1, 21):
                hit = al_scan(coll, L)
                assert hit is not None and L <= len(hit) <= 3 * L
    assert found > 0
