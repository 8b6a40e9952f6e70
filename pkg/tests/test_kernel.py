"""Kernel-method list edge coloring: correctness, tight lists, oracle agreement."""

from __future__ import annotations

import random
from collections import defaultdict

import pytest

from totalext import (
    PlanarEmbedding,
    bipartite_list_edge_color,
    bipartite_list_edge_color_exhaustive,
)
from totalext.errors import PreconditionError
from totalext.solver import bipartition_sides, edge_preference_orders

from helpers import random_planar_bipartite


def _degrees(edges):
    deg = defaultdict(int)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def _check(edges, lists, coloring):
    at = defaultdict(set)
    for e in edges:
        assert coloring[e] in lists[e]
        for v in e:
            assert coloring[e] not in at[v]
            at[v].add(coloring[e])


def _random_bipartite_edges(rng, nmax=9, mmax=12):
    na = rng.randint(1, max(1, nmax // 2))
    nb = rng.randint(1, nmax - na)
    pool = [(a, na + b) for a in range(na) for b in range(nb)]
    rng.shuffle(pool)
    m = rng.randint(1, min(mmax, len(pool)))
    return sorted(pool[:m])


def _tight_lists(rng, edges, slack=0, pool_extra=2):
    deg = _degrees(edges)
    lists = {}
    for u, v in edges:
        size = max(deg[u], deg[v]) + slack
        pool = list(range(1, size + pool_extra + 1))
        rng.shuffle(pool)
        lists[(u, v)] = frozenset(pool[:size])
    return lists


def test_star_distinct_colors():
    edges = [(0, 1), (0, 2), (0, 3)]
    lists = {e: {1, 2, 3} for e in edges}
    coloring = bipartite_list_edge_color(edges, lists)
    assert sorted(coloring.values()) == [1, 2, 3]


def test_c4_two_lists_alternate():
    edges = [(0, 1), (1, 2), (2, 3), (0, 3)]
    lists = {e: {1, 2} for e in edges}
    coloring = bipartite_list_edge_color(edges, lists)
    _check(edges, lists, coloring)


def test_rejects_non_bipartite():
    with pytest.raises(PreconditionError, match="bipartite"):
        bipartite_list_edge_color([(0, 1), (1, 2), (0, 2)], {e: {1, 2, 3} for e in [(0, 1), (1, 2), (0, 2)]})


def test_rejects_short_list_before_search():
    edges = [(0, 1), (0, 2)]
    with pytest.raises(PreconditionError, match="needs >="):
        bipartite_list_edge_color(edges, {(0, 1): {1}, (0, 2): {1, 2}})


def test_accepts_embedding_input():
    emb = PlanarEmbedding([(1, 3), (0, 2), (1, 3), (2, 0)])
    coloring = bipartite_list_edge_color(emb, {e: {1, 2, 7} for e in emb.edges})
    _check(sorted(emb.edges), {e: {1, 2, 7} for e in emb.edges}, coloring)


def test_preference_rank_sums_bounded():
    rng = random.Random(11)
    for _ in range(120):
        edges = _random_bipartite_edges(rng)
        deg = _degrees(edges)
        prefs = edge_preference_orders(edges)
        rank = {(v, e): i + 1 for v, lst in prefs.items() for i, e in enumerate(lst)}
        for u, v in edges:
            e = (u, v)
            assert rank[(u, e)] + rank[(v, e)] <= max(deg[u], deg[v]) + 1
        for v, lst in prefs.items():
            assert sorted(lst) == sorted(e for e in edges if v in e)


@pytest.mark.parametrize("seed", range(20))
def test_tight_lists_always_colorable(seed):
    rng = random.Random(2024 + seed)
    for _ in range(25):
        edges = _random_bipartite_edges(rng)
        lists = _tight_lists(rng, edges)
        coloring = bipartite_list_edge_color(edges, lists)
        _check(edges, lists, coloring)


def test_nonplanar_bipartite_accepted():
    # K33 minus an edge has 8 edges and no planar embedding; only
    # bipartiteness matters here
    edges = [(a, 3 + b) for a in range(3) for b in range(3)][:-1]
    rng = random.Random(5)
    lists = _tight_lists(rng, edges)
    _check(edges, lists, bipartite_list_edge_color(edges, lists))


def test_exhaustive_fallback_agrees_on_feasibility():
    rng = random.Random(99)
    for _ in range(80):
        edges = _random_bipartite_edges(rng, nmax=7, mmax=8)
        lists = _tight_lists(rng, edges)
        kernel = bipartite_list_edge_color(edges, lists)
        oracle = bipartite_list_edge_color_exhaustive(edges, lists)
        assert oracle is not None
        _check(edges, lists, kernel)
        _check(edges, lists, oracle)


def test_exhaustive_fallback_reports_infeasible():
    # a path of two edges with the same singleton-ish lists cannot work
    edges = [(0, 1), (1, 2)]
    assert bipartite_list_edge_color_exhaustive(edges, {e: {1} for e in edges}) is None


def test_kernel_on_random_planar_bipartite_embeddings():
    rng = random.Random(123)
    for _ in range(10):
        emb = random_planar_bipartite(rng, 30, keep_fraction=0.85)
        edges = sorted(emb.edges)
        lists = _tight_lists(rng, edges)
        coloring = bipartite_list_edge_color(emb, lists)
        _check(edges, lists, coloring)


def test_kernel_deterministic():
    rng = random.Random(6)
    edges = _random_bipartite_edges(rng)
    lists = _tight_lists(rng, edges)
    assert bipartite_list_edge_color(edges, lists) == bipartite_list_edge_color(edges, lists)
