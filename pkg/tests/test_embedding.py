"""Embedding invariants, faces, degrees, distances, shapes, file round-trip."""

from __future__ import annotations

import random

import pytest

from totalext import (
    PlanarEmbedding,
    Subgraph,
    analyze_precolored_shape,
    classify_degrees,
    gen_example,
    pairwise_distance,
    parse_embedding,
    serialize_embedding,
)
from totalext.errors import (
    EmbeddingError,
    ParseError,
    SubgraphError,
    UnknownVertexError,
)

from helpers import random_planar_embedding

K4_ROTATIONS = [(2, 3, 1), (0, 3, 2), (1, 3, 0), (2, 1, 0)]


def k4() -> PlanarEmbedding:
    return PlanarEmbedding(K4_ROTATIONS)


def path2() -> PlanarEmbedding:
    return PlanarEmbedding([(1,), (0,)])


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------


def test_k4_has_four_triangular_faces():
    emb = k4()
    assert len(emb.faces()) == 4
    assert [f.length for f in emb.faces()] == [3, 3, 3, 3]


def test_single_edge_has_one_face_of_length_two():
    emb = path2()
    faces = emb.faces()
    assert len(faces) == 1
    assert faces[0].length == 2


def test_k5_rotation_system_fails_euler():
    rots = [[u for u in range(5) if u != v] for v in range(5)]
    with pytest.raises(EmbeddingError, match="Euler|genus"):
        PlanarEmbedding(rots)


def test_self_loop_rejected():
    with pytest.raises(EmbeddingError, match="self-loop"):
        PlanarEmbedding([(0, 1), (0,)])


def test_repeated_neighbor_rejected():
    with pytest.raises(EmbeddingError, match="repeated"):
        PlanarEmbedding([(1, 1), (0, 0)])


def test_asymmetric_rotation_rejected():
    with pytest.raises(EmbeddingError, match="asymmetric"):
        PlanarEmbedding([(1,), ()])


def test_disconnected_rejected():
    with pytest.raises(EmbeddingError, match="disconnected"):
        PlanarEmbedding([(1,), (0,), (3,), (2,)])


def test_star_k14_single_face_length_eight():
    emb = PlanarEmbedding([(1, 2, 3, 4), (0,), (0,), (0,), (0,)])
    assert [f.length for f in emb.faces()] == [8]


def test_subdivided_star_t4_single_face_length_16():
    emb = gen_example("subdivided-star", 4).embedding
    assert [f.length for f in emb.faces()] == [16]


@pytest.mark.parametrize("seed", range(8))
def test_face_traversal_is_dart_partition(seed):
    rng = random.Random(seed)
    emb = random_planar_embedding(rng, rng.randint(3, 25), keep_fraction=0.7)
    darts = [(v, u) for v in emb.vertices for u in emb.neighbors(v)]
    seen: list = []
    for f in emb.faces():
        seen.extend(f.walk)
    assert sorted(seen) == sorted(darts)
    assert sum(f.length for f in emb.faces()) == 2 * emb.edge_count
    assert emb.n - emb.edge_count + len(emb.faces()) == 2


# ---------------------------------------------------------------------------
# Degrees
# ---------------------------------------------------------------------------


def test_classify_k4():
    classes = classify_degrees(k4(), 5)
    assert classes.max_degree == 3
    assert classes.bucket(3) == (0, 1, 2, 3)
    assert classes.q == 3 * 6 + 4


def test_classify_p2():
    classes = classify_degrees(path2(), 5)
    assert classes.bucket(1) == (0, 1)
    assert classes.q == 3


def test_classify_greedy_tree_k3():
    emb = gen_example("greedy-tree", 3).embedding
    classes = classify_degrees(emb, 5)
    assert classes.max_degree == 3
    assert len(classes.bucket(1)) == 6
    assert len(classes.bucket(3)) == 4
    assert emb.n == 10


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def test_distance_adjacent_is_one():
    assert pairwise_distance(k4(), 0, 1) == 1
    assert pairwise_distance(k4(), 2, 2) == 0


def test_distance_unknown_vertex():
    with pytest.raises(UnknownVertexError):
        pairwise_distance(k4(), 0, 9)


def test_subdivided_star_mid_vertices_at_distance_two():
    ex = gen_example("subdivided-star", 4)
    assert pairwise_distance(ex.embedding, 1, 2) == 2


def test_joined_triangles_inter_clique_distance():
    ex = gen_example("joined-triangles")
    # triangle vertices sit two steps from the star center on either side
    assert pairwise_distance(ex.embedding, 5, 8) == 4


@pytest.mark.parametrize("seed", range(4))
def test_distance_symmetric_and_triangle_inequality(seed):
    rng = random.Random(100 + seed)
    emb = random_planar_embedding(rng, 12, keep_fraction=0.7)
    dist = [emb.distances_from(v) for v in emb.vertices]
    for a in emb.vertices:
        for b in emb.vertices:
            assert dist[a][b] == dist[b][a]
            for c in emb.vertices:
                assert dist[a][c] <= dist[a][b] + dist[b][c]


# ---------------------------------------------------------------------------
# Precolored shapes
# ---------------------------------------------------------------------------


def test_single_edge_of_k4_is_matching_with_infinite_separation():
    shape = analyze_precolored_shape(k4(), Subgraph.of({0, 1}, {(0, 1)}), 3)
    assert shape.kind == "matching"
    assert shape.separation is None
    assert shape.separated


def test_subdivided_star_matching_separation_two():
    ex = gen_example("subdivided-star", 4)
    shape = analyze_precolored_shape(ex.embedding, ex.precoloring.subgraph(), 2)
    assert shape.kind == "matching"
    assert shape.separation == 2
    assert shape.separated


def test_joined_triangles_clique_set():
    ex = gen_example("joined-triangles")
    shape = analyze_precolored_shape(ex.embedding, ex.precoloring.subgraph(), 3)
    assert shape.kind == "clique-set"
    assert not shape.is_matching
    assert shape.separation == 4
    assert shape.separated
    assert len(shape.components) == 4


def test_matching_reported_when_clique_set_small():
    # every clique-set with components of size <= 2 is matching-compatible
    emb = gen_example("subdivided-star", 3).embedding
    shape = analyze_precolored_shape(emb, Subgraph.of({4, 1}, {(1, 4)}), 3)
    assert shape.is_clique_set and shape.is_matching


def test_shape_rejects_edge_outside_vertex_set():
    with pytest.raises(SubgraphError):
        analyze_precolored_shape(k4(), Subgraph(frozenset({0}), frozenset({(0, 1)})), 3)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def test_round_trip_random_embeddings():
    rng = random.Random(5)
    for _ in range(10):
        emb = random_planar_embedding(rng, rng.randint(3, 20), keep_fraction=0.8)
        again = parse_embedding(serialize_embedding(emb))
        assert again.rotations == emb.rotations


def test_parse_rejects_missing_header():
    with pytest.raises(ParseError):
        parse_embedding("vertices 2\nrot 0: 1\nrot 1: 0\n")


def test_parse_reports_line_numbers():
    text = "planar 1\nvertices 2\nrot 0: 1\nbogus line\n"
    with pytest.raises(ParseError, match="line 4"):
        parse_embedding(text)


def test_parse_comments_and_round_trip():
    text = "# a comment\nplanar 1\nvertices 2\nrot 0: 1  # tail comment\nrot 1: 0\n"
    emb = parse_embedding(text)
    assert emb.edges == frozenset({(0, 1)})
    assert parse_embedding(serialize_embedding(emb)).rotations == emb.rotations
