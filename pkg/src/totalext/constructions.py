"""Deterministic generators for the three sharpness constructions.

* ``greedy-tree`` (parameter k >= 3): the depth-2 tree whose root has k
  children, each with k-1 children of their own; the k stars around the
  children are totally precolored so that the root and its k incident edges
  each see all of 1..k. Palette 2k is not extendable, 2k+1 is.
* ``subdivided-star`` (parameter t >= 3): a star with t edges, each
  subdivided once; the pendant matching is precolored with 1 and 2 so that
  the center and its t edges all avoid two colors. Palette t+2 is not
  extendable.
* ``joined-triangles``: four triangles, each fully joined to one leaf of a
  4-star and totally colored with 1..3 in the rotation pattern. Palette 7 is
  not extendable.

Rotation systems are pinned explicitly so generated files are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import PartialTotalColoring
from .embedding import PlanarEmbedding, canonical_edge
from .errors import InputError
from .solver import SolveOutcome, extend_exact

EXAMPLE_IDS = ("greedy-tree", "subdivided-star", "joined-triangles")


@dataclass(frozen=True)
class NamedExample:
    id: str
    param: int | None
    embedding: PlanarEmbedding
    precoloring: PartialTotalColoring
    claimed_fail_palette: int
    claimed_ok_palette: int | None


def _greedy_tree(k: int) -> NamedExample:
    if k < 3:
        raise InputError(f"greedy-tree needs k >= 3, got {k}")
    # vertex ids: root 0; children 1..k; child i owns leaves in one block
    root = 0
    child = lambda i: i  # i in 1..k
    leaf = lambda i, j: k + (i - 1) * (k - 1) + j  # j in 1..k-1
    n = 1 + k + k * (k - 1)
    rotations: list[list[int]] = [[] for _ in range(n)]
    rotations[root] = [child(i) for i in range(1, k + 1)]
    for i in range(1, k + 1):
        rotations[child(i)] = [root] + [leaf(i, j) for j in range(1, k)]
        for j in range(1, k):
            rotations[leaf(i, j)] = [child(i)]
    emb = PlanarEmbedding(rotations)

    vcolors: dict[int, int] = {}
    ecolors: dict[tuple[int, int], int] = {}
    for i in range(1, k + 1):
        vcolors[child(i)] = i
        for j in range(1, k):
            vcolors[leaf(i, j)] = k + 1
            color = (i + j) % k
            ecolors[canonical_edge(child(i), leaf(i, j))] = color if color else k
    precoloring = PartialTotalColoring(2 * k, vcolors, ecolors)
    return NamedExample("greedy-tree", k, emb, precoloring, 2 * k, 2 * k + 1)


def _subdivided_star(t: int) -> NamedExample:
    if t < 3:
        raise InputError(f"subdivided-star needs t >= 3, got {t}")
    center = 0
    mid = lambda i: i  # i in 1..t, degree 2
    tip = lambda i: t + i
    n = 1 + 2 * t
    rotations: list[list[int]] = [[] for _ in range(n)]
    rotations[center] = [mid(i) for i in range(1, t + 1)]
    for i in range(1, t + 1):
        rotations[mid(i)] = [center, tip(i)]
        rotations[tip(i)] = [mid(i)]
    emb = PlanarEmbedding(rotations)

    vcolors: dict[int, int] = {}
    ecolors: dict[tuple[int, int], int] = {}
    for i in range(1, t + 1):
        vcolors[mid(i)] = 1 if i < t else 2
        vcolors[tip(i)] = 3
        ecolors[canonical_edge(mid(i), tip(i))] = 2 if i < t else 1
    precoloring = PartialTotalColoring(t + 2, vcolors, ecolors)
    return NamedExample("subdivided-star", t, emb, precoloring, t + 2, None)


def _joined_triangles() -> NamedExample:
    center = 0
    hub = lambda i: i  # i in 1..4, the star leaves
    base = lambda i: 5 + 3 * (i - 1)  # triangle vertices base, base+1, base+2
    n = 17
    rotations: list[list[int]] = [[] for _ in range(n)]
    rotations[center] = [hub(i) for i in range(1, 5)]
    for i in range(1, 5):
        p, q, r = base(i), base(i) + 1, base(i) + 2
        # each block {hub, p, q, r} is a K4; rotations chosen so the triangle
        # sits inside the wedge at the hub and Euler's check passes
        rotations[hub(i)] = [center, q, r, p]
        rotations[p] = [hub(i), r, q]
        rotations[q] = [p, r, hub(i)]
        rotations[r] = [q, p, hub(i)]
    emb = PlanarEmbedding(rotations)

    vcolors: dict[int, int] = {}
    ecolors: dict[tuple[int, int], int] = {}
    for i in range(1, 5):
        p, q, r = base(i), base(i) + 1, base(i) + 2
        vcolors[p], vcolors[q], vcolors[r] = 1, 2, 3
        # every triangle edge takes the color of the vertex it avoids
        ecolors[canonical_edge(q, r)] = 1
        ecolors[canonical_edge(p, r)] = 2
        ecolors[canonical_edge(p, q)] = 3
    precoloring = PartialTotalColoring(7, vcolors, ecolors)
    return NamedExample("joined-triangles", None, emb, precoloring, 7, None)


def gen_example(example_id: str, param: int | None = None) -> NamedExample:
    """Build one of the named constructions; deterministic in id and parameter."""
    if example_id == "greedy-tree":
        if param is None:
            raise InputError("greedy-tree requires the parameter k")
        return _greedy_tree(param)
    if example_id == "subdivided-star":
        if param is None:
            raise InputError("subdivided-star requires the parameter t")
        return _subdivided_star(param)
    if example_id == "joined-triangles":
        if param is not None:
            raise InputError("joined-triangles takes no parameter")
        return _joined_triangles()
    raise InputError(f"unknown example id {example_id!r}; known: {', '.join(EXAMPLE_IDS)}")


@dataclass(frozen=True)
class SharpnessReport:
    example_id: str
    param: int | None
    outcomes: tuple[tuple[int, SolveOutcome], ...]  # (palette, outcome)
    agrees_with_claim: bool | None  # None when a budget ran out

    def outcome_at(self, palette: int) -> SolveOutcome:
        for p, o in self.outcomes:
            if p == palette:
                return o
        raise KeyError(palette)


def verify_sharpness(example: NamedExample, node_budget: int | None = None) -> SharpnessReport:
    """Check the claimed failure palette (expect proven impossibility) and
    report the outcome one color above it."""
    outcomes: list[tuple[int, SolveOutcome]] = []
    for palette in (example.claimed_fail_palette, example.claimed_fail_palette + 1):
        coloring = example.precoloring.with_palette(palette)
        outcomes.append((palette, extend_exact(example.embedding, coloring, node_budget)))

    fail_outcome = outcomes[0][1]
    above_outcome = outcomes[1][1]
    if fail_outcome.status.value == "timeout" or above_outcome.status.value == "timeout":
        agrees: bool | None = None
    else:
        agrees = fail_outcome.status.value == "proven-impossible"
        if example.claimed_ok_palette is not None and agrees:
            agrees = above_outcome.status.value == "colored"
    return SharpnessReport(example.id, example.param, tuple(outcomes), agrees)
