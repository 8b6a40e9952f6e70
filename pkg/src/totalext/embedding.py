"""Rotation-system embeddings of connected simple planar graphs.

A graph is described by the clockwise cyclic neighbor order at every vertex.
Faces are traced with one fixed convention: the dart following (u, v) is
(v, w), where w is the successor of u in the rotation at v. Both traversal
conventions produce the same face multiset; one is pinned so that reports are
reproducible. Construction validates simplicity, symmetry, connectedness and
Euler's formula, which rejects rotation systems of positive genus.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import EmbeddingError, ParseError, SubgraphError, UnknownVertexError

Edge = tuple[int, int]
Dart = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Edges are stored as (min, max) pairs."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Face:
    """One face: a cyclic boundary walk of darts.

    The length counts darts, so a bridge traversed from both sides
    contributes 2 to the length of its single face.
    """

    id: int
    walk: tuple[Dart, ...]

    @property
    def length(self) -> int:
        return len(self.walk)

    def vertices(self) -> tuple[int, ...]:
        """Boundary vertices in walk order, with repeats."""
        return tuple(u for u, _ in self.walk)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.walk)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(canonical_edge(u, v) for u, v in self.walk)

    def contains_edge(self, edge: Edge) -> bool:
        return canonical_edge(*edge) in self.edge_set()


class PlanarEmbedding:
    """Immutable validated rotation system of a connected simple planar graph."""

    def __init__(self, rotations: Sequence[Sequence[int]]):
        rots = tuple(tuple(r) for r in rotations)
        self._rotations = rots
        self._n = len(rots)
        self._validate_simple()
        self._validate_symmetric()
        self._edges = frozenset(
            canonical_edge(v, u) for v in range(self._n) for u in rots[v]
        )
        self._validate_connected()
        self._rotation_index = tuple(
            {u: i for i, u in enumerate(rots[v])} for v in range(self._n)
        )
        self._validate_euler()

    # -- invariants ---------------------------------------------------------

    def _validate_simple(self) -> None:
        if self._n == 0:
            raise EmbeddingError("empty graph")
        for v, rot in enumerate(self._rotations):
            for u in rot:
                if not isinstance(u, int) or not 0 <= u < self._n:
                    raise UnknownVertexError(f"rotation of {v} names unknown vertex {u}")
                if u == v:
                    raise EmbeddingError(f"self-loop at vertex {v}")
            if len(set(rot)) != len(rot):
                raise EmbeddingError(f"repeated neighbor in rotation of vertex {v}")

    def _validate_symmetric(self) -> None:
        for v, rot in enumerate(self._rotations):
            for u in rot:
                if v not in self._rotations[u]:
                    raise EmbeddingError(
                        f"asymmetric rotation: {u} in rotation of {v} but not conversely"
                    )

    def _validate_connected(self) -> None:
        if self._n == 1:
            return
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for u in self._rotations[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != self._n:
            raise EmbeddingError("graph is disconnected; connected input is required")

    def _validate_euler(self) -> None:
        if self.edge_count == 0:
            return
        f = len(self.faces())
        if self._n - self.edge_count + f != 2:
            raise EmbeddingError(
                "Euler check failed: V - E + F = "
                f"{self._n - self.edge_count + f} != 2; the rotation system has "
                "positive genus and is not a planar embedding"
            )

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(self._n)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def rotation(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._rotations[v]

    @property
    def rotations(self) -> tuple[tuple[int, ...], ...]:
        return self._rotations

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation(v)

    def degree(self, v: int) -> int:
        return len(self.rotation(v))

    @property
    def max_degree(self) -> int:
        return max(len(r) for r in self._rotations)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self._edges

    def _check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self._n:
            raise UnknownVertexError(f"unknown vertex id {v}")

    # -- faces ----------------------------------------------------------------

    def next_dart(self, dart: Dart) -> Dart:
        """Successor of (u, v): the dart (v, w) with w following u at v."""
        u, v = dart
        idx = self._rotation_index[v]
        rot = self._rotations[v]
        w = rot[(idx[u] + 1) % len(rot)]
        return (v, w)

    def faces(self) -> tuple[Face, ...]:
        return self._faces

    @cached_property
    def _faces(self) -> tuple[Face, ...]:
        darts = sorted((v, u) for v in range(self._n) for u in self._rotations[v])
        remaining = set(darts)
        result: list[Face] = []
        for start in darts:
            if start not in remaining:
                continue
            walk = [start]
            remaining.discard(start)
            cur = self.next_dart(start)
            while cur != start:
                walk.append(cur)
                remaining.discard(cur)
                cur = self.next_dart(cur)
            result.append(Face(id=len(result), walk=tuple(walk)))
        return tuple(result)

    def face_of_dart(self, dart: Dart) -> Face:
        return self._face_by_dart[dart]

    @cached_property
    def _face_by_dart(self) -> Mapping[Dart, Face]:
        table: dict[Dart, Face] = {}
        for face in self.faces():
            for dart in face.walk:
                table[dart] = face
        return table

    def faces_with_edge(self, edge: Edge) -> tuple[Face, ...]:
        u, v = edge
        if not self.has_edge(u, v):
            raise SubgraphError(f"no edge {edge} in graph")
        fa = self.face_of_dart((u, v))
        fb = self.face_of_dart((v, u))
        return (fa,) if fa.id == fb.id else (fa, fb)

    # -- distances ------------------------------------------------------------

    def distances_from(self, source: int) -> list[int]:
        """BFS distances; -1 marks unreachable (cannot happen: connected)."""
        self._check_vertex(source)
        dist = [-1] * self._n
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in self._rotations[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def distance(self, u: int, v: int) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        return self.distances_from(u)[v]


def pairwise_distance(emb: PlanarEmbedding, u: int, v: int) -> int:
    """Shortest-path edge count between u and v; 0 iff u == v."""
    return emb.distance(u, v)


# ---------------------------------------------------------------------------
# Degree classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeClassification:
    """Degree buckets plus the structural size metric q = 3|E| + |V_[2,b]|."""

    max_degree: int
    buckets: tuple[tuple[int, tuple[int, ...]], ...]
    range_bound: int
    q: int

    def bucket(self, k: int) -> tuple[int, ...]:
        for deg, verts in self.buckets:
            if deg == k:
                return verts
        return ()

    def in_range(self, a: int, b: int) -> tuple[int, ...]:
        out: list[int] = []
        for deg, verts in self.buckets:
            if a <= deg <= b:
                out.extend(verts)
        return tuple(sorted(out))


def classify_degrees(emb: PlanarEmbedding, range_bound: int) -> DegreeClassification:
    by_degree: dict[int, list[int]] = {}
    for v in emb.vertices:
        by_degree.setdefault(emb.degree(v), []).append(v)
    buckets = tuple(sorted((k, tuple(sorted(vs))) for k, vs in by_degree.items()))
    in_low_range = sum(
        1 for v in emb.vertices if 2 <= emb.degree(v) <= range_bound
    )
    return DegreeClassification(
        max_degree=emb.max_degree,
        buckets=buckets,
        range_bound=range_bound,
        q=3 * emb.edge_count + in_low_range,
    )


# ---------------------------------------------------------------------------
# Precolored subgraphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgraph:
    """A subgraph given by explicit vertex and edge sets."""

    vertices: frozenset[int]
    edges: frozenset[Edge]

    @staticmethod
    def of(vertices: Iterable[int], edges: Iterable[Edge]) -> "Subgraph":
        return Subgraph(frozenset(vertices), frozenset(canonical_edge(*e) for e in edges))

    @staticmethod
    def empty() -> "Subgraph":
        return Subgraph(frozenset(), frozenset())

    def validate_in(self, emb: PlanarEmbedding) -> None:
        for v in self.vertices:
            if not 0 <= v < emb.n:
                raise SubgraphError(f"subgraph vertex {v} not in host graph")
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise SubgraphError(f"subgraph edge {(u, v)} has an endpoint outside the vertex set")
            if not emb.has_edge(u, v):
                raise SubgraphError(f"subgraph edge {(u, v)} is not an edge of the host graph")

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)

    def components(self) -> tuple[frozenset[int], ...]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen: set[int] = set()
        comps: list[frozenset[int]] = []
        for v in sorted(self.vertices):
            if v in seen:
                continue
            comp = {v}
            queue = deque([v])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return tuple(comps)


@dataclass(frozen=True)
class PrecoloredShape:
    """Structure report for a precolored subgraph H.

    ``separation`` is the minimum distance in the host graph between vertices
    of distinct components; ``None`` means there are fewer than two
    components, so every distance condition holds vacuously.
    """

    components: tuple[frozenset[int], ...]
    kind: str  # "matching" | "clique-set" | "arbitrary"
    is_matching: bool
    is_clique_set: bool
    separation: int | None
    required_distance: int
    separated: bool


def analyze_precolored_shape(emb: PlanarEmbedding, H: Subgraph, distance: int) -> PrecoloredShape:
    """Classify H (most specific kind first) and measure component separation."""
    H.validate_in(emb)
    comps = H.components()

    def is_complete(comp: frozenset[int]) -> bool:
        need = len(comp) * (len(comp) - 1) // 2
        have = sum(1 for u, v in H.edges if u in comp and v in comp)
        return have == need

    clique_set = all(is_complete(c) for c in comps)
    matching = clique_set and all(len(c) <= 2 for c in comps)
    kind = "matching" if matching else ("clique-set" if clique_set else "arbitrary")

    separation: int | None = None
    if len(comps) >= 2:
        best: int | None = None
        comp_of = {v: i for i, c in enumerate(comps) for v in c}
        for c in comps:
            for v in c:
                dist = emb.distances_from(v)
                for u, i in comp_of.items():
                    if i != comp_of[v]:
                        d = dist[u]
                        if best is None or d < best:
                            best = d
        separation = best

    return PrecoloredShape(
        components=comps,
        kind=kind,
        is_matching=matching,
        is_clique_set=clique_set,
        separation=separation,
        required_distance=distance,
        separated=(separation is None or separation >= distance),
    )


# ---------------------------------------------------------------------------
# Graph file format
# ---------------------------------------------------------------------------
#
#   planar 1
#   vertices <n>
#   rot <v>: <u1> <u2> ... <uk>
#
# '#' starts a comment. Edges are implied by rotations and must be symmetric.


def parse_embedding(text: str) -> PlanarEmbedding:
    lines = text.splitlines()
    header_seen = False
    n: int | None = None
    rotations: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header_seen:
            if parts != ["planar", "1"]:
                raise ParseError("expected header 'planar 1'", line=lineno)
            header_seen = True
            continue
        if parts[0] == "vertices":
            if n is not None:
                raise ParseError("duplicate 'vertices' line", line=lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'vertices <n>'", line=lineno)
            n = int(parts[1])
            continue
        if parts[0] == "rot":
            if n is None:
                raise ParseError("'rot' before 'vertices'", line=lineno)
            head = parts[1]
            if not head.endswith(":"):
                raise ParseError("expected 'rot <v>:'", line=lineno, column=len("rot ") + 1)
            try:
                v = int(head[:-1])
            except ValueError:
                raise ParseError(f"bad vertex id {head[:-1]!r}", line=lineno) from None
            if v in rotations:
                raise ParseError(f"duplicate rotation for vertex {v}", line=lineno)
            try:
                neigh = tuple(int(x) for x in parts[2:])
            except ValueError as exc:
                raise ParseError(f"bad neighbor id in rotation of {v}: {exc}", line=lineno) from None
            rotations[v] = neigh
            continue
        raise ParseError(f"unrecognized directive {parts[0]!r}", line=lineno, column=1)
    if not header_seen:
        raise ParseError("missing 'planar 1' header")
    if n is None:
        raise ParseError("missing 'vertices' line")
    rots = []
    for v in range(n):
        rots.append(rotations.get(v, ()))
    extra = set(rotations) - set(range(n))
    if extra:
        raise ParseError(f"rotation given for unknown vertex {min(extra)}")
    return PlanarEmbedding(rots)


def serialize_embedding(emb: PlanarEmbedding) -> str:
    out = ["planar 1", f"vertices {emb.n}"]
    for v in emb.vertices:
        neigh = " ".join(str(u) for u in emb.rotation(v))
        out.append(f"rot {v}: {neigh}".rstrip())
    return "\n".join(out) + "\n"
