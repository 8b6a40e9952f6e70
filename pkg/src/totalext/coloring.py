"""Partial total colorings, properness checks, list derivation, greedy extension.

A total coloring assigns colors 1..k to vertices and edges so that adjacent
vertices differ, adjacent edges differ, and no edge matches either endpoint.
A partial coloring of a subgraph H is checked in three modes:

* ``of-H``       properness inside the colored subgraph only;
* ``of-H-in-G``  additionally, colored vertices adjacent in the host graph
                 must differ even when the connecting edge is not in H;
* ``total``      every item colored and proper.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, Mapping, Union

from .embedding import Edge, PlanarEmbedding, Subgraph, canonical_edge
from .errors import ColorRangeError, ImproperColoringError, ParseError, SubgraphError

Item = Union[int, Edge]  # vertex id or canonical edge pair
CheckMode = Literal["of-H", "of-H-in-G", "total"]


def _item_sort_key(item: Item) -> tuple:
    # vertices before edges, each ascending
    if isinstance(item, int):
        return (0, item, item)
    return (1,) + item


@dataclass(frozen=True)
class PartialTotalColoring:
    """Palette size k plus partial color maps for vertices and edges.

    Colored items define the precolored subgraph H: its vertex set is every
    vertex mentioned (colored directly or as an endpoint of a colored edge)
    and its edge set is the colored edges.
    """

    k: int
    vertex_colors: Mapping[int, int]
    edge_colors: Mapping[Edge, int]

    def __post_init__(self):
        if self.k < 1:
            raise ColorRangeError(f"palette size must be positive, got {self.k}")
        vc = dict(sorted(self.vertex_colors.items()))
        ec = {canonical_edge(*e): c for e, c in sorted(self.edge_colors.items())}
        for item, c in list(vc.items()) + list(ec.items()):
            if not isinstance(c, int) or not 1 <= c <= self.k:
                raise ColorRangeError(f"color {c} on {item} outside palette 1..{self.k}")
        object.__setattr__(self, "vertex_colors", vc)
        object.__setattr__(self, "edge_colors", ec)

    @staticmethod
    def empty(k: int) -> "PartialTotalColoring":
        return PartialTotalColoring(k, {}, {})

    def subgraph(self) -> Subgraph:
        verts = set(self.vertex_colors)
        for u, v in self.edge_colors:
            verts.add(u)
            verts.add(v)
        return Subgraph.of(verts, self.edge_colors.keys())

    def with_palette(self, k: int) -> "PartialTotalColoring":
        """Reinterpret the same assignment inside palette 1..k."""
        return PartialTotalColoring(k, self.vertex_colors, self.edge_colors)

    def vertex_color(self, v: int) -> int | None:
        return self.vertex_colors.get(v)

    def edge_color(self, e: Edge) -> int | None:
        return self.edge_colors.get(canonical_edge(*e))

    def colored_items(self) -> Iterator[Item]:
        yield from self.vertex_colors
        yield from self.edge_colors

    def is_total_for(self, emb: PlanarEmbedding) -> bool:
        return (
            len(self.vertex_colors) == emb.n
            and len(self.edge_colors) == emb.edge_count
        )

    def agrees_with(self, other: "PartialTotalColoring") -> bool:
        """True when self assigns the same color to every item other colors."""
        return all(
            self.vertex_colors.get(v) == c for v, c in other.vertex_colors.items()
        ) and all(self.edge_colors.get(e) == c for e, c in other.edge_colors.items())


@dataclass(frozen=True)
class Violation:
    first: Item
    second: Item
    color: int


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: tuple[Violation, ...]
    uncolored: tuple[Item, ...]  # populated only in mode "total"


def _validate_domain(emb: PlanarEmbedding, coloring: PartialTotalColoring) -> None:
    for v in coloring.vertex_colors:
        if not 0 <= v < emb.n:
            raise SubgraphError(f"colored vertex {v} not in graph")
    for e in coloring.edge_colors:
        if not emb.has_edge(*e):
            raise SubgraphError(f"colored edge {e} not in graph")


def check_total_coloring(
    emb: PlanarEmbedding, coloring: PartialTotalColoring, mode: CheckMode
) -> Verdict:
    """Report every properness violation of the partial coloring.

    Edge conflicts (edge/edge and edge/endpoint) do not depend on the mode;
    vertex/vertex conflicts are restricted to H-edges in mode ``of-H`` and
    use full host-graph adjacency otherwise.
    """
    _validate_domain(emb, coloring)
    vc, ec = coloring.vertex_colors, coloring.edge_colors
    violations: list[Violation] = []

    if mode == "of-H":
        vertex_pairs = [e for e in ec if e[0] in vc and e[1] in vc]
    else:
        vertex_pairs = [
            (u, v) for (u, v) in sorted(emb.edges) if u in vc and v in vc
        ]
    for u, v in vertex_pairs:
        if vc[u] == vc[v]:
            violations.append(Violation(u, v, vc[u]))

    edges = sorted(ec)
    for i, e in enumerate(edges):
        for f in edges[i + 1 :]:
            if set(e) & set(f) and ec[e] == ec[f]:
                violations.append(Violation(e, f, ec[e]))
        for endpoint in e:
            if vc.get(endpoint) == ec[e]:
                violations.append(Violation(endpoint, e, ec[e]))

    uncolored: tuple[Item, ...] = ()
    if mode == "total":
        missing: list[Item] = [v for v in emb.vertices if v not in vc]
        missing.extend(e for e in sorted(emb.edges) if e not in ec)
        uncolored = tuple(missing)

    return Verdict(
        ok=not violations and not uncolored,
        violations=tuple(violations),
        uncolored=uncolored,
    )


# ---------------------------------------------------------------------------
# List derivation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ListAssignment:
    """Admissible color sets for the uncolored vertices and edges."""

    vertex_lists: Mapping[int, frozenset[int]]
    edge_lists: Mapping[Edge, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(self, "vertex_lists", dict(self.vertex_lists))
        object.__setattr__(
            self,
            "edge_lists",
            {canonical_edge(*e): frozenset(s) for e, s in self.edge_lists.items()},
        )

    def items(self) -> Iterator[tuple[Item, frozenset[int]]]:
        yield from sorted(self.vertex_lists.items())
        yield from sorted(self.edge_lists.items())


def seen_colors(emb: PlanarEmbedding, coloring: PartialTotalColoring, item: Item) -> set[int]:
    """Colors on items adjacent or incident to the given item."""
    vc, ec = coloring.vertex_colors, coloring.edge_colors
    seen: set[int] = set()
    if isinstance(item, int):
        for u in emb.neighbors(item):
            if u in vc:
                seen.add(vc[u])
            c = ec.get(canonical_edge(item, u))
            if c is not None:
                seen.add(c)
    else:
        u, v = item
        for endpoint in (u, v):
            if endpoint in vc:
                seen.add(vc[endpoint])
            for w in emb.neighbors(endpoint):
                e = canonical_edge(endpoint, w)
                if e != canonical_edge(u, v) and e in ec:
                    seen.add(ec[e])
    return seen


def derive_lists(emb: PlanarEmbedding, coloring: PartialTotalColoring) -> ListAssignment:
    """Per uncolored item, the palette minus every color it currently sees.

    Precolored items are excluded from the output domain; their colors are
    fixed. The input must be proper in mode ``of-H-in-G``.
    """
    verdict = check_total_coloring(emb, coloring, "of-H-in-G")
    if not verdict.ok:
        raise ImproperColoringError(
            f"input coloring is improper: {verdict.violations[0]}"
        )
    palette = frozenset(range(1, coloring.k + 1))
    vlists = {
        v: palette - frozenset(seen_colors(emb, coloring, v))
        for v in emb.vertices
        if v not in coloring.vertex_colors
    }
    elists = {
        e: palette - frozenset(seen_colors(emb, coloring, e))
        for e in sorted(emb.edges)
        if e not in coloring.edge_colors
    }
    return ListAssignment(vlists, elists)


# ---------------------------------------------------------------------------
# Greedy extension
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GreedyFailure:
    """Witness that greedy extension got stuck: the first item with no
    admissible color, plus the partial progress made before it."""

    stuck_item: Item
    partial: PartialTotalColoring


def greedy_extend(
    emb: PlanarEmbedding, coloring: PartialTotalColoring
) -> PartialTotalColoring | GreedyFailure:
    """Color uncolored items in a fixed order, always taking the minimum
    admissible color.

    Order: vertices by id, then edges lexicographically. With palette size
    k >= 2*Delta + 1 this always succeeds, since no item ever sees more than
    2*Delta colors. Below that the first stuck item is returned as a witness;
    greedy failure proves nothing, the exact solver is authoritative.
    """
    verdict = check_total_coloring(emb, coloring, "of-H-in-G")
    if not verdict.ok:
        raise ImproperColoringError(
            f"input coloring is improper: {verdict.violations[0]}"
        )
    vc = dict(coloring.vertex_colors)
    ec = dict(coloring.edge_colors)
    todo: list[Item] = [v for v in emb.vertices if v not in vc]
    todo += [e for e in sorted(emb.edges) if e not in ec]
    todo.sort(key=_item_sort_key)
    for item in todo:
        current = PartialTotalColoring(coloring.k, vc, ec)
        forbidden = seen_colors(emb, current, item)
        choice = next(
            (c for c in range(1, coloring.k + 1) if c not in forbidden), None
        )
        if choice is None:
            return GreedyFailure(stuck_item=item, partial=current)
        if isinstance(item, int):
            vc[item] = choice
        else:
            ec[item] = choice
    return PartialTotalColoring(coloring.k, vc, ec)


# ---------------------------------------------------------------------------
# Precoloring file format
# ---------------------------------------------------------------------------
#
#   palette <k>
#   vcolor <v> <c>
#   ecolor <u> <v> <c>
#
# '#' starts a comment. The listed items define H.


def parse_precoloring(text: str) -> PartialTotalColoring:
    k: int | None = None
    vcolors: dict[int, int] = {}
    ecolors: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "palette" and len(parts) == 2:
                if k is not None:
                    raise ParseError("duplicate 'palette' line", line=lineno)
                k = int(parts[1])
            elif parts[0] == "vcolor" and len(parts) == 3:
                v, c = int(parts[1]), int(parts[2])
                if v in vcolors:
                    raise ParseError(f"duplicate vcolor for {v}", line=lineno)
                vcolors[v] = c
            elif parts[0] == "ecolor" and len(parts) == 4:
                u, v, c = int(parts[1]), int(parts[2]), int(parts[3])
                e = canonical_edge(u, v)
                if e in ecolors:
                    raise ParseError(f"duplicate ecolor for {e}", line=lineno)
                ecolors[e] = c
            else:
                raise ParseError(f"unrecognized line {line!r}", line=lineno)
        except ValueError:
            raise ParseError(f"bad integer in {line!r}", line=lineno) from None
    if k is None:
        raise ParseError("missing 'palette' line")
    return PartialTotalColoring(k, vcolors, ecolors)


def serialize_precoloring(coloring: PartialTotalColoring) -> str:
    out = [f"palette {coloring.k}"]
    for v, c in sorted(coloring.vertex_colors.items()):
        out.append(f"vcolor {v} {c}")
    for (u, v), c in sorted(coloring.edge_colors.items()):
        out.append(f"ecolor {u} {v} {c}")
    return "\n".join(out) + "\n"
