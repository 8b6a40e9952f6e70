"""Exact decision and construction procedures.

* ``list_total_color_exact``: complete backtracking over item lists with
  minimum-remaining-values ordering, ascending colors, forward checking and
  a node budget.
* ``extend_exact``: extension of a partial total coloring, via list
  derivation plus the exact solver.
* ``color_even_cycle_from_2_lists``: even cycles are 2-edge-choosable; the
  coloring is constructed directly, no search.
* ``bipartite_list_edge_color``: list edge coloring of a bipartite graph
  whenever every list has at least max(deg(x), deg(y)) colors. Kernel method:
  an orientation of the edge-conflict structure is built from iterated
  maximum matchings that cover all max-degree vertices, then one kernel
  (a stable matching) is extracted per color.
* ``planar_bipartite_vertex_3list``: vertex coloring from lists of size >= 3
  on planar bipartite graphs, by exact search (existence is guaranteed, so a
  definite failure indicates a bug, and running out of budget is reported as
  such, never as impossibility).
* ``bipartite_total_pipeline``: the two-phase route to a total coloring of a
  planar bipartite graph when vertex lists have >= 3 colors and edge lists
  have >= max(deg(x), deg(y)) + 2.
* ``bipartite_extension``: extension of a bounded-degree precoloring on a
  planar bipartite graph with palette k >= Delta + d + 4, via the pipeline.
"""

from __future__ import annotations

import time
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .coloring import (
    Item,
    ListAssignment,
    PartialTotalColoring,
    check_total_coloring,
    derive_lists,
    serialize_precoloring,
)
from .embedding import Edge, PlanarEmbedding, canonical_edge
from .errors import (
    ImproperColoringError,
    InternalInvariantError,
    PreconditionError,
)


class SolveStatus(str, Enum):
    COLORED = "colored"
    PROVEN_IMPOSSIBLE = "proven-impossible"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    witness: PartialTotalColoring | None
    nodes: int
    elapsed: float

    def to_report(self) -> dict:
        return {
            "status": self.status.value,
            "witness": serialize_precoloring(self.witness) if self.witness else None,
            "nodes": self.nodes,
            "elapsed": self.elapsed,
        }


# ---------------------------------------------------------------------------
# Exact list-total-coloring
# ---------------------------------------------------------------------------


def _item_neighbors(emb: PlanarEmbedding, items: Sequence[Item]) -> list[list[int]]:
    """Adjacency among solver items (restricted to uncolored items)."""
    index = {item: i for i, item in enumerate(items)}
    neigh: list[list[int]] = [[] for _ in items]

    def link(a: Item, b: Item) -> None:
        ia, ib = index.get(a), index.get(b)
        if ia is not None and ib is not None and ia != ib:
            neigh[ia].append(ib)
            neigh[ib].append(ia)

    for item in items:
        if isinstance(item, int):
            for u in emb.neighbors(item):
                link(item, u)
                link(item, canonical_edge(item, u))
        else:
            u, v = item
            link(item, u)
            link(item, v)
            for endpoint in (u, v):
                for w in emb.neighbors(endpoint):
                    e = canonical_edge(endpoint, w)
                    if e != item:
                        link(item, e)
    return [sorted(set(ns)) for ns in neigh]


def list_total_color_exact(
    emb: PlanarEmbedding,
    lists: ListAssignment,
    fixed: PartialTotalColoring,
    node_budget: int | None = None,
) -> SolveOutcome:
    """Complete search for a total coloring respecting the given lists.

    ``lists`` must cover exactly the items left uncolored by ``fixed``. A
    node is counted each time a color is tried on an item. The search is
    deterministic: items are picked by smallest remaining domain with ties
    broken vertices-first then by id, and colors ascend.
    """
    start = time.perf_counter()
    for v in emb.vertices:
        if (v in lists.vertex_lists) == (v in fixed.vertex_colors):
            raise PreconditionError(f"lists must cover exactly the uncolored items; vertex {v}")
    for e in sorted(emb.edges):
        if (e in lists.edge_lists) == (e in fixed.edge_colors):
            raise PreconditionError(f"lists must cover exactly the uncolored items; edge {e}")

    items: list[Item] = sorted(lists.vertex_lists) + sorted(lists.edge_lists)
    domains: list[list[int]] = [
        sorted(lists.vertex_lists[i]) if isinstance(i, int) else sorted(lists.edge_lists[i])
        for i in items
    ]
    neigh = _item_neighbors(emb, items)
    tie = [
        (0, i, i) if isinstance(i, int) else (1,) + i  # vertices first, then ids
        for i in items
    ]

    n_items = len(items)
    assigned: list[int | None] = [None] * n_items
    dom_sets: list[set[int]] = [set(d) for d in domains]
    nodes = 0
    budget_hit = False

    def pick() -> int | None:
        best: int | None = None
        best_key: tuple | None = None
        for i in range(n_items):
            if assigned[i] is None:
                key = (len(dom_sets[i]),) + tie[i]
                if best_key is None or key < best_key:
                    best, best_key = i, key
        return best

    def search() -> bool:
        nonlocal nodes, budget_hit
        i = pick()
        if i is None:
            return True
        for color in sorted(dom_sets[i]):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                budget_hit = True
                return False
            assigned[i] = color
            removed: list[int] = []
            dead = False
            for j in neigh[i]:
                if assigned[j] is None and color in dom_sets[j]:
                    dom_sets[j].discard(color)
                    removed.append(j)
                    if not dom_sets[j]:
                        dead = True
            if not dead and search():
                return True
            for j in removed:
                dom_sets[j].add(color)
            assigned[i] = None
            if budget_hit:
                return False
        return False

    found = search()
    elapsed = time.perf_counter() - start
    if found:
        vc = dict(fixed.vertex_colors)
        ec = dict(fixed.edge_colors)
        for item, color in zip(items, assigned):
            if isinstance(item, int):
                vc[item] = color
            else:
                ec[item] = color
        witness = PartialTotalColoring(fixed.k, vc, ec)
        verdict = check_total_coloring(emb, witness, "total")
        if not verdict.ok:
            raise InternalInvariantError(f"solver produced an improper witness: {verdict}")
        return SolveOutcome(SolveStatus.COLORED, witness, nodes, elapsed)
    if budget_hit:
        return SolveOutcome(SolveStatus.TIMEOUT, None, nodes, elapsed)
    return SolveOutcome(SolveStatus.PROVEN_IMPOSSIBLE, None, nodes, elapsed)


def extend_exact(
    emb: PlanarEmbedding,
    coloring: PartialTotalColoring,
    node_budget: int | None = None,
) -> SolveOutcome:
    """Decide whether the partial coloring extends; construct one if so."""
    verdict = check_total_coloring(emb, coloring, "of-H-in-G")
    if not verdict.ok:
        raise ImproperColoringError(f"input coloring is improper: {verdict.violations[0]}")
    lists = derive_lists(emb, coloring)
    outcome = list_total_color_exact(emb, lists, coloring, node_budget)
    if outcome.witness is not None and not outcome.witness.agrees_with(coloring):
        raise InternalInvariantError("witness does not agree with the precoloring")
    return outcome


# ---------------------------------------------------------------------------
# Even cycles from 2-lists
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycleImpossibility:
    """Proof sketch for the one genuinely impossible case: an odd cycle whose
    2-lists all coincide forces a proper 2-coloring to alternate, which odd
    parity forbids."""

    length: int
    shared_list: frozenset[int]

    @property
    def reason(self) -> str:
        a, b = sorted(self.shared_list)
        return (
            f"odd cycle of length {self.length} with every list equal to "
            f"{{{a},{b}}}: a proper coloring would have to alternate the two "
            "colors around the cycle, impossible at odd length"
        )


def color_even_cycle_from_2_lists(
    cycle: Sequence[Edge], lists: Sequence[Iterable[int]]
) -> list[int] | CycleImpossibility:
    """Properly edge-color a cycle where each edge holds a 2-list.

    Succeeds on every even cycle (and on odd cycles whose lists are not all
    equal): if some consecutive lists differ, a color missing from the next
    list seeds the propagation; otherwise the two shared colors alternate.
    """
    m = len(cycle)
    if m < 3 or len(lists) != m:
        raise PreconditionError("need a cycle of length >= 3 with one list per edge")
    edges = [canonical_edge(*e) for e in cycle]
    sets = [frozenset(s) for s in lists]
    for s in sets:
        if len(s) != 2:
            raise PreconditionError("every list must hold exactly 2 colors")
    for i, e in enumerate(edges):
        f = edges[(i + 1) % m]
        if len(set(e) & set(f)) != 1:
            raise PreconditionError(f"edges {e} and {f} are not consecutive in a cycle")

    colors: list[int | None] = [None] * m
    seed = next((i for i in range(m) if sets[i] != sets[(i + 1) % m]), None)
    if seed is None:
        if m % 2 == 1:
            return CycleImpossibility(length=m, shared_list=sets[0])
        a, b = sorted(sets[0])
        return [a if i % 2 == 0 else b for i in range(m)]

    extra = sorted(sets[seed] - sets[(seed + 1) % m])[0]
    colors[seed] = extra
    # walk backward from the seed; the edge after the seed is colored last and
    # is not constrained by the seed color, which its list does not contain
    for step in range(1, m):
        j = (seed - step) % m
        succ = colors[(j + 1) % m]
        colors[j] = min(c for c in sets[j] if c != succ)
    out = [c for c in colors if c is not None]
    for i in range(m):
        if out[i] == out[(i + 1) % m]:
            raise InternalInvariantError("cycle coloring propagation produced a conflict")
    return out


# ---------------------------------------------------------------------------
# Bipartite helpers (plain adjacency; no embedding required)
# ---------------------------------------------------------------------------


def _as_edges(graph: PlanarEmbedding | Iterable[Edge]) -> list[Edge]:
    if isinstance(graph, PlanarEmbedding):
        return sorted(graph.edges)
    return sorted({canonical_edge(*e) for e in graph})


def _degrees(edges: Iterable[Edge]) -> dict[int, int]:
    deg: dict[int, int] = defaultdict(int)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def bipartition_sides(edges: Iterable[Edge], n: int | None = None) -> dict[int, int] | None:
    """2-color the vertices touched by ``edges`` (per component); None if odd cycle."""
    adj: dict[int, list[int]] = defaultdict(list)
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    side: dict[int, int] = {}
    for s in sorted(adj):
        if s in side:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in side:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    if n is not None:
        for v in range(n):
            side.setdefault(v, 0)
    return side


def _augment(start: int, match: dict[int, int], adj: Mapping[int, set[int]]) -> bool:
    seen: set[int] = set()

    def dfs(u: int) -> bool:
        for w in sorted(adj[u]):
            if w in seen:
                continue
            seen.add(w)
            if w not in match or dfs(match[w]):
                match[w] = u
                match[u] = w
                return True
        return False

    return dfs(start)


def _matching_covering_max_degree(edges: set[Edge]) -> dict[int, int]:
    """Maximum matching covering every max-degree vertex.

    Built in three steps: saturate the max-degree vertices of each side
    separately (Hall's condition holds for them), merge the two matchings
    along their alternating components, then grow to maximum size with
    augmenting paths, which never uncover a covered vertex.
    """
    deg = _degrees(edges)
    adj: dict[int, set[int]] = defaultdict(set)
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    dmax = max(deg.values())
    side = bipartition_sides(edges)
    if side is None:
        raise PreconditionError("graph is not bipartite")
    top = sorted(v for v in deg if deg[v] == dmax)

    def saturate(targets: list[int]) -> dict[int, int]:
        match: dict[int, int] = {}
        for a in targets:
            if a not in match and not _augment(a, match, adj):
                raise InternalInvariantError("max-degree vertices must be saturable")
        return match

    m_a = saturate([v for v in top if side[v] == 0])
    m_b = saturate([v for v in top if side[v] == 1])

    ea = {canonical_edge(u, v) for u, v in m_a.items()}
    eb = {canonical_edge(u, v) for u, v in m_b.items()}
    union_adj: dict[int, set[int]] = defaultdict(set)
    for u, v in ea | eb:
        union_adj[u].add(v)
        union_adj[v].add(u)
    need_all = set(top)
    chosen: set[Edge] = set()
    visited: set[int] = set()
    for s in sorted(union_adj):
        if s in visited:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in union_adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        visited |= comp
        comp_ea = {e for e in ea if e[0] in comp}
        comp_eb = {e for e in eb if e[0] in comp}
        need = comp & need_all

        def covers(es: set[Edge]) -> bool:
            got = {x for e in es for x in e}
            return need <= got

        if covers(comp_ea):
            chosen |= comp_ea
        elif covers(comp_eb):
            chosen |= comp_eb
        else:
            raise InternalInvariantError("alternating component lost max-degree coverage")

    chosen = {e for e in chosen if e[0] in need_all or e[1] in need_all}
    match: dict[int, int] = {}
    for u, v in chosen:
        match[u] = v
        match[v] = u
    improved = True
    while improved:
        improved = False
        for v in sorted(deg):
            if v not in match and _augment(v, match, adj):
                improved = True
    if not need_all <= set(match):
        raise InternalInvariantError("maximum matching failed to cover max-degree vertices")
    return match


def _solve_2sat(nvars: int, clauses: list[tuple[int, int]]) -> list[bool] | None:
    """Standard SCC-based 2-SAT. Literals are +-(i+1)."""
    nnodes = 2 * nvars
    fwd: list[list[int]] = [[] for _ in range(nnodes)]
    rev: list[list[int]] = [[] for _ in range(nnodes)]

    def node(lit: int) -> int:
        i = abs(lit) - 1
        return 2 * i if lit > 0 else 2 * i + 1

    for a, b in clauses:
        fwd[node(a) ^ 1].append(node(b))
        fwd[node(b) ^ 1].append(node(a))
        rev[node(b)].append(node(a) ^ 1)
        rev[node(a)].append(node(b) ^ 1)

    order: list[int] = []
    seen = [False] * nnodes
    for s in range(nnodes):
        if seen[s]:
            continue
        seen[s] = True
        stack: list[tuple[int, int]] = [(s, 0)]
        while stack:
            u, ptr = stack[-1]
            if ptr < len(fwd[u]):
                stack[-1] = (u, ptr + 1)
                w = fwd[u][ptr]
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, 0))
            else:
                order.append(u)
                stack.pop()
    comp = [-1] * nnodes
    label = 0
    for s in reversed(order):
        if comp[s] != -1:
            continue
        comp[s] = label
        stack2 = [s]
        while stack2:
            u = stack2.pop()
            for w in rev[u]:
                if comp[w] == -1:
                    comp[w] = label
                    stack2.append(w)
        label += 1
    result: list[bool] = []
    for i in range(nvars):
        if comp[2 * i] == comp[2 * i + 1]:
            return None
        result.append(comp[2 * i] > comp[2 * i + 1])
    return result


def edge_preference_orders(edges: Iterable[Edge]) -> dict[int, list[Edge]]:
    """Per-vertex preference lists over incident edges (most preferred first)
    such that for every edge xy

        rank_x(xy) + rank_y(xy) <= max(deg(x), deg(y)) + 1.

    Construction peels one maximum matching per round, each covering all
    current max-degree vertices. A peeled edge is inserted most-preferred at
    one endpoint (its hot side) and least-preferred at the other. Hot sides
    are chosen by 2-SAT so that no hot vertex has an uncovered neighbor of no
    smaller degree and no two hot endpoints are joined by an unpeeled edge;
    satisfiability follows from the matching being maximum (a conflicting
    chain of forced choices would trace an augmenting path). Both-cold is
    allowed for edges with an endpoint of degree <= 1.
    """
    full = sorted({canonical_edge(*e) for e in edges})
    levels: list[tuple[list[Edge], set[int]]] = []
    cur: set[Edge] = set(full)
    while cur:
        deg = _degrees(cur)
        match = _matching_covering_max_degree(cur)
        medges = sorted({canonical_edge(u, v) for u, v in match.items()})
        covered = set(match)
        var = {v: i + 1 for i, v in enumerate(sorted(covered))}
        clauses: list[tuple[int, int]] = []
        for u, v in medges:
            if min(deg[u], deg[v]) > 1:
                clauses.append((var[u], var[v]))
            clauses.append((-var[u], -var[v]))
        for u, v in sorted(cur - set(medges)):
            for a, b in ((u, v), (v, u)):
                if a in covered and b not in covered and deg[b] >= deg[a]:
                    clauses.append((-var[a], -var[a]))
            if u in covered and v in covered:
                clauses.append((-var[u], -var[v]))
        assignment = _solve_2sat(len(var), clauses)
        if assignment is None:
            raise InternalInvariantError("hot-side selection must be satisfiable")
        hot = {v for v in covered if assignment[var[v] - 1]}
        levels.append((medges, hot))
        cur -= set(medges)

    prefs: dict[int, list[Edge]] = defaultdict(list)
    for medges, hot in reversed(levels):
        for u, v in medges:
            e = (u, v)
            for a in (u, v):
                if a in hot:
                    prefs[a].insert(0, e)
                else:
                    prefs[a].append(e)

    deg = _degrees(full)
    rank = {(v, e): i + 1 for v, lst in prefs.items() for i, e in enumerate(lst)}
    for u, v in full:
        e = (u, v)
        if rank[(u, e)] + rank[(v, e)] > max(deg[u], deg[v]) + 1:
            raise InternalInvariantError(f"preference rank bound violated at edge {e}")
    return dict(prefs)


def _stable_matching(
    pool: list[Edge],
    prefs: Mapping[int, list[Edge]],
    rank: Mapping[tuple[int, Edge], int],
    side: Mapping[int, int],
) -> set[Edge]:
    """Proposer-optimal stable matching of the edge pool; this is exactly a
    kernel of the preference orientation restricted to the pool."""
    pool_set = set(pool)
    prop: dict[int, list[Edge]] = {}
    for e in pool:
        x = e[0] if side[e[0]] == 0 else e[1]
        prop.setdefault(x, [])
    for x in prop:
        prop[x] = [e for e in prefs[x] if e in pool_set]
    ptr = {x: 0 for x in prop}
    held: dict[int, Edge] = {}
    free = deque(sorted(prop))
    while free:
        x = free.popleft()
        if ptr[x] >= len(prop[x]):
            continue
        e = prop[x][ptr[x]]
        y = e[0] if side[e[0]] == 1 else e[1]
        cur = held.get(y)
        if cur is None:
            held[y] = e
        elif rank[(y, e)] < rank[(y, cur)]:
            held[y] = e
            ox = cur[0] if side[cur[0]] == 0 else cur[1]
            ptr[ox] += 1
            free.append(ox)
        else:
            ptr[x] += 1
            free.append(x)
    return set(held.values())


def bipartite_list_edge_color(
    graph: PlanarEmbedding | Iterable[Edge],
    lists: Mapping[Edge, Iterable[int]],
) -> dict[Edge, int]:
    """Proper edge coloring of a bipartite graph from lists with
    |L(xy)| >= max(deg(x), deg(y)).

    Kernel method: colors are processed in ascending order; for each color
    the edges still carrying it form a pool, one stable matching of the pool
    is colored, and the color is struck from the rest. The preference ranks
    bound how often an edge can be struck, so no list empties before its
    edge is colored.
    """
    edges = _as_edges(graph)
    if not edges:
        return {}
    deg = _degrees(edges)
    side = bipartition_sides(edges)
    if side is None:
        raise PreconditionError("graph is not bipartite")
    norm: dict[Edge, frozenset[int]] = {}
    for e in edges:
        key = canonical_edge(*e)
        if key not in lists:
            raise PreconditionError(f"no list supplied for edge {key}")
        norm[key] = frozenset(lists[key])
        bound = max(deg[key[0]], deg[key[1]])
        if len(norm[key]) < bound:
            raise PreconditionError(
                f"list of edge {key} has {len(norm[key])} colors, needs >= {bound}"
            )

    prefs = edge_preference_orders(edges)
    rank = {(v, e): i + 1 for v, lst in prefs.items() for i, e in enumerate(lst)}
    remaining = {e: set(s) for e, s in norm.items()}
    coloring: dict[Edge, int] = {}
    for color in sorted({c for s in norm.values() for c in s}):
        pool = sorted(e for e in edges if e not in coloring and color in remaining[e])
        if not pool:
            continue
        kernel = _stable_matching(pool, prefs, rank, side)
        for e in pool:
            if e in kernel:
                coloring[e] = color
            else:
                remaining[e].discard(color)
                if not remaining[e]:
                    raise InternalInvariantError(f"list of edge {e} emptied before coloring")
    if len(coloring) != len(edges):
        raise InternalInvariantError("kernel extraction left edges uncolored")
    _verify_edge_coloring(edges, coloring, norm)
    return coloring


def _verify_edge_coloring(
    edges: list[Edge], coloring: Mapping[Edge, int], lists: Mapping[Edge, frozenset[int]]
) -> None:
    at_vertex: dict[int, set[int]] = defaultdict(set)
    for e in edges:
        c = coloring[e]
        if c not in lists[e]:
            raise InternalInvariantError(f"edge {e} colored outside its list")
        for v in e:
            if c in at_vertex[v]:
                raise InternalInvariantError(f"color clash at vertex {v}")
            at_vertex[v].add(c)


def bipartite_list_edge_color_exhaustive(
    graph: PlanarEmbedding | Iterable[Edge],
    lists: Mapping[Edge, Iterable[int]],
) -> dict[Edge, int] | None:
    """Plain backtracking over edges in id order; the cross-check oracle for
    the kernel route. Returns None when no coloring exists."""
    edges = _as_edges(graph)
    norm = {e: sorted(set(lists[e])) for e in edges}
    acc: dict[Edge, int] = {}

    def bt(i: int) -> bool:
        if i == len(edges):
            return True
        e = edges[i]
        for c in norm[e]:
            if all(acc[f] != c for f in acc if set(f) & set(e)):
                acc[e] = c
                if bt(i + 1):
                    return True
                del acc[e]
        return False

    return dict(acc) if bt(0) else None


# ---------------------------------------------------------------------------
# Planar bipartite vertex coloring from 3-lists
# ---------------------------------------------------------------------------


def _list_vertex_color(
    adjacency: Mapping[int, Iterable[int]],
    lists: Mapping[int, Iterable[int]],
    node_budget: int | None = None,
) -> dict[int, int]:
    """Backtracking list vertex coloring (MRV, ascending colors)."""
    verts = sorted(lists)
    domains = {v: set(lists[v]) for v in verts}
    neigh = {v: sorted(set(adjacency.get(v, ())) & set(verts)) for v in verts}
    color: dict[int, int] = {}
    nodes = 0

    def pick() -> int | None:
        pending = [v for v in verts if v not in color]
        if not pending:
            return None
        return min(pending, key=lambda v: (len(domains[v]), v))

    def bt() -> bool:
        nonlocal nodes
        v = pick()
        if v is None:
            return True
        for c in sorted(domains[v]):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                from .errors import BudgetExhaustedError

                raise BudgetExhaustedError(f"vertex coloring exceeded {node_budget} nodes")
            color[v] = c
            removed = []
            dead = False
            for w in neigh[v]:
                if w not in color and c in domains[w]:
                    domains[w].discard(c)
                    removed.append(w)
                    if not domains[w]:
                        dead = True
            if not dead and bt():
                return True
            for w in removed:
                domains[w].add(c)
            del color[v]
        return False

    if not bt():
        raise InternalInvariantError(
            "search exhausted on an instance whose colorability is guaranteed"
        )
    return color


def planar_bipartite_vertex_3list(
    emb: PlanarEmbedding,
    vertex_lists: Mapping[int, Iterable[int]],
    node_budget: int | None = None,
) -> dict[int, int]:
    """Proper vertex coloring of a planar bipartite graph from lists of >= 3 colors.

    Existence is guaranteed, so the exact search either succeeds or runs out
    of budget; it can never correctly report impossibility.
    """
    if bipartition_sides(emb.edges, emb.n) is None:
        raise PreconditionError("graph is not bipartite")
    for v in emb.vertices:
        if v not in vertex_lists:
            raise PreconditionError(f"no list supplied for vertex {v}")
        if len(set(vertex_lists[v])) < 3:
            raise PreconditionError(f"list of vertex {v} has fewer than 3 colors")
    adjacency = {v: emb.neighbors(v) for v in emb.vertices}
    return _list_vertex_color(adjacency, vertex_lists, node_budget)


# ---------------------------------------------------------------------------
# Two-phase total coloring of planar bipartite graphs
# ---------------------------------------------------------------------------


def bipartite_total_pipeline(
    emb: PlanarEmbedding,
    lists: ListAssignment,
    node_budget: int | None = None,
) -> PartialTotalColoring:
    """Vertex phase then edge phase.

    Requires |L(v)| >= 3 and |L(xy)| >= max(deg(x), deg(y)) + 2. After the
    vertices are colored, each edge list loses at most its two endpoint
    colors, so at least max(deg(x), deg(y)) colors remain and the kernel
    edge colorer applies.
    """
    deg = {v: emb.degree(v) for v in emb.vertices}
    for v in emb.vertices:
        if v not in lists.vertex_lists:
            raise PreconditionError(f"no vertex list for {v}")
    for e in sorted(emb.edges):
        if e not in lists.edge_lists:
            raise PreconditionError(f"no edge list for {e}")
        need = max(deg[e[0]], deg[e[1]]) + 2
        if len(lists.edge_lists[e]) < need:
            raise PreconditionError(
                f"edge list of {e} has {len(lists.edge_lists[e])} colors, needs >= {need}"
            )

    vertex_colors = planar_bipartite_vertex_3list(emb, lists.vertex_lists, node_budget)

    shrunk: dict[Edge, frozenset[int]] = {}
    for e in sorted(emb.edges):
        u, v = e
        remaining = frozenset(lists.edge_lists[e]) - {vertex_colors[u], vertex_colors[v]}
        if len(remaining) < max(deg[u], deg[v]):
            raise InternalInvariantError(
                f"shrunken list of edge {e} fell below max endpoint degree"
            )
        shrunk[e] = remaining

    edge_colors = bipartite_list_edge_color(emb, shrunk)
    k = max(c for s in list(lists.vertex_lists.values()) + list(lists.edge_lists.values()) for c in s)
    result = PartialTotalColoring(k, vertex_colors, edge_colors)
    verdict = check_total_coloring(emb, result, "total")
    if not verdict.ok:
        raise InternalInvariantError(f"pipeline output improper: {verdict.violations[:3]}")
    return result


def bipartite_extension(
    emb: PlanarEmbedding,
    coloring: PartialTotalColoring,
    d: int | None = None,
    node_budget: int | None = None,
) -> PartialTotalColoring:
    """Extend a precoloring of max degree d on a planar bipartite graph,
    given palette k >= Delta + d + 4.

    Lists are derived on the graph minus the precolored edges, the derived
    sizes are checked against their guaranteed lower bounds (vertex lists
    >= 4, edge lists >= max endpoint degree in the stripped graph plus 2),
    and the two-phase pipeline colors the stripped graph. A size-bound
    failure is an internal bug, reported as such.
    """
    verdict = check_total_coloring(emb, coloring, "of-H-in-G")
    if not verdict.ok:
        raise ImproperColoringError(f"input coloring is improper: {verdict.violations[0]}")
    if bipartition_sides(emb.edges, emb.n) is None:
        raise PreconditionError("graph is not bipartite")
    H = coloring.subgraph()
    H.validate_in(emb)
    actual_d = H.max_degree()
    if d is None:
        d = actual_d
    elif actual_d > d:
        raise PreconditionError(f"precolored subgraph has degree {actual_d} > d = {d}")
    delta = emb.max_degree
    if coloring.k < delta + d + 4:
        raise PreconditionError(
            f"palette {coloring.k} below Delta + d + 4 = {delta + d + 4}"
        )

    stripped = sorted(emb.edges - H.edges)
    deg_stripped = _degrees(stripped)
    palette = frozenset(range(1, coloring.k + 1))
    vc0 = coloring.vertex_colors
    ec0 = coloring.edge_colors

    vertex_lists: dict[int, frozenset[int]] = {}
    for v in emb.vertices:
        if v in vc0:
            continue
        banned = {vc0[u] for u in emb.neighbors(v) if u in vc0}
        lst = palette - banned
        if len(lst) < 4:
            raise InternalInvariantError(f"derived vertex list at {v} below 4")
        vertex_lists[v] = lst

    edge_lists: dict[Edge, frozenset[int]] = {}
    for e in stripped:
        u, v = e
        banned = set()
        for endpoint in (u, v):
            if endpoint in vc0:
                banned.add(vc0[endpoint])
            for w in emb.neighbors(endpoint):
                c = ec0.get(canonical_edge(endpoint, w))
                if c is not None:
                    banned.add(c)
        lst = palette - banned
        need = max(deg_stripped.get(u, 0), deg_stripped.get(v, 0)) + 2
        if len(lst) < need:
            raise InternalInvariantError(f"derived edge list at {e} below {need}")
        edge_lists[e] = lst

    # phase 1 on the uncolored vertices only; precolored vertex colors stay
    # fixed and are already excluded from the derived lists
    adjacency = {
        v: [u for u in emb.neighbors(v) if u in vertex_lists] for v in vertex_lists
    }
    new_vertex_colors = _list_vertex_color(adjacency, vertex_lists, node_budget)

    all_vc = dict(vc0)
    all_vc.update(new_vertex_colors)
    shrunk: dict[Edge, frozenset[int]] = {}
    for e in stripped:
        u, v = e
        remaining = edge_lists[e] - {all_vc[u], all_vc[v]}
        if len(remaining) < max(deg_stripped.get(u, 0), deg_stripped.get(v, 0)):
            raise InternalInvariantError(
                f"shrunken list of edge {e} fell below max endpoint degree"
            )
        shrunk[e] = remaining
    new_edge_colors = bipartite_list_edge_color(stripped, shrunk) if stripped else {}

    all_ec = dict(ec0)
    all_ec.update(new_edge_colors)
    result = PartialTotalColoring(coloring.k, all_vc, all_ec)
    final = check_total_coloring(emb, result, "total")
    if not final.ok:
        raise InternalInvariantError(f"extension output improper: {final.violations[:3]}")
    if not result.agrees_with(coloring):
        raise InternalInvariantError("extension does not agree with the precoloring")
    return result
