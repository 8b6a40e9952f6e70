"""Shared test machinery: fast random planar generators, the independent
full-enumeration oracle, precoloring samplers, and subgraph planting."""

from __future__ import annotations

import random
from collections import defaultdict

from totalext import PartialTotalColoring, PlanarEmbedding, Subgraph, canonical_edge
from totalext.coloring import seen_colors


# ---------------------------------------------------------------------------
# Random planar embeddings, built constructively (no planarity testing)
# ---------------------------------------------------------------------------


def random_triangulation(rng: random.Random, n: int) -> list[list[int]]:
    """Stacked triangulation: each new vertex lands inside a random triangular
    face and joins its three corners. Rotations are maintained directly."""
    assert n >= 3
    rotations: list[list[int]] = [[1, 2], [2, 0], [0, 1]]
    faces: list[tuple[int, int, int]] = [(0, 1, 2), (1, 0, 2)]
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        rotations.append([a, c, b])  # succ(a)=c, succ(c)=b, succ(b)=a
        rotations[a].insert(rotations[a].index(c) + 1, v)
        rotations[b].insert(rotations[b].index(a) + 1, v)
        rotations[c].insert(rotations[c].index(b) + 1, v)
        faces.extend([(a, b, v), (b, c, v), (c, a, v)])
    return rotations


def _connected(rotations: list[list[int]]) -> bool:
    n = len(rotations)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in rotations[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def random_planar_embedding(
    rng: random.Random, n: int, keep_fraction: float = 0.75
) -> PlanarEmbedding:
    """Random connected planar embedding on n >= 3 vertices: a stacked
    triangulation with a random share of edges deleted (connectivity kept)."""
    rotations = random_triangulation(rng, n)
    if keep_fraction < 1.0:
        _delete_sparsify(rng, rotations, keep_fraction)
    return PlanarEmbedding(rotations)


def _delete_sparsify(rng: random.Random, rotations: list[list[int]], keep_fraction: float) -> None:
    n = len(rotations)
    edges = sorted({canonical_edge(v, u) for v in range(n) for u in rotations[v]})
    rng.shuffle(edges)
    total = len(edges)
    target = max(int(total * keep_fraction), n - 1)
    removed = 0
    for u, v in edges:
        if total - removed <= target:
            break
        iu, iv = rotations[u].index(v), rotations[v].index(u)
        rotations[u].pop(iu)
        rotations[v].pop(iv)
        if _connected(rotations):
            removed += 1
        else:
            rotations[u].insert(iu, v)
            rotations[v].insert(iv, u)


def random_planar_bipartite(
    rng: random.Random, n_target: int, keep_fraction: float = 0.8
) -> PlanarEmbedding:
    """Random connected planar bipartite embedding: subdivide every edge of a
    stacked triangulation (subdivision of any graph is bipartite), then
    sparsify. Vertex count lands at 4b - 6 <= n_target for base size b."""
    base = max(3, (n_target + 6) // 4)
    rotations = random_triangulation(rng, base)
    n0 = len(rotations)
    edges = sorted({canonical_edge(v, u) for v in range(n0) for u in rotations[v]})
    rotations = [list(r) for r in rotations]
    next_id = n0
    for u, v in edges:
        w = next_id
        next_id += 1
        rotations.append([u, v])
        rotations[u][rotations[u].index(v)] = w
        rotations[v][rotations[v].index(u)] = w
    if keep_fraction < 1.0:
        _delete_sparsify(rng, rotations, keep_fraction)
    return PlanarEmbedding(rotations)


def random_tree_embedding(rng: random.Random, n: int) -> PlanarEmbedding:
    rotations: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        u = rng.randrange(v)
        rotations[u].insert(rng.randrange(len(rotations[u]) + 1), v)
        rotations[v].append(u)
    return PlanarEmbedding(rotations)


# ---------------------------------------------------------------------------
# Independent full-enumeration oracle
# ---------------------------------------------------------------------------


def oracle_extends(emb: PlanarEmbedding, coloring: PartialTotalColoring) -> bool:
    """Plain depth-first enumeration over items in id order, no ordering
    heuristics and no propagation; kept deliberately separate from the
    production solver."""
    k = coloring.k
    vc = dict(coloring.vertex_colors)
    ec = dict(coloring.edge_colors)
    items: list = [v for v in emb.vertices if v not in vc]
    items += [e for e in sorted(emb.edges) if e not in ec]

    def conflicts(item, color) -> bool:
        if isinstance(item, int):
            for u in emb.neighbors(item):
                if vc.get(u) == color or ec.get(canonical_edge(item, u)) == color:
                    return True
            return False
        u, v = item
        if vc.get(u) == color or vc.get(v) == color:
            return True
        for endpoint in (u, v):
            for w in emb.neighbors(endpoint):
                e = canonical_edge(endpoint, w)
                if e != item and ec.get(e) == color:
                    return True
        return False

    def walk(i: int) -> bool:
        if i == len(items):
            return True
        item = items[i]
        for color in range(1, k + 1):
            if conflicts(item, color):
                continue
            if isinstance(item, int):
                vc[item] = color
            else:
                ec[item] = color
            if walk(i + 1):
                return True
            if isinstance(item, int):
                del vc[item]
            else:
                del ec[item]
        return False

    return walk(0)


# ---------------------------------------------------------------------------
# Random precolorings and planted subgraphs
# ---------------------------------------------------------------------------


def random_subgraph(rng: random.Random, emb: PlanarEmbedding) -> Subgraph:
    edges = [e for e in sorted(emb.edges) if rng.random() < 0.3]
    verts = {x for e in edges for x in e}
    verts |= {v for v in emb.vertices if rng.random() < 0.2}
    return Subgraph.of(verts, edges)


def random_proper_precoloring(
    rng: random.Random, emb: PlanarEmbedding, H: Subgraph, k: int
) -> PartialTotalColoring | None:
    """Greedy random coloring of H's items, proper with respect to the host
    graph; None when the random order jams (caller resamples)."""
    vc: dict[int, int] = {}
    ec: dict[tuple[int, int], int] = {}
    items: list = sorted(H.vertices) + sorted(H.edges)
    rng.shuffle(items)
    for item in items:
        current = PartialTotalColoring(k, vc, ec)
        banned = seen_colors(emb, current, item)
        options = [c for c in range(1, k + 1) if c not in banned]
        if not options:
            return None
        choice = rng.choice(options)
        if isinstance(item, int):
            vc[item] = choice
        else:
            ec[item] = choice
    return PartialTotalColoring(k, vc, ec)


def plant_matching(rng: random.Random, emb: PlanarEmbedding, want_isolates: bool = True) -> Subgraph:
    edges = sorted(emb.edges)
    rng.shuffle(edges)
    used: set[int] = set()
    chosen = []
    for u, v in edges:
        if u not in used and v not in used and rng.random() < 0.5:
            chosen.append((u, v))
            used |= {u, v}
    verts = set(used)
    if want_isolates:
        for v in emb.vertices:
            if v not in used and rng.random() < 0.1:
                verts.add(v)
    return Subgraph.of(verts, chosen)


def plant_bounded_degree(rng: random.Random, emb: PlanarEmbedding, d: int) -> Subgraph:
    deg: dict[int, int] = defaultdict(int)
    edges = sorted(emb.edges)
    rng.shuffle(edges)
    chosen = []
    for u, v in edges:
        if deg[u] < d and deg[v] < d and rng.random() < 0.4:
            chosen.append((u, v))
            deg[u] += 1
            deg[v] += 1
    verts = {x for e in chosen for x in e}
    for v in emb.vertices:
        if v not in verts and rng.random() < 0.1:
            verts.add(v)
    return Subgraph.of(verts, chosen)


def plant_clique_set(rng: random.Random, emb: PlanarEmbedding) -> Subgraph:
    """Vertex-disjoint cliques (sizes 1..3) at pairwise distance >= 3."""
    candidates: list[tuple[frozenset[int], list[tuple[int, int]]]] = []
    for v in emb.vertices:
        candidates.append((frozenset([v]), []))
    for u, v in sorted(emb.edges):
        candidates.append((frozenset([u, v]), [(u, v)]))
    edge_set = emb.edges
    for u, v in sorted(emb.edges):
        for w in emb.neighbors(u):
            if w > v and canonical_edge(v, w) in edge_set:
                candidates.append((frozenset([u, v, w]), [(u, v), (u, w), (v, w)]))
    rng.shuffle(candidates)
    chosen_verts: set[int] = set()
    verts: set[int] = set()
    edges: list[tuple[int, int]] = []
    for comp, comp_edges in candidates:
        if not chosen_verts:
            ok = True
        else:
            ok = True
            for s in comp:
                dist = emb.distances_from(s)
                if any(dist[x] < 3 for x in chosen_verts):
                    ok = False
                    break
        if ok and rng.random() < 0.8:
            chosen_verts |= comp
            verts |= comp
            edges.extend(comp_edges)
    return Subgraph.of(verts, edges)
