"""Exhaustive small-configuration generator.

Builds every realizable one-high configuration over clique sizes 1..4 with
boundary degrees up to 5: a clique, external edges routed to a single high
hub, and degree padding so the high vertex reaches the instance maximum
degree. Instances are kept only when the local degree-sum side condition
holds on edges touching the configuration; variants that break it (externals
to fresh low vertices) and rich variants (two hubs, or a hub next to an
in-clique high) are generated for negative and score coverage.

A precolored singleton of degree 1 is excluded: its uncolored pendant edge
sees at most Delta + 2 colors and is always directly colorable, so it never
survives as a hard case and has no catalogued shape.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from totalext import InstanceParams, PlanarEmbedding, Subgraph

DELTA = 12
T_OFFSET = 2  # high threshold ceil((12 + 2) / 2) = 7

HIGH = "h"


@dataclass(frozen=True)
class CatalogueInstance:
    kind: str  # "poor" | "rich" | "filtered"
    clique_size: int
    signature: tuple
    embedding: PlanarEmbedding
    subgraph: Subgraph
    params: InstanceParams


class _Builder:
    def __init__(self):
        self.edges: list[tuple[int, int]] = []
        self.next_id = 0

    def vertex(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v) if u < v else (v, u))

    def pad_to(self, v: int, degree: int) -> None:
        """Attach two-edge legs from v to a fresh high anchor until v has the
        requested degree. Inner leg vertices have degree 2 and both their
        edges end at a vertex of degree >= 7, so every leg edge passes the
        local degree-sum condition even when it lies inside the
        configuration's neighborhood."""
        have = sum(1 for e in self.edges if v in e)
        legs = degree - have
        if legs <= 0:
            return
        anchor = self.vertex()
        for _ in range(legs):
            w = self.vertex()
            self.edge(v, w)
            self.edge(w, anchor)
        # raise the anchor itself to maximum degree with plain pendants; the
        # anchor is not adjacent to the clique, so those edges lie outside
        # every configuration's neighborhood and are never in scope
        for _ in range(DELTA - legs):
            self.edge(anchor, self.vertex())

    def embed(self) -> PlanarEmbedding | None:
        G = nx.Graph()
        G.add_nodes_from(range(self.next_id))
        G.add_edges_from(self.edges)
        ok, planar = nx.check_planarity(G)
        if not ok:
            return None
        rotations = [list(planar.neighbors_cw_order(v)) for v in range(self.next_id)]
        return PlanarEmbedding(rotations)


def _multisets(values, size):
    key = lambda tup: tuple((999, "") if x == HIGH else (x, "") for x in tup)
    return sorted(set(itertools.combinations_with_replacement(sorted(values, key=str), size)), key=key)


def _signature_sorted(sig) -> tuple:
    lows = sorted(x for x in sig if x != HIGH)
    return tuple(lows) + tuple(x for x in sig if x == HIGH)


def _build(signature: tuple, hub_split: bool) -> CatalogueInstance | None:
    """Realize one configuration; None when no simple planar one-high
    realization exists."""
    k = len(signature)
    b = _Builder()
    clique = [b.vertex() for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            b.edge(clique[i], clique[j])

    high_members = [clique[i] for i, d in enumerate(signature) if d == HIGH]
    slots: list[int] = []  # clique vertices wanting one external edge
    for i, d in enumerate(signature):
        if d == HIGH:
            continue
        extra = d - (k - 1)
        if extra < 0 or extra > 1:
            return None
        if extra == 1:
            slots.append(clique[i])

    rich = hub_split or (bool(high_members) and bool(slots))
    if not slots and not high_members:
        return None  # nothing connects the clique to the rest
    if hub_split and len(slots) < 2:
        return None

    hubs: list[int] = []
    if slots:
        if hub_split:
            hubs = [b.vertex(), b.vertex()]
            for i, v in enumerate(slots):
                b.edge(v, hubs[i % 2])
        else:
            hubs = [b.vertex()]
            for v in slots:
                b.edge(v, hubs[0])
    for z in hubs + high_members:
        b.pad_to(z, DELTA)

    emb = b.embed()
    if emb is None:
        return None
    H = Subgraph.of(
        set(clique), {(clique[i], clique[j]) for i in range(k) for j in range(i + 1, k)}
    )
    params = InstanceParams(delta=DELTA, t=T_OFFSET)
    return CatalogueInstance(
        kind="rich" if rich else "poor",
        clique_size=k,
        signature=_signature_sorted(signature),
        embedding=emb,
        subgraph=H,
        params=params,
    )


def _build_filtered(signature: tuple) -> CatalogueInstance | None:
    """Variant whose externals go to fresh low pendants; such instances fail
    the local degree-sum condition and must be excluded from catalogue runs."""
    k = len(signature)
    if HIGH in signature:
        return None
    b = _Builder()
    clique = [b.vertex() for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            b.edge(clique[i], clique[j])
    attached = False
    for i, d in enumerate(signature):
        extra = d - (k - 1)
        if extra < 0:
            return None
        for _ in range(extra):
            b.edge(clique[i], b.vertex())
            attached = True
    if not attached:
        return None
    # remote maximum-degree anchor keeps the threshold identical and makes
    # the instance connected
    anchor = b.vertex()
    b.edge(clique[0], anchor)
    b.pad_to(anchor, DELTA)
    emb = b.embed()
    if emb is None:
        return None
    H = Subgraph.of(
        set(clique), {(clique[i], clique[j]) for i in range(k) for j in range(i + 1, k)}
    )
    return CatalogueInstance(
        kind="filtered",
        clique_size=k,
        signature=_signature_sorted(signature),
        embedding=emb,
        subgraph=H,
        params=InstanceParams(delta=DELTA, t=T_OFFSET),
    )


def local_degree_sum_ok(instance: CatalogueInstance, scope: frozenset[int]) -> bool:
    """The degree-sum side condition restricted to edges touching the
    configuration. On an instance satisfying it, uncolored edges at the
    configuration have a high endpoint and their low unprecolored endpoint
    degrees sum correctly."""
    emb, H, params = instance.embedding, instance.subgraph, instance.params
    for u, v in sorted(emb.edges - H.edges):
        if u not in scope and v not in scope:
            continue
        if not (params.is_high(emb.degree(u)) or params.is_high(emb.degree(v))):
            return False
        for a, b in ((u, v), (v, u)):
            if a not in H.vertices and 2 * emb.degree(a) <= params.delta + params.t:
                if emb.degree(a) + emb.degree(b) < params.delta + params.t:
                    return False
    return True


def generate_instances() -> list[CatalogueInstance]:
    """Every buildable instance over clique sizes 1..4, boundary degrees up
    to 5, one high vertex (plus rich and filtered variants)."""
    out: list[CatalogueInstance] = []
    for k in range(1, 5):
        degrees = list(range(max(1, k - 1), 6)) + [HIGH]
        for signature in _multisets(degrees, k):
            if signature.count(HIGH) > 1:
                continue
            if k == 1 and signature == (1,):
                continue  # degree-1 singleton: directly extendable, see module docstring
            built = _build(signature, hub_split=False)
            if built is not None:
                out.append(built)
            split = _build(signature, hub_split=True)
            if split is not None:
                out.append(split)
            filtered = _build_filtered(signature)
            if filtered is not None:
                out.append(filtered)
    return out
