"""Exact-rational charge accounting and the three built-in discharging schemes.

Scheme R redistributes charge around precolored distance-3 clique sets,
scheme S around bounded-degree precolored subgraphs, scheme T around
precolored matchings (components of at most one edge). All charges are
``fractions.Fraction``; every rule application is a pure transfer recorded in
a log, so the ledger total is invariant and a replay of the log against the
initial ledger reproduces the final ledger bit-exactly.

Initial charges: schemes R and T give deg(v) - 4 to vertices and len(f) - 4
to faces (total -8 on any connected planar embedding); scheme S gives
3 deg(v) - 6 and -6 (total -12).

The audit evaluates the structural predicates that the underlying
counterexample analysis relies on, as three-state results (holds, fails,
not-applicable). On arbitrary instances failures are expected and legal; the
audit is a diagnostic, never an assumption.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

from .embedding import (
    Edge,
    Face,
    PlanarEmbedding,
    Subgraph,
    analyze_precolored_shape,
    canonical_edge,
)
from .errors import (
    ConfigurationOverlapError,
    InternalInvariantError,
    SchemeMismatchError,
)

Scheme = Literal["R", "S", "T"]

# Charge account references: ("vertex", v), ("face", id), ("config", idx), ("pot",)
Account = tuple


@dataclass(frozen=True)
class InstanceParams:
    """Palette and threshold parameters.

    ``t`` is the palette offset (k = Delta + t); a vertex is high when its
    degree reaches ceil((Delta + t) / 2). ``d`` bounds the precolored
    subgraph degree and is used by scheme S only.
    """

    delta: int
    t: int
    d: int | None = None

    @property
    def high_threshold(self) -> int:
        return -((self.delta + self.t) // -2)

    def is_high(self, degree: int) -> bool:
        return degree >= self.high_threshold


@dataclass(frozen=True)
class Transfer:
    rule: str
    source: Account
    sink: Account
    amount: Fraction


@dataclass(frozen=True)
class ChargeLedger:
    scheme: Scheme
    vertex_charges: Mapping[int, Fraction]
    face_charges: Mapping[int, Fraction]
    config_charges: Mapping[int, Fraction]
    pot: Fraction
    transfers: tuple[Transfer, ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertex_charges", dict(self.vertex_charges))
        object.__setattr__(self, "face_charges", dict(self.face_charges))
        object.__setattr__(self, "config_charges", dict(self.config_charges))

    def total(self) -> Fraction:
        return (
            sum(self.vertex_charges.values(), Fraction(0))
            + sum(self.face_charges.values(), Fraction(0))
            + sum(self.config_charges.values(), Fraction(0))
            + self.pot
        )

    def charge_of(self, account: Account) -> Fraction:
        kind = account[0]
        if kind == "vertex":
            return self.vertex_charges[account[1]]
        if kind == "face":
            return self.face_charges[account[1]]
        if kind == "config":
            return self.config_charges[account[1]]
        if kind == "pot":
            return self.pot
        raise KeyError(account)

    def negatives(self) -> list[tuple[Account, Fraction]]:
        out: list[tuple[Account, Fraction]] = []
        for v, c in sorted(self.vertex_charges.items()):
            if c < 0:
                out.append((("vertex", v), c))
        for f, c in sorted(self.face_charges.items()):
            if c < 0:
                out.append((("face", f), c))
        for i, c in sorted(self.config_charges.items()):
            if c < 0:
                out.append((("config", i), c))
        if self.pot < 0:
            out.append((("pot",), self.pot))
        return out


def initial_charges(emb: PlanarEmbedding, scheme: Scheme, n_configs: int = 0) -> ChargeLedger:
    """Fresh ledger: R/T give deg-4 and len-4, S gives 3deg-6 and -6."""
    if scheme not in ("R", "S", "T"):
        raise SchemeMismatchError(f"unknown scheme {scheme!r}")
    if scheme in ("R", "T"):
        vc = {v: Fraction(emb.degree(v) - 4) for v in emb.vertices}
        fc = {f.id: Fraction(f.length - 4) for f in emb.faces()}
    else:
        vc = {v: Fraction(3 * emb.degree(v) - 6) for v in emb.vertices}
        fc = {f.id: Fraction(-6) for f in emb.faces()}
    cc = {i: Fraction(0) for i in range(n_configs)}
    return ChargeLedger(scheme, vc, fc, cc, Fraction(0))


def replay_transfers(initial: ChargeLedger, transfers: Sequence[Transfer]) -> ChargeLedger:
    """Apply a transfer log to a ledger; used to check log completeness."""
    vc = dict(initial.vertex_charges)
    fc = dict(initial.face_charges)
    cc = dict(initial.config_charges)
    pot = initial.pot

    def add(account: Account, amount: Fraction) -> None:
        nonlocal pot
        kind = account[0]
        if kind == "vertex":
            vc[account[1]] += amount
        elif kind == "face":
            fc[account[1]] += amount
        elif kind == "config":
            cc[account[1]] += amount
        elif kind == "pot":
            pot += amount
        else:
            raise KeyError(account)

    for tr in transfers:
        add(tr.source, -tr.amount)
        add(tr.sink, tr.amount)
    return ChargeLedger(initial.scheme, vc, fc, cc, pot, tuple(transfers), initial.flags)


# ---------------------------------------------------------------------------
# Configurations of precolored cliques
# ---------------------------------------------------------------------------

HIGH_MARK = "h"

# Canonical catalogue of poor shapes: (clique size, degree signature with the
# high vertex's degree abstracted to "h"; low degrees ascending first).
POOR_SHAPE_CATALOGUE: tuple[tuple[int, tuple], ...] = (
    (1, (HIGH_MARK,)),
    (2, (1, 2)),
    (2, (1, HIGH_MARK)),
    (2, (2, 2)),
    (3, (2, 2, HIGH_MARK)),
    (3, (2, 2, 3)),
    (3, (2, 3, 3)),
    (3, (3, 3, 3)),
    (4, (3, 3, 3, HIGH_MARK)),
    (4, (3, 3, 3, 4)),
    (4, (3, 3, 4, 4)),
    (4, (3, 4, 4, 4)),
)

_SHAPE_ID = {key: i + 1 for i, key in enumerate(POOR_SHAPE_CATALOGUE)}


@dataclass(frozen=True)
class ConfigReport:
    """One precolored clique with its closed neighborhood."""

    index: int
    clique: frozenset[int]
    clique_edges: frozenset[Edge]
    config_vertices: frozenset[int]
    degree_signature: tuple[int, ...]
    marked_signature: tuple
    high_vertices: tuple[int, ...]  # high vertices anywhere in the configuration
    poor: bool
    shape_id: int | None
    score: int
    score_vertex_part: int
    score_face_part: int
    helpful_face_id: int | None = None
    helpful_eligible: bool | None = None


def _marked_signature(
    emb: PlanarEmbedding, clique: frozenset[int], params: InstanceParams
) -> tuple:
    lows = sorted(emb.degree(v) for v in clique if not params.is_high(emb.degree(v)))
    highs = [HIGH_MARK] * sum(1 for v in clique if params.is_high(emb.degree(v)))
    return tuple(lows) + tuple(highs)


def _match_catalogue(
    emb: PlanarEmbedding, clique: frozenset[int], params: InstanceParams
) -> int | None:
    """Shape id when the clique matches a catalogued poor shape, else None.

    Beyond the degree signature, the structural side conditions are checked:
    with the high vertex inside the clique the low members have no outside
    neighbors; with every clique member low, the members of degree equal to
    the clique size send their single outside edge to one common high vertex.
    """
    k = len(clique)
    sig = _marked_signature(emb, clique, params)
    key = (k, sig)
    if key not in _SHAPE_ID:
        return None
    if HIGH_MARK in sig:
        for v in clique:
            if not params.is_high(emb.degree(v)) and emb.degree(v) != k - 1:
                return None
        return _SHAPE_ID[key]
    hubs: set[int] = set()
    for v in clique:
        deg = emb.degree(v)
        if deg == k - 1:
            continue
        if deg != k:
            return None
        outside = [u for u in emb.neighbors(v) if u not in clique]
        if len(outside) != 1:
            return None
        hubs.add(outside[0])
    if len(hubs) != 1:
        return None
    hub = next(iter(hubs))
    if not params.is_high(emb.degree(hub)):
        return None
    return _SHAPE_ID[key]


def _score(emb: PlanarEmbedding, clique: frozenset[int], clique_edges: frozenset[Edge]) -> tuple[int, int, int]:
    vertex_part = sum(4 - emb.degree(v) for v in clique if 1 <= emb.degree(v) <= 3)
    face_part = sum(
        1
        for f in emb.faces()
        if f.length == 3 and f.edge_set() & clique_edges
    )
    return vertex_part + face_part, vertex_part, face_part


def configurations(
    emb: PlanarEmbedding, H: Subgraph, params: InstanceParams
) -> list[ConfigReport]:
    """One report per precolored clique.

    Requires H to be a clique set with pairwise component distance >= 3 in
    the host graph; below that threshold closed neighborhoods may overlap and
    the instance is rejected.
    """
    shape = analyze_precolored_shape(emb, H, 3)
    if not shape.is_clique_set:
        raise SchemeMismatchError("precolored subgraph is not a set of cliques")
    if not shape.separated:
        raise ConfigurationOverlapError(
            f"clique separation {shape.separation} < 3; configurations may overlap"
        )
    reports: list[ConfigReport] = []
    for idx, comp in enumerate(shape.components):
        clique_edges = frozenset(e for e in H.edges if e[0] in comp)
        config_vertices = set(comp)
        for v in comp:
            config_vertices.update(emb.neighbors(v))
        highs = tuple(
            sorted(v for v in config_vertices if params.is_high(emb.degree(v)))
        )
        poor = len(highs) <= 1
        score, vpart, fpart = _score(emb, comp, clique_edges)
        reports.append(
            ConfigReport(
                index=idx,
                clique=comp,
                clique_edges=clique_edges,
                config_vertices=frozenset(config_vertices),
                degree_signature=tuple(sorted(emb.degree(v) for v in comp)),
                marked_signature=_marked_signature(emb, comp, params),
                high_vertices=highs,
                poor=poor,
                shape_id=_match_catalogue(emb, comp, params) if poor else None,
                score=score,
                score_vertex_part=vpart,
                score_face_part=fpart,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# Helpful faces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HelpfulFaceReport:
    face_id: int
    length: int
    x2: int  # poor size-2 cliques this face helps
    x3: int  # poor size->=3 cliques this face helps
    length_predicate_holds: bool

    @property
    def required_length(self) -> int:
        if self.x2 + self.x3 == 1:
            return 5 if self.x2 == 1 else 6
        return 4 * (self.x2 + self.x3)


@dataclass(frozen=True)
class HelpfulFaceAnalysis:
    configs: tuple[ConfigReport, ...]
    face_reports: tuple[HelpfulFaceReport, ...]
    flags: tuple[str, ...]


def _components_without(emb: PlanarEmbedding, removed: int) -> list[frozenset[int]]:
    seen: set[int] = {removed}
    comps: list[frozenset[int]] = []
    for s in emb.vertices:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in emb.neighbors(u):
                if w != removed and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def _helpful_face_for(
    emb: PlanarEmbedding, report: ConfigReport
) -> tuple[int | None, bool, list[str]]:
    """Locate the unique face that wraps a poor pendant clique.

    The clique (minus its high vertex when that vertex belongs to it) must
    hang off the high cut vertex as a full component of the rest of the
    graph. Candidate faces contain a precolored clique edge; the helpful one
    also carries boundary darts outside the pendant cluster, which is what
    distinguishes it from faces buried inside the cluster.
    """
    flags: list[str] = []
    if len(report.high_vertices) != 1:
        return None, False, [f"config {report.index}: no unique high vertex"]
    cut = report.high_vertices[0]
    cluster = frozenset(report.clique - {cut})
    if not cluster:
        return None, False, [f"config {report.index}: clique is only its high vertex"]
    if cluster not in set(_components_without(emb, cut)):
        return None, False, [
            f"config {report.index}: clique minus the high vertex is not a "
            f"component of the graph minus vertex {cut}"
        ]

    candidates = [
        f for f in emb.faces() if f.edge_set() & report.clique_edges
    ]
    outward = [
        f
        for f in candidates
        if any(u not in cluster and v not in cluster for u, v in f.walk)
    ]
    if len(outward) == 1:
        return outward[0].id, True, flags
    pool = outward or candidates
    if not pool:
        return None, False, [f"config {report.index}: no face carries a precolored edge"]
    best = max(pool, key=lambda f: (f.length, -f.id))
    if len(pool) > 1:
        flags.append(
            f"config {report.index}: helpful face ambiguous among "
            f"{sorted(f.id for f in pool)}, picked {best.id}"
        )
    return best.id, True, flags


def helpful_faces(emb: PlanarEmbedding, configs: Sequence[ConfigReport]) -> HelpfulFaceAnalysis:
    """Assign helpful faces to eligible poor configurations and tally per face."""
    flags: list[str] = []
    updated: list[ConfigReport] = []
    per_face: dict[int, list[ConfigReport]] = defaultdict(list)
    for report in configs:
        if not report.poor or len(report.clique) < 2:
            updated.append(report)
            continue
        face_id, eligible, face_flags = _helpful_face_for(emb, report)
        flags.extend(face_flags)
        new = replace(report, helpful_face_id=face_id, helpful_eligible=eligible)
        updated.append(new)
        if face_id is not None and eligible:
            per_face[face_id].append(new)

    face_by_id = {f.id: f for f in emb.faces()}
    face_reports: list[HelpfulFaceReport] = []
    for face_id in sorted(per_face):
        helped = per_face[face_id]
        x2 = sum(1 for r in helped if len(r.clique) == 2)
        x3 = sum(1 for r in helped if len(r.clique) >= 3)
        length = face_by_id[face_id].length
        if x2 + x3 == 1:
            needed = 5 if x2 == 1 else 6
        else:
            needed = 4 * (x2 + x3)
        face_reports.append(
            HelpfulFaceReport(
                face_id=face_id,
                length=length,
                x2=x2,
                x3=x3,
                length_predicate_holds=length >= needed,
            )
        )
    return HelpfulFaceAnalysis(tuple(updated), tuple(face_reports), tuple(flags))


# ---------------------------------------------------------------------------
# Needy faces (scheme T)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NeedyFace:
    face_id: int
    type: int  # 1 or 2


@dataclass(frozen=True)
class NeedyVertexEntry:
    vertex: int
    faces: tuple[NeedyFace, ...]
    eta: int
    bound_holds: bool  # eta <= deg(v)/2


@dataclass(frozen=True)
class NeedyReport:
    entries: tuple[NeedyVertexEntry, ...]

    def eta(self, v: int) -> int:
        for e in self.entries:
            if e.vertex == v:
                return e.eta
        raise KeyError(v)


def _leaf_excursions(emb: PlanarEmbedding) -> dict[int, tuple[int, int, int, int]]:
    """Per leaf u: (face id, neighbor w, and the two second neighbors on the
    face, read off the walk on both sides of the u-excursion)."""
    out: dict[int, tuple[int, int, int, int]] = {}
    for v in emb.vertices:
        if emb.degree(v) != 1:
            continue
        w = emb.neighbors(v)[0]
        face = emb.face_of_dart((w, v))
        walk = face.walk
        i = walk.index((w, v))
        prev_dart = walk[i - 1]
        succ_dart = walk[(i + 2) % len(walk)]  # dart after (v, w)
        out[v] = (face.id, w, prev_dart[0], succ_dart[1])
    return out


def needy_faces(emb: PlanarEmbedding, H: Subgraph, params: InstanceParams) -> NeedyReport:
    """Typed needy faces and their count for every high vertex outside H.

    Type 1: a triangular face whose only high vertex is v. Type 2: a face
    carrying at least two low-leaves whose excursions are flanked by v (so v
    is the account that pays both their half-charges under scheme T).
    """
    H.validate_in(emb)
    if H.max_degree() > 1:
        raise SchemeMismatchError("needy-face analysis requires a matching (degree <= 1)")
    leaf_info = _leaf_excursions(emb)
    low_leaves_by_face: dict[int, list[tuple[int, int, int, int]]] = defaultdict(list)
    for u, (face_id, w, p, q) in sorted(leaf_info.items()):
        if not params.is_high(emb.degree(w)):
            low_leaves_by_face[face_id].append((u, w, p, q))

    entries: list[NeedyVertexEntry] = []
    for v in emb.vertices:
        if v in H.vertices or not params.is_high(emb.degree(v)):
            continue
        needy: list[NeedyFace] = []
        for face in emb.faces():
            verts = face.vertex_set()
            if v not in verts:
                continue
            if face.length == 3:
                highs = [x for x in verts if params.is_high(emb.degree(x))]
                if highs == [v]:
                    needy.append(NeedyFace(face.id, 1))
                continue
            flanked = [
                u
                for (u, w, p, q) in low_leaves_by_face.get(face.id, ())
                if v in (p, q)
            ]
            if len(flanked) >= 2:
                needy.append(NeedyFace(face.id, 2))
        eta = len(needy)
        entries.append(
            NeedyVertexEntry(
                vertex=v,
                faces=tuple(needy),
                eta=eta,
                bound_holds=2 * eta <= emb.degree(v),
            )
        )
    return NeedyReport(tuple(entries))


# ---------------------------------------------------------------------------
# Face buckets by count of degree->=3 vertices (scheme S)
# ---------------------------------------------------------------------------


def tilde_face_counts(emb: PlanarEmbedding) -> dict[int, tuple[int, ...]]:
    """Map i to the faces with exactly i distinct boundary vertices of degree >= 3."""
    buckets: dict[int, list[int]] = defaultdict(list)
    for f in emb.faces():
        i = sum(1 for v in f.vertex_set() if emb.degree(v) >= 3)
        buckets[i].append(f.id)
    return {i: tuple(sorted(ids)) for i, ids in sorted(buckets.items())}


# ---------------------------------------------------------------------------
# Rule application
# ---------------------------------------------------------------------------


def _require_hypothesis(emb: PlanarEmbedding, H: Subgraph, params: InstanceParams, scheme: Scheme) -> None:
    H.validate_in(emb)
    if scheme == "R":
        shape = analyze_precolored_shape(emb, H, 3)
        if not shape.is_clique_set:
            raise SchemeMismatchError("scheme R requires a set of cliques")
        if not shape.separated:
            raise ConfigurationOverlapError(
                f"scheme R requires distance >= 3 between cliques, got {shape.separation}"
            )
    elif scheme == "S":
        if params.d is None:
            raise SchemeMismatchError("scheme S requires the degree bound d")
        if H.max_degree() > params.d:
            raise SchemeMismatchError(
                f"precolored subgraph degree {H.max_degree()} exceeds d = {params.d}"
            )
    elif scheme == "T":
        if H.max_degree() > 1:
            raise SchemeMismatchError("scheme T requires a matching (degree <= 1)")
    else:
        raise SchemeMismatchError(f"unknown scheme {scheme!r}")


def apply_scheme(
    emb: PlanarEmbedding,
    H: Subgraph,
    params: InstanceParams,
    ledger: ChargeLedger,
) -> ChargeLedger:
    """Apply the ledger's scheme as pure transfers, in rule order."""
    scheme = ledger.scheme
    _require_hypothesis(emb, H, params, scheme)
    transfers: list[Transfer] = []
    flags: list[str] = []
    if scheme == "R":
        _apply_r(emb, H, params, ledger, transfers, flags)
    elif scheme == "S":
        _apply_s(emb, H, params, transfers, flags)
    else:
        _apply_t(emb, H, params, transfers, flags)
    final = replay_transfers(ledger, transfers)
    return replace(final, flags=ledger.flags + tuple(flags))


def _apply_r(
    emb: PlanarEmbedding,
    H: Subgraph,
    params: InstanceParams,
    ledger: ChargeLedger,
    transfers: list[Transfer],
    flags: list[str],
) -> None:
    configs = configurations(emb, H, params)
    if len(configs) != len(ledger.config_charges):
        raise SchemeMismatchError(
            f"ledger holds {len(ledger.config_charges)} configuration accounts, "
            f"instance has {len(configs)}"
        )
    analysis = helpful_faces(emb, configs)
    configs = list(analysis.configs)
    flags.extend(analysis.flags)
    clique_of_vertex = {v: r.index for r in configs for v in r.clique}
    clique_of_edge = {e: r.index for r in configs for e in r.clique_edges}

    # R1: rich configurations draw half their score from each of their highs.
    for r in configs:
        if not r.poor:
            for h in r.high_vertices:
                transfers.append(
                    Transfer("R1", ("vertex", h), ("config", r.index), Fraction(r.score, 2))
                )
    # R2: poor configurations of size >= 2 draw from the helpful face and the
    # high vertex; 1 and score-1 at size two, 2 and score-2 at size >= 3.
    for r in configs:
        if not r.poor or len(r.clique) < 2:
            continue
        face_share = Fraction(1) if len(r.clique) == 2 else Fraction(2)
        if r.helpful_face_id is not None and r.helpful_eligible:
            transfers.append(
                Transfer("R2", ("face", r.helpful_face_id), ("config", r.index), face_share)
            )
        else:
            flags.append(f"R2 skipped face share for config {r.index}: no helpful face")
        if len(r.high_vertices) == 1:
            transfers.append(
                Transfer(
                    "R2",
                    ("vertex", r.high_vertices[0]),
                    ("config", r.index),
                    Fraction(r.score) - face_share,
                )
            )
        else:
            flags.append(f"R2 skipped vertex share for config {r.index}: no high vertex")
    # R3: low-degree precolored vertices are refilled by their configuration.
    for v in sorted(H.vertices):
        if 1 <= emb.degree(v) <= 3:
            transfers.append(
                Transfer(
                    "R3",
                    ("config", clique_of_vertex[v]),
                    ("vertex", v),
                    Fraction(4 - emb.degree(v)),
                )
            )
    # R4 and R5: triangular faces.
    for f in emb.faces():
        if f.length != 3:
            continue
        owners = {clique_of_edge[e] for e in f.edge_set() if e in clique_of_edge}
        if owners:
            if len(owners) > 1:
                raise InternalInvariantError(
                    "a 3-face carries precolored edges of two cliques despite distance 3"
                )
            transfers.append(
                Transfer("R4", ("config", owners.pop()), ("face", f.id), Fraction(1))
            )
        else:
            for v in sorted(f.vertex_set()):
                if params.is_high(emb.degree(v)):
                    transfers.append(
                        Transfer("R5", ("vertex", v), ("face", f.id), Fraction(1, 2))
                    )
    # R6: when t <= 2 the pot shifts 3 - t from every maximum-degree vertex to
    # every unprecolored vertex of degree t + 1 (whose deficiency 4 - deg is
    # exactly 3 - t; the same amount on the paying side is the only reading
    # that keeps the pot argument counting one unit per vertex).
    if params.t <= 2:
        amount = Fraction(3 - params.t)
        for v in emb.vertices:
            if emb.degree(v) == params.delta:
                transfers.append(Transfer("R6", ("vertex", v), ("pot",), amount))
        for v in emb.vertices:
            if emb.degree(v) == params.t + 1 and v not in H.vertices:
                transfers.append(Transfer("R6", ("pot",), ("vertex", v), amount))
    # R7: at t = 1 unprecolored 3-vertices draw a third from each neighbor.
    if params.t == 1:
        for v in emb.vertices:
            if emb.degree(v) == 3 and v not in H.vertices:
                for u in emb.neighbors(v):
                    transfers.append(
                        Transfer("R7", ("vertex", u), ("vertex", v), Fraction(1, 3))
                    )


def _apply_s(
    emb: PlanarEmbedding,
    H: Subgraph,
    params: InstanceParams,
    transfers: list[Transfer],
    flags: list[str],
) -> None:
    # S1: every face with m >= 1 boundary vertices of degree >= 3 receives
    # 6/m from each of them.
    for f in emb.faces():
        payers = sorted(v for v in f.vertex_set() if emb.degree(v) >= 3)
        if not payers:
            flags.append(f"S1: face {f.id} has no vertex of degree >= 3")
            continue
        share = Fraction(6, len(payers))
        for v in payers:
            transfers.append(Transfer("S1", ("vertex", v), ("face", f.id), share))
    # S2: every leaf draws 3 from its neighbor.
    for v in emb.vertices:
        if emb.degree(v) == 1:
            transfers.append(
                Transfer("S2", ("vertex", emb.neighbors(v)[0]), ("vertex", v), Fraction(3))
            )


def _apply_t(
    emb: PlanarEmbedding,
    H: Subgraph,
    params: InstanceParams,
    transfers: list[Transfer],
    flags: list[str],
) -> None:
    leaf_info = _leaf_excursions(emb)
    # T1 and T2: leaves draw from their face, their neighbor, and (for
    # low-leaves) the two boundary slots flanking the excursion.
    for u, (face_id, w, p, q) in sorted(leaf_info.items()):
        if params.is_high(emb.degree(w)):
            transfers.append(Transfer("T1", ("face", face_id), ("vertex", u), Fraction(1)))
            transfers.append(Transfer("T1", ("vertex", w), ("vertex", u), Fraction(2)))
        else:
            transfers.append(Transfer("T2", ("face", face_id), ("vertex", u), Fraction(1)))
            transfers.append(Transfer("T2", ("vertex", w), ("vertex", u), Fraction(1)))
            transfers.append(Transfer("T2", ("vertex", p), ("vertex", u), Fraction(1, 2)))
            transfers.append(Transfer("T2", ("vertex", q), ("vertex", u), Fraction(1, 2)))
            if p == q:
                flags.append(
                    f"T2: second neighbors of leaf {u} coincide at {p}, which pays 1"
                )
    # T3: triangular faces draw 1/y from their y incident high vertices.
    for f in emb.faces():
        if f.length != 3:
            continue
        highs = sorted(v for v in f.vertex_set() if params.is_high(emb.degree(v)))
        if not highs:
            flags.append(f"T3: 3-face {f.id} has no incident high vertex")
            continue
        share = Fraction(1, len(highs))
        for v in highs:
            transfers.append(Transfer("T3", ("vertex", v), ("face", f.id), share))
    # T4: the pot moves 2 from near-maximum degrees to degrees in [t, 4].
    if params.t in (3, 4):
        lo, hi = params.t, 4
        glo = params.delta - 4 + params.t
        for v in emb.vertices:
            if glo <= emb.degree(v) <= params.delta:
                transfers.append(Transfer("T4", ("vertex", v), ("pot",), Fraction(2)))
        for v in emb.vertices:
            if lo <= emb.degree(v) <= hi:
                transfers.append(Transfer("T4", ("pot",), ("vertex", v), Fraction(2)))


# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------

PredicateStatus = Literal["holds", "fails", "not-applicable"]


@dataclass(frozen=True)
class PredicateResult:
    name: str
    status: PredicateStatus
    detail: str


@dataclass(frozen=True)
class AuditReport:
    scheme: Scheme
    params: InstanceParams
    initial: ChargeLedger
    final: ChargeLedger
    conserved: bool
    negatives: tuple[tuple[Account, Fraction], ...]
    predicates: tuple[PredicateResult, ...]
    configs: tuple[ConfigReport, ...]
    face_reports: tuple[HelpfulFaceReport, ...]

    def to_json_dict(self) -> dict:
        def acct(a: Account) -> str:
            return ":".join(str(x) for x in a)

        return {
            "scheme": self.scheme,
            "delta": self.params.delta,
            "t": self.params.t,
            "d": self.params.d,
            "high_threshold": self.params.high_threshold,
            "initial_total": str(self.initial.total()),
            "final_total": str(self.final.total()),
            "conserved": self.conserved,
            "transfers": [
                {
                    "rule": tr.rule,
                    "source": acct(tr.source),
                    "sink": acct(tr.sink),
                    "amount": str(tr.amount),
                }
                for tr in self.final.transfers
            ],
            "final_charges": {
                "vertices": {str(v): str(c) for v, c in sorted(self.final.vertex_charges.items())},
                "faces": {str(f): str(c) for f, c in sorted(self.final.face_charges.items())},
                "configs": {str(i): str(c) for i, c in sorted(self.final.config_charges.items())},
                "pot": str(self.final.pot),
            },
            "negatives": [[acct(a), str(c)] for a, c in self.negatives],
            "predicates": [
                {"name": p.name, "status": p.status, "detail": p.detail}
                for p in self.predicates
            ],
            "flags": list(self.final.flags),
        }

    def to_text(self) -> str:
        lines = [
            f"scheme {self.scheme}  Delta={self.params.delta}  t={self.params.t}"
            + (f"  d={self.params.d}" if self.params.d is not None else "")
            + f"  high>= {self.params.high_threshold}",
            f"initial total: {self.initial.total()}   final total: {self.final.total()}"
            f"   conserved: {'yes' if self.conserved else 'NO'}",
            f"transfers: {len(self.final.transfers)}",
        ]
        if self.negatives:
            lines.append("negative final charges:")
            for a, c in self.negatives:
                lines.append(f"  {':'.join(str(x) for x in a)} = {c}")
        else:
            lines.append("negative final charges: none")
        lines.append("predicates:")
        for p in self.predicates:
            lines.append(f"  [{p.status:>14}] {p.name}: {p.detail}")
        for flag in self.final.flags:
            lines.append(f"  note: {flag}")
        return "\n".join(lines)


def _predicate_degree_sum(
    emb: PlanarEmbedding, H: Subgraph, params: InstanceParams
) -> PredicateResult:
    """On every uncolored edge with an unprecolored endpoint of degree at most
    (Delta+t)/2, the endpoint degrees must sum to at least Delta + t; every
    uncolored edge must also carry a high endpoint."""
    bad: list[str] = []
    checked = 0
    for u, v in sorted(emb.edges - H.edges):
        for a, b in ((u, v), (v, u)):
            if a not in H.vertices and 2 * emb.degree(a) <= params.delta + params.t:
                checked += 1
                if emb.degree(a) + emb.degree(b) < params.delta + params.t:
                    bad.append(f"edge ({a},{b}) sums to {emb.degree(a) + emb.degree(b)}")
        if not (params.is_high(emb.degree(u)) or params.is_high(emb.degree(v))):
            checked += 1
            bad.append(f"edge ({u},{v}) has no high endpoint")
    if checked == 0:
        return PredicateResult("degree-sum", "not-applicable", "no qualifying uncolored edges")
    if bad:
        return PredicateResult("degree-sum", "fails", "; ".join(bad[:5]))
    return PredicateResult("degree-sum", "holds", f"{checked} checks passed")


def _predicate_scores(configs: Sequence[ConfigReport]) -> PredicateResult:
    if not configs:
        return PredicateResult("score-bounds", "not-applicable", "no configurations")
    bad: list[str] = []
    for r in configs:
        if r.score > 6:
            bad.append(f"config {r.index} score {r.score} > 6")
        if r.poor:
            cap = 0 if len(r.clique) == 1 else (5 if len(r.clique) == 2 else 6)
            if r.score > cap:
                bad.append(f"poor config {r.index} score {r.score} > {cap}")
    if bad:
        return PredicateResult("score-bounds", "fails", "; ".join(bad[:5]))
    return PredicateResult("score-bounds", "holds", f"{len(configs)} configurations within bounds")


def _predicate_helpful_lengths(reports: Sequence[HelpfulFaceReport]) -> PredicateResult:
    if not reports:
        return PredicateResult("helpful-face-length", "not-applicable", "no helpful faces")
    bad = [
        f"face {r.face_id} length {r.length} < {r.required_length}"
        for r in reports
        if not r.length_predicate_holds
    ]
    if bad:
        return PredicateResult("helpful-face-length", "fails", "; ".join(bad[:5]))
    return PredicateResult("helpful-face-length", "holds", f"{len(reports)} faces long enough")


def _predicate_pot_r(emb: PlanarEmbedding, H: Subgraph, params: InstanceParams) -> PredicateResult:
    if params.t > 2:
        return PredicateResult("pot-counting", "not-applicable", "pot rule inactive for this t")
    receivers = sum(
        1 for v in emb.vertices if emb.degree(v) == params.t + 1 and v not in H.vertices
    )
    givers = sum(1 for v in emb.vertices if emb.degree(v) == params.delta)
    status = "holds" if receivers < givers else "fails"
    return PredicateResult(
        "pot-counting", status, f"{receivers} receivers vs {givers} maximum-degree givers"
    )


def _predicate_pot_t(emb: PlanarEmbedding, params: InstanceParams) -> PredicateResult:
    if params.t not in (3, 4):
        return PredicateResult("pot-counting", "not-applicable", "pot rule inactive for this t")
    takers = sum(1 for v in emb.vertices if params.t <= emb.degree(v) <= 4)
    givers = sum(
        1
        for v in emb.vertices
        if params.delta - 4 + params.t <= emb.degree(v) <= params.delta
    )
    status = "holds" if takers < givers else "fails"
    return PredicateResult("pot-counting", status, f"{takers} takers vs {givers} givers")


def _predicate_needy(report: NeedyReport) -> PredicateResult:
    if not report.entries:
        return PredicateResult("needy-bound", "not-applicable", "no unprecolored high vertices")
    bad = [f"vertex {e.vertex} has eta {e.eta}" for e in report.entries if not e.bound_holds]
    if bad:
        return PredicateResult("needy-bound", "fails", "; ".join(bad[:5]))
    return PredicateResult("needy-bound", "holds", f"{len(report.entries)} vertices within eta bound")


def _predicate_leaf_faces(emb: PlanarEmbedding) -> PredicateResult:
    counts: dict[int, int] = defaultdict(int)
    for v in emb.vertices:
        if emb.degree(v) == 1:
            face = emb.face_of_dart((emb.neighbors(v)[0], v))
            counts[face.id] += 1
    if not counts:
        return PredicateResult("leaf-face-length", "not-applicable", "no leaves")
    faces = {f.id: f for f in emb.faces()}
    bad = [
        f"face {fid} has {x} leaves but length {faces[fid].length}"
        for fid, x in sorted(counts.items())
        if faces[fid].length < x + 4
    ]
    if bad:
        return PredicateResult("leaf-face-length", "fails", "; ".join(bad[:5]))
    return PredicateResult("leaf-face-length", "holds", f"{len(counts)} faces long enough")


def _predicate_mid_degrees(emb: PlanarEmbedding, params: InstanceParams) -> PredicateResult:
    assert params.d is not None
    hi = params.d + 5
    offenders = [v for v in emb.vertices if 2 <= emb.degree(v) <= hi]
    if offenders:
        return PredicateResult(
            "mid-degree-empty",
            "fails",
            f"{len(offenders)} vertices with degree in [2,{hi}], e.g. {offenders[:5]}",
        )
    return PredicateResult("mid-degree-empty", "holds", f"no degrees in [2,{hi}]")


def _predicate_leaf_budget(emb: PlanarEmbedding, params: InstanceParams) -> PredicateResult:
    assert params.d is not None
    bad = []
    for v in emb.vertices:
        leaves = sum(1 for u in emb.neighbors(v) if emb.degree(u) == 1)
        if leaves > params.d:
            bad.append(f"vertex {v} carries {leaves} leaves")
    if bad:
        return PredicateResult("leaf-budget", "fails", "; ".join(bad[:5]))
    return PredicateResult("leaf-budget", "holds", f"every vertex carries <= {params.d} leaves")


def _predicate_sparse_faces(emb: PlanarEmbedding) -> PredicateResult:
    buckets = tilde_face_counts(emb)
    bad = [f"{len(buckets[i])} faces with {i} vertices of degree >= 3" for i in (0, 1, 2) if buckets.get(i)]
    if bad:
        return PredicateResult("sparse-face-empty", "fails", "; ".join(bad))
    return PredicateResult("sparse-face-empty", "holds", "no faces with fewer than 3 vertices of degree >= 3")


def audit(
    emb: PlanarEmbedding, H: Subgraph, params: InstanceParams, scheme: Scheme
) -> AuditReport:
    """Run the scheme end to end and report charges, conservation and predicates."""
    _require_hypothesis(emb, H, params, scheme)
    configs: tuple[ConfigReport, ...] = ()
    face_reports: tuple[HelpfulFaceReport, ...] = ()
    n_configs = 0
    if scheme == "R":
        analysis = helpful_faces(emb, configurations(emb, H, params))
        configs = analysis.configs
        face_reports = analysis.face_reports
        n_configs = len(configs)
    initial = initial_charges(emb, scheme, n_configs)
    final = apply_scheme(emb, H, params, initial)
    conserved = final.total() == initial.total()
    if not conserved:
        raise InternalInvariantError(
            f"charge conservation broken: {initial.total()} -> {final.total()}"
        )

    predicates: list[PredicateResult] = []
    if scheme == "R":
        predicates.append(_predicate_degree_sum(emb, H, params))
        predicates.append(_predicate_scores(configs))
        predicates.append(_predicate_helpful_lengths(face_reports))
        predicates.append(_predicate_pot_r(emb, H, params))
    elif scheme == "S":
        predicates.append(_predicate_mid_degrees(emb, params))
        predicates.append(_predicate_leaf_budget(emb, params))
        predicates.append(_predicate_sparse_faces(emb))
    else:
        predicates.append(_predicate_degree_sum(emb, H, params))
        predicates.append(_predicate_needy(needy_faces(emb, H, params)))
        predicates.append(_predicate_leaf_faces(emb))
        predicates.append(_predicate_pot_t(emb, params))

    return AuditReport(
        scheme=scheme,
        params=params,
        initial=initial,
        final=final,
        conserved=conserved,
        negatives=tuple(final.negatives()),
        predicates=tuple(predicates),
        configs=configs,
        face_reports=face_reports,
    )
