"""Command-line surface.

Exit codes: 0 success / extended / holds; 1 proven-impossible or a failed
check; 2 node budget exhausted; 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .coloring import (
    GreedyFailure,
    check_total_coloring,
    derive_lists,
    greedy_extend,
    parse_precoloring,
    serialize_precoloring,
)
from .constructions import EXAMPLE_IDS, gen_example, verify_sharpness
from .discharging import InstanceParams, audit
from .embedding import (
    PlanarEmbedding,
    Subgraph,
    analyze_precolored_shape,
    classify_degrees,
    parse_embedding,
    serialize_embedding,
)
from .errors import InputError
from .render import embedding_to_dot
from .solver import SolveStatus, extend_exact

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_graph(path: str) -> PlanarEmbedding:
    return parse_embedding(_read(path))


def _load_precoloring(path: str, palette: int | None):
    coloring = parse_precoloring(_read(path))
    if palette is not None:
        coloring = coloring.with_palette(palette)
    return coloring


def _emit(payload: dict, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _write_dot(path: str | None, emb, coloring=None, annotations=None) -> None:
    if path:
        Path(path).write_text(
            embedding_to_dot(emb, coloring, annotations), encoding="utf-8"
        )


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def _cmd_extend(args) -> int:
    emb = _load_graph(args.graph)
    coloring = _load_precoloring(args.precoloring, args.palette)
    mode = "exact" if args.exact else ("greedy" if args.greedy else "auto")

    greedy_result = None
    if mode in ("greedy", "auto"):
        greedy_result = greedy_extend(emb, coloring)
        if not isinstance(greedy_result, GreedyFailure):
            text = "extended (greedy)"
            payload = {
                "verb": "extend",
                "status": "colored",
                "method": "greedy",
                "witness": serialize_precoloring(greedy_result),
            }
            _emit(payload, args.json, text)
            if args.out:
                Path(args.out).write_text(serialize_precoloring(greedy_result), encoding="utf-8")
            return EXIT_OK
        if mode == "greedy":
            _emit(
                {
                    "verb": "extend",
                    "status": "stuck",
                    "method": "greedy",
                    "stuck_item": str(greedy_result.stuck_item),
                },
                args.json,
                f"greedy got stuck at {greedy_result.stuck_item} "
                "(not a proof of impossibility; rerun with --exact)",
            )
            return EXIT_NEGATIVE

    outcome = extend_exact(emb, coloring, args.budget)
    payload = {"verb": "extend", "method": "exact", **outcome.to_report()}
    if outcome.status is SolveStatus.COLORED:
        _emit(payload, args.json, f"extended (exact, {outcome.nodes} nodes)")
        if args.out:
            Path(args.out).write_text(serialize_precoloring(outcome.witness), encoding="utf-8")
        return EXIT_OK
    if outcome.status is SolveStatus.PROVEN_IMPOSSIBLE:
        _emit(payload, args.json, f"proven impossible ({outcome.nodes} nodes)")
        return EXIT_NEGATIVE
    _emit(payload, args.json, f"budget exhausted after {outcome.nodes} nodes")
    return EXIT_BUDGET


def _cmd_check(args) -> int:
    emb = _load_graph(args.graph)
    coloring = _load_precoloring(args.precoloring, args.palette)
    verdict = check_total_coloring(emb, coloring, args.mode)
    payload = {
        "verb": "check",
        "mode": args.mode,
        "ok": verdict.ok,
        "violations": [
            {"first": str(v.first), "second": str(v.second), "color": v.color}
            for v in verdict.violations
        ],
        "uncolored": [str(i) for i in verdict.uncolored],
    }
    if verdict.ok:
        _emit(payload, args.json, f"proper ({args.mode})")
        return EXIT_OK
    lines = [f"improper ({args.mode}):"]
    lines += [f"  {v.first} / {v.second} share color {v.color}" for v in verdict.violations]
    if verdict.uncolored:
        lines.append(f"  uncolored items: {len(verdict.uncolored)}")
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_NEGATIVE


def _cmd_derive_lists(args) -> int:
    emb = _load_graph(args.graph)
    coloring = _load_precoloring(args.precoloring, args.palette)
    lists = derive_lists(emb, coloring)
    payload = {
        "verb": "derive-lists",
        "palette": coloring.k,
        "vertex_lists": {str(v): sorted(s) for v, s in sorted(lists.vertex_lists.items())},
        "edge_lists": {f"{u},{v}": sorted(s) for (u, v), s in sorted(lists.edge_lists.items())},
    }
    lines = [f"palette {coloring.k}"]
    for v, s in sorted(lists.vertex_lists.items()):
        lines.append(f"vertex {v}: {{{', '.join(map(str, sorted(s)))}}}")
    for (u, v), s in sorted(lists.edge_lists.items()):
        lines.append(f"edge {u}-{v}: {{{', '.join(map(str, sorted(s)))}}}")
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_OK


def _cmd_audit(args) -> int:
    emb = _load_graph(args.graph)
    coloring = _load_precoloring(args.precoloring, None)
    H = coloring.subgraph()
    params = InstanceParams(delta=emb.max_degree, t=args.t, d=args.d)
    report = audit(emb, H, params, args.scheme)
    annotations = {v: str(c) for v, c in report.final.vertex_charges.items()}
    _write_dot(args.dot, emb, coloring, annotations)
    _emit({"verb": "audit", **report.to_json_dict()}, args.json, report.to_text())
    return EXIT_OK


def _cmd_classify(args) -> int:
    emb = _load_graph(args.graph)
    bound = (args.d + 5) if args.d is not None else 5
    classes = classify_degrees(emb, bound)
    payload: dict = {
        "verb": "classify",
        "max_degree": classes.max_degree,
        "buckets": {str(k): list(vs) for k, vs in classes.buckets},
        "range_bound": classes.range_bound,
        "q": classes.q,
    }
    lines = [
        f"n={emb.n} m={emb.edge_count} faces={len(emb.faces())} Delta={classes.max_degree}",
        f"q = 3|E| + |V_[2,{bound}]| = {classes.q}",
    ]
    for k, vs in classes.buckets:
        lines.append(f"degree {k}: {list(vs)}")
    if args.precoloring:
        coloring = _load_precoloring(args.precoloring, None)
        H = coloring.subgraph()
        shape = analyze_precolored_shape(emb, H, args.distance)
        payload["shape"] = {
            "kind": shape.kind,
            "components": [sorted(c) for c in shape.components],
            "separation": shape.separation,
            "separated": shape.separated,
        }
        sep = "inf" if shape.separation is None else shape.separation
        lines.append(
            f"precolored subgraph: kind={shape.kind} components={len(shape.components)} "
            f"separation={sep} (distance-{args.distance}: "
            f"{'yes' if shape.separated else 'no'})"
        )
        if args.t is not None and shape.is_clique_set and shape.separated:
            from .discharging import configurations, helpful_faces

            params = InstanceParams(delta=classes.max_degree, t=args.t, d=args.d)
            analysis = helpful_faces(emb, configurations(emb, H, params))
            payload["configurations"] = [
                {
                    "clique": sorted(r.clique),
                    "signature": [str(x) for x in r.marked_signature],
                    "poor": r.poor,
                    "shape_id": r.shape_id,
                    "score": r.score,
                    "helpful_face": r.helpful_face_id,
                }
                for r in analysis.configs
            ]
            for r in analysis.configs:
                sig = ",".join(str(x) for x in r.marked_signature)
                lines.append(
                    f"config {r.index}: clique {sorted(r.clique)} ({sig}) "
                    f"{'poor' if r.poor else 'rich'}"
                    + (f" shape#{r.shape_id}" if r.shape_id else "")
                    + f" score={r.score}"
                    + (
                        f" helpful-face={r.helpful_face_id}"
                        if r.helpful_face_id is not None
                        else ""
                    )
                )
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_OK


def _cmd_gen(args) -> int:
    param = args.k if args.example == "greedy-tree" else args.t
    example = gen_example(args.example, param)
    prefix = Path(args.out)
    graph_path = prefix.with_suffix(".pg")
    color_path = prefix.with_suffix(".ptc")
    graph_path.write_text(serialize_embedding(example.embedding), encoding="utf-8")
    color_path.write_text(serialize_precoloring(example.precoloring), encoding="utf-8")
    _write_dot(args.dot, example.embedding, example.precoloring)
    payload = {
        "verb": "gen",
        "example": example.id,
        "param": example.param,
        "graph_file": str(graph_path),
        "precoloring_file": str(color_path),
        "claimed_fail_palette": example.claimed_fail_palette,
        "claimed_ok_palette": example.claimed_ok_palette,
    }
    _emit(
        payload,
        args.json,
        f"wrote {graph_path} and {color_path} "
        f"(claimed failure palette {example.claimed_fail_palette})",
    )
    return EXIT_OK


def _verify_one(spec: tuple[str, int | None, int | None]):
    example_id, param, budget = spec
    example = gen_example(example_id, param)
    return verify_sharpness(example, budget)


def _cmd_verify_sharpness(args) -> int:
    specs: list[tuple[str, int | None, int | None]] = []
    for item in args.examples:
        if ":" in item:
            name, raw = item.split(":", 1)
            specs.append((name, int(raw), args.budget))
        else:
            specs.append((item, None, args.budget))
    if args.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_verify_one, specs))
    else:
        reports = [_verify_one(s) for s in specs]

    payload = {"verb": "verify-sharpness", "reports": []}
    lines = []
    worst = EXIT_OK
    for report in reports:
        entry = {
            "example": report.example_id,
            "param": report.param,
            "agrees_with_claim": report.agrees_with_claim,
            "outcomes": {str(p): o.to_report() for p, o in report.outcomes},
        }
        payload["reports"].append(entry)
        tag = report.example_id + (f":{report.param}" if report.param is not None else "")
        for palette, outcome in report.outcomes:
            lines.append(f"{tag} palette {palette}: {outcome.status.value} ({outcome.nodes} nodes)")
        if report.agrees_with_claim is None:
            lines.append(f"{tag}: budget exhausted, claim undecided")
            worst = max(worst, EXIT_BUDGET)
        elif report.agrees_with_claim:
            lines.append(f"{tag}: agrees with the claimed sharpness")
        else:
            lines.append(f"{tag}: DISAGREES with the claimed sharpness")
            worst = max(worst, EXIT_NEGATIVE)
    _emit(payload, args.json, "\n".join(lines))
    return worst


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="totalext",
        description="Total-coloring extension on embedded planar graphs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common_io(p, precoloring_required=True):
        p.add_argument("-g", "--graph", required=True, help="graph file (.pg)")
        if precoloring_required:
            p.add_argument("-p", "--precoloring", required=True, help="precoloring file (.ptc)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("extend", help="extend a precoloring to a total coloring")
    common_io(p)
    p.add_argument("-k", "--palette", type=int, help="override the palette size")
    p.add_argument("--budget", type=int, default=None, help="node budget for the exact solver")
    p.add_argument("--greedy", action="store_true", help="greedy only")
    p.add_argument("--exact", action="store_true", help="exact only (skip greedy)")
    p.add_argument("-o", "--out", help="write the witness precoloring here")
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("check", help="check properness of a partial coloring")
    common_io(p)
    p.add_argument("-k", "--palette", type=int)
    p.add_argument(
        "--mode", choices=["of-H", "of-H-in-G", "total"], default="of-H-in-G"
    )
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("derive-lists", help="admissible color lists of the uncolored items")
    common_io(p)
    p.add_argument("-k", "--palette", type=int)
    p.set_defaults(func=_cmd_derive_lists)

    p = sub.add_parser("audit", help="run a discharging scheme and report")
    common_io(p)
    p.add_argument("--scheme", choices=["R", "S", "T"], required=True)
    p.add_argument("-t", type=int, required=True, help="palette offset (k = Delta + t)")
    p.add_argument("-d", type=int, default=None, help="degree bound of the precolored subgraph")
    p.add_argument("--dot", help="write a charge-annotated DOT file here")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("classify", help="degree buckets, q metric, precolored shape")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-p", "--precoloring", help="optional precoloring file")
    p.add_argument("-t", type=int, default=None, help="palette offset for configuration reports")
    p.add_argument("-d", type=int, default=None, help="degree bound (q uses V_[2,d+5])")
    p.add_argument("--distance", type=int, default=3, help="required component separation")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("gen", help="generate a named example instance")
    p.add_argument("example", choices=list(EXAMPLE_IDS))
    p.add_argument("--k", type=int, help="parameter for greedy-tree")
    p.add_argument("--t", type=int, help="parameter for subdivided-star")
    p.add_argument("-o", "--out", required=True, help="output path prefix")
    p.add_argument("--dot", help="also write a DOT rendering here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify-sharpness", help="verify claimed failure palettes by exact search")
    p.add_argument(
        "examples",
        nargs="+",
        help="example ids, optionally with a parameter, e.g. greedy-tree:3",
    )
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1, help="verify instances in parallel")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify_sharpness)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; remap to the input-error code
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
