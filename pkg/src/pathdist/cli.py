"""Command-line interface.

Subcommands: stats, distance, signature, cdf, separation, mapmatch,
frechet, fscore, perturb, study.  Exit codes: 0 success, 1 usage error,
2 data error.  A ``--config`` file holds ``key = value`` lines mirroring
the long flag names; explicit flags override file values.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .errors import PathdistError
from .experiments import (
    PerturbationSpec,
    generate_perturbed,
    grid_graph,
    load_graph_arg,
    run_perturbation_study,
)
from .frechet import DEFAULT_TOLERANCE, frechet_distance
from .fscore import FScoreParams, fscore_analysis
from .geometry import PolyLine
from .graph import graph_stats, write_graph_csv
from .matching import map_match_distance
from .pathdistance import (
    PathDistanceReport,
    directed_path_distance,
    iter_match_records,
    path_distance_analysis,
    read_records_csv,
    separation_census,
    write_records_csv,
)
from .signatures import (
    SignatureMap,
    cdf_from_signature_rows,
    export_cdf_plot,
    export_heatmap,
    read_signature_csv,
    write_signature_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_curve(path) -> PolyLine:
    """Curve CSV: one ``x,y`` row per point; optional ``x,y`` header."""
    pts = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            if row[0].strip().lower() == "x":
                continue
            pts.append((float(row[0]), float(row[1])))
    return PolyLine(pts)


def _read_config(path) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PathdistError(f"config line without '=': {raw.strip()!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not getattr(args, "config", None):
        return
    values = _read_config(args.config)
    for key, raw in values.items():
        if not hasattr(args, key):
            continue
        # Flags given explicitly on the command line win over the file.
        if _given_on_cli(key, argv):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int):
            setattr(args, key, int(raw))
        elif isinstance(current, float):
            setattr(args, key, float(raw))
        else:
            setattr(args, key, raw)


def _given_on_cli(key: str, argv: list[str]) -> bool:
    flag = "--" + key.replace("_", "-")
    return any(a == flag or a.startswith(flag + "=") for a in argv)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="bisection tolerance in meters")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--contract", action="store_true", help="contract degree-2 chains after loading")
    p.add_argument("--out-dir", default=None, help="directory for output artifacts")
    p.add_argument("--config", default=None, help="key = value file of defaults")
    p.add_argument(
        "--exhaustive-search",
        action="store_true",
        help="disable the spatial grid and scan all edges (baseline behavior)",
    )


def _summary_path(out: str) -> Path:
    p = Path(out)
    return p.with_suffix(p.suffix + ".summary.json") if p.suffix != ".json" else p


def _write_summary(report: PathDistanceReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.summary(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _cmd_stats(args) -> int:
    g = load_graph_arg(args.graph, args.contract)
    stats = graph_stats(g)
    doc = stats._asdict()
    print(json.dumps(doc, indent=1, sort_keys=True))
    return EXIT_OK


def _cmd_distance(args) -> int:
    g = load_graph_arg(getattr(args, "from"), args.contract)
    h = load_graph_arg(args.to, args.contract)
    use_index = not args.exhaustive_search
    jobs = [("", g, h)]
    if args.both:
        jobs = [("_gh", g, h), ("_hg", h, g)]
    for tag, src, dst in jobs:
        out = Path(args.out)
        out_path = out.with_name(out.stem + tag + out.suffix) if tag else out
        direction = "H->G" if tag == "_hg" else "G->H"
        if args.strict:
            report = directed_path_distance(
                src,
                dst,
                args.k,
                args.tol,
                workers=args.workers,
                use_index=use_index,
                strict=True,
                percentile_weighted=not args.unweighted_percentile,
            )
            with open(out_path, "w", newline="") as fh:
                write_records_csv(report.records, fh)
        else:
            known: dict[int, float] = {}
            if args.resume and out_path.exists():
                with open(out_path) as fh:
                    known = read_records_csv(fh)
            # Stream rows as chunks complete so long runs are restartable.
            records = []
            with open(out_path, "w", newline="") as fh:
                fh.write("path_id,vertex_sequence,path_length_m,match_distance_m\n")
                for rec in iter_match_records(
                    src,
                    dst,
                    args.k,
                    args.tol,
                    workers=args.workers,
                    use_index=use_index,
                    known=known or None,
                ):
                    fh.write(
                        f"{rec.path_id},{rec.path.label()},{rec.length!r},{rec.distance!r}\n"
                    )
                    fh.flush()
                    records.append(rec)
            report = PathDistanceReport(
                k=args.k,
                direction=direction,
                records=records,
                percentile_weighted=not args.unweighted_percentile,
            )
        report.direction = direction
        _write_summary(report, _summary_path(str(out_path)))
        print(f"{report.direction} k={args.k} max={report.max_distance!r}")
    return EXIT_OK


def _cmd_signature(args) -> int:
    g = load_graph_arg(getattr(args, "from"), args.contract)
    h = load_graph_arg(args.to, args.contract)
    _, edge_sig, _ = path_distance_analysis(
        g, h, args.k, args.tol, workers=args.workers, use_index=not args.exhaustive_search
    )
    with open(args.out, "w") as fh:
        write_signature_csv(edge_sig, fh)
    if args.heatmap:
        export_heatmap(edge_sig, args.heatmap, "svg", args.ramp)
    if args.geojson:
        export_heatmap(edge_sig, args.geojson, "geojson", args.ramp)
    print(f"signature k={args.k}: {len(edge_sig.values)} edges")
    return EXIT_OK


def _cmd_cdf(args) -> int:
    with open(args.sig) as fh:
        rows = read_signature_csv(fh)
    curve = cdf_from_signature_rows(rows)
    with open(args.out, "w") as fh:
        fh.write("x_m,fraction\n")
        for x, y in zip(curve.xs, curve.ys):
            fh.write(f"{x!r},{y!r}\n")
    if args.plot:
        export_cdf_plot([curve], [Path(args.sig).stem], args.plot, reference_x=args.reference)
    print(f"cdf: {len(curve.xs)} breakpoints")
    return EXIT_OK


def _cmd_separation(args) -> int:
    g = load_graph_arg(getattr(args, "from"), args.contract)
    h = load_graph_arg(args.to, args.contract)
    reports = separation_census(
        g,
        h,
        args.tol,
        workers=args.workers,
        use_index=not args.exhaustive_search,
        radius_steps=args.radius_steps,
    )
    doc = [
        {"k": r.k, "d": r.d, "separated": r.separated_count, "vertices": len(r.per_vertex)}
        for r in reports
    ]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
    print(json.dumps(doc, indent=1, sort_keys=True))
    return EXIT_OK


def _cmd_mapmatch(args) -> int:
    h = load_graph_arg(args.graph, args.contract)
    curve = load_curve(args.curve)
    d = map_match_distance(curve, h, args.tol, use_index=not args.exhaustive_search)
    print(repr(d))
    return EXIT_OK


def _cmd_frechet(args) -> int:
    a = load_curve(args.curve_a)
    b = load_curve(args.curve_b)
    print(repr(frechet_distance(a, b, args.tol)))
    return EXIT_OK


def _cmd_fscore(args) -> int:
    g = load_graph_arg(getattr(args, "from"), args.contract)
    h = load_graph_arg(args.to, args.contract)
    params = FScoreParams(
        sampling_interval=args.interval,
        matched_distance=args.match_dist,
        max_path_length=args.max_path,
    )
    result = fscore_analysis(g, h, params, workers=args.workers)
    with open(args.out, "w") as fh:
        write_signature_csv(result.edge_scores, fh)
    if args.heatmap:
        # High similarity should render light, so color by 1 - score.
        dissim = SignatureMap(
            target="edge",
            k=0,
            values={k: 1.0 - v for k, v in result.edge_scores.values.items()},
            graph=result.edge_scores.graph,
        )
        export_heatmap(dissim, args.heatmap, "svg", "linear")
    print(repr(result.global_score))
    return EXIT_OK


def _cmd_perturb(args) -> int:
    if args.out_dir is None:
        raise PathdistError("--out-dir is required for perturb")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = PerturbationSpec(p=args.p, seed_count=args.count, rng_seed=args.rng_seed)
    base = grid_graph(spec.extent, spec.spacing)
    write_graph_csv(base, out / "grid.vertices.csv", out / "grid.edges.csv")
    for i, gp in enumerate(generate_perturbed(spec)):
        write_graph_csv(gp, out / f"perturbed_{i}.vertices.csv", out / f"perturbed_{i}.edges.csv")
    print(f"wrote {args.count} perturbed grids to {out}")
    return EXIT_OK


def _cmd_study(args) -> int:
    if args.out_dir is None:
        raise PathdistError("--out-dir is required for study")
    p_values = [float(x) for x in args.p_values.split(",") if x.strip()]
    result = run_perturbation_study(
        p_values,
        args.seeds,
        args.k,
        args.tol,
        rng_seed=args.rng_seed,
        workers=args.workers,
        out_dir=args.out_dir,
    )
    bound_ok = all(d <= np.sqrt(2.0) * p + 2 * args.tol for p, _, d in result.rows)
    print(f"rows={len(result.rows)} bound_ok={bound_ok}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="pathdist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="graph statistics")
    p.add_argument("--graph", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("distance", help="directed path-based distance")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--k", type=int, default=3, choices=(1, 2, 3))
    p.add_argument("--both", action="store_true", help="compute both directions")
    p.add_argument("--strict", action="store_true", help="restrict to separated, degree!=3 interiors")
    p.add_argument("--unweighted-percentile", action="store_true")
    p.add_argument("--resume", action="store_true", help="reuse distances already in --out")
    p.add_argument("--out", required=True, help="per-path report CSV")
    _add_common(p)
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("signature", help="per-edge local signature")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--k", type=int, default=2, choices=(1, 2, 3))
    p.add_argument("--out", required=True)
    p.add_argument("--heatmap", default=None)
    p.add_argument("--geojson", default=None)
    p.add_argument("--ramp", default="quantile", choices=("quantile", "linear"))
    _add_common(p)
    p.set_defaults(fn=_cmd_signature)

    p = sub.add_parser("cdf", help="weighted CDF of a signature CSV")
    p.add_argument("--sig", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", default=None)
    p.add_argument("--reference", type=float, default=20.0)
    _add_common(p)
    p.set_defaults(fn=_cmd_cdf)

    p = sub.add_parser("separation", help="d-separated vertex census")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--radius-steps", type=int, default=256, help="scan resolution for polyline edges")
    _add_common(p)
    p.set_defaults(fn=_cmd_separation)

    p = sub.add_parser("mapmatch", help="Fréchet map-matching distance")
    p.add_argument("--graph", required=True)
    p.add_argument("--curve", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_mapmatch)

    p = sub.add_parser("frechet", help="Fréchet distance between two curves")
    p.add_argument("--curve-a", required=True)
    p.add_argument("--curve-b", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_frechet)

    p = sub.add_parser("fscore", help="marbles-and-holes F-score baseline")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--interval", type=float, default=5.0)
    p.add_argument("--match-dist", type=float, default=20.0)
    p.add_argument("--max-path", type=float, default=300.0)
    p.add_argument("--out", required=True)
    p.add_argument("--heatmap", default=None)
    _add_common(p)
    p.set_defaults(fn=_cmd_fscore)

    p = sub.add_parser("perturb", help="generate perturbed grid graphs")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--rng-seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=_cmd_perturb)

    p = sub.add_parser("study", help="perturbed-grid distance study")
    p.add_argument("--p-values", default="0.1,0.3,0.5,0.7,0.9")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--rng-seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(fn=_cmd_study)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, list(argv))
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"pathdist: missing file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PathdistError as exc:
        print(f"pathdist: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
