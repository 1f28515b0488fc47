"""``bundlekit`` command line: sparsify, layout, bundle, metrics, fbq, compare, render."""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import statistics
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .bundling import BUNDLERS, feb_pipeline, run_bundler
from .config import THREADS_ENV, apply_thread_limit, dump_config, load_config, resolve, to_plain
from .graph import Drawing, Graph, drawing_to_dict, load_drawing, load_graph, load_layout
from .layout import compute_layout
from .metrics import bundle_structure, evaluate, fbq_scores
from .render import RenderStyle, to_svg
from .sparsify import effective_resistances, sparsify_edge_ids

COMPARE_COLUMNS = [
    "dataset",
    "bundler",
    "t_orig_s",
    "t_feb_s",
    "improvement",
    "ink",
    "dist",
    "amb1",
    "amb2",
    "fbq_js",
    "fbq_sq_dg",
    "fbq_sq_cc",
]
COMPARE_EXTRA = ["feb_ink", "feb_dist", "feb_amb1", "feb_amb2", "n", "m", "m_feb", "status", "error"]


class StageError(RuntimeError):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


# --- output helpers ----------------------------------------------------------


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600 files; apply the usual umask instead
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _meta(args, params: dict) -> dict:
    return {
        "tool": "bundlekit",
        "version": __version__,
        "command": args.command,
        "config": to_plain(params),
        "seeds": {"sparsify": params["sparsify"].seed, "layout": params["layout"].seed},
    }


def _comment_header(meta: dict) -> str:
    return "# meta " + json.dumps(meta, sort_keys=True) + "\n"


def _write_graph(graph: Graph, path, meta: dict) -> None:
    buf = io.StringIO()
    buf.write(_comment_header(meta))
    buf.write(f"%n {graph.n}\n")
    for a, b, w in zip(graph.u, graph.v, graph.w):
        buf.write(f"{a} {b}\n" if w == 1.0 else f"{a} {b} {w!r}\n")
    _atomic_write(path, buf.getvalue())


def _write_layout(drawing: Drawing, path, meta: dict) -> None:
    lines = [_comment_header(meta)]
    lines += [f"{i} {x!r} {y!r}\n" for i, (x, y) in enumerate(drawing.positions.tolist())]
    _atomic_write(path, "".join(lines))


def _write_drawing(drawing: Drawing, path, meta: dict) -> None:
    _atomic_write(path, json.dumps(drawing_to_dict(drawing, meta), separators=(",", ":")))


def _write_svg(drawing: Drawing, path, meta: dict, style: RenderStyle | None = None) -> None:
    svg = to_svg(drawing, style)
    head, rest = svg.split("\n", 1)
    comment = "<!-- " + json.dumps(meta, sort_keys=True).replace("--", "- -") + " -->"
    _atomic_write(path, f"{head}\n{comment}\n{rest}")


# --- inputs ------------------------------------------------------------------


def _load_graph(args) -> Graph:
    with stage("load graph"):
        return load_graph(args.graph, args.format)


def _drawing_for(graph: Graph, layout_path, params: dict) -> Drawing:
    """Straight drawing from a coordinate file or, without one, a force layout."""
    if layout_path is not None:
        with stage("layout"):
            if not Path(layout_path).exists():
                raise FileNotFoundError(f"layout file {layout_path} not found")
            return load_layout(layout_path, graph)
    lp = params["layout"]
    if lp.algorithm == "import":
        raise StageError("layout", ValueError("layout algorithm 'import' needs --layout"))
    with stage("layout"):
        return compute_layout(graph, lp)


def _read_drawing(path, graph: Graph | None = None) -> Drawing:
    """A drawing JSON file, or a coordinate file when ``graph`` is given."""
    p = Path(path)
    if p.suffix == ".json" or graph is None:
        return load_drawing(p)
    return load_layout(p, graph)


def _params(args) -> dict:
    config = load_config(args.config) if getattr(args, "config", None) else {}
    for section, key, attr in (
        ("sparsify", "factor", "factor"),
        ("sparsify", "seed", "seed"),
        ("layout", "seed", "layout_seed"),
        ("layout", "iterations", "layout_iterations"),
        ("layout", "algorithm", "layout_algorithm"),
        ("metrics", "width", "raster_width"),
        ("metrics", "epsilon", "epsilon"),
        ("metrics", "tau", "tau"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            config.setdefault(section, {})[key] = value
    gammas = getattr(args, "gamma", None)
    if gammas is not None:
        config.setdefault("metrics", {})["gammas"] = gammas
    return resolve(config)


def _bundler_params(params: dict, bundler: str):
    return params["fdeb"] if bundler in ("fdeb", "seb1", "seb2") else params["epb"]


# --- commands ----------------------------------------------------------------


def cmd_sparsify(args, params) -> int:
    g = _load_graph(args)
    sp = params["sparsify"]
    with stage("effective resistance"):
        er = effective_resistances(g, args.er_method, args.tol, seed=sp.seed)
    with stage("sparsify"):
        ids = sparsify_edge_ids(g, er, sp)
        sub = g.subgraph(ids)
    meta = _meta(args, params)
    _write_graph(sub, args.out, meta)
    if args.er_csv:
        er.to_csv(args.er_csv, g)
    print(f"kept {sub.m} of {g.m} edges (budget {sp.budget(g.n)})")
    return 0


def cmd_layout(args, params) -> int:
    g = _load_graph(args)
    lp = params["layout"]
    with stage("layout"):
        coords = load_layout(args.coords, g) if args.coords else None
        d = compute_layout(g, lp, coordinates=coords)
    _write_layout(d, args.out, _meta(args, params))
    return 0


def cmd_bundle(args, params) -> int:
    g = _load_graph(args)
    d = _drawing_for(g, args.layout, params)
    bp = _bundler_params(params, args.alg)
    with stage("bundle"):
        if args.feb:
            res = feb_pipeline(g, args.alg, params["sparsify"], params["layout"], bp, drawing=d)
            out, seconds = res.drawing, res.bundling_seconds
        else:
            out, seconds = run_bundler(args.alg, g, d, bp)
    # wall-clock time goes to stdout only so the written files stay byte-stable
    meta = _meta(args, params) | {"bundler": args.alg, "feb": bool(args.feb)}
    _write_drawing(out, args.out, meta)
    svg = args.svg or str(Path(args.out).with_suffix(".svg"))
    _write_svg(out, svg, meta)
    print(f"bundling time: {seconds:.6f} s")
    return 0


def cmd_metrics(args, params) -> int:
    mp = params["metrics"]
    with stage("load drawings"):
        bundled = load_drawing(args.bundled)
        graph = bundled.to_graph()
        original = _read_drawing(args.original, graph)
        if not np.array_equal(original.edges, bundled.edges):
            raise ValueError("original and bundled drawings have different edge lists")
        if not np.array_equal(original.positions, bundled.positions):
            raise ValueError("original and bundled drawings place vertices differently")
    with stage("metrics"):
        report = evaluate(graph, original, bundled, mp)
    meta = _meta(args, params) | {"original": str(args.original), "bundled": str(args.bundled)}
    out = args.out or str(Path(args.bundled).with_suffix(".metrics.json"))
    _atomic_write(out, report.to_json(meta))
    if args.csv:
        from .metrics.report import CSV_COLUMNS

        buf = io.StringIO()
        buf.write(_comment_header(meta))
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        wr.writerow(report.csv_row())
        _atomic_write(args.csv, buf.getvalue())
    print(json.dumps({k: v for k, v in report.to_dict().items() if k != "params"}))
    return 0


def cmd_fbq(args, params) -> int:
    mp = params["metrics"]
    with stage("load drawings"):
        full = load_drawing(args.full)
        feb = load_drawing(args.feb)
        if len(full.positions) != len(feb.positions):
            raise ValueError("the two drawings have different vertex sets")
    with stage("fbq"):
        straight_full = Drawing.straight(full.to_graph(), full.positions)
        straight_feb = Drawing.straight(feb.to_graph(), feb.positions)
        geo_full = bundle_structure(full.to_graph(), straight_full, full, mp)
        geo_feb = bundle_structure(feb.to_graph(), straight_feb, feb, mp)
        scores = fbq_scores(geo_full, geo_feb)
    meta = _meta(args, params) | {"full": str(args.full), "feb": str(args.feb)}
    if args.out:
        _atomic_write(args.out, json.dumps(scores | {"meta": meta}, indent=2))
    print(json.dumps(scores))
    return 0


def cmd_render(args, params) -> int:
    with stage("load drawing"):
        if args.drawing.endswith(".json"):
            d = load_drawing(args.drawing)
        else:
            if not args.graph:
                raise ValueError("rendering a coordinate file needs --graph")
            d = load_layout(args.drawing, load_graph(args.graph, args.format))
    style = RenderStyle(
        alpha=args.alpha,
        line_width=args.line_width,
        vertex_radius=args.vertex_radius,
        canvas=args.canvas,
        highlight=frozenset(args.highlight or ()),
    )
    with stage("render"):
        _write_svg(d, args.out, _meta(args, params), style)
        if args.png:
            from .metrics import rasterize

            mp = params["metrics"]
            rasterize(d, mp.width, mp.line_width, threshold=mp.threshold).save_png(args.png)
    return 0


# --- compare -----------------------------------------------------------------


def _resolve_dataset(spec: str):
    """``airlines``, ``blob:N:M[:SEED]``, or ``GRAPH[+LAYOUT]`` file paths."""
    from .datasets import BUILTIN, load_dataset

    if spec in BUILTIN or spec.startswith("blob:"):
        ds = load_dataset(spec)
        return spec, ds.graph, ds.drawing
    graph_path, _, layout_path = spec.partition("+")
    if not Path(graph_path).exists():
        raise FileNotFoundError(f"graph file {graph_path} not found")
    g = load_graph(graph_path)
    return Path(graph_path).stem, g, (load_layout(layout_path, g) if layout_path else None)


def _median_run(fn, repeats: int):
    times, result = [], None
    for _ in range(repeats):
        result, seconds = fn()
        times.append(seconds)
    return result, statistics.median(times)


def _warm_up(bundler: str, bp) -> None:
    """Run ``bundler`` once on a tiny graph so JIT compilation stays out of the timings."""
    from .datasets import geometric_blob

    tiny = geometric_blob(20, 60, seed=0)
    run_bundler(bundler, tiny.graph, tiny.drawing, bp)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(float(x))
    return str(x)


def compare_one(spec: str, bundler: str, params: dict, repeats: int) -> dict:
    row = {"dataset": spec, "bundler": bundler}
    with stage("load dataset"):
        name, g, d = _resolve_dataset(spec)
    row["dataset"] = name
    row.update(n=g.n, m=g.m)
    if d is None:
        d = _drawing_for(g, None, params)
    bp = _bundler_params(params, bundler)
    mp = params["metrics"]
    with stage("effective resistance"):
        er = effective_resistances(g, seed=params["sparsify"].seed)
    with stage("bundle"):
        _warm_up(bundler, bp)
        db, t_orig = _median_run(lambda: run_bundler(bundler, g, d, bp, er=er), repeats)

    def feb_once():
        r = feb_pipeline(g, bundler, params["sparsify"], params["layout"], bp, drawing=d, er=er)
        return r, r.bundling_seconds

    with stage("feb"):
        res, t_feb = _median_run(feb_once, repeats)
    with stage("metrics"):
        geo = bundle_structure(g, d, db, mp)
        rep = evaluate(g, d, db, mp, geo=geo)
        if params["layout"].reuse_positions:
            sub_d = d.restrict(res.edge_ids)
        else:
            sub_d = Drawing.straight(res.graph, res.drawing.positions)
        geo_feb = bundle_structure(res.graph, sub_d, res.drawing, mp)
        rep_feb = evaluate(res.graph, sub_d, res.drawing, mp, geo=geo_feb)
        fbq = fbq_scores(geo, geo_feb)
    row.update(
        t_orig_s=t_orig,
        t_feb_s=t_feb,
        improvement=(t_orig - t_feb) / t_orig if t_orig > 0 else math.nan,
        ink=rep.ink,
        dist=rep.distortion,
        amb1=rep.amb1,
        amb2=rep.amb2,
        **fbq,
        feb_ink=rep_feb.ink,
        feb_dist=rep_feb.distortion,
        feb_amb1=rep_feb.amb1,
        feb_amb2=rep_feb.amb2,
        m_feb=res.graph.m,
        status="ok",
        error="",
    )
    return row


def _write_compare(rows: list[dict], path, meta: dict) -> None:
    buf = io.StringIO()
    buf.write(_comment_header(meta))
    wr = csv.writer(buf, lineterminator="\n")
    cols = COMPARE_COLUMNS + COMPARE_EXTRA
    wr.writerow(cols)
    for r in rows:
        wr.writerow([_fmt(r.get(c)) for c in cols])
    _atomic_write(path, buf.getvalue())


def cmd_compare(args, params) -> int:
    section = params.get("compare", {}) if isinstance(params.get("compare"), dict) else {}
    datasets = args.dataset or section.get("datasets") or []
    bundlers = args.bundler or section.get("bundlers") or []
    repeats = args.repeats if args.repeats is not None else int(section.get("repeats", 3))
    out = args.out or section.get("output")
    if not datasets or not bundlers:
        print("error: compare needs at least one dataset and one bundler", file=sys.stderr)
        return 2
    if not out:
        print("error: compare needs --out (or compare.output in the config)", file=sys.stderr)
        return 2
    unknown = [b for b in bundlers if b not in BUNDLERS]
    if unknown:
        print(f"error: unknown bundler(s): {', '.join(unknown)}", file=sys.stderr)
        return 2
    if repeats < 1:
        print("error: --repeats must be >= 1", file=sys.stderr)
        return 2
    meta = _meta(args, params) | {"repeats": repeats, "datasets": list(datasets), "bundlers": list(bundlers)}
    rows, failed = [], 0
    for spec in datasets:
        for b in bundlers:
            try:
                row = compare_one(spec, b, params, repeats)
            except StageError as exc:
                failed += 1
                row = {"dataset": spec, "bundler": b, "status": "failed", "error": str(exc)}
                print(f"error: {spec}/{b}: stage {exc}", file=sys.stderr)
            rows.append(row)
            _write_compare(rows, out, meta)
            print(" ".join(f"{c}={_fmt(row.get(c))}" for c in COMPARE_COLUMNS[:5] + ["status"]))
    return 1 if failed else 0


# --- argument parsing --------------------------------------------------------


def _gamma_list(text: str) -> tuple:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("gamma values must be positive integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bundlekit", description=__doc__)
    ap.add_argument("--version", action="version", version=f"bundlekit {__version__}")
    ap.add_argument("--config", help="parameter file (JSON or section.key = value lines)")
    ap.add_argument("--dump-config", action="store_true", help="print the resolved parameters and exit")
    ap.add_argument("--threads", type=int, help=f"worker threads (default: ${THREADS_ENV} or all cores)")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    def common(p, graph=True):
        p.add_argument("--config", default=argparse.SUPPRESS, help="parameter file")
        if graph:
            p.add_argument("--graph", required=True, help="edge list (u v [w] per line)")
            p.add_argument("--format", default="edgelist", choices=["edgelist", "matrix-market"])
        p.add_argument("--seed", type=int, help="sparsification seed")
        p.add_argument("--layout-seed", type=int)
        p.add_argument("--layout-iterations", type=int)
        p.add_argument("--layout-algorithm", choices=["force", "import"])

    p = sub.add_parser("sparsify", help="spectral sparsification by effective resistance")
    common(p)
    p.add_argument("--factor", type=float, help="budget factor c in ceil(c n ln n)")
    p.add_argument("--er-method", default="auto", choices=["auto", "exact", "approximate"])
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--er-csv", help="also write per-edge effective resistances")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("layout", help="straight-line drawing (force-directed or imported)")
    common(p)
    p.add_argument("--coords", help="coordinate file for --layout-algorithm import")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("bundle", help="bundle a drawing")
    common(p)
    p.add_argument("--alg", required=True, choices=BUNDLERS)
    p.add_argument("--layout", help="coordinate file; a force layout is computed when omitted")
    p.add_argument("--feb", action="store_true", help="sparsify first (FEB pipeline)")
    p.add_argument("--factor", type=float)
    p.add_argument("--out", required=True, help="bundled drawing JSON")
    p.add_argument("--svg", help="SVG path (default: next to --out)")
    p.set_defaults(func=cmd_bundle)

    p = sub.add_parser("metrics", help="ink, distortion and ambiguity of a bundled drawing")
    common(p, graph=False)
    p.add_argument("--original", required=True, help="straight drawing JSON or coordinate file")
    p.add_argument("--bundled", required=True, help="bundled drawing JSON")
    p.add_argument("--gamma", type=_gamma_list, help="hop limits, e.g. 1,2")
    p.add_argument("--raster-width", type=int)
    p.add_argument("--epsilon", type=float, help="bundle distance as a fraction of the diagonal")
    p.add_argument("--tau", type=float)
    p.add_argument("--out", help="report JSON")
    p.add_argument("--csv", help="also write a one-row CSV")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("fbq", help="faithfulness of a FEB bundling to the full bundling")
    common(p, graph=False)
    p.add_argument("--full", required=True, help="bundled drawing of the full graph")
    p.add_argument("--feb", required=True, help="bundled drawing of the sparsified graph")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fbq)

    p = sub.add_parser("compare", help="direct versus FEB bundling per dataset")
    common(p, graph=False)
    p.add_argument("--dataset", action="append", help="airlines, blob:N:M[:SEED] or GRAPH[+LAYOUT]; repeatable")
    p.add_argument("--bundler", action="append", choices=BUNDLERS, help="repeatable")
    p.add_argument("--repeats", type=int, help="timing repeats, median reported (default 3)")
    p.add_argument("--factor", type=float)
    p.add_argument("--out", help="CSV path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="SVG (and optional PNG) of a drawing")
    p.add_argument("--config", default=argparse.SUPPRESS)
    p.add_argument("--drawing", required=True, help="drawing JSON, or a coordinate file with --graph")
    p.add_argument("--graph")
    p.add_argument("--format", default="edgelist", choices=["edgelist", "matrix-market"])
    p.add_argument("--alpha", type=float, default=0.35)
    p.add_argument("--line-width", type=float, default=1.0)
    p.add_argument("--vertex-radius", type=float, default=1.5)
    p.add_argument("--canvas", type=int, default=1000)
    p.add_argument("--highlight", type=int, nargs="*", help="edge indices drawn on top")
    p.add_argument("--out", required=True)
    p.add_argument("--png", help="also rasterize to PNG")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        params = _params(args)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    if args.dump_config:
        sys.stdout.write(dump_config(params))
        return 0
    if args.command is None:
        ap.print_usage(sys.stderr)
        print("error: a command is required", file=sys.stderr)
        return 2
    try:
        apply_thread_limit(args.threads)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args, params)
    except StageError as exc:
        print(f"error: stage {exc.stage} failed: {exc.__cause__}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
