"""Quality metrics for every bundler on one dataset, as a small table.

    python3 scripts/metrics_table.py airlines --factor 1.0

Columns are ink ratio, reported distortion, ambiguity at gamma 1 and 2, and
the FBQ scores of the FEB bundling against the direct one.
"""

import argparse

from bundlekit.bundling import BUNDLERS, feb_pipeline, run_bundler
from bundlekit.config import apply_thread_limit
from bundlekit.datasets import load_dataset
from bundlekit.metrics import MetricParams, evaluate, fbq_scores
from bundlekit.metrics.report import bundle_structure
from bundlekit.sparsify import SparsifyParams, effective_resistances


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dataset", nargs="?", default="airlines")
    ap.add_argument("--factor", type=float, default=4.0, help="sparsification factor for the FEB column")
    ap.add_argument("--width", type=int, default=2048, help="raster width for the ink ratio")
    args = ap.parse_args(argv)
    apply_thread_limit()

    g, d, _ = load_dataset(args.dataset)
    er = effective_resistances(g)
    mp = MetricParams(width=args.width)
    sp = SparsifyParams(factor=args.factor)
    print(f"{args.dataset}: n={g.n} m={g.m} m_feb={min(g.m, sp.budget(g.n))}")
    print(f"{'bundler':8} {'ink':>6} {'dist':>7} {'amb1':>6} {'amb2':>6} {'js':>6} {'sq_dg':>6} {'sq_cc':>6}")
    for bundler in BUNDLERS:
        out, _ = run_bundler(bundler, g, d, er=er)
        rep = evaluate(g, d, out, mp)
        res = feb_pipeline(g, bundler, sp, drawing=d, er=er)
        geo = bundle_structure(g, d, out, mp)
        geo_feb = bundle_structure(res.graph, d.restrict(res.edge_ids), res.drawing, mp)
        f = fbq_scores(geo, geo_feb)
        print(f"{bundler:8} {rep.ink:6.3f} {rep.distortion:7.4f} {rep.ambiguity[1]:6.3f} {rep.ambiguity[2]:6.3f} "
              f"{f['fbq_js']:6.3f} {f['fbq_sq_dg']:6.3f} {f['fbq_sq_cc']:6.3f}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
