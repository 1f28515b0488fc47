"""Time direct bundling against the sparsified (FEB) pipeline on a dense blob.

    python3 scripts/benchmark.py --n 500 --m 20000 --bundler fdeb --bundler epb

Only the bundling call is timed; effective resistances are computed once and
shared. Prints one line per bundler with the median times and the relative
improvement.
"""

import argparse
import statistics

from bundlekit.bundling import BUNDLERS, feb_pipeline, run_bundler
from bundlekit.config import apply_thread_limit
from bundlekit.datasets import geometric_blob
from bundlekit.sparsify import SparsifyParams, effective_resistances


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--m", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--factor", type=float, default=4.0)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--bundler", action="append", choices=list(BUNDLERS))
    args = ap.parse_args(argv)
    apply_thread_limit()

    g, d, _ = geometric_blob(args.n, args.m, seed=args.seed)
    er = effective_resistances(g)
    sp = SparsifyParams(factor=args.factor, seed=args.seed)
    print(f"blob n={g.n} m={g.m} budget={sp.budget(g.n)}")
    print(f"{'bundler':8} {'direct_s':>9} {'feb_s':>9} {'m_feb':>7} {'improvement':>11}")
    warm = geometric_blob(20, 60, seed=0)
    for bundler in args.bundler or ["fdeb", "epb"]:
        run_bundler(bundler, warm.graph, warm.drawing)  # keep JIT compilation out of the timings
        direct, feb = [], []
        for _ in range(args.repeats):
            direct.append(run_bundler(bundler, g, d, er=er)[1])
            res = feb_pipeline(g, bundler, sp, drawing=d, er=er)
            feb.append(res.bundling_seconds)
        t0, t1 = statistics.median(direct), statistics.median(feb)
        print(f"{bundler:8} {t0:9.3f} {t1:9.3f} {res.graph.m:7d} {1 - t1 / t0:11.1%}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
