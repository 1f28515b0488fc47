"""Run every CLI stage on one dataset and print a SHA-256 digest per output file.

Used to check that outputs are byte-identical across runs and thread counts:

    BUNDLEKIT_THREADS=1 python scripts/stage_hashes.py square-diagonal /tmp/a
    BUNDLEKIT_THREADS=4 python scripts/stage_hashes.py square-diagonal /tmp/b

Timing columns of the ``compare`` CSV are blanked before hashing since
wall-clock time is the one thing that is expected to vary.
"""

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from contextlib import redirect_stdout
from pathlib import Path

from bundlekit.bundling import BUNDLERS
from bundlekit.cli import main
from bundlekit.datasets import load_dataset
from bundlekit.graph import save_graph, save_layout

TIMING = ("t_orig_s", "t_feb_s", "improvement")


def run(*argv):
    with redirect_stdout(io.StringIO()):
        rc = main([str(a) for a in argv])
    if rc != 0:
        raise SystemExit(f"stage {argv[0]} exited with {rc}")


def strip_timing(text):
    lines = text.splitlines()
    head = [l for l in lines if l.startswith("#")]
    rows = list(csv.DictReader(l for l in lines if not l.startswith("#")))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if k in TIMING else v) for k, v in r.items()})
    return "\n".join(head) + "\n" + buf.getvalue()


def stage_outputs(dataset, work):
    # relative paths keep the input names recorded in output metadata identical across workdirs
    Path(work).mkdir(parents=True, exist_ok=True)
    os.chdir(work)
    work = Path(".")
    g, d, _ = load_dataset(dataset)
    graph, geo = work / "graph.txt", work / "geo.xy"
    save_graph(g, graph)
    save_layout(d, geo)
    cfg = work / "params.cfg"
    cfg.write_text("metrics.width = 256\nlayout.iterations = 30\n")
    common = ["--config", cfg]

    run(*common, "sparsify", "--graph", graph, "--out", work / "sparse.txt", "--er-csv", work / "er.csv")
    run(*common, "layout", "--graph", graph, "--out", work / "force.xy")
    for alg in BUNDLERS:
        run(*common, "bundle", "--alg", alg, "--graph", graph, "--layout", geo, "--out", work / f"{alg}.json")
        run(*common, "bundle", "--alg", alg, "--feb", "--graph", graph, "--layout", geo,
            "--out", work / f"{alg}_feb.json")
    run(*common, "bundle", "--alg", "epb", "--graph", graph, "--out", work / "epb_force.json")
    run(*common, "metrics", "--original", geo, "--bundled", work / "epb.json", "--out", work / "epb.metrics.json",
        "--csv", work / "epb.metrics.csv")
    run(*common, "fbq", "--full", work / "fdeb.json", "--feb", work / "fdeb_feb.json", "--out", work / "fbq.json")
    run(*common, "render", "--drawing", work / "seb2.json", "--out", work / "seb2_render.svg",
        "--png", work / "seb2.png")
    run(*common, "compare", "--dataset", f"{graph}+{geo}", "--bundler", "epb", "--repeats", "1",
        "--out", work / "compare.csv")
    (work / "compare.csv").write_text(strip_timing((work / "compare.csv").read_text()))

    digests = {}
    for path in sorted(work.iterdir()):
        if path.name in ("params.cfg",):
            continue
        digests[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
    return digests


def cli(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dataset", help="airlines, square-diagonal or blob:N:M[:SEED]")
    ap.add_argument("workdir")
    args = ap.parse_args(argv)
    json.dump(stage_outputs(args.dataset, os.path.abspath(args.workdir)), sys.stdout, indent=1, sort_keys=True)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(cli())
