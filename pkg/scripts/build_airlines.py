"""Build the bundled US airlines fixture (235 airports, 1297 routes).

Input is the airports/flights tables shipped with the vega-datasets npm
package (``data/airports.csv`` and ``data/flights-airport.csv``)::

    npm pack vega-datasets@3.2.1 && tar xzf vega-datasets-3.2.1.tgz
    python3 scripts/build_airlines.py package/data

Airports are restricted to the continental US and ranked by total flights;
the top 235 are kept. Routes among them are chosen as a maximum-weight
spanning tree (so the graph is connected) topped up with the busiest
remaining routes until 1297 edges. Positions are longitude scaled by the
cosine of the mean latitude, and latitude.
"""

from __future__ import annotations

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import numpy as np

N_VERTICES = 235
N_EDGES = 1297
LAT = (24.0, 50.0)
LON = (-125.0, -66.0)
OUT = Path(__file__).resolve().parents[1] / "src" / "bundlekit" / "data"


def read_inputs(folder: Path):
    coords = {}
    with open(folder / "airports.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            lat, lon = float(row["latitude"]), float(row["longitude"])
            if LAT[0] <= lat <= LAT[1] and LON[0] <= lon <= LON[1]:
                coords[row["iata"]] = (lon, lat)
    weight = defaultdict(int)
    with open(folder / "flights-airport.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            a, b = row["origin"], row["destination"]
            if a != b and a in coords and b in coords:
                weight[tuple(sorted((a, b)))] += int(row["count"])
    return coords, weight


def select(coords, weight):
    traffic = defaultdict(int)
    for (a, b), w in weight.items():
        traffic[a] += w
        traffic[b] += w
    ranked = sorted(traffic, key=lambda k: (-traffic[k], k))[:N_VERTICES]
    names = sorted(ranked)
    idx = {k: i for i, k in enumerate(names)}
    routes = sorted(
        ((w, idx[a], idx[b]) for (a, b), w in weight.items() if a in idx and b in idx),
        key=lambda r: (-r[0], r[1], r[2]),
    )
    parent = list(range(len(names)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, rest = [], []
    for w, a, b in routes:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.append((a, b))
        else:
            rest.append((a, b))
    if len(tree) != len(names) - 1:
        raise SystemExit("selected airports do not form a connected route network")
    edges = sorted(tree + rest[: N_EDGES - len(tree)])
    lon = np.array([coords[k][0] for k in names])
    lat = np.array([coords[k][1] for k in names])
    xy = np.column_stack([lon * np.cos(np.radians(lat.mean())), lat])
    return names, edges, xy


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("folder", type=Path, help="directory holding airports.csv and flights-airport.csv")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    names, edges, xy = select(*read_inputs(args.folder))
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "airlines.edges", "w") as fh:
        fh.write("# US airline routes, continental airports ranked by traffic\n")
        fh.write(f"%n {len(names)}\n")
        fh.writelines(f"{a} {b}\n" for a, b in edges)
    with open(args.out / "airlines.xy", "w") as fh:
        fh.writelines(f"{i} {x!r} {y!r}\n" for i, (x, y) in enumerate(xy.tolist()))
    with open(args.out / "airlines.names", "w") as fh:
        fh.writelines(f"{k}\n" for k in names)
    print(f"{len(names)} vertices, {len(edges)} edges -> {args.out}")


if __name__ == "__main__":
    main()
