"""One call that computes every quality metric for a bundled drawing."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

from ..graph import Drawing, Graph
from .fbq import fbq_js, fbq_sq
from .geometric import GeometricGraph, detect_bundles, geometric_graph
from .quality import ambiguity, distortion
from .raster import ink_reduction, rasterize, union_bounds


@dataclass(frozen=True)
class MetricParams:
    """Raster and bundle-detection settings. ``epsilon`` is a fraction of the
    original drawing's diagonal."""

    width: int = 2048
    line_width: float = 1.0
    threshold: float = 0.5
    epsilon: float = 0.005
    tau: float = 0.7
    gammas: tuple = (1, 2)

    def __post_init__(self):
        if self.width < 16:
            raise ValueError("raster width must be at least 16")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.tau <= 1:
            raise ValueError("tau must lie in (0, 1]")
        gammas = tuple(int(g) for g in self.gammas)
        if not gammas or min(gammas) < 1:
            raise ValueError("gammas must be positive integers")
        object.__setattr__(self, "gammas", gammas)


CSV_COLUMNS = (
    "ink",
    "distortion_raw",
    "distortion",
    "amb1",
    "amb2",
    "fbq_js",
    "fbq_sq_dg",
    "fbq_sq_cc",
    "bundling_time_seconds",
)


@dataclass
class MetricsReport:
    ink: float
    distortion_raw: float
    distortion: float
    ambiguity: dict = field(default_factory=dict)
    fbq_js: float | None = None
    fbq_sq_dg: float | None = None
    fbq_sq_cc: float | None = None
    bundling_time_seconds: float = math.nan
    params: MetricParams = field(default_factory=MetricParams)

    @property
    def amb1(self):
        return self.ambiguity.get(1)

    @property
    def amb2(self):
        return self.ambiguity.get(2)

    def to_dict(self) -> dict:
        out = {
            "ink": self.ink,
            "distortion_raw": self.distortion_raw,
            "distortion": self.distortion,
            **{f"amb{g}": a for g, a in sorted(self.ambiguity.items())},
            "fbq_js": self.fbq_js,
            "fbq_sq_dg": self.fbq_sq_dg,
            "fbq_sq_cc": self.fbq_sq_cc,
            "bundling_time_seconds": None if math.isnan(self.bundling_time_seconds) else self.bundling_time_seconds,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(self.params).items()},
        }
        return out

    def to_json(self, meta: dict | None = None) -> str:
        d = self.to_dict()
        if meta:
            d["meta"] = meta
        return json.dumps(d, indent=2, sort_keys=False)

    def csv_row(self) -> list:
        d = self.to_dict()
        return ["" if d.get(c) is None else repr(float(d[c])) for c in CSV_COLUMNS]

    def with_fbq(self, values: dict) -> "MetricsReport":
        return dataclasses.replace(self, **values)


def bundle_structure(graph: Graph, original: Drawing, bundled: Drawing, params: MetricParams) -> GeometricGraph:
    """Detect bundles in ``bundled`` and build the geometric graph."""
    eps = params.epsilon * original.diagonal()
    return geometric_graph(graph, detect_bundles(bundled, eps, params.tau))


def evaluate(
    graph: Graph,
    original: Drawing,
    bundled: Drawing,
    params: MetricParams | None = None,
    *,
    bundling_time_seconds: float = math.nan,
    geo: GeometricGraph | None = None,
) -> MetricsReport:
    """Ink, distortion and ambiguity of ``bundled`` against the straight
    ``original`` drawing of ``graph``. Both drawings are rasterized in a
    shared frame."""
    params = params or MetricParams()
    if not (len(original.edges) == len(bundled.edges) == graph.m):
        raise ValueError("drawings and graph disagree on the edge count")
    bounds = union_bounds(original, bundled)
    img0 = rasterize(original, params.width, params.line_width, bounds=bounds, threshold=params.threshold)
    img1 = rasterize(bundled, params.width, params.line_width, bounds=bounds, threshold=params.threshold)
    raw, reported = distortion(bundled)
    if geo is None:
        geo = bundle_structure(graph, original, bundled, params)
    amb = {g: ambiguity(graph, geo, g) for g in params.gammas}
    return MetricsReport(
        ink=ink_reduction(img0, img1),
        distortion_raw=raw,
        distortion=reported,
        ambiguity=amb,
        bundling_time_seconds=bundling_time_seconds,
        params=params,
    )


def fbq_scores(geo_full: GeometricGraph, geo_sparse: GeometricGraph) -> dict:
    """FBQ_JS and both FBQ_SQ values, keyed like :class:`MetricsReport` fields."""
    sq = fbq_sq(geo_full, geo_sparse)
    return {
        "fbq_js": fbq_js(geo_full, geo_sparse),
        "fbq_sq_dg": sq["avg_neighbor_degree"],
        "fbq_sq_cc": sq["local_clustering"],
    }
