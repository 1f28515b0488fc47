"""Quality metrics for bundled drawings."""

from .fbq import PROPERTIES, DistributionSummary, fbq_js, fbq_sq, ks_distance, property_distribution
from .geometric import BundleAssignment, GeometricGraph, detect_bundles, geometric_graph, overlapping_pairs
from .quality import ambiguity, distortion
from .raster import RasterImage, ink_reduction, rasterize, union_bounds
from .report import MetricParams, MetricsReport, bundle_structure, evaluate, fbq_scores

__all__ = [
    "PROPERTIES",
    "BundleAssignment",
    "DistributionSummary",
    "GeometricGraph",
    "MetricParams",
    "MetricsReport",
    "RasterImage",
    "ambiguity",
    "bundle_structure",
    "detect_bundles",
    "distortion",
    "evaluate",
    "fbq_js",
    "fbq_scores",
    "fbq_sq",
    "geometric_graph",
    "ink_reduction",
    "ks_distance",
    "overlapping_pairs",
    "property_distribution",
    "rasterize",
    "union_bounds",
]
