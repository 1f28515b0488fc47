"""Bundlers: FDEB, SEB, EPB, SEPB and the FEB pipeline."""

from .compat import CompatibilityScore, c_er1, c_er2, c_geometric, compatibility
from .epb import EpbParams, EpbTrace, chaikin, epb_bundle, greedy_spanner, sepb_bundle
from .fdeb import FdebParams, fdeb_bundle, seb_bundle
from .pipeline import BUNDLERS, FebResult, default_params, feb_pipeline, run_bundler

__all__ = [
    "BUNDLERS",
    "CompatibilityScore",
    "EpbParams",
    "EpbTrace",
    "FdebParams",
    "FebResult",
    "c_er1",
    "c_er2",
    "c_geometric",
    "chaikin",
    "compatibility",
    "default_params",
    "epb_bundle",
    "fdeb_bundle",
    "feb_pipeline",
    "greedy_spanner",
    "run_bundler",
    "seb_bundle",
    "sepb_bundle",
]
