"""Edge bundling with spectral sparsification: FDEB, SEB, EPB/SEPB, the FEB
pipeline and bundling quality metrics."""

from .config import apply_thread_limit
from .graph import (
    DatasetDescriptor,
    Drawing,
    Graph,
    GraphFormatError,
    load_drawing,
    load_graph,
    load_layout,
    save_drawing,
)
from .layout import LayoutParams, compute_layout
from .sparsify import (
    EffectiveResistanceMap,
    SparsifyParams,
    effective_resistances,
    spectral_sparsify,
)

__version__ = "0.1.0"

__all__ = [
    "DatasetDescriptor",
    "Drawing",
    "EffectiveResistanceMap",
    "Graph",
    "GraphFormatError",
    "LayoutParams",
    "SparsifyParams",
    "compute_layout",
    "effective_resistances",
    "load_drawing",
    "load_graph",
    "load_layout",
    "save_drawing",
    "spectral_sparsify",
]

apply_thread_limit()
