"""Worker limits and structured parameter files (``key=value`` lines or JSON)."""

from __future__ import annotations

import dataclasses
import json
import os
from pathlib import Path

THREADS_ENV = "BUNDLEKIT_THREADS"


def apply_thread_limit(n: int | None = None) -> int:
    """Cap numba worker threads at ``n`` (default: ``$BUNDLEKIT_THREADS``)."""
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
        # try TBB last; an outdated system TBB only produces a warning
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    cap = numba.config.NUMBA_NUM_THREADS
    if n is None:
        raw = os.environ.get(THREADS_ENV)
        if not raw:
            return numba.get_num_threads()
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    n = max(1, min(int(n), cap))
    numba.set_num_threads(n)
    return n


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        low = text.lower()
        if low in ("true", "false"):
            return low == "true"
        return text


def load_config(path) -> dict:
    """Read a nested dict from JSON or from ``section.key = value`` lines."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        node = out
        *parents, leaf = key.split(".")
        for p in parents:
            node = node.setdefault(p, {})
        node[leaf] = _parse_value(value)
    return out


def section_params(cls, section: dict | None):
    """Build dataclass ``cls`` from a config section, rejecting unknown keys."""
    section = dict(section or {})
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(section) - names
    if unknown:
        raise ValueError(f"unknown {cls.__name__} option(s): {', '.join(sorted(unknown))}")
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in section.items()}
    return cls(**kwargs)


def resolve(config: dict | None = None) -> dict:
    """All parameter dataclasses with config overrides applied."""
    from .bundling.epb import EpbParams
    from .bundling.fdeb import FdebParams
    from .layout import LayoutParams
    from .metrics.report import MetricParams
    from .sparsify import SparsifyParams

    config = config or {}
    known = {"sparsify", "layout", "fdeb", "epb", "metrics"}
    return {
        "sparsify": section_params(SparsifyParams, config.get("sparsify")),
        "layout": section_params(LayoutParams, config.get("layout")),
        "fdeb": section_params(FdebParams, config.get("fdeb")),
        "epb": section_params(EpbParams, config.get("epb")),
        "metrics": section_params(MetricParams, config.get("metrics")),
        **{k: v for k, v in config.items() if k not in known},
    }


def to_plain(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if dataclasses.is_dataclass(v):
            out[k] = {f: (list(x) if isinstance(x, tuple) else x) for f, x in dataclasses.asdict(v).items()}
        else:
            out[k] = v
    return out


def dump_config(params: dict) -> str:
    """``section.key = value`` text that :func:`load_config` reads back."""
    lines = []
    for section, values in to_plain(params).items():
        if isinstance(values, dict):
            for k, v in values.items():
                lines.append(f"{section}.{k} = {json.dumps(v)}")
        else:
            lines.append(f"{section} = {json.dumps(values)}")
    return "\n".join(lines) + "\n"
