"""Canonical JSON serialization shared by every pipeline stage.

All float payloads are rounded to six significant digits before writing and
keys are sorted, so re-serializing a parsed file reproduces it byte for byte.
That property is what makes whole-pipeline runs comparable by file hash.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, IO

SCHEMA_VERSION = 1
SIG_DIGITS = 6


def round_sig(x: float, digits: int = SIG_DIGITS) -> float:
    """Round to `digits` significant decimal digits (0.0 stays 0.0)."""
    if x == 0.0:
        return 0.0
    if not math.isfinite(x):
        raise ValueError(f"non-finite value cannot be serialized: {x!r}")
    return float(f"{x:.{digits}g}")


def _canonical(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, str):
        return obj
    # numpy scalars and anything with .item()
    item = getattr(obj, "item", None)
    if callable(item):
        return _canonical(item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_dumps(obj: Any) -> str:
    return json.dumps(_canonical(obj), sort_keys=True, separators=(",", ":")) + "\n"


def write_json(obj: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_dumps(obj), encoding="utf-8")
    return path


def read_json(source: str | Path | IO[str]) -> Any:
    if hasattr(source, "read"):
        return json.load(source)
    return json.loads(Path(source).read_text(encoding="utf-8"))
