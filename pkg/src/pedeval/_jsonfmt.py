"""Deterministic JSON text: sorted keys, floats always printed with 6 decimals.

Floats are swapped for tagged strings, the tree goes through the C encoder,
and the tags are unwrapped afterwards.
"""

from __future__ import annotations

import json
import math
import re
from typing import Any

import numpy as np

_TAG = "\x00F"
_TAGGED = re.compile(r'"\\u0000F([-0-9.]+)"')


def _fmt(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _prepare(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _prepare(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _prepare(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _TAG + _fmt(float(obj))
    if isinstance(obj, str):
        if "\x00" in obj:
            raise ValueError("strings may not contain NUL characters")
        return obj
    if obj is None:
        return None
    raise TypeError(f"unsupported type {type(obj).__name__}")


def dumps(obj: Any, indent: int | None = None) -> str:
    """Serialize ``obj``; ``indent=None`` yields a single line (JSONL)."""
    text = json.dumps(_prepare(obj), sort_keys=True, indent=indent, ensure_ascii=False)
    return _TAGGED.sub(r"\1", text)


def round6(x: float) -> float:
    """The value a float takes after a write/read cycle."""
    return float(_fmt(float(x)))
