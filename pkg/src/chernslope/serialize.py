"""Canonical JSON helpers: exact rationals as {"num", "den"} string pairs."""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction


def rat(x) -> dict[str, str]:
    f = Fraction(x)
    return {"num": str(f.numerator), "den": str(f.denominator)}


def jsonable(obj):
    """Recursively convert to JSON-serializable structures; Fractions become
    {"num", "den"} string pairs so nothing is ever rounded."""
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    return obj


def canonical_json(obj) -> str:
    """Deterministic rendering: sorted keys, fixed separators, no floats
    beyond the explicitly *_approx convenience fields."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)
