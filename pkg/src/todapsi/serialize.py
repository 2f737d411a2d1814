"""JSON conversion for every exact value type (rationals become "p/q")."""
from __future__ import annotations

import json
from fractions import Fraction

from .curve import CurveElement
from .exact import ExtInt, MultiPoly, QuadExt, format_rational


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (QuadExt, ExtInt, MultiPoly, CurveElement)):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if type(obj).__module__ == "numpy":
        return to_jsonable(obj.item())
    if repr(obj) == "inf":
        return "inf"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False) + "\n"
