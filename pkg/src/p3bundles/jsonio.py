"""Canonical JSON emission: byte-identical output for equal payloads.

Keys are sorted, separators fixed, floats forbidden.  Fractions serialize as
"p/q" strings so reports stay exact end to end.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any


def _normalize(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return int(obj)
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        raise TypeError("floats are banned from reports; use Fraction or int")
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, separators=(",", ":"))


def canonical_json_pretty(obj: Any) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=2)


def content_hash(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
