"""Verification outcome records shared by every checking routine."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if hasattr(value, "item"):  # numpy scalar
        return _jsonable(value.item())
    return value


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking one claimed bound against a measurement.

    ``margin`` is signed so that a non-negative margin means the claim held.
    ``discrepancy`` marks a failure that reflects an inconsistency in a
    published constant rather than a numerical problem in this package.
    """

    claim: str
    measured: float
    bound: float
    margin: float
    passed: bool
    witness: Any = None
    tolerance: float = 0.0
    discrepancy: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "measured": _jsonable(self.measured),
            "bound": _jsonable(self.bound),
            "margin": _jsonable(self.margin),
            "witness": _jsonable(self.witness),
            "pass": self.passed,
            "tolerance": self.tolerance,
            "discrepancy": self.discrepancy,
            "details": _jsonable(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
