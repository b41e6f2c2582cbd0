"""Machine-readable check reports and their JSON encoding."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

POSITIVE = "positive"
CONTROL = "control"
INFORMATIONAL = "informational"


def encode(obj):
    """Recursively convert to JSON-ready values; complex numbers become ``[re, im]``."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "__dataclass_fields__"):
        return encode(asdict(obj))
    return obj


def decode_complex(value) -> complex:
    """Inverse of :func:`encode` for a scalar: accepts ``[re, im]`` or a plain number."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex scalar must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float, complex)):
        return complex(value)
    raise ValueError(f"cannot read a complex number from {value!r}")


@dataclass
class CheckReport:
    """Outcome of one numerical verification.

    ``kind`` is ``"positive"`` (must pass), ``"control"`` (a deliberately
    broken input that must fail) or ``"informational"`` (never gates).
    """

    check_name: str
    parameters: dict
    seed: int
    samples: int
    max_residual: float
    tolerance: float
    notes: list = field(default_factory=list)
    kind: str = POSITIVE
    passed: bool = field(init=False)

    def __post_init__(self):
        self.max_residual = float(self.max_residual)
        self.passed = bool(self.max_residual <= self.tolerance)

    @property
    def ok(self) -> bool:
        """Whether the report meets its expectation (controls are expected to fail)."""
        if self.kind == INFORMATIONAL:
            return True
        if self.kind == CONTROL:
            return not self.passed
        return self.passed

    def to_dict(self):
        d = encode(asdict(self))
        d["ok"] = self.ok
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def summarize(reports) -> dict:
    reports = sorted(reports, key=lambda r: r.check_name)
    gating = [r for r in reports if r.kind != INFORMATIONAL]
    return {
        "reports": [r.to_dict() for r in reports],
        "summary": {
            "total": len(reports),
            "gating": len(gating),
            "ok": sum(r.ok for r in gating),
            "failed": [r.check_name for r in gating if not r.ok],
            "all_ok": all(r.ok for r in gating),
        },
    }
