from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

PASS, FAIL, ERROR = "pass", "fail", "error"

REPORT_FIELDS = ("check", "status", "max_residual", "argmax_point", "tolerance",
                 "points", "seed", "diagnostics")


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one sampled verification.

    ``max_residual`` is the largest normalized residual seen, ``None`` when the
    check could not evaluate (domain error, precondition failure).
    """

    check: str
    status: str
    max_residual: Optional[float]
    argmax_point: Optional[dict]
    tolerance: float
    points: int
    seed: int
    diagnostics: str = ""
    details: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        residual = self.max_residual
        if residual is not None and not math.isfinite(residual):
            residual = None
        return {
            "check": self.check,
            "status": self.status,
            "max_residual": residual,
            "argmax_point": self.argmax_point,
            "tolerance": self.tolerance,
            "points": self.points,
            "seed": self.seed,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False, allow_nan=False)

    def renamed(self, check: str) -> "CheckReport":
        return replace(self, check=check)
