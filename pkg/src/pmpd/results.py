from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from .instance import close
from .walk import Walk, walk_to_dict


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    BEST_FOUND = "best_found"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Certificate:
    status: Status
    gap: Optional[float] = None  # relative gap (ub - lb) / lb for BEST_FOUND

    @classmethod
    def optimal(cls) -> "Certificate":
        return cls(Status.OPTIMAL, 0.0)

    @classmethod
    def best_found(cls, ub: float, lb: Optional[float]) -> "Certificate":
        if lb is None or lb <= 0:
            return cls(Status.BEST_FOUND, None)
        return cls(Status.BEST_FOUND, max(0.0, (ub - lb) / lb))

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def to_dict(self) -> dict:
        return {"status": self.status.value, "gap": self.gap}


@dataclass
class SolveResult:
    walk: Optional[Walk]
    ub: float
    lb: Optional[float]
    certificate: Certificate
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def gap_pct(self) -> Optional[float]:
        if self.lb is None or self.lb <= 0 or self.walk is None:
            return None
        if close(self.ub, self.lb):
            return 0.0
        return 100.0 * (self.ub - self.lb) / self.lb

    def to_dict(self) -> dict:
        return {
            "walk": walk_to_dict(self.walk) if self.walk is not None else None,
            "ub": self.ub,
            "lb": self.lb,
            "gap_pct": self.gap_pct,
            "certificate": self.certificate.to_dict(),
            "stats": self.stats,
        }
