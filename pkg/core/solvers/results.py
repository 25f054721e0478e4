"""
Result types shared by the feasibility engines.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple


class SolveStatus(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    BOUND_EXHAUSTED = "BoundExhausted"


class RadiusSource(str, Enum):
    PROVEN_BOUND = "ProvenBound"
    USER_OVERRIDE = "UserOverride"


@dataclass(frozen=True)
class SearchRadius:
    """An ℓ1 cap on the solutions a search looks at, and where it came from."""

    l1_cap: int
    source: RadiusSource = RadiusSource.PROVEN_BOUND


@dataclass
class SolveResult:
    """
    Outcome of a feasibility engine.

    A Feasible result always carries a certificate that re-substitutes exactly;
    the engines check this before returning.
    """

    status: SolveStatus
    engine: str
    certificate: Optional[Tuple[int | Fraction, ...]] = None
    stats: Dict[str, Any] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is SolveStatus.FEASIBLE

    def as_dict(self) -> Dict[str, Any]:
        """JSON-ready view; rationals are written as ``p/q`` strings."""
        certificate = None
        if self.certificate is not None:
            certificate = [_number_text(v) for v in self.certificate]
        return {
            "status": self.status.value,
            "engine": self.engine,
            "certificate": certificate,
            "stats": dict(self.stats),
        }


def _number_text(value: int | Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
