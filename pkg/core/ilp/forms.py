"""
Normal-form transformations and norm accounting for integer programs.
"""

import logging
from dataclasses import dataclass

from core.exceptions import PreconditionError
from core.ilp.program import IntegerProgram, Sense

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeltaStats:
    """Largest absolute matrix entry and largest absolute rhs entry."""

    delta_A: int
    b_inf_norm: int

    def as_dict(self) -> dict:
        return {"delta": self.delta_A, "b_inf": self.b_inf_norm}


def compute_delta(p: IntegerProgram) -> DeltaStats:
    """Return Δ(A) and ||b||∞; both are 0 for empty data."""
    delta = max((abs(coef) for _, _, coef in p.entries), default=0)
    b_inf = max((abs(b) for b in p.rhs), default=0)
    return DeltaStats(delta_A=delta, b_inf_norm=b_inf)


def to_equality_form(p: IntegerProgram) -> IntegerProgram:
    """
    Add one slack variable per row to turn ``A x <= b`` into ``[A | I] x' = b``.

    Variable ``n + i`` is the slack of row ``i``. Projecting a solution of the
    output onto its first ``n`` coordinates gives a solution of the input and
    every input solution extends by ``b - A x``.

    Args:
        p: Program in standard form without upper bounds with sense LE

    Returns:
        IntegerProgram: Equality-form program with ``m`` rows and ``n + m`` variables

    Raises:
        PreconditionError: if ``p`` has equality sense, upper bounds, non-zero lower
            bounds or continuous variables
    """
    if p.sense is not Sense.LE:
        raise PreconditionError("to_equality_form expects a program with sense 'le'")
    if p.has_upper_bounds:
        cols = [j for j, u in enumerate(p.upper) if u is not None]
        raise PreconditionError(f"to_equality_form rejects upper bounds (cols {cols})")
    if not p.is_standard_without_upper_bounds:
        raise PreconditionError(
            "to_equality_form expects non-negative integral variables with lower bound 0"
        )
    m, n = p.num_constraints, p.num_vars
    entries = p.entries + tuple((i, n + i, 1) for i in range(m))
    objective = p.objective + (0,) * m if p.objective is not None else None
    return IntegerProgram(
        m,
        n + m,
        entries,
        p.rhs,
        Sense.EQ,
        objective=objective,
    )
