"""
Exhaustive box search; the ground-truth oracle for every other engine.
"""

import logging
from itertools import product
from math import prod
from typing import List, Optional, Sequence

from core.exceptions import EnumerationBudgetError, PreconditionError
from core.ilp.program import IntegerProgram, Sense
from core.solvers.results import SolveResult, SolveStatus
from core.utils.budget import Deadline
from core.utils.config import setting
from core.utils.logging_utils import log_execution_time

logger = logging.getLogger(__name__)


def variable_ranges(p: IntegerProgram, box: int | Sequence[int]) -> List[range]:
    """Per-variable range ``[lower, min(upper, cap)]``."""
    caps = [box] * p.num_vars if isinstance(box, int) else list(box)
    if len(caps) != p.num_vars:
        raise PreconditionError(f"box has {len(caps)} caps, expected {p.num_vars}")
    ranges = []
    for j, cap in enumerate(caps):
        hi = cap if p.upper[j] is None else min(cap, p.upper[j])
        ranges.append(range(p.lower[j], hi + 1))
    return ranges


@log_execution_time()
def brute_force_feasibility(
    p: IntegerProgram,
    box: int | Sequence[int],
    max_points: Optional[int] = None,
    deadline: Optional[Deadline] = None,
) -> SolveResult:
    """
    Enumerate every integer point of the box and return the first feasible one.

    Args:
        p: An all-integral program
        box: Cap on every variable, or one cap per variable
        max_points: Guard on the number of points (default: COMPACT_ILP_ENUMERATION_MAX_POINTS)
        deadline: Optional wall-clock budget

    Returns:
        SolveResult: Feasible with the lexicographically first point, or Infeasible
        meaning no point of the box is feasible

    Raises:
        EnumerationBudgetError: if the box holds more points than the guard allows
    """
    if not all(p.integral):
        cols = [j for j, flag in enumerate(p.integral) if not flag]
        raise PreconditionError(f"brute force needs integral variables; cols {cols} are continuous")
    if max_points is None:
        max_points = int(setting("COMPACT_ILP_ENUMERATION_MAX_POINTS", 10**7))
    deadline = deadline or Deadline.from_settings("brute force")

    ranges = variable_ranges(p, box)
    points = prod(len(r) for r in ranges)
    if points > max_points:
        raise EnumerationBudgetError(
            f"box holds {points} points, enumeration guard is {max_points}"
        )

    columns = p.columns()
    m = p.num_constraints
    is_eq = p.sense is Sense.EQ
    checked = 0
    for x in product(*ranges):
        deadline.check()
        checked += 1
        activity = [0] * m
        for j, value in enumerate(x):
            if value:
                for r, coef in columns[j]:
                    activity[r] += coef * value
        if is_eq:
            ok = activity == list(p.rhs)
        else:
            ok = all(a <= b for a, b in zip(activity, p.rhs))
        if ok:
            assert p.is_satisfied_by(x)
            return SolveResult(
                SolveStatus.FEASIBLE, "brute", tuple(x), {"points_checked": checked, "box_points": points}
            )
    return SolveResult(SolveStatus.INFEASIBLE, "brute", None, {"points_checked": checked, "box_points": points})
