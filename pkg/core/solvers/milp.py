"""
Mixed integer feasibility by enumerating the integral variables.

For each assignment of the (bounded) integral variables, the remaining system
in the continuous variables is put in standard form and handed to the exact
simplex.
"""

import logging
from fractions import Fraction
from itertools import product
from math import prod
from typing import List, Optional, Sequence, Tuple

from core.exceptions import EnumerationBudgetError, PreconditionError
from core.ilp.program import IntegerProgram, Sense
from core.solvers.results import SolveResult, SolveStatus
from core.solvers.simplex import solve_standard_lp
from core.utils.budget import Deadline
from core.utils.config import setting
from core.utils.logging_utils import log_execution_time

logger = logging.getLogger(__name__)


def continuous_system(
    p: IntegerProgram, fixed: Sequence[Tuple[int, int]]
) -> Tuple[List[List[int]], List[int], List[int]]:
    """
    Standard-form LP in the continuous variables once integral ones are fixed.

    Continuous variable ``y_j`` is shifted to ``y_j - lower_j >= 0``; each finite
    upper bound adds a row with its own slack, and each ``<=`` row gets a slack.

    Returns:
        (rows, rhs, continuous column ids) with the first ``len(ids)`` columns
        being the shifted continuous variables
    """
    continuous = [j for j in range(p.num_vars) if not p.integral[j]]
    position = {j: k for k, j in enumerate(continuous)}
    bounded = [j for j in continuous if p.upper[j] is not None]
    m = p.num_constraints
    row_slacks = m if p.sense is Sense.LE else 0
    width = len(continuous) + row_slacks + len(bounded)

    rows = [[0] * width for _ in range(m)]
    rhs = list(p.rhs)
    fixed_values = dict(fixed)
    for r, c, coef in p.entries:
        if c in fixed_values:
            rhs[r] -= coef * fixed_values[c]
        else:
            rows[r][position[c]] = coef
            rhs[r] -= coef * p.lower[c]
    if row_slacks:
        for i in range(m):
            rows[i][len(continuous) + i] = 1
    for k, j in enumerate(bounded):
        line = [0] * width
        line[position[j]] = 1
        line[len(continuous) + row_slacks + k] = 1
        rows.append(line)
        rhs.append(p.upper[j] - p.lower[j])
    return rows, rhs, continuous


@log_execution_time()
def milp_feasibility(
    p: IntegerProgram,
    max_assignments: Optional[int] = None,
    deadline: Optional[Deadline] = None,
) -> SolveResult:
    """
    Decide feasibility of a mixed program.

    Args:
        p: Program whose integral variables all have finite bounds
        max_assignments: Guard on the integral box (default: COMPACT_ILP_MILP_MAX_ASSIGNMENTS)
        deadline: Optional wall-clock budget

    Returns:
        SolveResult: Feasible with integral values as ints and continuous values as Fractions
    """
    integral = [j for j in range(p.num_vars) if p.integral[j]]
    unbounded = [j for j in integral if p.upper[j] is None]
    if unbounded:
        raise PreconditionError(f"milp_feasibility needs finite bounds on integral cols {unbounded}")
    if max_assignments is None:
        max_assignments = int(setting("COMPACT_ILP_MILP_MAX_ASSIGNMENTS", 2**20))
    deadline = deadline or Deadline.from_settings("milp enumeration")

    ranges = [range(p.lower[j], p.upper[j] + 1) for j in integral]
    total = prod(len(r) for r in ranges)
    if total > max_assignments:
        raise EnumerationBudgetError(
            f"{len(integral)} integral variables span {total} assignments, guard is {max_assignments}"
        )

    lp_calls = 0
    for values in product(*ranges):
        deadline.check(every=64)
        fixed = list(zip(integral, values))
        rows, rhs, continuous = continuous_system(p, fixed)
        lp_calls += 1
        width = len(rows[0]) if rows else len(continuous)
        lp = solve_standard_lp(rows, rhs, num_vars=width)
        if not lp.feasible:
            continue
        x: List[int | Fraction] = [0] * p.num_vars
        for j, v in fixed:
            x[j] = v
        for k, j in enumerate(continuous):
            value = lp.vertex[k] + p.lower[j]
            x[j] = int(value) if Fraction(value).denominator == 1 else Fraction(value)
        certificate = tuple(x)
        assert p.is_satisfied_by(certificate), "MILP certificate failed re-substitution"
        return SolveResult(
            SolveStatus.FEASIBLE,
            "milp",
            certificate,
            {"assignments": total, "lp_calls": lp_calls, "integral_vars": len(integral)},
        )
    return SolveResult(
        SolveStatus.INFEASIBLE,
        "milp",
        None,
        {"assignments": total, "lp_calls": lp_calls, "integral_vars": len(integral)},
    )
