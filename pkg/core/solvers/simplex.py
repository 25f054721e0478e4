"""
Exact rational two-phase simplex with Bland's rule.

Used for the LP relaxation in rhs reduction and for the continuous part of
mixed programs. All arithmetic is on ``fractions.Fraction``, so the vertex is
exact and its componentwise floor is well defined.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from core.exceptions import PreconditionError
from core.ilp.program import IntegerProgram, Sense
from core.utils.logging_utils import log_execution_time

logger = logging.getLogger(__name__)


class LpStatus(str, Enum):
    VERTEX = "Vertex"
    INFEASIBLE = "Infeasible"
    UNBOUNDED_FEASIBLE = "Unbounded-feasible"


@dataclass
class LpResult:
    status: LpStatus
    vertex: Optional[Tuple[Fraction, ...]] = None
    basis: Tuple[int, ...] = ()
    pivots: int = 0
    objective_value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status is not LpStatus.INFEASIBLE


@dataclass
class _Tableau:
    """Dense tableau ``[T | rhs]`` with a reduced-cost row and the basic column of each row."""

    rows: List[List[Fraction]]
    basis: List[int]
    cost: List[Fraction] = field(default_factory=list)
    pivots: int = 0

    def pivot(self, row: int, col: int) -> None:
        pivot_row = self.rows[row]
        factor = pivot_row[col]
        if factor != 1:
            self.rows[row] = pivot_row = [v / factor for v in pivot_row]
        for i, other in enumerate(self.rows):
            if i != row and other[col] != 0:
                scale = other[col]
                self.rows[i] = [a - scale * p for a, p in zip(other, pivot_row)]
        if self.cost and self.cost[col] != 0:
            scale = self.cost[col]
            self.cost = [a - scale * p for a, p in zip(self.cost, pivot_row)]
        self.basis[row] = col
        self.pivots += 1

    def entering(self, allowed: int) -> Optional[int]:
        """Bland: lowest-index column with negative reduced cost."""
        for j in range(allowed):
            if self.cost[j] < 0:
                return j
        return None

    def leaving(self, col: int) -> Optional[int]:
        """Minimum ratio; ties go to the row whose basic variable has the lowest index."""
        best = None
        best_key = None
        for i, row in enumerate(self.rows):
            if row[col] > 0:
                key = (row[-1] / row[col], self.basis[i])
                if best_key is None or key < best_key:
                    best, best_key = i, key
        return best

    def run(self, allowed: int) -> bool:
        """Pivot to optimality over the first ``allowed`` columns; False when unbounded."""
        while True:
            col = self.entering(allowed)
            if col is None:
                return True
            row = self.leaving(col)
            if row is None:
                return False
            self.pivot(row, col)

    def solution(self, n: int) -> Tuple[Fraction, ...]:
        x = [Fraction(0)] * n
        for i, col in enumerate(self.basis):
            if col < n:
                x[col] = self.rows[i][-1]
        return tuple(x)


def solve_standard_lp(
    rows: Sequence[Sequence[int | Fraction]],
    rhs: Sequence[int | Fraction],
    objective: Optional[Sequence[int | Fraction]] = None,
    num_vars: Optional[int] = None,
) -> LpResult:
    """
    Find a basic feasible solution of ``{A x = b, x >= 0}``.

    With an objective, phase 2 minimizes it; an unbounded objective returns
    ``UNBOUNDED_FEASIBLE`` with the last vertex reached.

    Args:
        rows: Dense rows of ``A``
        rhs: ``b``
        objective: Optional cost vector to minimize
        num_vars: Column count, needed when there are no rows

    Returns:
        LpResult: status, exact vertex and final basis
    """
    m = len(rows)
    n = num_vars if num_vars is not None else (len(rows[0]) if rows else 0)
    if m == 0:
        zero = tuple(Fraction(0) for _ in range(n))
        if objective is not None and any(c < 0 for c in objective):
            return LpResult(LpStatus.UNBOUNDED_FEASIBLE, zero)
        return LpResult(LpStatus.VERTEX, zero, (), 0, Fraction(0))

    # Phase 1: artificial column n+i for row i, rows sign-normalized to b >= 0.
    table: List[List[Fraction]] = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        sign = -1 if b < 0 else 1
        line = [Fraction(sign * a) for a in row] + [Fraction(0)] * m + [Fraction(sign * b)]
        line[n + i] = Fraction(1)
        table.append(line)
    width = n + m
    cost = [Fraction(0)] * (width + 1)
    for line in table:
        for j in range(n):
            cost[j] -= line[j]
        cost[-1] -= line[-1]
    tableau = _Tableau(table, list(range(n, n + m)), cost)
    tableau.run(width)
    if tableau.cost[-1] != 0:
        logger.debug(f"phase 1 ended with infeasibility {-tableau.cost[-1]}")
        return LpResult(LpStatus.INFEASIBLE, pivots=tableau.pivots)

    # Drive zero-level artificials out of the basis; rows that cannot pivot are redundant.
    i = 0
    while i < len(tableau.rows):
        if tableau.basis[i] >= n:
            col = next((j for j in range(n) if tableau.rows[i][j] != 0), None)
            if col is None:
                del tableau.rows[i]
                del tableau.basis[i]
                continue
            tableau.pivot(i, col)
        i += 1
    tableau.rows = [row[:n] + [row[-1]] for row in tableau.rows]

    if objective is None or not any(objective):
        return LpResult(LpStatus.VERTEX, tableau.solution(n), tuple(tableau.basis), tableau.pivots, Fraction(0))

    # Phase 2 on the original columns.
    cost = [Fraction(c) for c in objective] + [Fraction(0)]
    for i, col in enumerate(tableau.basis):
        if cost[col] != 0:
            scale = cost[col]
            cost = [a - scale * p for a, p in zip(cost, tableau.rows[i])]
    tableau.cost = cost
    bounded = tableau.run(n)
    x = tableau.solution(n)
    value = sum((Fraction(c) * v for c, v in zip(objective, x)), Fraction(0))
    status = LpStatus.VERTEX if bounded else LpStatus.UNBOUNDED_FEASIBLE
    return LpResult(status, x, tuple(tableau.basis), tableau.pivots, value)


@log_execution_time()
def lp_vertex_relaxation(p: IntegerProgram, use_objective: bool = False) -> LpResult:
    """
    Basic feasible solution of the LP relaxation ``{A x = b, x >= 0}`` of ``p``.

    Integrality flags are ignored. With ``use_objective`` the program's objective
    is minimized; otherwise any vertex is returned.
    """
    if p.sense is not Sense.EQ:
        raise PreconditionError("lp_vertex_relaxation needs an equality-form program (sense 'eq')")
    if p.has_upper_bounds or any(lo != 0 for lo in p.lower):
        raise PreconditionError("lp_vertex_relaxation needs bounds x >= 0 only")
    objective = p.objective if use_objective else None
    result = solve_standard_lp(p.dense(), p.rhs, objective, num_vars=p.num_vars)
    if result.vertex is not None:
        relaxed = replace(p, integral=(False,) * p.num_vars)
        assert relaxed.is_satisfied_by(result.vertex), "LP vertex failed re-substitution"
    return result
