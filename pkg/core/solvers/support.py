"""
Support audit: how many non-zero variables a solution needs.

The support bound is existential, so the audit looks for a minimum-support
certificate by re-running the lattice solver restricted to every column subset
of increasing size. On the support found it applies rhs reduction a second
time, to the restricted program, and reports the resulting norm.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Optional, Tuple

from core.exceptions import EnumerationBudgetError
from core.ilp.forms import compute_delta
from core.ilp.program import IntegerProgram
from core.solvers.bounds import support_bound
from core.solvers.lattice import check_lattice_form, lattice_feasibility
from core.solvers.proximity import reduce_rhs
from core.solvers.results import SolveResult

logger = logging.getLogger(__name__)


def support_of(x) -> Tuple[int, ...]:
    return tuple(j for j, v in enumerate(x) if v != 0)


@dataclass
class SupportAudit:
    feasible: bool
    support_bound: int
    solver_support: Optional[int] = None
    min_support: Optional[Tuple[int, ...]] = None
    certificate: Optional[Tuple[int, ...]] = None
    restricted_b_inf: Optional[int] = None
    restricted_bound: Optional[int] = None
    subsets_tried: int = 0
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def within_bound(self) -> bool:
        return self.min_support is None or len(self.min_support) <= self.support_bound

    def as_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "support_bound": self.support_bound,
            "solver_support": self.solver_support,
            "min_support": list(self.min_support) if self.min_support is not None else None,
            "restricted_b_inf": self.restricted_b_inf,
            "restricted_bound": self.restricted_bound,
            "subsets_tried": self.subsets_tried,
            "within_bound": self.within_bound,
        }


def minimum_support_audit(
    p: IntegerProgram,
    max_subsets: int = 20_000,
    solved: Optional[SolveResult] = None,
) -> SupportAudit:
    """
    Audit the support of ``p``'s solutions against ``support_bound``.

    Args:
        p: Equality-form program for the lattice solver
        max_subsets: Guard on the number of restricted solver runs
        solved: An existing lattice result for ``p``

    Returns:
        SupportAudit
    """
    check_lattice_form(p)
    stats = compute_delta(p)
    bound = support_bound(max(p.num_constraints, 1), max(stats.delta_A, 1))
    solved = solved or lattice_feasibility(p)
    audit = SupportAudit(feasible=solved.feasible, support_bound=bound)
    if not solved.feasible:
        return audit
    audit.solver_support = len(support_of(solved.certificate))

    tried = 0
    for size in range(0, min(bound, p.num_vars) + 1):
        for cols in combinations(range(p.num_vars), size):
            tried += 1
            if tried > max_subsets:
                raise EnumerationBudgetError(
                    f"support audit exceeded {max_subsets} restricted solves"
                )
            restricted = p.restrict_columns(cols)
            result = lattice_feasibility(restricted)
            if not result.feasible:
                continue
            x = [0] * p.num_vars
            for k, j in enumerate(cols):
                x[j] = result.certificate[k]
            audit.min_support = support_of(x)
            audit.certificate = tuple(x)
            audit.subsets_tried = tried

            again = reduce_rhs(restricted)
            if not again.ilp_infeasible:
                audit.restricted_b_inf = again.b_inf_after
                audit.restricted_bound = again.bound
            return audit
    audit.subsets_tried = tried
    audit.notes["min_support"] = "no solution within the support bound"
    logger.warning(f"no solution found with support <= {bound}")
    return audit
