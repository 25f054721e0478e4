"""Feasibility engines and the bound/proximity machinery."""

from core.solvers.bounds import proximity_bound, proximity_radius, radius_from_bounds, support_bound
from core.solvers.brute_force import brute_force_feasibility
from core.solvers.lattice import lattice_feasibility
from core.solvers.milp import milp_feasibility
from core.solvers.proximity import RhsReduction, reduce_rhs
from core.solvers.results import RadiusSource, SearchRadius, SolveResult, SolveStatus
from core.solvers.simplex import LpResult, LpStatus, lp_vertex_relaxation
from core.solvers.support import SupportAudit, minimum_support_audit

__all__ = [
    "LpResult",
    "LpStatus",
    "RadiusSource",
    "RhsReduction",
    "SearchRadius",
    "SolveResult",
    "SolveStatus",
    "SupportAudit",
    "brute_force_feasibility",
    "lattice_feasibility",
    "lp_vertex_relaxation",
    "milp_feasibility",
    "minimum_support_audit",
    "proximity_bound",
    "proximity_radius",
    "radius_from_bounds",
    "reduce_rhs",
    "support_bound",
]
