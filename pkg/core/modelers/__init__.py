"""Problem-to-program reductions."""

from core.modelers.set_cover import cover_from_solution, set_cover_to_ilp
from core.modelers.vertex_cover import (
    VcWitnessSet,
    extract_cover,
    formulation_audit,
    vc_2approx,
    wvc_to_binary_ilp,
    wvc_to_milp,
)

__all__ = [
    "VcWitnessSet",
    "cover_from_solution",
    "extract_cover",
    "formulation_audit",
    "set_cover_to_ilp",
    "vc_2approx",
    "wvc_to_binary_ilp",
    "wvc_to_milp",
]
