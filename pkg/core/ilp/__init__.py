"""Integer program representation, normal forms and file formats."""

from core.ilp.forms import DeltaStats, compute_delta, to_equality_form
from core.ilp.formats import FORMATS, export_program, import_program
from core.ilp.program import IntegerProgram, Sense

__all__ = [
    "DeltaStats",
    "FORMATS",
    "IntegerProgram",
    "Sense",
    "compute_delta",
    "export_program",
    "import_program",
    "to_equality_form",
]
