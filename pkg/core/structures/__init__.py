"""Verifier-side data structures, each with an operation counter and a reference twin."""

from core.structures.bad_tuples import NEG_INF, POS_INF, BadTupleIndex, ExtendedRational, box_is_bad, midpoints
from core.structures.counters import OpCounter
from core.structures.failure_oracle import FailureMode, FailureOracle, OracleState, RecomputeOracle, subdivide
from core.structures.path_tables import RecomputePathTables, TreePathTables
from core.structures.string_store import LiteralStringStore, StringStore

__all__ = [
    "BadTupleIndex",
    "ExtendedRational",
    "FailureMode",
    "FailureOracle",
    "LiteralStringStore",
    "NEG_INF",
    "OpCounter",
    "OracleState",
    "POS_INF",
    "RecomputeOracle",
    "RecomputePathTables",
    "StringStore",
    "TreePathTables",
    "box_is_bad",
    "midpoints",
    "subdivide",
]
