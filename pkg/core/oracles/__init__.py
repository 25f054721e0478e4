"""
Problem instances, exact deciders, instance files and generators.

Only the instance types are re-exported here; the modelers and protocols import
them, so the heavier modules are imported by path.
"""

from core.oracles.instances import (
    INSTANCE_TYPES,
    VARIANTS,
    DiscretizationInstance,
    LongPathInstance,
    McspInstance,
    MultiwayCutInstance,
    ProblemInstance,
    RWayCutInstance,
    SetCoverInstance,
    SimpleGraph,
    SteinerInstance,
    WvcInstance,
)

__all__ = [
    "INSTANCE_TYPES",
    "VARIANTS",
    "DiscretizationInstance",
    "LongPathInstance",
    "McspInstance",
    "MultiwayCutInstance",
    "ProblemInstance",
    "RWayCutInstance",
    "SetCoverInstance",
    "SimpleGraph",
    "SteinerInstance",
    "WvcInstance",
]
