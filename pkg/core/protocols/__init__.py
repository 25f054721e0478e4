"""Witness verification protocols."""

from core.protocols.base import (
    CostReport,
    Decision,
    Preprocessed,
    Protocol,
    Verdict,
    VerifierReport,
    Witness,
    audit_costs,
    count_width,
    enumerate_decide,
    width,
)
from core.protocols.registry import (
    PROTOCOLS,
    discretization_protocol,
    get_protocol,
    longpath_protocol,
    mcsp_protocol,
    multiwaycut_protocol,
    rwaycut_protocol,
    steiner_protocol,
)

__all__ = [
    "CostReport",
    "Decision",
    "PROTOCOLS",
    "Preprocessed",
    "Protocol",
    "Verdict",
    "VerifierReport",
    "Witness",
    "audit_costs",
    "count_width",
    "discretization_protocol",
    "enumerate_decide",
    "get_protocol",
    "longpath_protocol",
    "mcsp_protocol",
    "multiwaycut_protocol",
    "rwaycut_protocol",
    "steiner_protocol",
    "width",
]
