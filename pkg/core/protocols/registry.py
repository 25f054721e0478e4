"""
Protocol lookup by name.
"""

from typing import Dict

from core.protocols.base import Protocol
from core.protocols.discretization import DiscretizationProtocol
from core.protocols.ilp_feasibility import IlpProtocol
from core.protocols.long_path import LongPathProtocol
from core.protocols.mcsp import McspProtocol
from core.protocols.multiway_cut import MultiwayCutProtocol
from core.protocols.rway_cut import RWayCutProtocol
from core.protocols.steiner import SteinerProtocol

PROTOCOLS: Dict[str, type] = {
    cls.name: cls
    for cls in (
        RWayCutProtocol,
        MultiwayCutProtocol,
        McspProtocol,
        LongPathProtocol,
        SteinerProtocol,
        DiscretizationProtocol,
        IlpProtocol,
    )
}


def get_protocol(name: str) -> Protocol:
    """
    Instantiate the protocol registered under ``name``.

    Raises:
        KeyError: Unknown protocol name
    """
    try:
        return PROTOCOLS[name]()
    except KeyError:
        raise KeyError(f"unknown protocol '{name}'; choose from {', '.join(PROTOCOLS)}") from None


def rwaycut_protocol() -> Protocol:
    return RWayCutProtocol()


def multiwaycut_protocol() -> Protocol:
    return MultiwayCutProtocol()


def mcsp_protocol() -> Protocol:
    return McspProtocol()


def longpath_protocol() -> Protocol:
    return LongPathProtocol()


def steiner_protocol() -> Protocol:
    return SteinerProtocol()


def discretization_protocol() -> Protocol:
    return DiscretizationProtocol()
