"""
Set Cover as an integer program with ``|U| + 1`` constraints.
"""

import logging
from typing import Sequence, Tuple

from core.exceptions import AuditFailure
from core.ilp.program import IntegerProgram, Sense
from core.oracles.instances import SetCoverInstance

logger = logging.getLogger(__name__)


def set_cover_to_ilp(inst: SetCoverInstance, binary: bool = False) -> IntegerProgram:
    """
    One variable ``x_F`` per set, one covering row per element and one budget row.

    Covering rows ``sum_{F ∋ e} x_F >= 1`` are stored negated as ``<=`` rows; the
    last row is ``sum_F x_F <= budget``. Variables follow the order of
    ``inst.sets``.

    Args:
        inst: The instance
        binary: Add upper bounds 1 to every variable

    Returns:
        IntegerProgram: ``universe_size + 1`` rows, Δ(A) = 1 whenever there is a set
    """
    u, n = inst.universe_size, len(inst.sets)
    entries = []
    for j, members in enumerate(inst.sets):
        for e in members:
            entries.append((e, j, -1))
        entries.append((u, j, 1))
    rhs = (-1,) * u + (inst.budget,)
    program = IntegerProgram(
        u + 1,
        n,
        tuple(entries),
        rhs,
        Sense.LE,
        upper=(1,) * n if binary else None,
    )
    logger.debug(f"set cover reduction: u={u}, sets={n}, budget={inst.budget}, binary={binary}")
    return program


def cover_from_solution(inst: SetCoverInstance, x: Sequence[int]) -> Tuple[int, ...]:
    """
    Indices of the sets picked by a solution.

    Raises:
        AuditFailure: ``x`` has the wrong length, or the picked sets miss an
            element or exceed the budget
    """
    if len(x) != len(inst.sets):
        raise AuditFailure(f"solution has {len(x)} entries for {len(inst.sets)} sets")
    chosen = tuple(j for j, v in enumerate(x) if v > 0)
    covered = set()
    for j in chosen:
        covered.update(inst.sets[j])
    missing = sorted(set(range(inst.universe_size)) - covered)
    if missing:
        raise AuditFailure(f"picked sets miss element {missing[0]}")
    if len(chosen) > inst.budget:
        raise AuditFailure(f"{len(chosen)} sets picked, budget is {inst.budget}")
    return chosen
