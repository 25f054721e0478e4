"""
Closed-form bounds used as search caps.

The asymptotic statements these come from leave their constants open; the
instantiations here are conservative and are validated against brute force,
never relied on as proofs.
"""

from core.exceptions import PreconditionError
from core.solvers.results import RadiusSource, SearchRadius


def _ceil_log2(x: int) -> int:
    """Smallest w with 2**w >= x, for x >= 1."""
    return (x - 1).bit_length()


def radius_from_bounds(m: int, delta: int, b_inf: int) -> SearchRadius:
    """ℓ1 cap ``(2·m·Δ)^(2m) · (||b||∞ + 1)`` on a smallest solution of ``Ax = b, x >= 0``."""
    if m < 1 or delta < 1:
        raise PreconditionError(f"radius_from_bounds needs m >= 1 and delta >= 1, got m={m}, delta={delta}")
    if b_inf < 0:
        raise PreconditionError(f"b_inf must be non-negative, got {b_inf}")
    return SearchRadius(l1_cap=(2 * m * delta) ** (2 * m) * (b_inf + 1), source=RadiusSource.PROVEN_BOUND)


def support_bound(m: int, delta: int) -> int:
    """Number of non-zero variables some solution is guaranteed to fit in."""
    if m < 1 or delta < 1:
        raise PreconditionError(f"support_bound needs m >= 1 and delta >= 1, got m={m}, delta={delta}")
    return 4 * m * (_ceil_log2(m + 1) + _ceil_log2(delta + 1) + 1)


def proximity_bound(m: int, delta: int) -> int:
    """Target for ||b'||∞ after rhs reduction, with the unknown constant set to 1."""
    return (m * max(delta, 1)) ** (m + 1)


def proximity_radius(m: int, delta: int) -> int:
    """
    ℓ1 distance within which an integer solution exists around any LP vertex.

    Holds for ``Ax = b, x >= 0`` with a zero objective: every vertex is optimal,
    so some feasible integer point lies within ``m·(2·m·Δ + 1)^m`` of it.
    """
    return m * (2 * m * max(delta, 1) + 1) ** m
