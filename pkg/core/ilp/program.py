"""
Integer and mixed integer program representation.

``IntegerProgram`` is the exchange type between modelers, solvers, exporters
and the ILP protocol. Coefficients are Python ints, so no bound computed from
the program can overflow.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from core.exceptions import ProgramValidationError

logger = logging.getLogger(__name__)

Entry = Tuple[int, int, int]
Number = int | Fraction


class Sense(str, Enum):
    """Uniform constraint sense of a program."""

    LE = "le"
    EQ = "eq"


@dataclass(frozen=True)
class IntegerProgram:
    """
    A system ``A x (<=|=) b`` with per-variable bounds and integrality flags.

    ``upper`` uses ``None`` for +infinity. Entries are stored sorted row-major and
    entries with coefficient 0 are dropped, so two programs describing the same
    system compare equal.
    """

    num_constraints: int
    num_vars: int
    entries: Tuple[Entry, ...] = ()
    rhs: Tuple[int, ...] = ()
    sense: Sense = Sense.LE
    lower: Optional[Tuple[int, ...]] = None
    upper: Optional[Tuple[Optional[int], ...]] = None
    integral: Optional[Tuple[bool, ...]] = None
    objective: Optional[Tuple[int, ...]] = None
    _columns: Optional[Tuple[Tuple[Tuple[int, int], ...], ...]] = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        m, n = self.num_constraints, self.num_vars
        if not isinstance(m, int) or m < 0:
            raise ProgramValidationError(f"num_constraints must be a non-negative int, got {m!r}")
        if not isinstance(n, int) or n < 0:
            raise ProgramValidationError(f"num_vars must be a non-negative int, got {n!r}")

        seen: Dict[Tuple[int, int], int] = {}
        for entry in self.entries:
            if len(entry) != 3:
                raise ProgramValidationError(f"matrix entry {entry!r} is not a (row, col, coef) triple")
            r, c, coef = entry
            _require_int(coef, f"coefficient at (row {r}, col {c})")
            if not (0 <= r < m) or not (0 <= c < n):
                raise ProgramValidationError(
                    f"matrix entry (row {r}, col {c}) outside a {m}x{n} program"
                )
            if (r, c) in seen:
                raise ProgramValidationError(f"duplicate matrix entry at (row {r}, col {c})")
            seen[(r, c)] = coef
        entries = tuple(sorted((r, c, coef) for (r, c), coef in seen.items() if coef != 0))

        rhs = tuple(self.rhs)
        if len(rhs) != m:
            raise ProgramValidationError(f"rhs has {len(rhs)} entries, expected {m}")
        for i, value in enumerate(rhs):
            _require_int(value, f"rhs of row {i}")

        lower = tuple(self.lower) if self.lower is not None else (0,) * n
        upper = tuple(self.upper) if self.upper is not None else (None,) * n
        integral = tuple(bool(f) for f in self.integral) if self.integral is not None else (True,) * n
        for name, vector in (("lower", lower), ("upper", upper), ("integral", integral)):
            if len(vector) != n:
                raise ProgramValidationError(f"{name} has {len(vector)} entries, expected {n}")
        for j, (lo, hi) in enumerate(zip(lower, upper)):
            _require_int(lo, f"lower bound of col {j}")
            if hi is not None:
                _require_int(hi, f"upper bound of col {j}")
                if lo > hi:
                    raise ProgramValidationError(f"bound inversion at col {j}: lower {lo} > upper {hi}")

        objective = None
        if self.objective is not None:
            objective = tuple(self.objective)
            if len(objective) != n:
                raise ProgramValidationError(f"objective has {len(objective)} entries, expected {n}")
            for j, value in enumerate(objective):
                _require_int(value, f"objective coefficient of col {j}")

        sense = Sense(self.sense)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "integral", integral)
        object.__setattr__(self, "objective", objective)

    @classmethod
    def build(
        cls,
        rows: Sequence[Sequence[int]],
        rhs: Sequence[int],
        senses: Sequence[str] | str = "<=",
        num_vars: Optional[int] = None,
        **kwargs,
    ) -> "IntegerProgram":
        """
        Build a program from dense rows and per-row senses.

        ``>=`` rows are negated into ``<=`` rows. Equalities cannot be mixed with
        inequalities because the stored sense is uniform.

        Args:
            rows: Dense coefficient rows
            rhs: Right-hand side, one value per row
            senses: One of ``<=``, ``>=``, ``=`` per row, or a single sense for all rows
            num_vars: Number of variables; inferred from the rows when omitted
            **kwargs: lower, upper, integral, objective passed to the constructor

        Returns:
            IntegerProgram: The normalized program
        """
        m = len(rows)
        if len(rhs) != m:
            raise ProgramValidationError(f"rhs has {len(rhs)} entries, expected {m}")
        if isinstance(senses, str):
            senses = [senses] * m
        if len(senses) != m:
            raise ProgramValidationError(f"senses has {len(senses)} entries, expected {m}")
        n = num_vars if num_vars is not None else max((len(row) for row in rows), default=0)

        normalized = set()
        for i, s in enumerate(senses):
            if s not in ("<=", ">=", "="):
                raise ProgramValidationError(f"unknown sense {s!r} at row {i}")
            normalized.add("=" if s == "=" else "<=")
        if len(normalized) > 1:
            raise ProgramValidationError("cannot mix equality rows with inequality rows")
        sense = Sense.EQ if normalized == {"="} else Sense.LE

        entries: List[Entry] = []
        new_rhs: List[int] = []
        for i, (row, s) in enumerate(zip(rows, senses)):
            if len(row) > n:
                raise ProgramValidationError(f"row {i} has {len(row)} coefficients, expected {n}")
            sign = -1 if s == ">=" else 1
            entries.extend((i, j, sign * a) for j, a in enumerate(row) if a != 0)
            new_rhs.append(sign * rhs[i])
        return cls(m, n, tuple(entries), tuple(new_rhs), sense, **kwargs)

    # ------------------------------------------------------------------
    # Classification
    # ------------------------------------------------------------------
    @property
    def has_upper_bounds(self) -> bool:
        return any(u is not None for u in self.upper)

    @property
    def is_standard_without_upper_bounds(self) -> bool:
        return (
            all(lo == 0 for lo in self.lower)
            and not self.has_upper_bounds
            and all(self.integral)
        )

    @property
    def is_binary(self) -> bool:
        return (
            all(lo == 0 for lo in self.lower)
            and all(u == 1 for u in self.upper)
            and all(self.integral)
        )

    @property
    def integral_count(self) -> int:
        return sum(self.integral)

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------
    def columns(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """Sparse columns: for each variable the ``(row, coef)`` pairs, sorted by row."""
        if self._columns is None:
            cols: List[List[Tuple[int, int]]] = [[] for _ in range(self.num_vars)]
            for r, c, coef in self.entries:
                cols[c].append((r, coef))
            object.__setattr__(self, "_columns", tuple(tuple(col) for col in cols))
        return self._columns

    def column_vector(self, j: int) -> Tuple[int, ...]:
        vector = [0] * self.num_constraints
        for r, coef in self.columns()[j]:
            vector[r] = coef
        return tuple(vector)

    def dense(self) -> List[List[int]]:
        rows = [[0] * self.num_vars for _ in range(self.num_constraints)]
        for r, c, coef in self.entries:
            rows[r][c] = coef
        return rows

    def activity(self, x: Sequence[Number]) -> List[Number]:
        """Row activities ``A x``."""
        if len(x) != self.num_vars:
            raise ProgramValidationError(f"vector has {len(x)} entries, expected {self.num_vars}")
        totals: List[Number] = [0] * self.num_constraints
        for r, c, coef in self.entries:
            totals[r] += coef * x[c]
        return totals

    def violations(self, x: Sequence[Number]) -> List[str]:
        """Every violated row, bound and integrality flag, as readable strings."""
        if len(x) != self.num_vars:
            return [f"vector has {len(x)} entries, expected {self.num_vars}"]
        problems: List[str] = []
        for j, value in enumerate(x):
            if value < self.lower[j]:
                problems.append(f"col {j}: {value} below lower bound {self.lower[j]}")
            if self.upper[j] is not None and value > self.upper[j]:
                problems.append(f"col {j}: {value} above upper bound {self.upper[j]}")
            if self.integral[j] and Fraction(value).denominator != 1:
                problems.append(f"col {j}: {value} is not integral")
        for i, (lhs, b) in enumerate(zip(self.activity(x), self.rhs)):
            if self.sense is Sense.EQ and lhs != b:
                problems.append(f"row {i}: {lhs} != {b}")
            elif self.sense is Sense.LE and lhs > b:
                problems.append(f"row {i}: {lhs} > {b}")
        return problems

    def is_satisfied_by(self, x: Sequence[Number]) -> bool:
        """Exact re-substitution check of rows, bounds and integrality."""
        return not self.violations(x)

    # ------------------------------------------------------------------
    # Derived programs
    # ------------------------------------------------------------------
    def with_rhs(self, rhs: Iterable[int]) -> "IntegerProgram":
        return replace(self, rhs=tuple(rhs))

    def restrict_columns(self, cols: Sequence[int]) -> "IntegerProgram":
        """Keep only the given columns, renumbered in the order given."""
        index = {c: k for k, c in enumerate(cols)}
        if len(index) != len(cols):
            raise ProgramValidationError(f"duplicate column in restriction {list(cols)}")
        for c in cols:
            if not 0 <= c < self.num_vars:
                raise ProgramValidationError(f"column {c} outside a program with {self.num_vars} vars")
        entries = tuple((r, index[c], coef) for r, c, coef in self.entries if c in index)
        return IntegerProgram(
            self.num_constraints,
            len(cols),
            entries,
            self.rhs,
            self.sense,
            lower=tuple(self.lower[c] for c in cols),
            upper=tuple(self.upper[c] for c in cols),
            integral=tuple(self.integral[c] for c in cols),
            objective=(
                tuple(self.objective[c] for c in cols) if self.objective is not None else None
            ),
        )


def _require_int(value, what: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProgramValidationError(f"{what} must be an integer, got {value!r}")
