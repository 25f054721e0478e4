"""
Exception hierarchy for compact-ilp.

Validation problems are ``ValueError`` subclasses and budget problems are
``RuntimeError`` subclasses, so callers that only know the builtin types keep
working. Management commands map them to exit codes 2 and 3.
"""


class CompactIlpError(Exception):
    """Base class for all errors raised by this project."""


class ProgramValidationError(CompactIlpError, ValueError):
    """An IntegerProgram violates one of its structural invariants."""


class FormatParseError(CompactIlpError, ValueError):
    """Malformed program text; carries the line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where = f" ({where})"
        super().__init__(f"{message}{where}")


class FieldOverflowError(CompactIlpError, ValueError):
    """A number does not fit in a fixed-width MPS field."""


class InstanceParseError(CompactIlpError, ValueError):
    """Syntax or validity error in a problem instance file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PreconditionError(CompactIlpError, ValueError):
    """An operation was called on an input outside its domain."""


class UncoveredEdgeError(PreconditionError):
    """A claimed vertex cover misses an edge."""


class WitnessLengthError(CompactIlpError, ValueError):
    """A witness has the wrong number of bits for its protocol."""


class StructureUsageError(CompactIlpError, RuntimeError):
    """A data structure was used outside its contract."""


class AuditFailure(CompactIlpError, AssertionError):
    """A published formula did not hold on a concrete instance."""


class EnumerationBudgetError(CompactIlpError, RuntimeError):
    """An exhaustive search would exceed its configured size guard."""


class BudgetExceededError(CompactIlpError, RuntimeError):
    """The wall-clock budget ran out."""


class GuardExceededError(EnumerationBudgetError):
    """An exact decider was given an instance above its size guard."""


class BlobFormatError(CompactIlpError, ValueError):
    """A serialized structure or advice blob is truncated or of the wrong kind."""
