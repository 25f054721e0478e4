"""
Import and export of integer programs.

Three formats are supported:

- ``canonical-json``: byte-deterministic, versioned (``"v": 1``), all big
  integers as decimal strings. Round-trips exactly.
- ``lp-text``: CPLEX LP dialect. Feasibility programs get a constant-zero objective.
- ``mps-text``: free MPS; ``fixed=True`` produces fixed-column MPS and raises
  FieldOverflowError for numbers wider than the 12-character numeric field.
"""

import json
import logging
import re
from typing import Annotated, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, StringConstraints, ValidationError

from core.exceptions import FieldOverflowError, FormatParseError, ProgramValidationError
from core.ilp.program import IntegerProgram, Sense

logger = logging.getLogger(__name__)

FORMATS = ("canonical-json", "lp-text", "mps-text")
CANONICAL_VERSION = 1
MPS_FIELD_WIDTH = 12
MPS_NAME_WIDTH = 8

DecimalInt = Annotated[str, StringConstraints(pattern=r"^-?[0-9]+$")]
DecimalOrInf = Annotated[str, StringConstraints(pattern=r"^(-?[0-9]+|inf)$")]


class CanonicalProgramDocument(BaseModel):
    """Schema of the canonical-json document."""

    model_config = ConfigDict(extra="forbid", strict=True)

    v: Literal[1]
    m: int
    n: int
    sense: Literal["le", "eq"]
    entries: List[Tuple[int, int, DecimalInt]]
    b: List[DecimalInt]
    lower: List[DecimalInt]
    upper: List[DecimalOrInf]
    integral: List[bool]
    objective: Optional[List[DecimalInt]]

    def to_program(self) -> IntegerProgram:
        return IntegerProgram(
            self.m,
            self.n,
            tuple((r, c, int(coef)) for r, c, coef in self.entries),
            tuple(int(b) for b in self.b),
            Sense(self.sense),
            lower=tuple(int(lo) for lo in self.lower),
            upper=tuple(None if hi == "inf" else int(hi) for hi in self.upper),
            integral=tuple(self.integral),
            objective=(
                tuple(int(c) for c in self.objective) if self.objective is not None else None
            ),
        )


def export_program(p: IntegerProgram, format: str = "canonical-json", fixed: bool = False) -> bytes:
    """
    Serialize a program.

    Args:
        p: The program
        format: One of ``canonical-json``, ``lp-text``, ``mps-text``
        fixed: For ``mps-text`` only, emit fixed-column MPS

    Returns:
        bytes: UTF-8 encoded document
    """
    if format == "canonical-json":
        return _export_json(p)
    if format == "lp-text":
        return _export_lp(p)
    if format == "mps-text":
        return _export_mps(p, fixed=fixed)
    raise ValueError(f"unknown program format {format!r}; expected one of {', '.join(FORMATS)}")


def import_program(data: bytes | str, format: str = "canonical-json") -> IntegerProgram:
    """
    Parse a program and validate its invariants.

    Raises:
        FormatParseError: malformed document, with line/column where known
        ProgramValidationError: well-formed document violating a program invariant
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    if format == "canonical-json":
        return _import_json(text)
    if format == "lp-text":
        return _LpParser(text).parse()
    if format == "mps-text":
        return _import_mps(text)
    raise ValueError(f"unknown program format {format!r}; expected one of {', '.join(FORMATS)}")


# ----------------------------------------------------------------------
# canonical-json
# ----------------------------------------------------------------------
def _export_json(p: IntegerProgram) -> bytes:
    document = {
        "v": CANONICAL_VERSION,
        "m": p.num_constraints,
        "n": p.num_vars,
        "sense": p.sense.value,
        "entries": [[r, c, str(coef)] for r, c, coef in p.entries],
        "b": [str(b) for b in p.rhs],
        "lower": [str(lo) for lo in p.lower],
        "upper": ["inf" if hi is None else str(hi) for hi in p.upper],
        "integral": list(p.integral),
        "objective": [str(c) for c in p.objective] if p.objective is not None else None,
    }
    return (json.dumps(document, separators=(",", ":")) + "\n").encode("utf-8")


def _import_json(text: str) -> IntegerProgram:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatParseError(f"malformed JSON: {e.msg}", e.lineno, e.colno) from e
    if not isinstance(raw, dict):
        raise FormatParseError("canonical-json document must be an object", 1, 1)
    try:
        document = CanonicalProgramDocument.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        line, column = _line_column(text, _json_offset(text, first["loc"]))
        raise FormatParseError(
            f"invalid canonical-json at '{location}': {first['msg']} ({e.error_count()} error(s))",
            line,
            column,
        ) from e
    return document.to_program()


_WHITESPACE = re.compile(r"\s*")


def _json_offset(text: str, loc: Tuple) -> int:
    """
    Offset of the value a validation error location points at.

    Follows ``loc`` through the (already well-formed) document; a key or index
    that is not there stops the walk at its closest existing ancestor.
    """
    decoder = json.JSONDecoder()
    pos = _WHITESPACE.match(text, 0).end()
    for part in loc:
        child = _json_child(decoder, text, pos, part)
        if child is None:
            break
        pos = child
    return pos


def _json_child(decoder: json.JSONDecoder, text: str, pos: int, part) -> Optional[int]:
    opener = text[pos : pos + 1]
    if not ((opener == "{" and isinstance(part, str)) or (opener == "[" and isinstance(part, int))):
        return None
    pos = _WHITESPACE.match(text, pos + 1).end()
    index = 0
    while text[pos : pos + 1] not in ("}", "]", ""):
        if opener == "{":
            key, pos = decoder.raw_decode(text, pos)
            # past the colon
            pos = _WHITESPACE.match(text, _WHITESPACE.match(text, pos).end() + 1).end()
            if key == part:
                return pos
        elif index == part:
            return pos
        _, pos = decoder.raw_decode(text, pos)
        pos = _WHITESPACE.match(text, pos).end()
        if text[pos : pos + 1] == ",":
            pos = _WHITESPACE.match(text, pos + 1).end()
        index += 1
    return None


def _line_column(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - text.rfind("\n", 0, offset)


# ----------------------------------------------------------------------
# lp-text
# ----------------------------------------------------------------------
def _lp_terms(pairs: List[Tuple[int, int]], per_line: int = 8) -> str:
    chunks: List[str] = []
    for k, (coef, j) in enumerate(pairs):
        sign = "-" if coef < 0 else "+"
        term = f"{abs(coef)} x{j}"
        if k == 0:
            chunks.append(f"-{term}" if coef < 0 else term)
        else:
            if k % per_line == 0:
                chunks.append(f"\n   {sign} {term}")
            else:
                chunks.append(f" {sign} {term}")
    return "".join(chunks)


def _export_lp(p: IntegerProgram) -> bytes:
    n = p.num_vars
    lines = ["\\ compact-ilp lp-text", "Minimize"]
    objective = p.objective if p.objective is not None else (0,) * n
    # Every variable is listed in the objective so that column order survives import.
    obj = _lp_terms([(c, j) for j, c in enumerate(objective)]) if n else "0"
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    rows: List[List[Tuple[int, int]]] = [[] for _ in range(p.num_constraints)]
    for r, c, coef in p.entries:
        rows[r].append((coef, c))
    op = "=" if p.sense is Sense.EQ else "<="
    for i, row in enumerate(rows):
        lhs = _lp_terms(row) if row else ("0 x0" if n else "0")
        lines.append(f" c{i}: {lhs} {op} {p.rhs[i]}")
    lines.append("Bounds")
    for j in range(n):
        lo, hi = p.lower[j], p.upper[j]
        if hi is None:
            lines.append(f" x{j} >= {lo}")
        else:
            lines.append(f" {lo} <= x{j} <= {hi}")
    general = [f"x{j}" for j in range(n) if p.integral[j]]
    if general:
        lines.append("General")
        for k in range(0, len(general), 10):
            lines.append(" " + " ".join(general[k : k + 10]))
    lines.append("End")
    return ("\n".join(lines) + "\n").encode("utf-8")


_LP_SECTIONS = {
    "minimize": "min",
    "minimise": "min",
    "minimum": "min",
    "min": "min",
    "maximize": "max",
    "maximise": "max",
    "maximum": "max",
    "max": "max",
    "subject to": "st",
    "such that": "st",
    "st": "st",
    "s.t.": "st",
    "bounds": "bounds",
    "bound": "bounds",
    "general": "general",
    "generals": "general",
    "gen": "general",
    "binary": "binary",
    "binaries": "binary",
    "bin": "binary",
    "end": "end",
}

_LP_TOKEN = re.compile(
    r"\s*(?:(?P<label>[A-Za-z_][\w.]*)\s*:(?!=)"
    r"|(?P<op><=|>=|=<|=>|=|<|>)"
    r"|(?P<num>\d+)"
    r"|(?P<sign>[+-])"
    r"|(?P<ident>[A-Za-z_][\w.\[\]]*))"
)


class _LpParser:
    """Token-level parser for the LP subset written by ``_export_lp``."""

    def __init__(self, text: str):
        self.text = text
        self.names: Dict[str, int] = {}
        self.objective: Dict[int, int] = {}
        self.maximize = False
        self.rows: List[Tuple[Dict[int, int], str, int, int]] = []
        self.lower: Dict[int, int] = {}
        self.upper: Dict[int, Optional[int]] = {}
        self.integral: set = set()

    def _var(self, name: str) -> int:
        if name not in self.names:
            self.names[name] = len(self.names)
        return self.names[name]

    def _tokens(self, line: str, lineno: int) -> List[Tuple[str, str, int]]:
        tokens = []
        pos = 0
        stripped = line.rstrip()
        while pos < len(stripped):
            match = _LP_TOKEN.match(stripped, pos)
            if not match or match.end() == pos:
                raise FormatParseError(f"unexpected character {stripped[pos]!r}", lineno, pos + 1)
            kind = match.lastgroup
            tokens.append((kind, match.group(kind), lineno))
            pos = match.end()
        return tokens

    def parse(self) -> IntegerProgram:
        section = None
        statement: List[Tuple[str, str, int]] = []
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("\\", 1)[0]
            if not line.strip():
                continue
            key = " ".join(line.strip().lower().split())
            if key in _LP_SECTIONS and not line[:1].isspace():
                if section in ("min", "max", "st") and statement:
                    self._flush(section, statement)
                    statement = []
                section = _LP_SECTIONS[key]
                if section in ("min", "max"):
                    self.maximize = section == "max"
                if section == "end":
                    break
                continue
            if section is None:
                raise FormatParseError("content before the objective section", lineno, 1)
            tokens = self._tokens(line, lineno)
            if section in ("min", "max"):
                statement.extend(tokens)
            elif section == "st":
                if tokens and tokens[0][0] == "label" and statement:
                    self._flush(section, statement)
                    statement = []
                statement.extend(tokens)
                if _is_complete_constraint(statement):
                    self._flush(section, statement)
                    statement = []
            elif section == "bounds":
                self._bound(tokens, lineno)
            elif section in ("general", "binary"):
                for kind, text, _ in tokens:
                    if kind != "ident":
                        raise FormatParseError(f"expected a variable name, got {text!r}", lineno)
                    j = self._var(text)
                    self.integral.add(j)
                    if section == "binary":
                        self.lower[j], self.upper[j] = 0, 1
            else:
                raise FormatParseError(f"unexpected content in section {section}", lineno)
        else:
            raise FormatParseError("missing End marker")
        return self._program()

    def _linear(self, tokens, lineno) -> Tuple[Dict[int, int], int]:
        """Parse ``[+-] [num] ident ...``; returns coefficients and the bare constant."""
        coefs: Dict[int, int] = {}
        constant = 0
        k = 0
        while k < len(tokens):
            sign = 1
            if tokens[k][0] == "sign":
                sign = -1 if tokens[k][1] == "-" else 1
                k += 1
            value = None
            if k < len(tokens) and tokens[k][0] == "num":
                value = int(tokens[k][1])
                k += 1
            if k < len(tokens) and tokens[k][0] == "ident":
                j = self._var(tokens[k][1])
                coefs[j] = coefs.get(j, 0) + sign * (1 if value is None else value)
                k += 1
            elif value is not None:
                constant += sign * value
            else:
                found = tokens[k][1] if k < len(tokens) else "end of expression"
                raise FormatParseError(f"expected a term, got {found!r}", lineno)
        return coefs, constant

    def _flush(self, section, statement) -> None:
        lineno = statement[0][2]
        tokens = list(statement)
        if tokens[0][0] == "label":
            tokens = tokens[1:]
        if section in ("min", "max"):
            coefs, constant = self._linear(tokens, lineno)
            if constant:
                logger.debug(f"ignoring objective constant {constant}")
            for j, c in coefs.items():
                self.objective[j] = self.objective.get(j, 0) + c
            return
        ops = [k for k, t in enumerate(tokens) if t[0] == "op"]
        if len(ops) != 1:
            raise FormatParseError("constraint needs exactly one comparison operator", lineno)
        k = ops[0]
        coefs, constant = self._linear(tokens[:k], lineno)
        rhs_coefs, rhs = self._linear(tokens[k + 1 :], lineno)
        if rhs_coefs:
            raise FormatParseError("variables on the right-hand side are not supported", lineno)
        op = {"=<": "<=", "=>": ">=", "<": "<=", ">": ">="}.get(tokens[k][1], tokens[k][1])
        self.rows.append((coefs, op, rhs - constant, lineno))

    def _bound(self, tokens, lineno) -> None:
        def number(k: int) -> Tuple[Optional[int], int]:
            sign = 1
            if tokens[k][0] == "sign":
                sign = -1 if tokens[k][1] == "-" else 1
                k += 1
            kind, text, _ = tokens[k]
            if kind == "num":
                return sign * int(text), k + 1
            if kind == "ident" and text.lower() in ("inf", "infinity"):
                if sign < 0:
                    raise FormatParseError("lower bound -inf is not supported", lineno)
                return None, k + 1
            raise FormatParseError(f"expected a number, got {text!r}", lineno)

        try:
            if tokens[0][0] == "ident" and len(tokens) == 2 and tokens[1][1].lower() == "free":
                raise FormatParseError("free variables are not supported", lineno)
            if tokens[0][0] == "ident" and tokens[1][0] == "op":
                j = self._var(tokens[0][1])
                value, end = number(2)
                op = tokens[1][1]
                if op in (">=", "=>", ">"):
                    if value is None:
                        raise FormatParseError("lower bound +inf is not supported", lineno)
                    self.lower[j] = value
                elif op in ("<=", "=<", "<"):
                    self.upper[j] = value
                else:
                    self.lower[j] = self.upper[j] = value
            else:
                lo, k = number(0)
                if tokens[k][0] != "op" or tokens[k + 1][0] != "ident":
                    raise FormatParseError("expected 'lo <= var <= hi'", lineno)
                j = self._var(tokens[k + 1][1])
                if lo is None:
                    raise FormatParseError("lower bound +inf is not supported", lineno)
                self.lower[j] = lo
                if k + 2 < len(tokens):
                    hi, end = number(k + 3)
                    self.upper[j] = hi
                else:
                    end = k + 2
        except IndexError as e:
            raise FormatParseError("truncated bound statement", lineno) from e
        if end != len(tokens):
            raise FormatParseError("trailing tokens in bound statement", lineno)

    def _program(self) -> IntegerProgram:
        n = len(self.names)
        senses = {op for _, op, _, _ in self.rows}
        if "=" in senses and len(senses) > 1:
            raise ProgramValidationError("cannot mix equality rows with inequality rows")
        sense = Sense.EQ if senses == {"="} else Sense.LE
        entries = []
        rhs = []
        for i, (coefs, op, b, _) in enumerate(self.rows):
            sign = -1 if op == ">=" else 1
            entries.extend((i, j, sign * c) for j, c in coefs.items())
            rhs.append(sign * b)
        objective = None
        if any(self.objective.values()):
            sign = -1 if self.maximize else 1
            objective = tuple(sign * self.objective.get(j, 0) for j in range(n))
        return IntegerProgram(
            len(self.rows),
            n,
            tuple(entries),
            tuple(rhs),
            sense,
            lower=tuple(self.lower.get(j, 0) for j in range(n)),
            upper=tuple(self.upper.get(j) for j in range(n)),
            integral=tuple(j in self.integral for j in range(n)),
            objective=objective,
        )


def _is_complete_constraint(statement) -> bool:
    kinds = [t[0] for t in statement]
    if "op" not in kinds:
        return False
    tail = kinds[kinds.index("op") + 1 :]
    return tail in (["num"], ["sign", "num"])


# ----------------------------------------------------------------------
# mps-text
# ----------------------------------------------------------------------
def _mps_number(value: int, where: str, fixed: bool) -> str:
    text = str(value)
    if fixed and len(text) > MPS_FIELD_WIDTH:
        raise FieldOverflowError(
            f"{where}: value {text} has {len(text)} characters, "
            f"fixed MPS numeric fields hold {MPS_FIELD_WIDTH}"
        )
    return text


def _mps_line(fields: List[str], fixed: bool) -> str:
    if not fixed:
        indent = "    " if not fields[0] else " "
        return indent + " ".join(f for f in fields if f)
    f1, f2, f3, f4 = (fields + ["", "", "", ""])[:4]
    return f" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}".rstrip()


def _export_mps(p: IntegerProgram, fixed: bool = False) -> bytes:
    n, m = p.num_vars, p.num_constraints
    if fixed and max(n, m) > 10 ** (MPS_NAME_WIDTH - 1):
        raise FieldOverflowError(f"fixed MPS names hold {MPS_NAME_WIDTH} characters")
    row_type = "E" if p.sense is Sense.EQ else "L"
    lines = ["NAME          COMPACT" if fixed else "NAME compact-ilp", "ROWS"]
    lines.append(_mps_line(["N", "obj"], fixed))
    lines.extend(_mps_line([row_type, f"c{i}"], fixed) for i in range(m))
    lines.append("COLUMNS")
    objective = p.objective if p.objective is not None else (0,) * n
    columns = p.columns()
    in_int = False
    marker = 0
    for j in range(n):
        if p.integral[j] != in_int:
            kind = "'INTORG'" if p.integral[j] else "'INTEND'"
            lines.append(_mps_line(["", f"M{marker}", "'MARKER'", kind], fixed))
            marker += 1
            in_int = p.integral[j]
        value = _mps_number(objective[j], f"objective coefficient of col {j}", fixed)
        lines.append(_mps_line(["", f"x{j}", "obj", value], fixed))
        for r, coef in columns[j]:
            value = _mps_number(coef, f"coefficient at (row {r}, col {j})", fixed)
            lines.append(_mps_line(["", f"x{j}", f"c{r}", value], fixed))
    if in_int:
        lines.append(_mps_line(["", f"M{marker}", "'MARKER'", "'INTEND'"], fixed))
    lines.append("RHS")
    for i, b in enumerate(p.rhs):
        if b != 0:
            lines.append(_mps_line(["", "RHS", f"c{i}", _mps_number(b, f"rhs of row {i}", fixed)], fixed))
    lines.append("BOUNDS")
    for j in range(n):
        lo, hi = p.lower[j], p.upper[j]
        if hi is not None and lo == hi:
            lines.append(_mps_line(["FX", "BND", f"x{j}", _mps_number(lo, f"bound of col {j}", fixed)], fixed))
            continue
        if lo != 0:
            lines.append(_mps_line(["LO", "BND", f"x{j}", _mps_number(lo, f"lower bound of col {j}", fixed)], fixed))
        if hi is None:
            lines.append(_mps_line(["PL", "BND", f"x{j}"], fixed))
        else:
            lines.append(_mps_line(["UP", "BND", f"x{j}", _mps_number(hi, f"upper bound of col {j}", fixed)], fixed))
    lines.append("ENDATA")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_int(text: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        as_float = float(text)
    except ValueError as e:
        raise FormatParseError(f"expected a number, got {text!r}", lineno) from e
    if not as_float.is_integer():
        raise FormatParseError(f"non-integer value {text!r} is not supported", lineno)
    return int(as_float)


def _import_mps(text: str) -> IntegerProgram:
    section = None
    row_kind: Dict[str, str] = {}
    row_index: Dict[str, int] = {}
    objective_row = None
    col_index: Dict[str, int] = {}
    integral: List[bool] = []
    coefs: Dict[Tuple[int, int], int] = {}
    objective: Dict[int, int] = {}
    rhs: Dict[int, int] = {}
    lower: Dict[int, int] = {}
    upper: Dict[int, Optional[int]] = {}
    in_int = False

    def column(name: str) -> int:
        if name not in col_index:
            col_index[name] = len(col_index)
            integral.append(in_int)
        return col_index[name]

    ended = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.startswith("*"):
            continue
        fields = raw.split()
        if not raw[0].isspace():
            section = fields[0].upper()
            if section == "ENDATA":
                ended = True
                break
            if section not in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES", "OBJSENSE"):
                raise FormatParseError(f"unknown MPS section {fields[0]!r}", lineno, 1)
            if section == "RANGES":
                raise FormatParseError("RANGES are not supported", lineno, 1)
            continue
        if section == "ROWS":
            if len(fields) != 2 or fields[0].upper() not in ("N", "L", "G", "E"):
                raise FormatParseError("expected '<N|L|G|E> <row>'", lineno)
            kind, name = fields[0].upper(), fields[1]
            if kind == "N":
                if objective_row is None:
                    objective_row = name
                continue
            row_kind[name] = kind
            row_index[name] = len(row_index)
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1] == "'MARKER'":
                marker = fields[2].upper()
                if marker == "'INTORG'":
                    in_int = True
                elif marker == "'INTEND'":
                    in_int = False
                else:
                    raise FormatParseError(f"unknown marker {fields[2]!r}", lineno)
                continue
            if len(fields) not in (3, 5):
                raise FormatParseError("expected '<col> <row> <value> [<row> <value>]'", lineno)
            j = column(fields[0])
            for name, value in zip(fields[1::2], fields[2::2]):
                amount = _parse_int(value, lineno)
                if name == objective_row:
                    objective[j] = amount
                elif name in row_index:
                    key = (row_index[name], j)
                    if key in coefs:
                        raise ProgramValidationError(
                            f"duplicate matrix entry at (row {key[0]}, col {key[1]})"
                        )
                    coefs[key] = amount
                else:
                    raise FormatParseError(f"unknown row {name!r}", lineno)
        elif section == "RHS":
            pairs = fields[1:] if len(fields) % 2 == 1 else fields
            for name, value in zip(pairs[::2], pairs[1::2]):
                if name == objective_row:
                    continue
                if name not in row_index:
                    raise FormatParseError(f"unknown row {name!r}", lineno)
                rhs[row_index[name]] = _parse_int(value, lineno)
        elif section == "BOUNDS":
            if len(fields) < 3:
                raise FormatParseError("expected '<type> <set> <col> [<value>]'", lineno)
            kind, name = fields[0].upper(), fields[2]
            if name not in col_index:
                raise FormatParseError(f"unknown column {name!r}", lineno)
            j = col_index[name]
            value = _parse_int(fields[3], lineno) if len(fields) > 3 else None
            if kind in ("LO", "UP", "FX", "LI", "UI") and value is None:
                raise FormatParseError(f"bound type {kind} needs a value", lineno)
            if kind in ("LO", "LI"):
                lower[j] = value
            elif kind in ("UP", "UI"):
                upper[j] = value
            elif kind == "FX":
                lower[j] = upper[j] = value
            elif kind == "PL":
                upper[j] = None
            elif kind == "BV":
                lower[j], upper[j] = 0, 1
                integral[j] = True
            else:
                raise FormatParseError(f"bound type {kind} is not supported", lineno)
        elif section in ("NAME", "OBJSENSE"):
            continue
        else:
            raise FormatParseError("data outside a section", lineno)
    if not ended:
        raise FormatParseError("missing ENDATA marker")

    kinds = set(row_kind.values())
    if "E" in kinds and len(kinds) > 1:
        raise ProgramValidationError("cannot mix equality rows with inequality rows")
    sense = Sense.EQ if kinds == {"E"} else Sense.LE
    sign = {name: (-1 if kind == "G" else 1) for name, kind in row_kind.items()}
    signs_by_index = {row_index[name]: s for name, s in sign.items()}
    n, m = len(col_index), len(row_index)
    entries = tuple((r, c, signs_by_index[r] * v) for (r, c), v in coefs.items())
    return IntegerProgram(
        m,
        n,
        entries,
        tuple(signs_by_index[i] * rhs.get(i, 0) for i in range(m)),
        sense,
        lower=tuple(lower.get(j, 0) for j in range(n)),
        upper=tuple(upper.get(j) for j in range(n)),
        integral=tuple(integral),
        objective=(
            tuple(objective.get(j, 0) for j in range(n)) if any(objective.values()) else None
        ),
    )
