"""
The placement delivery array, its verifier, and its text formats.

A cell is either the star '*' or a symbol label. A label is a plain integer or a
tuple of integers (the two-dimensional vectors the constructions fill in).
A row index is either a subfile j or a pair (i, j) naming packet i of subfile j.

Classes:
- Pda: An immutable F x K array.
- PdaStats: Statistics of an array that satisfies C1-C3.
- Violation: A broken condition and its witness cells.
- VerificationReport: Either stats or the violations.

Functions:
- is_star(cell) -> bool
- subfile_of(row_index) -> int
- symbol_map(pda) -> Dict[Label, int]
- verify(pda) -> VerificationReport
- verify_against_placement(pda, params) -> bool
- canonicalize_symbols(pda) -> Pda
- to_grid_text(pda) -> str / from_grid_text(text) -> Pda
- to_record(pda) -> str / from_record(text) -> Pda
- parse(text) -> Pda

Constants:
- STAR: The star cell.
"""

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union
from source import exceptions
from source.pda.params import SystemParams
from source.pda.placement import is_retrievable

logger = logging.getLogger(__name__)

STAR = "*"
RECORD_FORMAT = "pda-record"
RECORD_VERSION = 1

Label = Union[int, Tuple[int, ...]]
Cell = Union[str, int, Tuple[int, ...]]
RowIndex = Union[int, Tuple[int, int]]


class RowKind(Enum):
    """How rows are indexed."""
    PLAIN = "plain"
    PAIR = "pair"


def is_star(cell: Cell) -> bool:
    """Returns True for the star cell."""
    return cell == STAR


def subfile_of(row_index: RowIndex) -> int:
    """
    Returns the subfile component j of a row index.

    Exceptions:
    - ShapeError: If the row index carries no subfile component.
    """
    if isinstance(row_index, int) and not isinstance(row_index, bool):
        return row_index
    if isinstance(row_index, tuple) and len(row_index) == 2:
        return row_index[1]
    raise exceptions.ShapeError(f"Row index {row_index!r} has no subfile component")


@dataclass(frozen=True)
class Pda:
    """
    An F x K array of stars and symbol labels.

    Attributes:
    - K: Number of columns (users).
    - rows: The row indices, in row order.
    - grid: One tuple of cells per row.
    - provenance: Which construction produced the array; ignored by equality.
    """
    K: int
    rows: Tuple[RowIndex, ...]
    grid: Tuple[Tuple[Cell, ...], ...]
    provenance: str = field(default="manual", compare=False)

    def __post_init__(self):
        if self.K < 1:
            raise exceptions.ShapeError(f"An array needs at least one column, got K={self.K}")
        if len(self.rows) != len(self.grid):
            raise exceptions.ShapeError(
                f"{len(self.rows)} row indices for {len(self.grid)} grid rows"
            )
        if len(set(self.rows)) != len(self.rows):
            raise exceptions.ShapeError("Row indices must be unique")
        for position, row in enumerate(self.grid):
            if len(row) != self.K:
                raise exceptions.ShapeError(
                    f"Row {position + 1} has {len(row)} cells, expected {self.K}"
                )

    @property
    def F(self) -> int:  # pylint: disable=invalid-name
        """Number of rows."""
        return len(self.rows)

    @property
    def row_kind(self) -> RowKind:
        """PAIR when rows are (i, j) pairs, PLAIN otherwise."""
        return RowKind.PAIR if self.rows and isinstance(self.rows[0], tuple) else RowKind.PLAIN

    def position_of(self, row_index: RowIndex) -> int:
        """Returns the zero-based row position of a row index."""
        try:
            return self.rows.index(row_index)
        except ValueError:
            raise exceptions.ShapeError(f"No row indexed {row_index!r}") from None

    def entry(self, row_index: RowIndex, k: int) -> Cell:
        """Returns P(row_index, k) with k in [1:K]."""
        if not 1 <= k <= self.K:
            raise exceptions.ShapeError(f"Column {k} outside [1:{self.K}]")
        return self.grid[self.position_of(row_index)][k - 1]

    def cells(self):
        """Yields (row position, column, cell) in row-major order, columns one-based."""
        for position, row in enumerate(self.grid):
            for k, cell in enumerate(row, start=1):
                yield position, k, cell

    def with_cell(self, row_position: int, k: int, cell: Cell) -> "Pda":
        """Returns a copy with one cell replaced."""
        grid = [list(row) for row in self.grid]
        grid[row_position][k - 1] = cell
        return Pda(
            K=self.K, rows=self.rows, grid=tuple(tuple(row) for row in grid),
            provenance=f"{self.provenance}+edit",
        )


@dataclass(frozen=True)
class PdaStats:
    """
    Statistics of an array that satisfies C1-C3.

    Attributes:
    - K, F: Columns and rows.
    - Z: Stars per column.
    - S: Number of distinct symbols.
    - multiplicities: Canonical symbol -> occurrence count g_s.
    - g_min, g_max: Extremes of the multiplicities, 0 when S = 0.
    - regular: True when every symbol occurs equally often.
    - rate: S / F.
    - memory_ratio: Z / F.
    """
    K: int
    F: int
    Z: int
    S: int
    multiplicities: Dict[int, int]
    g_min: int
    g_max: int
    regular: bool
    rate: Fraction
    memory_ratio: Fraction

    @property
    def average_gain(self) -> Fraction:
        """Average number of users one message serves; 0 when nothing is sent."""
        if self.S == 0:
            return Fraction(0)
        return Fraction(self.F * self.K - self.Z * self.K, self.S)

    def summary(self) -> str:
        """Returns 'g-(K,F,Z,S) PDA', without the g- prefix when irregular or empty."""
        body = f"({self.K},{self.F},{self.Z},{self.S}) PDA"
        if self.regular and self.S > 0:
            return f"{self.g_min}-{body}"
        return body


@dataclass(frozen=True)
class Violation:
    """
    A broken PDA condition.

    Attributes:
    - condition: 'C1', 'C2' or 'C3'.
    - message: What is wrong.
    - cells: Witness cells as (row position, column), row positions zero-based.
    """
    condition: str
    message: str
    cells: Tuple[Tuple[int, int], ...] = ()

    def __str__(self) -> str:
        return f"{self.condition} violation: {self.message}"


@dataclass(frozen=True)
class VerificationReport:
    """
    Either stats (ok) or the violations found.

    Attributes:
    - stats: Statistics, set only when every condition holds.
    - violations: The first violation of each broken condition, in C1, C2, C3 order.
    """
    stats: Optional[PdaStats] = None
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        """True when the array is a PDA."""
        return not self.violations

    @property
    def violation(self) -> Optional[Violation]:
        """The first violation, or None."""
        return self.violations[0] if self.violations else None

    def broken_conditions(self) -> List[str]:
        """Names of the broken conditions."""
        return [violation.condition for violation in self.violations]


def symbol_map(pda: Pda) -> Dict[Label, int]:
    """
    Maps every label to 1..S in row-major order of first occurrence.

    Parameters:
    - pda (Pda): The array.

    Returns:
    - Dict[Label, int]: label -> canonical integer.
    """
    mapping = {}
    for _, _, cell in pda.cells():
        if not is_star(cell) and cell not in mapping:
            mapping[cell] = len(mapping) + 1
    return mapping


def _labels_canonicalize(labels) -> Optional[str]:
    """Returns a reason when the labels cannot be read as symbols 1..S, else None."""
    kinds = {"int" if isinstance(label, int) and not isinstance(label, bool) else
             "vector" if isinstance(label, tuple) else "other" for label in labels}
    if "other" in kinds:
        return "labels must be integers or integer vectors"
    if len(kinds) > 1:
        return "integer and vector labels are mixed"
    if kinds == {"int"} and set(labels) != set(range(1, len(labels) + 1)):
        return f"integer labels {sorted(labels)} are not exactly 1..{len(labels)}"
    return None


def _first_cross_violation(pda: Pda, groups) -> List[Violation]:
    for label, members in groups.items():
        for (j1, k1), (j2, k2) in combinations(members, 2):
            if j1 == j2 or k1 == k2 \
                    or not is_star(pda.grid[j1][k2 - 1]) or not is_star(pda.grid[j2][k1 - 1]):
                return [Violation(
                    "C3",
                    f"symbol {_format_label(label)} at (row {j1 + 1}, column {k1}) and "
                    f"(row {j2 + 1}, column {k2})",
                    ((j1, k1), (j2, k2)),
                )]
    return []


def verify(pda: Pda) -> VerificationReport:
    """
    Checks C1-C3 and computes the statistics.

    C1: every column holds the same number Z of stars.
    C2: the labels read as the symbols 1..S with no gaps (vector labels are
    canonicalized first, so any set of vectors qualifies).
    C3: two cells with the same symbol lie in distinct rows and columns and the
    two cross cells are stars.

    Cells are grouped by label first, so the cost is O(F*K + sum of g_s^2).

    Parameters:
    - pda (Pda): The array to verify.

    Returns:
    - VerificationReport: Stats, or the first violation of each broken condition.
    """
    star_counts = [0] * pda.K
    groups: Dict[Label, List[Tuple[int, int]]] = defaultdict(list)
    for position, k, cell in pda.cells():
        if is_star(cell):
            star_counts[k - 1] += 1
        else:
            groups[cell].append((position, k))

    violations: List[Violation] = []
    if len(set(star_counts)) > 1:
        first = star_counts[0]
        column = next(k for k, count in enumerate(star_counts, start=1) if count != first)
        violations.append(Violation(
            "C1", f"column 1 has {first} stars but column {column} has "
                  f"{star_counts[column - 1]}",
        ))

    reason = _labels_canonicalize(list(groups))
    if reason:
        violations.append(Violation("C2", reason))

    violations.extend(_first_cross_violation(pda, groups))

    if violations:
        for violation in violations:
            logger.debug("%s", violation)
        return VerificationReport(violations=tuple(violations))

    mapping = symbol_map(pda)
    multiplicities = {mapping[label]: len(members) for label, members in groups.items()}
    counts = list(multiplicities.values())
    S = len(multiplicities)
    Z = star_counts[0]
    stats = PdaStats(
        K=pda.K, F=pda.F, Z=Z, S=S,
        multiplicities=dict(sorted(multiplicities.items())),
        g_min=min(counts, default=0), g_max=max(counts, default=0),
        regular=len(set(counts)) <= 1,
        rate=Fraction(S, pda.F) if pda.F else Fraction(0),
        memory_ratio=Fraction(Z, pda.F) if pda.F else Fraction(0),
    )
    logger.debug("Verified %s", stats.summary())
    return VerificationReport(stats=stats)


def verify_against_placement(pda: Pda, params: SystemParams) -> bool:
    """
    Checks that the stars are exactly the consecutive cyclic placement pattern.

    Parameters:
    - pda (Pda): The array; each row index must carry a subfile j.
    - params (SystemParams): The system parameters.

    Returns:
    - bool: True iff every cell is a star exactly when <j - k>_K > K - t.

    Exceptions:
    - ShapeError: If the widths differ or a row lacks a subfile in [1:K].
    """
    if pda.K != params.K:
        raise exceptions.ShapeError(f"Array has {pda.K} columns, parameters have K={params.K}")
    for position, row_index in enumerate(pda.rows):
        j = subfile_of(row_index)
        if not 1 <= j <= params.K:
            raise exceptions.ShapeError(f"Row {row_index!r} names subfile {j} outside [1:K]")
        for k, cell in enumerate(pda.grid[position], start=1):
            if is_star(cell) != is_retrievable(params.K, params.t, j, k):
                logger.debug("Star pattern differs at row %s column %d", row_index, k)
                return False
    return True


def canonicalize_symbols(pda: Pda) -> Pda:
    """
    Replaces every label by its integer from symbol_map; stars are unchanged.

    Parameters:
    - pda (Pda): The array.

    Returns:
    - Pda: The relabeled array with the same rows and provenance.
    """
    mapping = symbol_map(pda)
    grid = tuple(
        tuple(cell if is_star(cell) else mapping[cell] for cell in row) for row in pda.grid
    )
    return Pda(K=pda.K, rows=pda.rows, grid=grid, provenance=pda.provenance)


# Text formats

def _format_label(label) -> str:
    if isinstance(label, tuple):
        return ",".join(str(part) for part in label)
    return str(label)


def _format_row_index(row_index: RowIndex) -> str:
    return _format_label(row_index)


def to_grid_text(pda: Pda) -> str:
    """
    Writes one row per line, cells separated by spaces.

    Pair rows and plain rows other than 1..F carry an 'i,j:' or 'j:' prefix.
    """
    plain_default = pda.rows == tuple(range(1, pda.F + 1))
    lines = []
    for row_index, row in zip(pda.rows, pda.grid):
        cells = " ".join(STAR if is_star(cell) else _format_label(cell) for cell in row)
        lines.append(cells if plain_default else f"{_format_row_index(row_index)}: {cells}")
    return "\n".join(lines) + "\n"


def _parse_int_tuple(token: str, line: int, column: int) -> Label:
    parts = token.split(",")
    try:
        values = tuple(int(part) for part in parts)
    except ValueError:
        raise exceptions.PdaParseError(f"Bad cell {token!r}", line, column) from None
    return values[0] if len(values) == 1 else values


def from_grid_text(text: str, provenance: str = "grid-text") -> Pda:
    """
    Parses the grid format written by to_grid_text.

    Blank lines and lines starting with '#' are skipped.

    Exceptions:
    - PdaParseError: If a cell, row prefix or row width is malformed.
    """
    rows: List[RowIndex] = []
    grid: List[Tuple[Cell, ...]] = []
    seen: Dict[RowIndex, int] = {}
    width = None
    for line_number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        offset = len(raw) - len(raw.lstrip())
        row_column = offset + 1
        body = stripped
        row_index = None
        if ":" in stripped:
            prefix, body = stripped.split(":", 1)
            row_index = _parse_int_tuple(prefix.strip(), line_number, offset + 1)
            if isinstance(row_index, tuple) and len(row_index) != 2:
                raise exceptions.PdaParseError(
                    f"Row index {prefix!r} must be 'j' or 'i,j'", line_number, offset + 1
                )
            offset += len(prefix) + 1
        cells: List[Cell] = []
        column = offset + 1
        for token in body.split():
            column = raw.find(token, column - 1) + 1
            cells.append(STAR if token == STAR else _parse_int_tuple(token, line_number, column))
            column += len(token)
        if not cells:
            raise exceptions.PdaParseError("Row has no cells", line_number, offset + 1)
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise exceptions.PdaParseError(
                f"Row has {len(cells)} cells, expected {width}", line_number, 1
            )
        if row_index is None:
            row_index = len(rows) + 1
        if row_index in seen:
            raise exceptions.PdaParseError(
                f"Row index {row_index!r} repeats the row on line {seen[row_index]}",
                line_number, row_column,
            )
        seen[row_index] = line_number
        rows.append(row_index)
        grid.append(tuple(cells))

    if not grid:
        raise exceptions.PdaParseError("No rows found", 1, 1)
    return Pda(K=width, rows=tuple(rows), grid=tuple(grid), provenance=provenance)


def to_record(pda: Pda) -> str:
    """Writes the structured JSON record; vector labels become lists."""
    def encode(cell):
        if is_star(cell):
            return STAR
        return list(cell) if isinstance(cell, tuple) else cell

    header = {
        "format": RECORD_FORMAT,
        "version": RECORD_VERSION,
        "K": pda.K,
        "F": pda.F,
        "row_kind": pda.row_kind.value,
        "provenance": pda.provenance,
        "rows": [list(row) if isinstance(row, tuple) else row for row in pda.rows],
    }
    # one grid row per line
    lines = ["{"]
    lines.extend(f" {json.dumps(key)}: {json.dumps(value)}," for key, value in header.items())
    lines.append(' "grid": [')
    lines.append(",\n".join(
        "  " + json.dumps([encode(cell) for cell in row]) for row in pda.grid
    ))
    lines.append(" ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _record_position(text: str, key: str, row: int = 0) -> Tuple[int, int]:
    """
    Locates a field of a record: the line holding '"key"', or the row-th line
    after it for grid rows. Falls back to the key line, then to (1, 1).
    """
    lines = text.splitlines()
    for number, raw in enumerate(lines, start=1):
        if f'"{key}":' in raw:
            break
    else:
        return 1, 1
    target = number + row
    if row and target <= len(lines) and lines[target - 1].strip().startswith("["):
        line = lines[target - 1]
        return target, len(line) - len(line.lstrip()) + 1
    return number, raw.find(f'"{key}"') + 1


def from_record(text: str) -> Pda:
    """
    Parses the structured JSON record written by to_record.

    Field errors point at the line of the field, and at the line of the grid
    row for a bad cell or row width.

    Exceptions:
    - PdaParseError: If the JSON or its fields are malformed.
    """
    try:
        record = json.loads(text)
    except json.JSONDecodeError as error:
        raise exceptions.PdaParseError(error.msg, error.lineno, error.colno) from error

    def decode(value, what: str, where: Tuple[int, int]):
        if value == STAR and what == "cell":
            return STAR
        if isinstance(value, list) and value and all(
                isinstance(v, int) and not isinstance(v, bool) for v in value):
            return tuple(value)
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        raise exceptions.PdaParseError(f"Bad {what} {value!r}", *where)

    if not isinstance(record, dict) or record.get("format") != RECORD_FORMAT:
        raise exceptions.PdaParseError(f"Not a {RECORD_FORMAT} document", 1, 1)
    for key in ("K", "rows", "grid"):
        if key not in record:
            raise exceptions.PdaParseError(f"Missing field '{key}'", 1, 1)

    K = record["K"]
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise exceptions.PdaParseError(f"Bad K {K!r}", *_record_position(text, "K"))
    for key in ("rows", "grid"):
        if not isinstance(record[key], list):
            raise exceptions.PdaParseError(
                f"Field '{key}' must be a list", *_record_position(text, key)
            )

    rows_at = _record_position(text, "rows")
    rows = tuple(decode(row, "row index", rows_at) for row in record["rows"])
    if len(set(rows)) != len(rows):
        raise exceptions.PdaParseError("Row indices must be unique", *rows_at)

    grid = []
    for position, row in enumerate(record["grid"]):
        where = _record_position(text, "grid", position + 1)
        if not isinstance(row, list) or len(row) != K:
            raise exceptions.PdaParseError(
                f"Grid row {position + 1} must hold {K} cells", *where
            )
        grid.append(tuple(decode(cell, "cell", where) for cell in row))
    if len(grid) != len(rows):
        raise exceptions.PdaParseError(
            f"{len(rows)} row indices for {len(grid)} grid rows", *_record_position(text, "grid")
        )
    if record.get("F", len(rows)) != len(rows):
        raise exceptions.PdaParseError(
            f"F={record['F']} but {len(rows)} rows present", *_record_position(text, "F")
        )
    return Pda(K=K, rows=rows, grid=tuple(grid), provenance=record.get("provenance", ""))


def parse(text: str) -> Pda:
    """Parses either format; a record starts with '{'."""
    if text.lstrip().startswith("{"):
        return from_record(text)
    return from_grid_text(text)
