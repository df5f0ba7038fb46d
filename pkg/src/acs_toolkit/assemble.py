"""Reconstruct thematic tables from sequence streams and write per-table CSVs.

Estimate and MOE columns stay adjacent (``b01002_003`` immediately followed
by ``b01002_003_moe``). Non-numeric sentinel tokens ("jam values") never
reach a value column: in memory they ride along as Jam cells, and on disk
they either move to an adjacent ``_ann`` column or are dropped, depending
on the policy.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    ColumnSetError,
    OverwriteError,
    PartitionError,
    SliceBoundsError,
    UnknownGeographyError,
)
from .ingest import SequenceRow
from .model import CellValue, ColumnDef, GeoRecord, Jam, Numeric, TableShell

DEFAULT_JAM_TOKENS = frozenset(
    {"", ".", "*****", "-222222222", "-333333333", "-555555555",
     "-666666666", "-888888888", "-999999999"}
)

DEFAULT_GEO_FIELDS = ("name", "geoid", "stusab", "sumlevel")

_NUMERIC_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True, slots=True)
class JamPolicy:
    """Which tokens are sentinels, and whether CSVs carry annotation columns."""

    jam_tokens: frozenset[str] = DEFAULT_JAM_TOKENS
    annotations_enabled: bool = False


DEFAULT_JAM_POLICY = JamPolicy()


def coerce_cell(token: str, policy: JamPolicy = DEFAULT_JAM_POLICY) -> CellValue:
    """Total coercion: known sentinels and non-decimal text become Jam cells.

    Accepted numerics are plain decimals with optional sign, point and
    exponent; anything else (including underscores, inf/nan spellings and
    overflowing exponents) is preserved as a Jam token.
    """
    if token in policy.jam_tokens:
        return Jam(token)
    if _NUMERIC_RE.match(token):
        value = float(token)
        if math.isfinite(value):
            return Numeric(value)
    return Jam(token)


def format_number(value: float) -> str:
    """Canonical cell rendering: integers bare, otherwise shortest round-trip."""
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def cell_field(cell: CellValue) -> str:
    """CSV value field for a cell: jams render empty."""
    return format_number(cell.value) if isinstance(cell, Numeric) else ""


def cell_annotation(cell: CellValue) -> str:
    """CSV annotation field for a cell: the jam token, empty for numerics."""
    return cell.token if isinstance(cell, Jam) else ""


def slice_table_cells(
    row: SequenceRow,
    shell: TableShell,
    policy: JamPolicy = DEFAULT_JAM_POLICY,
) -> tuple[list[CellValue], list[CellValue]]:
    """Coerced estimate and margin cells for one table out of a sequence row."""
    start = shell.start_position - 1
    end = start + shell.cell_count
    if end > len(row.estimates):
        raise SliceBoundsError(
            f"table {shell.table_id}: cells [{shell.start_position}, {shell.end_position}) "
            f"exceed row width {len(row.estimates)} at logrecno {row.logrecno}"
        )
    estimates = [coerce_cell(tok, policy) for tok in row.estimates[start:end]]
    margins = [coerce_cell(tok, policy) for tok in row.margins[start:end]]
    return estimates, margins


def validate_sequence_partition(
    shells: Sequence[TableShell], declared_width: int | None = None
) -> int:
    """Check that a sequence's shells tile its payload without gap or overlap.

    Returns the sequence width. Raises PartitionError naming the offending
    tables; violations are never silent.
    """
    ordered = sorted(shells, key=lambda s: s.start_position)
    if not ordered:
        raise PartitionError("sequence has no shells")
    sequence = ordered[0].sequence
    if ordered[0].start_position != 1:
        raise PartitionError(
            f"sequence {sequence}: first table {ordered[0].table_id} starts at "
            f"{ordered[0].start_position}, not 1"
        )
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.start_position < prev.end_position:
            raise PartitionError(
                f"sequence {sequence}: tables {prev.table_id} and {nxt.table_id} overlap "
                f"(cells {nxt.start_position} < {prev.end_position})"
            )
        if nxt.start_position > prev.end_position:
            raise PartitionError(
                f"sequence {sequence}: gap between {prev.table_id} and {nxt.table_id} "
                f"(cells {prev.end_position}..{nxt.start_position - 1} unclaimed)"
            )
    width = ordered[-1].end_position - 1
    if declared_width is not None and width != declared_width:
        raise PartitionError(
            f"sequence {sequence}: shells end at {width}, declared width is {declared_width}"
        )
    return width


@dataclass(frozen=True, slots=True)
class TableRow:
    """One geography's row: the geo record plus interleaved est/MOE cells."""

    geo: GeoRecord
    cells: tuple[CellValue, ...]

    @property
    def stusab(self) -> str:
        return self.geo.stusab

    @property
    def logrecno(self) -> int:
        return self.geo.logrecno

    @property
    def sumlevel(self) -> str:
        return self.geo.sumlevel


def build_data_header(
    columns: Sequence[ColumnDef], annotations_enabled: bool
) -> tuple[str, ...]:
    """Header tokens per line: estimate, MOE, then their _ann twins if enabled."""
    header: list[str] = []
    for col in columns:
        header.append(col.column_id)
        header.append(col.moe_column_id)
        if annotations_enabled:
            header.append(col.column_id + "_ann")
            header.append(col.moe_column_id + "_ann")
    return tuple(header)


@dataclass(frozen=True)
class AssembledTable:
    """A national table: geography projection plus adjacent est/MOE cells."""

    dataset_id: str
    table_id: str
    geo_header: tuple[str, ...]
    data_header: tuple[str, ...]
    columns: tuple[ColumnDef, ...]
    rows: tuple[TableRow, ...]
    annotations_enabled: bool

    def render_row(self, row: TableRow) -> list[str]:
        """Flatten one row to CSV fields, honoring the annotation policy."""
        fields = [getattr(row.geo, name) for name in self.geo_header]
        cells = row.cells
        if not self.annotations_enabled:
            fields.extend(cell_field(c) for c in cells)
            return fields
        for i in range(0, len(cells), 2):
            est, moe = cells[i], cells[i + 1]
            fields.append(cell_field(est))
            fields.append(cell_field(moe))
            fields.append(cell_annotation(est))
            fields.append(cell_annotation(moe))
        return fields


def assemble_table(
    shell: TableShell,
    columns: Sequence[ColumnDef],
    rows: Iterable[SequenceRow],
    geo_index: Mapping[tuple[str, int], GeoRecord],
    policy: JamPolicy = DEFAULT_JAM_POLICY,
    *,
    dataset_id: str,
    geo_fields: Sequence[str] = DEFAULT_GEO_FIELDS,
) -> AssembledTable:
    """Slice, coerce and geography-join every state's rows into one table.

    Rows end up ordered by (stusab, logrecno), stacking all states into a
    single national table.
    """
    ordered_columns = sorted(columns, key=lambda c: c.line)
    lines = [c.line for c in ordered_columns]
    if lines != list(range(1, shell.cell_count + 1)) or any(
        c.table_id != shell.table_id for c in ordered_columns
    ):
        raise ColumnSetError(
            f"table {shell.table_id}: column definitions do not cover lines "
            f"1..{shell.cell_count} exactly"
        )

    table_rows: list[TableRow] = []
    for row in rows:
        geo = geo_index.get((row.stusab, row.logrecno))
        if geo is None:
            raise UnknownGeographyError(
                f"table {shell.table_id}: no geography for "
                f"({row.stusab}, {row.logrecno})"
            )
        estimates, margins = slice_table_cells(row, shell, policy)
        cells: list[CellValue] = []
        for est, moe in zip(estimates, margins):
            cells.append(est)
            cells.append(moe)
        table_rows.append(TableRow(geo=geo, cells=tuple(cells)))
    table_rows.sort(key=lambda r: (r.stusab, r.logrecno))

    return AssembledTable(
        dataset_id=dataset_id,
        table_id=shell.table_id,
        geo_header=tuple(geo_fields),
        data_header=build_data_header(ordered_columns, policy.annotations_enabled),
        columns=tuple(ordered_columns),
        rows=tuple(table_rows),
        annotations_enabled=policy.annotations_enabled,
    )


def write_table_csv(table: AssembledTable, out_dir: Path | str, overwrite: bool = False) -> Path:
    """Write ``{dataset_id}.csv`` (UTF-8, Unix newlines, one header row)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{table.dataset_id}.csv"
    if path.exists() and not overwrite:
        raise OverwriteError(f"{path} exists; pass overwrite to replace it")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([*table.geo_header, *table.data_header])
        for row in table.rows:
            writer.writerow(table.render_row(row))
    return path
