"""Read-only catalog over built outputs: browse, search, slice, stats, export.

The catalog is loaded once from an output tree and never mutated; request
handlers share it freely. Table rows are read from the CSVs on demand and
never cached wholesale, so serving a release costs little more than its
dictionary.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping

from .assemble import coerce_cell
from .errors import (
    CatalogLoadError,
    InvalidQueryError,
    MoeColumnError,
    UnknownColumnError,
    UnknownDatasetError,
)
from .metadata import Dictionary, TableEntry, load_dictionary, validate_dictionary
from .model import Numeric, Release
from .stats import DescriptiveStats, MoeStats, describe_values, moe_stats

_RELEASE_DIR_RE = re.compile(r"^(\d{4})_(1yr|3yr|5yr)$")

FILTER_FIELDS = ("sumlevel", "stusab", "geoid")
MAX_PAGE_SIZE = 1000


@dataclass(frozen=True)
class CatalogEntry:
    """One table: its dictionary entry plus the CSV that backs it."""

    dataset_id: str
    release: Release
    subject_id: str
    subject_name: str
    subject_slug: str
    table_id: str
    entry: TableEntry
    path: Path
    header: tuple[str, ...]
    geo_fields: tuple[str, ...]
    data_header: tuple[str, ...]

    def field_index(self, name: str) -> int | None:
        try:
            return self.header.index(name)
        except ValueError:
            return None


@dataclass(frozen=True)
class SearchHit:
    dataset_id: str
    matched_field: str  # table_title | universe | column_display_name
    snippet: str


@dataclass(frozen=True)
class QuickStats:
    dataset_id: str
    column: str
    moe_column: str
    total_rows: int
    descriptive: DescriptiveStats
    moe: MoeStats | None


@dataclass(frozen=True)
class Catalog:
    out_root: Path
    releases: tuple[Release, ...]
    dictionaries: Mapping[str, Dictionary]  # keyed by release dirname
    table_store: Mapping[str, CatalogEntry]  # keyed by dataset id

    def entry(self, dataset_id: str) -> CatalogEntry:
        found = self.table_store.get(dataset_id)
        if found is None:
            raise UnknownDatasetError(f"unknown dataset id {dataset_id!r}")
        return found


def _read_header(path: Path) -> tuple[str, ...]:
    with open(path, encoding="utf-8", newline="") as handle:
        row = next(csv.reader(handle), None)
    if not row:
        raise CatalogLoadError(f"{path}: empty table file")
    return tuple(row)


def _split_header(header: tuple[str, ...], table_id: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    prefix = f"{table_id.lower()}_"
    for idx, token in enumerate(header):
        if token.startswith(prefix):
            return header[:idx], header[idx:]
    return header, ()


def load_catalog(out_root: Path | str) -> Catalog:
    """Load every release under ``out_root`` and verify tables against dictionaries."""
    out_root = Path(out_root)
    release_dirs: list[tuple[Release, Path]] = []
    if out_root.is_dir():
        for child in sorted(out_root.iterdir()):
            match = _RELEASE_DIR_RE.match(child.name)
            if match and (child / "dictionary.json").is_file():
                release_dirs.append((Release(int(match.group(1)), match.group(2)), child))
    if not release_dirs:
        raise CatalogLoadError(f"no releases under {out_root}")

    dictionaries: dict[str, Dictionary] = {}
    table_store: dict[str, CatalogEntry] = {}
    for release, release_dir in release_dirs:
        dictionary = load_dictionary(release_dir / "dictionary.json")
        dictionaries[release.dirname] = dictionary

        tables_dir = release_dir / "tables"
        entries: list[CatalogEntry] = []
        known_ids: set[str] = set()
        for subject_id, subject in dictionary.subjects.items():
            for table_id, entry in subject.tables.items():
                dataset_id = (
                    f"us.gov.census.acs.{release.year}.{release.period}."
                    f"{subject.slug}.{entry.slug}"
                )
                known_ids.add(dataset_id)
                path = tables_dir / f"{dataset_id}.csv"
                if not path.is_file():
                    raise CatalogLoadError(f"{dataset_id}: table file missing ({path})")
                header = _read_header(path)
                geo_fields, data_header = _split_header(header, table_id)
                entries.append(
                    CatalogEntry(
                        dataset_id=dataset_id,
                        release=release,
                        subject_id=subject_id,
                        subject_name=subject.name,
                        subject_slug=subject.slug,
                        table_id=table_id,
                        entry=entry,
                        path=path,
                        header=header,
                        geo_fields=geo_fields,
                        data_header=data_header,
                    )
                )

        if tables_dir.is_dir():
            for stray in sorted(tables_dir.glob("*.csv")):
                if stray.stem not in known_ids:
                    raise CatalogLoadError(
                        f"{stray.stem}: table file has no dictionary entry"
                    )

        report = validate_dictionary(dictionary, entries)
        if not report.ok:
            bad_tokens = report.missing_in_dictionary + report.missing_in_tables
            implicated = sorted(
                e.dataset_id
                for e in entries
                if any(t.startswith(e.table_id.lower() + "_") for t in bad_tokens)
            )
            raise CatalogLoadError(
                "table headers disagree with the dictionary for "
                + (", ".join(implicated) or release.dirname)
                + ": "
                + "; ".join(report.lines())
            )

        for entry in entries:
            table_store[entry.dataset_id] = entry

    releases = tuple(sorted((r for r, _ in release_dirs), key=lambda r: (r.year, r.period)))
    return Catalog(
        out_root=out_root,
        releases=releases,
        dictionaries=dictionaries,
        table_store=table_store,
    )


# --- search -------------------------------------------------------------------

def search(catalog: Catalog, query: str) -> list[SearchHit]:
    """Conjunctive, case-insensitive token containment over table metadata.

    A table matches when every query token appears in its title, universe
    or some column display name. matched_field reports the strongest field
    that alone contains every token (title, then universe), falling back
    to column_display_name.
    """
    tokens = [t for t in query.lower().split() if t]
    if not tokens:
        raise InvalidQueryError("empty search query")

    hits: list[SearchHit] = []
    for dataset_id in sorted(catalog.table_store):
        entry = catalog.table_store[dataset_id]
        title = entry.entry.title.lower()
        universe = entry.entry.universe.lower()
        display_names = [c.display_name for c in entry.entry.columns.values()]
        blob = " ".join([title, universe, *[d.lower() for d in display_names]])
        if not all(t in blob for t in tokens):
            continue
        if all(t in title for t in tokens):
            hits.append(SearchHit(dataset_id, "table_title", entry.entry.title))
        elif all(t in universe for t in tokens):
            hits.append(SearchHit(dataset_id, "universe", entry.entry.universe))
        else:
            snippet = next(
                (d for d in display_names if any(t in d.lower() for t in tokens)),
                entry.entry.title,
            )
            hits.append(SearchHit(dataset_id, "column_display_name", snippet))
    return hits


# --- row access -----------------------------------------------------------------

def _iter_rows(entry: CatalogEntry) -> Iterator[list[str]]:
    with open(entry.path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        next(reader, None)  # header
        yield from reader


def _row_predicate(entry: CatalogEntry, filters: Mapping[str, str]):
    checks: list[tuple[int, str]] = []
    for name, wanted in filters.items():
        if name not in FILTER_FIELDS:
            raise InvalidQueryError(
                f"unknown filter {name!r}; expected one of {', '.join(FILTER_FIELDS)}"
            )
        if wanted is None:
            continue
        idx = entry.field_index(name)
        if idx is None:
            raise InvalidQueryError(f"table {entry.dataset_id} has no {name!r} field")
        checks.append((idx, str(wanted)))

    def matches(row: list[str]) -> bool:
        return all(row[idx] == wanted for idx, wanted in checks)

    return matches


def table_slice(
    catalog: Catalog,
    dataset_id: str,
    filters: Mapping[str, str] | None = None,
    page: int = 1,
    page_size: int = 100,
) -> tuple[int, list[dict[str, str]]]:
    """One page of filtered rows plus the filtered total.

    Filters are conjunctive exact matches on geography fields. Rows keep
    their file order, which is (stusab, logrecno). A page beyond the end
    is empty, not an error.
    """
    if page < 1:
        raise InvalidQueryError(f"page must be >= 1, got {page}")
    if not 1 <= page_size <= MAX_PAGE_SIZE:
        raise InvalidQueryError(f"page_size must be in [1, {MAX_PAGE_SIZE}], got {page_size}")
    entry = catalog.entry(dataset_id)
    matches = _row_predicate(entry, filters or {})

    start = (page - 1) * page_size
    stop = start + page_size
    total = 0
    rows: list[dict[str, str]] = []
    for row in _iter_rows(entry):
        if not matches(row):
            continue
        if start <= total < stop:
            rows.append(dict(zip(entry.header, row)))
        total += 1
    return total, rows


def resolve_column(entry: CatalogEntry, column: str) -> tuple[str, str]:
    """Map a requested column token to (column_id, moe_column_id)."""
    for col in entry.entry.columns.values():
        if column == col.column_id:
            return col.column_id, col.moe_column_id
        if column == col.moe_column_id:
            raise MoeColumnError(
                f"{column} is a margin-of-error column; request {col.column_id} instead"
            )
    raise UnknownColumnError(f"table {entry.dataset_id} has no column {column!r}")


def quick_stats(
    catalog: Catalog,
    dataset_id: str,
    column: str,
    filters: Mapping[str, str] | None = None,
) -> QuickStats:
    """Descriptive statistics for one estimate column over filtered rows.

    When the filters address exactly one row and both the estimate and its
    margin are numeric, survey error measures for that cell are included.
    """
    entry = catalog.entry(dataset_id)
    column_id, moe_column_id = resolve_column(entry, column)
    est_idx = entry.field_index(column_id)
    moe_idx = entry.field_index(moe_column_id)
    if est_idx is None or moe_idx is None:
        raise UnknownColumnError(f"table {entry.dataset_id} has no column {column!r}")
    matches = _row_predicate(entry, filters or {})

    cells = []
    moe_cells = []
    for row in _iter_rows(entry):
        if not matches(row):
            continue
        cells.append(coerce_cell(row[est_idx]))
        moe_cells.append(coerce_cell(row[moe_idx]))

    descriptive = describe_values(cells)
    moe = None
    if len(cells) == 1:
        est_cell, moe_cell = cells[0], moe_cells[0]
        if isinstance(est_cell, Numeric) and isinstance(moe_cell, Numeric):
            moe = moe_stats(est_cell.value, moe_cell.value)
    return QuickStats(
        dataset_id=dataset_id,
        column=column_id,
        moe_column=moe_column_id,
        total_rows=len(cells),
        descriptive=descriptive,
        moe=moe,
    )


# --- export ---------------------------------------------------------------------

def export_csv(
    catalog: Catalog,
    dataset_id: str,
    filters: Mapping[str, str] | None = None,
) -> Iterator[str]:
    """Stream a table as CSV text, optionally filtered.

    Without filters this is a straight file passthrough; with filters the
    surviving rows are re-serialized with the same dialect the writer
    used, so output is always byte-identical to a write_table_csv file
    holding the same rows. Lookup and filter validation happen before the
    first chunk, so callers can map errors to a response status.
    """
    entry = catalog.entry(dataset_id)
    unfiltered = not filters or all(v is None for v in filters.values())
    matches = _row_predicate(entry, filters or {})

    def passthrough() -> Iterator[str]:
        with open(entry.path, encoding="utf-8", newline="") as handle:
            yield from handle

    def filtered() -> Iterator[str]:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")

        def serialize(row: list[str]) -> str:
            buffer.seek(0)
            buffer.truncate()
            writer.writerow(row)
            return buffer.getvalue()

        yield serialize(list(entry.header))
        for row in _iter_rows(entry):
            if matches(row):
                yield serialize(row)

    return passthrough() if unfiltered else filtered()
