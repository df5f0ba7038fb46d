"""Hierarchical metadata dictionary: subject -> table -> column.

One JSON document per release carries every piece of crucial metadata.
Key order is fixed (ascending subject, table, zero-padded line), so equal
dictionaries always serialize to identical bytes.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Protocol, Sequence

from .errors import DanglingColumnError, DictionaryError, MissingSubjectError
from .model import ColumnDef, Release, SubjectRef, TableShell

logger = logging.getLogger(__name__)

# Observed ceiling on tables per subject; crossing it is suspicious, not fatal.
SUBJECT_TABLE_SOFT_LIMIT = 150

_ESTIMATE_TOKEN_RE = re.compile(r"^([a-z][a-z0-9]+)_(\d{3})$")


@dataclass(frozen=True, slots=True)
class ColumnEntry:
    display_name: str
    column_id: str
    moe_column_id: str


@dataclass(frozen=True, slots=True)
class TableEntry:
    title: str
    slug: str
    universe: str
    sequence: int
    start_position: int
    cell_count: int
    columns: dict[str, ColumnEntry]


@dataclass(frozen=True, slots=True)
class SubjectEntry:
    name: str
    slug: str
    tables: dict[str, TableEntry]


@dataclass(frozen=True, slots=True)
class Dictionary:
    release: Release
    subjects: dict[str, SubjectEntry]

    def iter_tables(self) -> Iterator[tuple[str, str, TableEntry]]:
        """Yield (subject_id, table_id, entry) in dictionary order."""
        for subject_id, subject in self.subjects.items():
            for table_id, entry in subject.tables.items():
                yield subject_id, table_id, entry

    def find_by_slugs(self, subject_slug: str, table_slug: str) -> tuple[str, str, TableEntry] | None:
        for subject_id, subject in self.subjects.items():
            if subject.slug != subject_slug:
                continue
            for table_id, entry in subject.tables.items():
                if entry.slug == table_slug:
                    return subject_id, table_id, entry
        return None

    def column_pairs(self) -> set[tuple[str, int]]:
        """Every (lowercase table id, line) the dictionary knows about."""
        pairs: set[tuple[str, int]] = set()
        for _, table_id, entry in self.iter_tables():
            for line_key in entry.columns:
                pairs.add((table_id.lower(), int(line_key)))
        return pairs

    def to_payload(self) -> dict:
        return {
            "release": {"year": self.release.year, "period": self.release.period},
            "subjects": {
                subject_id: {
                    "name": subject.name,
                    "slug": subject.slug,
                    "tables": {
                        table_id: {
                            "title": entry.title,
                            "slug": entry.slug,
                            "universe": entry.universe,
                            "sequence": entry.sequence,
                            "start_position": entry.start_position,
                            "cell_count": entry.cell_count,
                            "columns": {
                                line: {
                                    "display_name": col.display_name,
                                    "column_id": col.column_id,
                                    "moe_column_id": col.moe_column_id,
                                }
                                for line, col in entry.columns.items()
                            },
                        }
                        for table_id, entry in subject.tables.items()
                    },
                }
                for subject_id, subject in self.subjects.items()
            },
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "Dictionary":
        try:
            release = Release(int(payload["release"]["year"]), payload["release"]["period"])
            subjects: dict[str, SubjectEntry] = {}
            for subject_id, subject in payload["subjects"].items():
                tables: dict[str, TableEntry] = {}
                for table_id, entry in subject["tables"].items():
                    columns = {
                        line: ColumnEntry(
                            display_name=col["display_name"],
                            column_id=col["column_id"],
                            moe_column_id=col["moe_column_id"],
                        )
                        for line, col in entry["columns"].items()
                    }
                    tables[table_id] = TableEntry(
                        title=entry["title"],
                        slug=entry["slug"],
                        universe=entry["universe"],
                        sequence=int(entry["sequence"]),
                        start_position=int(entry["start_position"]),
                        cell_count=int(entry["cell_count"]),
                        columns=columns,
                    )
                subjects[subject_id] = SubjectEntry(
                    name=subject["name"], slug=subject["slug"], tables=tables
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise DictionaryError(f"malformed dictionary payload: {exc}") from exc
        return cls(release=release, subjects=subjects)


def build_dictionary(
    release: Release,
    shells: Sequence[TableShell],
    columns: Sequence[ColumnDef],
    subjects: Sequence[SubjectRef],
) -> Dictionary:
    """Arrange lookup output into the subject -> table -> column hierarchy."""
    subject_index = {s.subject_id: s for s in subjects}
    shell_index = {s.table_id: s for s in shells}

    for col in columns:
        if col.table_id not in shell_index:
            raise DanglingColumnError(
                f"column ({col.table_id}, {col.line}) references a table with no shell"
            )
    for shell in shells:
        if shell.subject_id not in subject_index:
            raise MissingSubjectError(
                f"table {shell.table_id} references unknown subject {shell.subject_id}"
            )

    columns_by_table: dict[str, list[ColumnDef]] = {}
    for col in sorted(columns, key=lambda c: (c.table_id, c.line)):
        columns_by_table.setdefault(col.table_id, []).append(col)

    subject_entries: dict[str, SubjectEntry] = {}
    for subject_id in sorted({s.subject_id for s in shells}):
        subject = subject_index[subject_id]
        tables: dict[str, TableEntry] = {}
        for shell in sorted(
            (s for s in shells if s.subject_id == subject_id), key=lambda s: s.table_id
        ):
            table_columns = {
                f"{col.line:03d}": ColumnEntry(
                    display_name=col.display_name,
                    column_id=col.column_id,
                    moe_column_id=col.moe_column_id,
                )
                for col in columns_by_table.get(shell.table_id, [])
            }
            tables[shell.table_id] = TableEntry(
                title=shell.title,
                slug=shell.slug,
                universe=shell.universe,
                sequence=shell.sequence,
                start_position=shell.start_position,
                cell_count=shell.cell_count,
                columns=table_columns,
            )
        if len(tables) > SUBJECT_TABLE_SOFT_LIMIT:
            logger.warning(
                "subject %s holds %d tables (soft limit %d)",
                subject_id, len(tables), SUBJECT_TABLE_SOFT_LIMIT,
            )
        subject_entries[subject_id] = SubjectEntry(
            name=subject.name, slug=subject.slug, tables=tables
        )

    return Dictionary(release=release, subjects=subject_entries)


def emit_dictionary(dictionary: Dictionary, path: Path | str) -> Path:
    """Serialize to JSON with deterministic key order; byte-stable output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(dictionary.to_payload(), indent=2, ensure_ascii=False) + "\n"
    path.write_text(text, encoding="utf-8")
    return path


def load_dictionary(path: Path | str) -> Dictionary:
    with open(path, encoding="utf-8") as handle:
        return Dictionary.from_payload(json.load(handle))


class TableColumns(Protocol):
    """Anything carrying a data header: an assembled table or a CSV view."""

    table_id: str
    data_header: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """Findings from reconciling a dictionary with assembled outputs."""

    missing_in_dictionary: tuple[str, ...]
    missing_in_tables: tuple[str, ...]
    oversized_subjects: tuple[str, ...]

    @property
    def ok(self) -> bool:
        """True when dictionary and assemblies agree column-for-column."""
        return not self.missing_in_dictionary and not self.missing_in_tables

    @property
    def empty(self) -> bool:
        return self.ok and not self.oversized_subjects

    def lines(self) -> list[str]:
        out = [f"missing in dictionary: {c}" for c in self.missing_in_dictionary]
        out += [f"missing in tables: {c}" for c in self.missing_in_tables]
        out += [
            f"subject {s} exceeds {SUBJECT_TABLE_SOFT_LIMIT} tables (warning)"
            for s in self.oversized_subjects
        ]
        return out


def _estimate_pairs(table: TableColumns) -> set[tuple[str, int]]:
    pairs: set[tuple[str, int]] = set()
    for token in table.data_header:
        if token.endswith("_moe") or token.endswith("_ann"):
            continue
        match = _ESTIMATE_TOKEN_RE.match(token)
        if match:
            pairs.add((match.group(1), int(match.group(2))))
    return pairs


def validate_dictionary(
    dictionary: Dictionary, tables: Iterable[TableColumns]
) -> ValidationReport:
    """Reconcile dictionary columns against assembled headers (both ways)."""
    assembled: set[tuple[str, int]] = set()
    for table in tables:
        assembled |= _estimate_pairs(table)
    declared = dictionary.column_pairs()

    def describe(pair: tuple[str, int]) -> str:
        return f"{pair[0]}_{pair[1]:03d}"

    missing_in_dictionary = tuple(describe(p) for p in sorted(assembled - declared))
    missing_in_tables = tuple(describe(p) for p in sorted(declared - assembled))
    oversized = tuple(
        subject_id
        for subject_id, subject in dictionary.subjects.items()
        if len(subject.tables) > SUBJECT_TABLE_SOFT_LIMIT
    )
    return ValidationReport(
        missing_in_dictionary=missing_in_dictionary,
        missing_in_tables=missing_in_tables,
        oversized_subjects=oversized,
    )
