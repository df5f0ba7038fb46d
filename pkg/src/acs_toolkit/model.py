"""Shared vocabulary: releases, identifiers, table shells, geography rows.

Everything here is an immutable value; the rest of the toolchain passes
these between threads freely.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DatasetIdError, InvalidNameError, LineRangeError

PERIODS = ("1yr", "3yr", "5yr")
DATASET_ID_PREFIX = ("us", "gov", "census", "acs")

_SLUG_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SLUG_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")
_SUBJECT_ID_RE = re.compile(r"^[0-9A-Za-z]{2}$")
_TABLE_ID_RE = re.compile(r"^[A-Z][A-Z0-9]{3,}$")

# Titles drop the standalone word "and" ("Age and Sex" -> "age-sex") but
# keep every other word so "Median Age by Sex" -> "median-age-by-sex".
_SLUG_STOPWORDS = frozenset({"and"})


def slugify(text: str) -> str:
    """Reduce a title to a lowercase hyphenated token."""
    if not text or not text.strip():
        raise InvalidNameError("cannot slugify an empty name")
    tokens = [t for t in _SLUG_TOKEN_RE.findall(text.lower()) if t not in _SLUG_STOPWORDS]
    if not tokens:
        raise InvalidNameError(f"name {text!r} reduces to an empty slug")
    return "-".join(tokens)


def make_column_id(table_id: str, line: int, kind: str = "estimate") -> str:
    """Build a column token like ``b01002_003`` or ``b01002_003_moe``."""
    if kind not in ("estimate", "moe"):
        raise ValueError(f"kind must be 'estimate' or 'moe', got {kind!r}")
    if not 1 <= line <= 999:
        raise LineRangeError(f"line {line} outside [1, 999] for table {table_id}")
    base = f"{table_id.lower()}_{line:03d}"
    return base if kind == "estimate" else f"{base}_moe"


@dataclass(frozen=True, slots=True)
class Release:
    """A survey vintage: calendar year plus estimate period."""

    year: int
    period: str

    def __post_init__(self) -> None:
        if self.year < 2005:
            raise ValueError(f"release year {self.year} predates the program (2005)")
        if self.period not in PERIODS:
            raise ValueError(f"period must be one of {PERIODS}, got {self.period!r}")

    @property
    def dirname(self) -> str:
        return f"{self.year}_{self.period}"

    @property
    def period_digit(self) -> str:
        return self.period[0]


@dataclass(frozen=True, slots=True)
class SubjectRef:
    """A thematic subject: two-character code plus display name and slug."""

    subject_id: str
    name: str
    slug: str

    def __post_init__(self) -> None:
        if not _SUBJECT_ID_RE.match(self.subject_id):
            raise ValueError(f"subject_id must be two digits/letters, got {self.subject_id!r}")
        if not _SLUG_RE.match(self.slug):
            raise ValueError(f"invalid subject slug {self.slug!r}")


@dataclass(frozen=True, slots=True)
class TableShell:
    """Lookup description of one thematic table and its sequence placement."""

    table_id: str
    subject_id: str
    sequence: int
    start_position: int
    cell_count: int
    title: str
    universe: str
    slug: str

    def __post_init__(self) -> None:
        if not _TABLE_ID_RE.match(self.table_id):
            raise ValueError(f"malformed table_id {self.table_id!r}")
        if self.table_id[1:3] != self.subject_id:
            raise ValueError(
                f"table_id {self.table_id} does not embed subject_id {self.subject_id}"
            )
        if self.sequence < 1:
            raise ValueError(f"sequence must be positive, got {self.sequence}")
        if self.start_position < 1:
            raise ValueError(f"start_position must be >= 1, got {self.start_position}")
        if self.cell_count < 1:
            raise ValueError(f"cell_count must be >= 1, got {self.cell_count}")
        if not _SLUG_RE.match(self.slug):
            raise ValueError(f"invalid table slug {self.slug!r}")

    @property
    def end_position(self) -> int:
        """1-based position one past the table's last cell."""
        return self.start_position + self.cell_count


@dataclass(frozen=True, slots=True)
class ColumnDef:
    """One line of a table: display name plus estimate and MOE tokens."""

    table_id: str
    line: int
    display_name: str
    column_id: str = ""
    moe_column_id: str = ""

    def __post_init__(self) -> None:
        expected = make_column_id(self.table_id, self.line)
        if not self.column_id:
            object.__setattr__(self, "column_id", expected)
        elif self.column_id != expected:
            raise ValueError(f"column_id {self.column_id!r} should be {expected!r}")
        if not self.moe_column_id:
            object.__setattr__(self, "moe_column_id", self.column_id + "_moe")
        elif self.moe_column_id != self.column_id + "_moe":
            raise ValueError(f"moe_column_id {self.moe_column_id!r} must be column_id + '_moe'")


@dataclass(frozen=True, slots=True)
class GeoRecord:
    """One geography row keyed by (stusab, logrecno) within a release."""

    stusab: str
    logrecno: int
    geoid: str
    name: str
    sumlevel: str

    def __post_init__(self) -> None:
        if len(self.stusab) != 2 or not self.stusab.isalpha():
            raise ValueError(f"stusab must be a two-letter code, got {self.stusab!r}")
        if self.logrecno < 1:
            raise ValueError(f"logrecno must be positive, got {self.logrecno}")
        if len(self.sumlevel) != 3:
            raise ValueError(f"sumlevel must be three characters, got {self.sumlevel!r}")


@dataclass(frozen=True, slots=True)
class Numeric:
    """A finite numeric cell."""

    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"numeric cells must be finite, got {self.value!r}")


@dataclass(frozen=True, slots=True)
class Jam:
    """A non-numeric sentinel cell, preserved byte-for-byte."""

    token: str


CellValue = Numeric | Jam


def make_dataset_id(release: Release, subject: SubjectRef, shell: TableShell) -> str:
    """Compose ``us.gov.census.acs.{year}.{period}.{subject}.{table}``."""
    return ".".join(
        (*DATASET_ID_PREFIX, str(release.year), release.period, subject.slug, shell.slug)
    )


def parse_dataset_id(dataset_id: str) -> tuple[Release, str, str]:
    """Split a dataset id back into (release, subject slug, table slug)."""
    parts = dataset_id.split(".")
    if len(parts) != 8:
        raise DatasetIdError(f"dataset id must have 8 segments, got {len(parts)}: {dataset_id!r}")
    if tuple(parts[:4]) != DATASET_ID_PREFIX:
        raise DatasetIdError(f"dataset id must start with us.gov.census.acs: {dataset_id!r}")
    year_part, period, subject_slug, table_slug = parts[4:]
    if not year_part.isdigit():
        raise DatasetIdError(f"non-numeric year {year_part!r} in {dataset_id!r}")
    if period not in PERIODS:
        raise DatasetIdError(f"unknown period {period!r} in {dataset_id!r}")
    for slug in (subject_slug, table_slug):
        if not _SLUG_RE.match(slug):
            raise DatasetIdError(f"invalid slug {slug!r} in {dataset_id!r}")
    try:
        release = Release(int(year_part), period)
    except ValueError as exc:
        raise DatasetIdError(str(exc)) from exc
    return release, subject_slug, table_slug
