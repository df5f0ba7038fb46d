"""Deterministic synthetic releases plus an independent ground-truth oracle.

``generate_release`` renders a canonical source tree (lookup, geography,
estimate/margin sequence files); ``oracle_tables`` renders the assembled
CSVs and metadata dictionary that a correct pipeline must produce for the
same spec. Both derive every byte from the same pure generative model, and
neither touches the ingest/assemble code paths, so end-to-end equality is
a real check rather than a tautology.

Cell values come from a keyed hash of (seed, table, state, logrecno, line),
so any slice of the release can be regenerated without materializing the
rest.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator

from .errors import FixtureError
from .model import Release, slugify

# Sentinels this generator may emit: the visible members of the pipeline's
# default jam set. The empty token is accepted on ingest but never chosen
# here, so a fully-jammed fixture still shows every sentinel in its
# annotation column.
JAM_TOKEN_POOL = (
    ".", "*****", "-222222222", "-333333333",
    "-555555555", "-666666666", "-888888888", "-999999999",
)

SUBJECT_POOL = (
    ("01", "Age and Sex"),
    ("08", "Journey to Work"),
    ("16", "Language Spoken at Home"),
    ("19", "Income in the Past 12 Months"),
    ("25", "Housing Characteristics"),
    ("15", "Educational Attainment"),
    ("23", "Employment Status"),
    ("05", "Race"),
    ("07", "Migration"),
    ("22", "Food Stamps"),
)

TABLE_TITLE_POOL = {
    "01": ("Sex by Age", "Median Age by Sex", "Total Population",
           "Age by Nativity", "Males per 100 Females"),
    "08": ("Means of Transportation to Work", "Travel Time to Work",
           "Time Leaving Home to Go to Work",
           "Vehicles Available by Means of Transportation", "Place of Work"),
    "16": ("Language Spoken at Home", "Age by Language Spoken at Home",
           "Household Language", "Ability to Speak English", "Language Density"),
    "19": ("Median Household Income", "Household Income", "Earnings by Sex",
           "Income Deficit", "Per Capita Income"),
    "25": ("Housing Units", "Tenure", "Median Gross Rent", "Rooms",
           "Year Structure Built"),
}

UNIVERSE_POOL = {
    "08": "Workers 16 years and over",
    "15": "Population 25 years and over",
    "19": "Households",
    "22": "Households",
    "23": "Population 16 years and over",
    "25": "Housing units",
}
DEFAULT_UNIVERSE = "Total population"

_LOOKUP_HEADER = ("FILEID", "TABLE_ID", "SEQUENCE", "LINE", "START_POSITION",
                  "TOTAL_CELLS", "SUBJECT_ID", "SUBJECT_NAME", "TITLE", "UNIVERSE")
_GEO_HEADER = ("FILEID", "STUSAB", "SUMLEVEL", "LOGRECNO", "GEOID", "NAME")
_FILEID = "ACSSF"


@dataclass(frozen=True)
class FixtureSpec:
    """Everything that determines a synthetic release, bit for bit.

    ``planted_cells`` entries are (table index, row index, line, estimate,
    moe): the table index counts tables in (subject, table number) order,
    and the row index counts rows of the stacked national table (states
    ascending, then logrecno ascending).
    """

    seed: int = 42
    states: tuple[str, ...] = ("AA", "BB", "CC")
    subjects: int = 2
    tables_per_subject: int = 5
    column_counts: tuple[int, ...] = (4, 10, 26, 100, 526)
    geos_per_state: int = 200
    jam_density: float = 0.05
    planted_cells: tuple[tuple[int, int, int, float, float], ...] = ((5, 0, 4, 60.0, 48.0),)
    release: Release = field(default_factory=lambda: Release(2014, "5yr"))
    max_sequence_width: int = 1000
    annotations: bool = False

    def __post_init__(self) -> None:
        if not self.states:
            raise FixtureError("at least one state is required")
        if len(set(self.states)) != len(self.states):
            raise FixtureError("states must be unique")
        for stusab in self.states:
            if len(stusab) != 2 or not stusab.isalpha() or not stusab.isupper():
                raise FixtureError(f"bad state code {stusab!r}")
        if self.subjects < 1 or self.tables_per_subject < 1 or self.geos_per_state < 1:
            raise FixtureError("subjects, tables_per_subject and geos_per_state must be >= 1")
        if self.subjects > len(SUBJECT_POOL) + 59:
            raise FixtureError(f"at most {len(SUBJECT_POOL) + 59} subjects supported")
        if not self.column_counts or any(c < 1 for c in self.column_counts):
            raise FixtureError("column_counts must be non-empty positive integers")
        if max(self.column_counts) > self.max_sequence_width:
            raise FixtureError("a table is wider than max_sequence_width")
        if not 0.0 <= self.jam_density <= 1.0:
            raise FixtureError(f"jam_density {self.jam_density} outside [0, 1]")


@dataclass(frozen=True, slots=True)
class PlannedTable:
    index: int
    table_id: str
    subject_id: str
    subject_name: str
    subject_slug: str
    title: str
    slug: str
    universe: str
    n_cols: int
    sequence: int
    start_position: int

    @property
    def dataset_suffix(self) -> str:
        return f"{self.subject_slug}.{self.slug}"


@dataclass(frozen=True, slots=True)
class PlannedGeo:
    stusab: str
    logrecno: int
    geoid: str
    name: str
    sumlevel: str


# --- the generative model ---------------------------------------------------

def plan_subjects(spec: FixtureSpec) -> list[tuple[str, str]]:
    picked = list(SUBJECT_POOL[: spec.subjects])
    for k in range(len(picked), spec.subjects):
        code = f"{40 + k - len(SUBJECT_POOL):02d}"
        picked.append((code, f"Topic {code}"))
    # Extra synthetic subjects keep two-digit codes; sort for planning order.
    return sorted(picked)


def plan_tables(spec: FixtureSpec) -> list[PlannedTable]:
    """Assign titles, ids and greedy sequence packing to every table."""
    tables: list[PlannedTable] = []
    sequence, cursor = 1, 1
    index = 0
    for subject_id, subject_name in plan_subjects(spec):
        titles = TABLE_TITLE_POOL.get(subject_id, ())
        universe = UNIVERSE_POOL.get(subject_id, DEFAULT_UNIVERSE)
        for k in range(1, spec.tables_per_subject + 1):
            title = titles[k - 1] if k <= len(titles) else f"{subject_name} Detail {k}"
            n_cols = spec.column_counts[index % len(spec.column_counts)]
            if cursor > 1 and cursor + n_cols - 1 > spec.max_sequence_width:
                sequence += 1
                cursor = 1
            tables.append(
                PlannedTable(
                    index=index,
                    table_id=f"B{subject_id}{k:03d}",
                    subject_id=subject_id,
                    subject_name=subject_name,
                    subject_slug=slugify(subject_name),
                    title=title,
                    slug=slugify(title),
                    universe=universe,
                    n_cols=n_cols,
                    sequence=sequence,
                    start_position=cursor,
                )
            )
            cursor += n_cols
            index += 1
    return tables


def plan_geos(spec: FixtureSpec) -> dict[str, list[PlannedGeo]]:
    """Per-state geography: one state row, then county rows."""
    geos: dict[str, list[PlannedGeo]] = {}
    for fips, stusab in enumerate(sorted(spec.states), start=1):
        rows = []
        for logrecno in range(1, spec.geos_per_state + 1):
            if logrecno == 1:
                rows.append(PlannedGeo(
                    stusab=stusab, logrecno=1, geoid=f"04000US{fips:02d}",
                    name=f"State {stusab}", sumlevel="040",
                ))
            else:
                county = logrecno - 1
                rows.append(PlannedGeo(
                    stusab=stusab, logrecno=logrecno,
                    geoid=f"05000US{fips:02d}{county:03d}",
                    name=f"County {county:03d}; State {stusab}", sumlevel="050",
                ))
        geos[stusab] = rows
    return geos


def column_display_name(line: int) -> str:
    if line == 1:
        return "Total:"
    if line == 2:
        return "Male:"
    if line == 3:
        return "Female:"
    return f"Category {line}:"


def format_number(value: float) -> str:
    """Independent copy of the canonical cell rendering rule."""
    return str(int(value)) if value.is_integer() else repr(value)


def prune_planted_cells(spec: FixtureSpec) -> FixtureSpec:
    """Drop planted cells that fall outside the spec's geometry.

    The stock plant assumes the default geometry; callers that shrink the
    fixture (the CLI, mostly) use this instead of hand-picking plants.
    """
    keep = tuple(
        plant
        for plant in spec.planted_cells
        if plant[0] < spec.subjects * spec.tables_per_subject
        and 1 <= plant[2] <= spec.column_counts[plant[0] % len(spec.column_counts)]
        and 0 <= plant[1] < len(spec.states) * spec.geos_per_state
    )
    if keep == spec.planted_cells:
        return spec
    return replace(spec, planted_cells=keep)


def _plant_index(
    spec: FixtureSpec, tables: list[PlannedTable]
) -> dict[tuple[str, str, int, int], tuple[float, float]]:
    states = sorted(spec.states)
    plants: dict[tuple[str, str, int, int], tuple[float, float]] = {}
    for table_index, row_index, line, estimate, moe in spec.planted_cells:
        if not 0 <= table_index < len(tables):
            raise FixtureError(f"planted table index {table_index} out of range")
        table = tables[table_index]
        if not 1 <= line <= table.n_cols:
            raise FixtureError(f"planted line {line} outside table {table.table_id}")
        total_rows = len(states) * spec.geos_per_state
        if not 0 <= row_index < total_rows:
            raise FixtureError(f"planted row index {row_index} out of range")
        stusab = states[row_index // spec.geos_per_state]
        logrecno = row_index % spec.geos_per_state + 1
        plants[(table.table_id, stusab, logrecno, line)] = (float(estimate), float(moe))
    return plants


def _cell_tokens(
    spec: FixtureSpec,
    plants: dict[tuple[str, str, int, int], tuple[float, float]],
    table_id: str,
    stusab: str,
    logrecno: int,
    line: int,
) -> tuple[str, str]:
    """(estimate token, margin token) for one cell position."""
    planted = plants.get((table_id, stusab, logrecno, line))
    if planted is not None:
        return format_number(planted[0]), format_number(planted[1])

    key = f"{spec.seed}:{table_id}:{stusab}:{logrecno}:{line}".encode()
    draw = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")
    jam_threshold = round(spec.jam_density * 10000)

    def one(jam_roll: int, value_roll: int) -> str:
        if jam_roll % 10000 < jam_threshold:
            return JAM_TOKEN_POOL[value_roll % len(JAM_TOKEN_POOL)]
        if value_roll % 7 == 0:
            return format_number((value_roll % 997) + 0.5)
        return format_number(float(value_roll))

    est = one(draw & 0xFFFF, (draw >> 32) & 0xFFFF)
    moe = one((draw >> 16) & 0xFFFF, ((draw >> 48) & 0xFFFF) % 5000)
    return est, moe


# --- source tree rendering ---------------------------------------------------

def generate_release(spec: FixtureSpec, root: Path | str) -> dict:
    """Write the canonical source layout; same spec, same bytes, every time."""
    root = Path(root)
    release = spec.release
    release_dir = root / release.dirname
    (release_dir / "geo").mkdir(parents=True, exist_ok=True)
    (release_dir / "data").mkdir(parents=True, exist_ok=True)

    tables = plan_tables(spec)
    geos = plan_geos(spec)
    plants = _plant_index(spec, tables)

    with open(release_dir / "lookup.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_LOOKUP_HEADER)
        for table in tables:
            writer.writerow((
                _FILEID, table.table_id, str(table.sequence), "",
                str(table.start_position), str(table.n_cols),
                table.subject_id, table.subject_name, table.title, table.universe,
            ))
            for line in range(1, table.n_cols + 1):
                writer.writerow((
                    _FILEID, table.table_id, str(table.sequence), str(line),
                    "", "", table.subject_id, table.subject_name,
                    column_display_name(line), "",
                ))

    for stusab in sorted(spec.states):
        geo_path = release_dir / "geo" / f"g{release.year}{release.period_digit}{stusab.lower()}.csv"
        with open(geo_path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(_GEO_HEADER)
            for geo in geos[stusab]:
                writer.writerow((
                    _FILEID, geo.stusab, geo.sumlevel, str(geo.logrecno),
                    geo.geoid, geo.name,
                ))

    sequences = sorted({t.sequence for t in tables})
    by_sequence = {
        seq: sorted((t for t in tables if t.sequence == seq), key=lambda t: t.start_position)
        for seq in sequences
    }
    pairs = 0
    for stusab in sorted(spec.states):
        for seq in sequences:
            seq_tables = by_sequence[seq]
            stem = f"{release.year}{release.period_digit}{stusab.lower()}{seq:04d}000.txt"
            est_path = release_dir / "data" / f"e{stem}"
            moe_path = release_dir / "data" / f"m{stem}"
            with open(est_path, "w", encoding="utf-8") as est_handle, \
                 open(moe_path, "w", encoding="utf-8") as moe_handle:
                for logrecno in range(1, spec.geos_per_state + 1):
                    est_cells, moe_cells = [], []
                    for table in seq_tables:
                        for line in range(1, table.n_cols + 1):
                            est, moe = _cell_tokens(
                                spec, plants, table.table_id, stusab, logrecno, line
                            )
                            est_cells.append(est)
                            moe_cells.append(moe)
                    lead = f"{stusab},000,{seq:04d},{logrecno:07d}"
                    est_handle.write(f"{_FILEID},est,{lead},{','.join(est_cells)}\n")
                    moe_handle.write(f"{_FILEID},moe,{lead},{','.join(moe_cells)}\n")
            pairs += 1

    return {
        "release_dir": str(release_dir),
        "states": len(spec.states),
        "geo_files": len(spec.states),
        "sequences": len(sequences),
        "data_pairs": pairs,
        "tables": len(tables),
    }


# --- ground-truth rendering (no pipeline code) -------------------------------

def dataset_id_for(spec: FixtureSpec, table: PlannedTable) -> str:
    release = spec.release
    return f"us.gov.census.acs.{release.year}.{release.period}.{table.dataset_suffix}"


def _truth_rows(
    spec: FixtureSpec,
    plants: dict[tuple[str, str, int, int], tuple[float, float]],
    table: PlannedTable,
    geos: dict[str, list[PlannedGeo]],
) -> Iterator[list[str]]:
    jam_set = frozenset(JAM_TOKEN_POOL)
    for stusab in sorted(spec.states):
        for geo in geos[stusab]:
            fields = [geo.name, geo.geoid, geo.stusab, geo.sumlevel]
            for line in range(1, table.n_cols + 1):
                est, moe = _cell_tokens(
                    spec, plants, table.table_id, stusab, geo.logrecno, line
                )
                if spec.annotations:
                    fields.append("" if est in jam_set else est)
                    fields.append("" if moe in jam_set else moe)
                    fields.append(est if est in jam_set else "")
                    fields.append(moe if moe in jam_set else "")
                else:
                    fields.append("" if est in jam_set else est)
                    fields.append("" if moe in jam_set else moe)
            yield fields


def _truth_header(table: PlannedTable, annotations: bool) -> list[str]:
    header = ["name", "geoid", "stusab", "sumlevel"]
    base = table.table_id.lower()
    for line in range(1, table.n_cols + 1):
        header.append(f"{base}_{line:03d}")
        header.append(f"{base}_{line:03d}_moe")
        if annotations:
            header.append(f"{base}_{line:03d}_ann")
            header.append(f"{base}_{line:03d}_moe_ann")
    return header


def _truth_dictionary_payload(spec: FixtureSpec, tables: list[PlannedTable]) -> dict:
    subjects: dict[str, dict] = {}
    for table in tables:
        subject = subjects.setdefault(
            table.subject_id,
            {"name": table.subject_name, "slug": table.subject_slug, "tables": {}},
        )
        base = table.table_id.lower()
        subject["tables"][table.table_id] = {
            "title": table.title,
            "slug": table.slug,
            "universe": table.universe,
            "sequence": table.sequence,
            "start_position": table.start_position,
            "cell_count": table.n_cols,
            "columns": {
                f"{line:03d}": {
                    "display_name": column_display_name(line),
                    "column_id": f"{base}_{line:03d}",
                    "moe_column_id": f"{base}_{line:03d}_moe",
                }
                for line in range(1, table.n_cols + 1)
            },
        }
    return {
        "release": {"year": spec.release.year, "period": spec.release.period},
        "subjects": {sid: subjects[sid] for sid in sorted(subjects)},
    }


def oracle_tables(spec: FixtureSpec, out_dir: Path | str) -> dict[str, Path]:
    """Write ground-truth per-table CSVs plus dictionary.json.

    Returns dataset id -> path, with the dictionary under the key
    "dictionary". This never calls the ingest or assembly code.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = plan_tables(spec)
    geos = plan_geos(spec)
    plants = _plant_index(spec, tables)

    written: dict[str, Path] = {}
    for table in tables:
        dataset_id = dataset_id_for(spec, table)
        path = out_dir / f"{dataset_id}.csv"
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(_truth_header(table, spec.annotations))
            for fields in _truth_rows(spec, plants, table, geos):
                writer.writerow(fields)
        written[dataset_id] = path

    dict_path = out_dir / "dictionary.json"
    payload = _truth_dictionary_payload(spec, tables)
    dict_path.write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    written["dictionary"] = dict_path
    return written


# --- bulk streaming fixture ---------------------------------------------------

def write_synthetic_sequence_pair(
    est_path: Path | str,
    moe_path: Path | str,
    rows: int,
    width: int,
    stusab: str = "XX",
    sequence: int = 1,
) -> None:
    """Fast bulk writer for streaming tests: many rows, constant structure.

    Cell contents cycle through a small pool of precomputed row suffixes;
    the join fields are exact, which is all the streaming reader checks.
    """
    pools = []
    for variant in range(97):
        cells = ",".join(str((variant * 7919 + j * 31) % 100000) for j in range(width))
        pools.append(cells)
    with open(est_path, "w", encoding="utf-8") as est_handle, \
         open(moe_path, "w", encoding="utf-8") as moe_handle:
        for logrecno in range(1, rows + 1):
            suffix = pools[logrecno % 97]
            lead = f"{stusab},000,{sequence:04d},{logrecno:07d}"
            est_handle.write(f"{_FILEID},est,{lead},{suffix}\n")
            moe_handle.write(f"{_FILEID},moe,{lead},{suffix}\n")
