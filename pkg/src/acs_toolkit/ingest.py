"""Discovery and streaming parsers for a release's source files.

The canonical layout under ``{root}/{year}_{period}/``:

* ``lookup.csv`` — table shells and column lines, one file per release.
* ``geo/g{year}{p}{stusab}.csv`` — one geography file per state.
* ``data/e{year}{p}{stusab}{seq:04}000.txt`` and the matching ``m...`` file —
  headerless comma-separated rows: six leading join fields, then exactly the
  sequence's cell tokens.

Sequence files are consumed row by row; memory stays constant in the row
count. Cell tokens are preserved byte-for-byte (only the delimiter grammar
is applied, never trimming).
"""

from __future__ import annotations

import csv
import re
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import (
    GeographyFormatError,
    LookupFormatError,
    MissingGeographyError,
    MissingLookupError,
    MissingReleaseError,
    NoDataFilesError,
    RowWidthError,
    SequencePairError,
    UnpairedFileError,
)
from .model import ColumnDef, GeoRecord, Release, SubjectRef, TableShell, slugify

LOOKUP_HEADER = (
    "FILEID",
    "TABLE_ID",
    "SEQUENCE",
    "LINE",
    "START_POSITION",
    "TOTAL_CELLS",
    "SUBJECT_ID",
    "SUBJECT_NAME",
    "TITLE",
    "UNIVERSE",
)
GEO_HEADER = ("FILEID", "STUSAB", "SUMLEVEL", "LOGRECNO", "GEOID", "NAME")

_SUMLEVEL_RE = re.compile(r"^[0-9A-Z]{3}$")


@dataclass(frozen=True)
class ReleaseManifest:
    """Every source file of one release, keyed for deterministic iteration."""

    release: Release
    root: Path
    lookup_path: Path
    geo_paths: dict[str, Path]
    data_pairs: dict[tuple[str, int], tuple[Path, Path]]

    @property
    def stusabs(self) -> list[str]:
        return sorted({stusab for stusab, _ in self.data_pairs})

    @property
    def sequences(self) -> list[int]:
        return sorted({seq for _, seq in self.data_pairs})


@dataclass(frozen=True, slots=True)
class SequenceRow:
    """One matched estimate/margin row of a sequence file pair."""

    stusab: str
    sequence: int
    logrecno: int
    estimates: tuple[str, ...]
    margins: tuple[str, ...]


def discover_release(root: Path | str, release: Release) -> ReleaseManifest:
    """Enumerate a release's source files and verify estimate/margin pairing."""
    root = Path(root)
    release_dir = root / release.dirname
    if not release_dir.is_dir():
        raise MissingReleaseError(f"no release directory {release_dir}")

    lookup_path = release_dir / "lookup.csv"

    geo_paths: dict[str, Path] = {}
    geo_re = re.compile(rf"^g{release.year}{release.period_digit}([a-z]{{2}})\.csv$")
    geo_dir = release_dir / "geo"
    if geo_dir.is_dir():
        for path in sorted(geo_dir.iterdir()):
            match = geo_re.match(path.name)
            if match:
                geo_paths[match.group(1).upper()] = path

    data_re = re.compile(
        rf"^([em]){release.year}{release.period_digit}([a-z]{{2}})(\d{{4}})000\.txt$"
    )
    halves: dict[tuple[str, int], dict[str, Path]] = {}
    data_dir = release_dir / "data"
    if data_dir.is_dir():
        for path in sorted(data_dir.iterdir()):
            match = data_re.match(path.name)
            if not match:
                continue
            kind, stusab, seq = match.group(1), match.group(2).upper(), int(match.group(3))
            halves.setdefault((stusab, seq), {})[kind] = path

    data_pairs: dict[tuple[str, int], tuple[Path, Path]] = {}
    for key in sorted(halves):
        pair = halves[key]
        if "e" not in pair or "m" not in pair:
            missing = "margin" if "m" not in pair else "estimate"
            raise UnpairedFileError(
                f"state {key[0]} sequence {key[1]}: {missing} file is missing"
            )
        data_pairs[key] = (pair["e"], pair["m"])

    if not data_pairs:
        raise NoDataFilesError(f"{release_dir} holds no estimate/margin pairs (0 found)")
    if not lookup_path.is_file():
        raise MissingLookupError(f"no lookup.csv in {release_dir}")

    for stusab in sorted({s for s, _ in data_pairs}):
        if stusab not in geo_paths:
            raise MissingGeographyError(f"state {stusab} has data files but no geography file")

    return ReleaseManifest(
        release=release,
        root=release_dir,
        lookup_path=lookup_path,
        geo_paths=geo_paths,
        data_pairs=data_pairs,
    )


def parse_lookup(path: Path | str) -> tuple[list[TableShell], list[ColumnDef], list[SubjectRef]]:
    """Parse lookup.csv into shells, column definitions and subjects."""
    shells: dict[str, TableShell] = {}
    columns: dict[tuple[str, int], ColumnDef] = {}
    subjects: dict[str, SubjectRef] = {}

    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(header) != LOOKUP_HEADER:
            raise LookupFormatError(f"{path}: unexpected lookup header {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(LOOKUP_HEADER):
                raise LookupFormatError(f"{path}:{lineno}: expected {len(LOOKUP_HEADER)} fields")
            (_, table_id, seq_text, line_text, start_text, cells_text,
             subject_id, subject_name, title, universe) = row

            if line_text == "":
                # Table header record.
                if not start_text.isdigit() or not cells_text.isdigit():
                    raise LookupFormatError(
                        f"{path}:{lineno}: non-numeric start_position/cell_count "
                        f"for table {table_id}"
                    )
                if int(cells_text) == 0:
                    raise LookupFormatError(f"{path}:{lineno}: table {table_id} declares 0 cells")
                if table_id in shells:
                    raise LookupFormatError(f"{path}:{lineno}: duplicate table {table_id}")
                shells[table_id] = TableShell(
                    table_id=table_id,
                    subject_id=subject_id,
                    sequence=int(seq_text),
                    start_position=int(start_text),
                    cell_count=int(cells_text),
                    title=title,
                    universe=universe,
                    slug=slugify(title),
                )
                known = subjects.get(subject_id)
                if known is None:
                    subjects[subject_id] = SubjectRef(
                        subject_id=subject_id,
                        name=subject_name,
                        slug=slugify(subject_name),
                    )
                elif known.name != subject_name:
                    raise LookupFormatError(
                        f"{path}:{lineno}: subject {subject_id} renamed "
                        f"{known.name!r} -> {subject_name!r}"
                    )
            else:
                if table_id not in shells:
                    raise LookupFormatError(
                        f"{path}:{lineno}: column record for {table_id} precedes its header"
                    )
                if not line_text.isdigit():
                    raise LookupFormatError(f"{path}:{lineno}: non-numeric line {line_text!r}")
                line = int(line_text)
                if (table_id, line) in columns:
                    raise LookupFormatError(
                        f"{path}:{lineno}: duplicate column ({table_id}, {line})"
                    )
                columns[(table_id, line)] = ColumnDef(
                    table_id=table_id, line=line, display_name=title
                )

    shell_list = sorted(shells.values(), key=lambda s: (s.sequence, s.start_position))
    column_list = [columns[key] for key in sorted(columns)]
    subject_list = [subjects[key] for key in sorted(subjects)]
    return shell_list, column_list, subject_list


def parse_geography(path: Path | str) -> list[GeoRecord]:
    """Parse one state geography file, enforcing logrecno uniqueness."""
    records: list[GeoRecord] = []
    seen: set[int] = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(header) != GEO_HEADER:
            raise GeographyFormatError(f"{path}: unexpected geography header {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(GEO_HEADER):
                raise GeographyFormatError(f"{path}:{lineno}: expected {len(GEO_HEADER)} fields")
            _, stusab, sumlevel, logrecno_text, geoid, name = row
            if not _SUMLEVEL_RE.match(sumlevel):
                raise GeographyFormatError(f"{path}:{lineno}: malformed sumlevel {sumlevel!r}")
            if not logrecno_text.isdigit():
                raise GeographyFormatError(f"{path}:{lineno}: non-numeric logrecno")
            logrecno = int(logrecno_text)
            if logrecno in seen:
                raise GeographyFormatError(f"{path}:{lineno}: duplicate logrecno {logrecno}")
            seen.add(logrecno)
            records.append(
                GeoRecord(stusab=stusab, logrecno=logrecno, geoid=geoid, name=name,
                          sumlevel=sumlevel)
            )
    return records


def _iter_data_rows(path: Path, expected_type: str) -> Iterator[tuple[str, int, int, list[str]]]:
    """Yield (stusab, sequence, logrecno, cells) from one data file.

    Data files carry no quoting, so rows are split on raw commas; this is
    what keeps per-row work constant and tokens byte-exact.
    """
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            fields = line.rstrip("\n").split(",")
            if len(fields) < 6:
                raise SequencePairError(f"{path}:{lineno}: fewer than 6 leading fields")
            _fileid, filetype, stusab, _chariter, seq_text, logrecno_text = fields[:6]
            if filetype != expected_type:
                raise SequencePairError(
                    f"{path}:{lineno}: filetype {filetype!r}, expected {expected_type!r}"
                )
            try:
                sequence = int(seq_text)
                logrecno = int(logrecno_text)
            except ValueError as exc:
                raise SequencePairError(f"{path}:{lineno}: bad join fields: {exc}") from exc
            yield stusab, sequence, logrecno, fields[6:]


def stream_sequence_pair(
    estimate_path: Path | str,
    margin_path: Path | str,
    expected_width: int,
) -> Iterator[SequenceRow]:
    """Stream matched estimate/margin rows for one (state, sequence) pair.

    Rows are matched positionally and must agree on (stusab, sequence,
    logrecno); each side must carry exactly ``expected_width`` cells.
    """
    estimate_path = Path(estimate_path)
    margin_path = Path(margin_path)
    est_iter = _iter_data_rows(estimate_path, "est")
    moe_iter = _iter_data_rows(margin_path, "moe")
    position = 0
    while True:
        est_row = next(est_iter, None)
        moe_row = next(moe_iter, None)
        if est_row is None and moe_row is None:
            return
        if est_row is None or moe_row is None:
            longer = margin_path.name if est_row is None else estimate_path.name
            raise SequencePairError(
                f"{estimate_path.name}/{margin_path.name}: row counts diverge after "
                f"{position} paired rows ({longer} has more rows)"
            )
        position += 1
        e_stusab, e_seq, e_log, e_cells = est_row
        m_stusab, m_seq, m_log, m_cells = moe_row
        if (e_stusab, e_seq, e_log) != (m_stusab, m_seq, m_log):
            raise SequencePairError(
                f"row {position}: estimate key ({e_stusab}, {e_seq}, {e_log}) != "
                f"margin key ({m_stusab}, {m_seq}, {m_log})"
            )
        if len(e_cells) != expected_width or len(m_cells) != expected_width:
            width = len(e_cells) if len(e_cells) != expected_width else len(m_cells)
            raise RowWidthError(
                f"logrecno {e_log}: row has {width} cells, sequence {e_seq} "
                f"declares {expected_width}"
            )
        yield SequenceRow(
            stusab=e_stusab,
            sequence=e_seq,
            logrecno=e_log,
            estimates=tuple(e_cells),
            margins=tuple(m_cells),
        )


def shape_report(column_counts: list[int]) -> dict[str, float]:
    """Distribution summary of per-table column counts (lookup shape)."""
    if not column_counts:
        return {"tables": 0, "median": 0.0, "mean": 0.0, "pct_under_50": 0.0, "max": 0}
    under_50 = sum(1 for c in column_counts if c < 50)
    return {
        "tables": len(column_counts),
        "median": float(statistics.median(column_counts)),
        "mean": statistics.fmean(column_counts),
        "pct_under_50": 100.0 * under_50 / len(column_counts),
        "max": max(column_counts),
    }


def parse_published_lookup_counts(path: Path | str) -> dict[str, int]:
    """Per-table column counts from a published Census lookup file.

    Tolerant reader for the Bureau's own sequence/table-number lookup CSV
    (used only for shape reporting against a real release, never in the
    build pipeline). Column counts are the number of integer line entries
    per table id; fractional lines (universe captions) are skipped.
    """
    def normalize(name: str) -> str:
        return re.sub(r"[^a-z]", "", name.lower())

    counts: dict[str, int] = {}
    with open(path, encoding="utf-8", errors="replace", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise LookupFormatError(f"{path}: empty lookup file")
        fields = {normalize(name): idx for idx, name in enumerate(header)}
        try:
            table_idx = fields["tableid"]
            line_idx = fields["linenumber"]
        except KeyError as exc:
            raise LookupFormatError(f"{path}: unrecognized published header {header}") from exc
        for row in reader:
            if len(row) <= max(table_idx, line_idx):
                continue
            table_id = row[table_idx].strip()
            line_text = row[line_idx].strip()
            if not table_id or not line_text:
                continue
            try:
                line = float(line_text)
            except ValueError:
                continue
            if line >= 1 and line == int(line):
                counts[table_id] = counts.get(table_id, 0) + 1
    return counts
