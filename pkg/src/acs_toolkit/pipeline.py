"""End-to-end build: source release tree in, tables + dictionary out."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .assemble import (
    DEFAULT_GEO_FIELDS,
    DEFAULT_JAM_POLICY,
    JamPolicy,
    assemble_table,
    validate_sequence_partition,
    write_table_csv,
)
from .errors import MissingSubjectError, OverwriteError, UnpairedFileError
from .ingest import (
    ReleaseManifest,
    discover_release,
    parse_geography,
    parse_lookup,
    stream_sequence_pair,
)
from .metadata import build_dictionary, emit_dictionary
from .model import ColumnDef, GeoRecord, Release, SubjectRef, TableShell, make_dataset_id

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuildResult:
    release: Release
    out_dir: Path
    tables_dir: Path
    dictionary_path: Path
    table_paths: dict[str, Path]
    rows_written: int
    elapsed_seconds: float

    @property
    def tables(self) -> int:
        return len(self.table_paths)


def load_geo_index(manifest: ReleaseManifest) -> dict[tuple[str, int], GeoRecord]:
    """(stusab, logrecno) -> geography for every state with data files."""
    index: dict[tuple[str, int], GeoRecord] = {}
    for stusab in manifest.stusabs:
        for geo in parse_geography(manifest.geo_paths[stusab]):
            index[(geo.stusab, geo.logrecno)] = geo
    return index


def _filter_by_subject(
    shells: list[TableShell],
    columns: list[ColumnDef],
    subjects: list[SubjectRef],
    wanted: Iterable[str] | None,
) -> tuple[list[TableShell], list[ColumnDef], list[SubjectRef]]:
    if wanted is None:
        return shells, columns, subjects
    keep = {str(s).strip() for s in wanted}
    known = {s.subject_id for s in subjects}
    unknown = sorted(keep - known)
    if unknown:
        raise MissingSubjectError(f"unknown subject id(s): {', '.join(unknown)}")
    kept_shells = [s for s in shells if s.subject_id in keep]
    kept_ids = {s.table_id for s in kept_shells}
    return (
        kept_shells,
        [c for c in columns if c.table_id in kept_ids],
        [s for s in subjects if s.subject_id in keep],
    )


def _build_sequence(
    manifest: ReleaseManifest,
    sequence: int,
    width: int,
    shells: Sequence[TableShell],
    columns_by_table: Mapping[str, list[ColumnDef]],
    dataset_ids: Mapping[str, str],
    geo_index: Mapping[tuple[str, int], GeoRecord],
    policy: JamPolicy,
    tables_dir: Path,
    *,
    overwrite: bool,
    geo_fields: Sequence[str],
) -> tuple[dict[str, Path], int]:
    rows = []
    for stusab in manifest.stusabs:
        pair = manifest.data_pairs.get((stusab, sequence))
        if pair is None:
            raise UnpairedFileError(f"state {stusab} sequence {sequence}: no data files")
        count = 0
        for row in stream_sequence_pair(pair[0], pair[1], width):
            rows.append(row)
            count += 1
        logger.info("sequence %04d %s: %d rows", sequence, stusab, count)

    written: dict[str, Path] = {}
    for shell in sorted(shells, key=lambda s: s.start_position):
        table = assemble_table(
            shell,
            columns_by_table[shell.table_id],
            rows,
            geo_index,
            policy,
            dataset_id=dataset_ids[shell.table_id],
            geo_fields=geo_fields,
        )
        written[table.dataset_id] = write_table_csv(table, tables_dir, overwrite=overwrite)
        logger.info("sequence %04d: wrote %s", sequence, table.dataset_id)
    return written, len(rows)


def build_release(
    source_root: Path | str,
    out_root: Path | str,
    release: Release,
    *,
    subjects: Iterable[str] | None = None,
    policy: JamPolicy = DEFAULT_JAM_POLICY,
    jobs: int = 1,
    overwrite: bool = False,
    geo_fields: Sequence[str] = DEFAULT_GEO_FIELDS,
) -> BuildResult:
    """Reconstruct every table of a release and emit CSVs plus dictionary.

    ``subjects`` restricts output to the given subject ids; partition
    checks still run against the full lookup, because the data files keep
    their full width regardless of what we keep.
    """
    started = time.monotonic()
    manifest = discover_release(source_root, release)
    all_shells, all_columns, all_subjects = parse_lookup(manifest.lookup_path)

    widths: dict[int, int] = {}
    for sequence in sorted({s.sequence for s in all_shells}):
        members = [s for s in all_shells if s.sequence == sequence]
        widths[sequence] = validate_sequence_partition(members)

    shells, columns, subject_refs = _filter_by_subject(
        all_shells, all_columns, all_subjects, subjects
    )
    subject_by_id = {s.subject_id: s for s in subject_refs}
    columns_by_table: dict[str, list[ColumnDef]] = {}
    for column in columns:
        columns_by_table.setdefault(column.table_id, []).append(column)
    dataset_ids = {
        shell.table_id: make_dataset_id(release, subject_by_id[shell.subject_id], shell)
        for shell in shells
    }

    geo_index = load_geo_index(manifest)

    out_dir = Path(out_root) / release.dirname
    tables_dir = out_dir / "tables"
    tables_dir.mkdir(parents=True, exist_ok=True)

    by_sequence: dict[int, list[TableShell]] = {}
    for shell in shells:
        by_sequence.setdefault(shell.sequence, []).append(shell)

    table_paths: dict[str, Path] = {}
    rows_written = 0

    def run(sequence: int) -> tuple[dict[str, Path], int]:
        return _build_sequence(
            manifest,
            sequence,
            widths[sequence],
            by_sequence[sequence],
            columns_by_table,
            dataset_ids,
            geo_index,
            policy,
            tables_dir,
            overwrite=overwrite,
            geo_fields=geo_fields,
        )

    ordered = sorted(by_sequence)
    if jobs > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for written, count in pool.map(run, ordered):
                table_paths.update(written)
                rows_written += count
    else:
        for sequence in ordered:
            written, count = run(sequence)
            table_paths.update(written)
            rows_written += count

    dictionary = build_dictionary(release, shells, columns, subject_refs)
    dictionary_path = out_dir / "dictionary.json"
    if dictionary_path.exists() and not overwrite:
        raise OverwriteError(f"{dictionary_path} exists; pass overwrite to replace it")
    emit_dictionary(dictionary, dictionary_path)

    elapsed = time.monotonic() - started
    logger.info(
        "built %d tables, %d sequence rows in %.2fs", len(table_paths), rows_written, elapsed
    )
    return BuildResult(
        release=release,
        out_dir=out_dir,
        tables_dir=tables_dir,
        dictionary_path=dictionary_path,
        table_paths=table_paths,
        rows_written=rows_written,
        elapsed_seconds=elapsed,
    )


def describe_build(result: BuildResult) -> str:
    return (
        f"{result.release.year} {result.release.period}: "
        f"{result.tables} tables, {result.rows_written} sequence rows, "
        f"{result.elapsed_seconds:.2f}s -> {result.out_dir}"
    )


__all__ = [
    "BuildResult",
    "build_release",
    "describe_build",
    "load_geo_index",
]
