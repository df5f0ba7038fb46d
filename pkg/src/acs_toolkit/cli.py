"""Command-line entry point: fixture, build, validate, stats, search, serve.

Exit codes: 0 success, 1 domain error, 2 usage error. Diagnostics go to
stderr; machine-readable output goes to stdout.
"""

from __future__ import annotations

import csv
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .assemble import JamPolicy, coerce_cell, format_number, validate_sequence_partition
from .catalog import export_csv, load_catalog, search as search_catalog
from .errors import AcsError
from .fixtures import FixtureSpec, generate_release, oracle_tables, prune_planted_cells
from .ingest import discover_release, parse_lookup, shape_report
from .metadata import load_dictionary, validate_dictionary
from .model import PERIODS, Release
from .pipeline import build_release, describe_build
from .stats import (
    aggregate_moe,
    coefficient_of_variation,
    confidence_interval,
    describe_values,
    standard_error,
)


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the build-like commands."""

    root: Path | None
    out: Path
    release: Release
    subjects: tuple[str, ...] | None = None
    annotations: bool = False
    overwrite: bool = False
    jobs: int = 1
    port: int = 8000

    def __post_init__(self) -> None:
        if self.root is not None and self.out.resolve() == self.root.resolve():
            raise click.UsageError("--out must differ from --root")
        if not 1 <= self.port <= 65535:
            raise click.UsageError(f"--port must be in [1, 65535], got {self.port}")


class _DomainErrorGroup(click.Group):
    """Translate domain failures to exit 1 without a traceback."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except AcsError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(1)


@click.group(cls=_DomainErrorGroup)
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Rebuild, inspect and serve survey table releases."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _release_options(fn):
    fn = click.option("--year", type=int, default=2014, show_default=True)(fn)
    fn = click.option(
        "--period", type=click.Choice(list(PERIODS)), default="5yr", show_default=True
    )(fn)
    return fn


def _csv_ints(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError as exc:
        raise click.UsageError(f"expected comma-separated integers, got {value!r}") from exc


@main.command()
@click.option("--root", type=click.Path(path_type=Path), required=True)
@_release_options
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--states", default="AA,BB,CC", show_default=True)
@click.option("--subjects", "subject_count", type=int, default=2, show_default=True)
@click.option("--tables-per-subject", type=int, default=5, show_default=True)
@click.option("--column-counts", default="4,10,26,100,526", show_default=True)
@click.option("--geos-per-state", type=int, default=200, show_default=True)
@click.option("--jam-density", type=float, default=0.05, show_default=True)
@click.option("--annotations", is_flag=True, help="Truth CSVs carry annotation columns.")
@click.option("--truth/--no-truth", default=True, show_default=True,
              help="Also write ground-truth CSVs under ROOT/truth.")
def fixture(root: Path, year: int, period: str, seed: int, states: str,
            subject_count: int, tables_per_subject: int, column_counts: str,
            geos_per_state: int, jam_density: float, annotations: bool,
            truth: bool) -> None:
    """Write a deterministic synthetic release (and its ground truth)."""
    spec = prune_planted_cells(
        FixtureSpec(
            seed=seed,
            states=tuple(s.strip().upper() for s in states.split(",") if s.strip()),
            subjects=subject_count,
            tables_per_subject=tables_per_subject,
            column_counts=_csv_ints(column_counts),
            geos_per_state=geos_per_state,
            jam_density=jam_density,
            release=Release(year, period),
            annotations=annotations,
        )
    )
    summary = generate_release(spec, root)
    click.echo(
        f"wrote {summary['release_dir']}: {summary['tables']} tables, "
        f"{summary['sequences']} sequences, {summary['data_pairs']} data pairs"
    )
    if truth:
        written = oracle_tables(spec, root / "truth")
        click.echo(f"wrote {root / 'truth'}: {len(written) - 1} tables + dictionary")


@main.command("ingest-check")
@click.option("--root", type=click.Path(path_type=Path, exists=True), required=True)
@_release_options
def ingest_check(root: Path, year: int, period: str) -> None:
    """Discover a release, check pairing/partitioning, report lookup shape."""
    release = Release(year, period)
    manifest = discover_release(root, release)
    shells, _columns, subjects = parse_lookup(manifest.lookup_path)
    for sequence in sorted({s.sequence for s in shells}):
        validate_sequence_partition([s for s in shells if s.sequence == sequence])
    report = shape_report([s.cell_count for s in shells])
    click.echo(f"states {len(manifest.stusabs)}")
    click.echo(f"sequences {len(manifest.sequences)}")
    click.echo(f"subjects {len(subjects)}")
    click.echo(f"tables {report['tables']}")
    click.echo(f"median_columns {format_number(report['median'])}")
    click.echo(f"mean_columns {format_number(report['mean'])}")
    click.echo(f"pct_under_50 {format_number(report['pct_under_50'])}")
    click.echo(f"max_columns {report['max']}")


@main.command()
@click.option("--root", type=click.Path(path_type=Path, exists=True), required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True, envvar="ACS_OUT")
@_release_options
@click.option("--subjects", default=None, help="Comma-separated subject ids to keep.")
@click.option("--annotations", is_flag=True, help="Emit annotation columns for jams.")
@click.option("--overwrite", is_flag=True)
@click.option("--jobs", type=int, default=1, show_default=True)
def build(root: Path, out: Path, year: int, period: str, subjects: str | None,
          annotations: bool, overwrite: bool, jobs: int) -> None:
    """Reconstruct every table of a release into CSVs plus dictionary.json."""
    config = RunConfig(
        root=root,
        out=out,
        release=Release(year, period),
        subjects=tuple(s.strip() for s in subjects.split(",")) if subjects else None,
        annotations=annotations,
        overwrite=overwrite,
        jobs=jobs,
    )
    result = build_release(
        config.root,
        config.out,
        config.release,
        subjects=config.subjects,
        policy=JamPolicy(annotations_enabled=config.annotations),
        jobs=config.jobs,
        overwrite=config.overwrite,
    )
    click.echo(describe_build(result))


@main.command()
@click.option("--out", type=click.Path(path_type=Path, exists=True),
              required=True, envvar="ACS_OUT")
@_release_options
def validate(out: Path, year: int, period: str) -> None:
    """Reconcile a built release's CSV headers against its dictionary."""
    release_dir = Path(out) / Release(year, period).dirname
    dictionary = load_dictionary(release_dir / "dictionary.json")

    @dataclass(frozen=True)
    class _Header:
        table_id: str
        data_header: tuple[str, ...]

    handles = []
    for path in sorted((release_dir / "tables").glob("*.csv")):
        with open(path, encoding="utf-8", newline="") as fh:
            row = next(csv.reader(fh), [])
        handles.append(_Header(table_id="", data_header=tuple(row)))
    report = validate_dictionary(dictionary, handles)
    for line in report.lines():
        click.echo(line, err=True)
    if not report.ok:
        raise SystemExit(1)
    click.echo(f"ok: {len(handles)} tables agree with the dictionary")


@main.command()
@click.option("--out", type=click.Path(path_type=Path, exists=True),
              required=True, envvar="ACS_OUT")
@click.option("--id", "dataset_id", required=True)
@click.option("--sumlevel", default=None)
@click.option("--stusab", default=None)
@click.option("--geoid", default=None)
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None,
              help="Write to a file instead of stdout.")
def export(out: Path, dataset_id: str, sumlevel: str | None, stusab: str | None,
           geoid: str | None, output: Path | None) -> None:
    """Stream one table as CSV, optionally filtered by geography."""
    catalog = load_catalog(out)
    filters = {"sumlevel": sumlevel, "stusab": stusab, "geoid": geoid}
    stream = export_csv(catalog, dataset_id, filters)
    if output is None:
        for chunk in stream:
            sys.stdout.write(chunk)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.writelines(stream)
        click.echo(f"wrote {output}", err=True)


@main.group()
def stats() -> None:
    """Margin-of-error arithmetic and quick descriptive statistics."""


@stats.command()
@click.option("--moe", type=float, required=True)
def se(moe: float) -> None:
    """Standard error implied by a 90%-level margin of error."""
    click.echo(f"{standard_error(moe):.2f}")


@stats.command()
@click.option("--estimate", type=float, required=True)
@click.option("--moe", type=float, required=True)
def cv(estimate: float, moe: float) -> None:
    """Coefficient of variation, in percent."""
    click.echo(f"{coefficient_of_variation(estimate, moe):.1f}")


@stats.command()
@click.option("--estimate", type=float, required=True)
@click.option("--moe", type=float, required=True)
def ci(estimate: float, moe: float) -> None:
    """90% confidence interval bounds."""
    low, high = confidence_interval(estimate, moe)
    click.echo(f"{format_number(low)} {format_number(high)}")


@stats.command()
@click.option("--moe", "moes", type=float, multiple=True, required=True)
def agg(moes: tuple[float, ...]) -> None:
    """Margin of error of a sum (root of summed squares)."""
    click.echo(format_number(aggregate_moe(moes)))


@stats.command()
@click.argument("values", nargs=-1, required=True)
def describe(values: tuple[str, ...]) -> None:
    """Descriptive statistics over tokens; non-numeric tokens count as nulls."""
    cells = [coerce_cell(v) for v in values]
    result = describe_values(cells)
    click.echo(f"count {result.count}")
    click.echo(f"nulls {result.nulls}")
    for name in ("mean", "median", "stddev", "min", "max"):
        value = getattr(result, name)
        if value is not None:
            click.echo(f"{name} {format_number(float(value))}")


@main.command("search")
@click.option("--out", type=click.Path(path_type=Path, exists=True),
              required=True, envvar="ACS_OUT")
@click.argument("query", nargs=-1, required=True)
def search_cmd(out: Path, query: tuple[str, ...]) -> None:
    """Keyword search over table titles, universes and column names."""
    catalog = load_catalog(out)
    for hit in search_catalog(catalog, " ".join(query)):
        click.echo(f"{hit.dataset_id}\t{hit.matched_field}\t{hit.snippet}")


@main.command()
@click.option("--out", type=click.Path(path_type=Path, exists=True),
              required=True, envvar="ACS_OUT")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=click.IntRange(1, 65535), default=8000, show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(path_type=Path), default=None,
              help="Directory of static UI assets to mount at /ui.")
def serve(out: Path, host: str, port: int, ui_dir: Path | None) -> None:
    """Host the catalog HTTP API over a built output tree."""
    import uvicorn

    from .service import create_app

    app = create_app(out, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
