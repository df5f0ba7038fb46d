"""Shared fixtures: one synthetic release generated, oracled and built per session."""

from __future__ import annotations

import time
from pathlib import Path

import pytest

from acs_toolkit.catalog import Catalog, load_catalog
from acs_toolkit.fixtures import FixtureSpec, generate_release, oracle_tables
from acs_toolkit.pipeline import BuildResult, build_release

# The identifier the default fixture must produce for its median-age table.
MEDIAN_AGE_ID = "us.gov.census.acs.2014.5yr.age-sex.median-age-by-sex"
PLANTED_TABLE_ID = (
    "us.gov.census.acs.2014.5yr.journey-to-work.means-of-transportation-to-work"
)


@pytest.fixture(scope="session")
def fixture_spec() -> FixtureSpec:
    return FixtureSpec()


@pytest.fixture(scope="session")
def timings() -> dict[str, float]:
    """Wall-clock seconds per pipeline stage, recorded as fixtures run."""
    return {}


@pytest.fixture(scope="session")
def workspace(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("release")


@pytest.fixture(scope="session")
def source_root(workspace: Path, fixture_spec: FixtureSpec, timings: dict) -> Path:
    root = workspace / "src"
    started = time.monotonic()
    generate_release(fixture_spec, root)
    timings["generate"] = time.monotonic() - started
    return root


@pytest.fixture(scope="session")
def truth_paths(workspace: Path, fixture_spec: FixtureSpec, timings: dict) -> dict[str, Path]:
    started = time.monotonic()
    written = oracle_tables(fixture_spec, workspace / "truth")
    timings["oracle"] = time.monotonic() - started
    return written


@pytest.fixture(scope="session")
def build_result(
    workspace: Path, source_root: Path, fixture_spec: FixtureSpec, timings: dict
) -> BuildResult:
    started = time.monotonic()
    result = build_release(source_root, workspace / "out", fixture_spec.release)
    timings["build"] = time.monotonic() - started
    return result


@pytest.fixture(scope="session")
def out_root(workspace: Path, build_result: BuildResult) -> Path:
    return workspace / "out"


@pytest.fixture(scope="session")
def catalog(out_root: Path) -> Catalog:
    return load_catalog(out_root)


@pytest.fixture(scope="session")
def client(out_root: Path):
    from fastapi.testclient import TestClient

    from acs_toolkit.service import create_app

    return TestClient(create_app(out_root))
