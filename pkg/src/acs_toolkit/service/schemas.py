"""Response models for the catalog HTTP API."""

from __future__ import annotations

from pydantic import BaseModel


class ReleaseOut(BaseModel):
    year: int
    period: str


class SubjectOut(BaseModel):
    subject_id: str
    name: str
    slug: str
    table_count: int


class ColumnOut(BaseModel):
    display_name: str
    column_id: str
    moe_column_id: str


class TableOut(BaseModel):
    dataset_id: str
    release: ReleaseOut
    subject_id: str
    subject_name: str
    subject_slug: str
    table_id: str
    title: str
    slug: str
    universe: str
    sequence: int
    start_position: int
    cell_count: int
    columns: dict[str, ColumnOut]


class RowsOut(BaseModel):
    total: int
    page: int
    page_size: int
    rows: list[dict[str, str]]


class DescriptiveOut(BaseModel):
    count: int
    nulls: int
    mean: float | None = None
    median: float | None = None
    stddev: float | None = None
    min: float | None = None
    max: float | None = None


class MoeOut(BaseModel):
    estimate: float
    moe: float
    standard_error: float
    cv_percent: float | None = None
    ci_low: float
    ci_high: float


class StatsOut(BaseModel):
    dataset_id: str
    column: str
    moe_column: str
    total_rows: int
    descriptive: DescriptiveOut
    moe: MoeOut | None = None


class SearchHitOut(BaseModel):
    dataset_id: str
    matched_field: str
    snippet: str


class ErrorOut(BaseModel):
    error: str
    detail: str
