"""FastAPI app over a loaded catalog.

The catalog is built once in ``create_app`` and shared immutably across
request handlers; every endpoint is a pure read.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..catalog import (
    Catalog,
    CatalogEntry,
    export_csv,
    load_catalog,
    quick_stats,
    search,
    table_slice,
)
from ..errors import (
    InvalidQueryError,
    MoeColumnError,
    UnknownColumnError,
    UnknownDatasetError,
)
from .schemas import (
    ColumnOut,
    DescriptiveOut,
    MoeOut,
    ReleaseOut,
    RowsOut,
    SearchHitOut,
    StatsOut,
    SubjectOut,
    TableOut,
)

# Domain error -> (HTTP status, short error code).
_ERROR_MAP = {
    UnknownDatasetError: (404, "unknown_dataset"),
    UnknownColumnError: (404, "unknown_column"),
    MoeColumnError: (400, "moe_column"),
    InvalidQueryError: (400, "invalid_query"),
}


def _table_out(entry: CatalogEntry) -> TableOut:
    return TableOut(
        dataset_id=entry.dataset_id,
        release=ReleaseOut(year=entry.release.year, period=entry.release.period),
        subject_id=entry.subject_id,
        subject_name=entry.subject_name,
        subject_slug=entry.subject_slug,
        table_id=entry.table_id,
        title=entry.entry.title,
        slug=entry.entry.slug,
        universe=entry.entry.universe,
        sequence=entry.entry.sequence,
        start_position=entry.entry.start_position,
        cell_count=entry.entry.cell_count,
        columns={
            line: ColumnOut(
                display_name=col.display_name,
                column_id=col.column_id,
                moe_column_id=col.moe_column_id,
            )
            for line, col in entry.entry.columns.items()
        },
    )


def create_app(out_root: Path | str, ui_dir: Path | str | None = None) -> FastAPI:
    catalog: Catalog = load_catalog(out_root)
    app = FastAPI(title="ACS table catalog", version="0.1.0")
    app.state.catalog = catalog

    for exc_type, (status, code) in _ERROR_MAP.items():
        def handler(request: Request, exc: Exception, _status=status, _code=code):
            return JSONResponse(
                status_code=_status, content={"error": _code, "detail": str(exc)}
            )

        app.add_exception_handler(exc_type, handler)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "invalid_request", "detail": str(exc)}
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_handler(request: Request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "http_error"
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": code, "detail": str(exc.detail)},
        )

    @app.get("/releases", response_model=list[ReleaseOut])
    def list_releases():
        return [ReleaseOut(year=r.year, period=r.period) for r in catalog.releases]

    @app.get("/releases/{year}/{period}/subjects", response_model=list[SubjectOut])
    def list_subjects(year: int, period: str):
        dictionary = catalog.dictionaries.get(f"{year}_{period}")
        if dictionary is None:
            raise UnknownDatasetError(f"no release {year} {period} in this catalog")
        return [
            SubjectOut(
                subject_id=subject_id,
                name=subject.name,
                slug=subject.slug,
                table_count=len(subject.tables),
            )
            for subject_id, subject in dictionary.subjects.items()
        ]

    @app.get("/search", response_model=list[SearchHitOut])
    def search_tables(q: str = Query(...)):
        return [
            SearchHitOut(
                dataset_id=h.dataset_id, matched_field=h.matched_field, snippet=h.snippet
            )
            for h in search(catalog, q)
        ]

    @app.get("/tables/{dataset_id}", response_model=TableOut)
    def table_detail(dataset_id: str):
        return _table_out(catalog.entry(dataset_id))

    @app.get("/tables/{dataset_id}/rows", response_model=RowsOut)
    def table_rows(
        dataset_id: str,
        sumlevel: str | None = None,
        stusab: str | None = None,
        geoid: str | None = None,
        page: int = 1,
        page_size: int = 100,
    ):
        filters = {"sumlevel": sumlevel, "stusab": stusab, "geoid": geoid}
        total, rows = table_slice(
            catalog, dataset_id, filters, page=page, page_size=page_size
        )
        return RowsOut(total=total, page=page, page_size=page_size, rows=rows)

    @app.get("/tables/{dataset_id}/stats/{column}", response_model=StatsOut)
    def table_stats(
        dataset_id: str,
        column: str,
        sumlevel: str | None = None,
        stusab: str | None = None,
        geoid: str | None = None,
    ):
        filters = {"sumlevel": sumlevel, "stusab": stusab, "geoid": geoid}
        result = quick_stats(catalog, dataset_id, column, filters)
        descriptive = DescriptiveOut(
            count=result.descriptive.count,
            nulls=result.descriptive.nulls,
            mean=result.descriptive.mean,
            median=result.descriptive.median,
            stddev=result.descriptive.stddev,
            min=result.descriptive.min,
            max=result.descriptive.max,
        )
        moe = None
        if result.moe is not None:
            moe = MoeOut(
                estimate=result.moe.estimate,
                moe=result.moe.moe,
                standard_error=result.moe.standard_error,
                cv_percent=result.moe.cv_percent,
                ci_low=result.moe.ci_low,
                ci_high=result.moe.ci_high,
            )
        return StatsOut(
            dataset_id=result.dataset_id,
            column=result.column,
            moe_column=result.moe_column,
            total_rows=result.total_rows,
            descriptive=descriptive,
            moe=moe,
        )

    @app.get("/tables/{dataset_id}/export")
    def table_export(
        dataset_id: str,
        sumlevel: str | None = None,
        stusab: str | None = None,
        geoid: str | None = None,
    ):
        filters = {"sumlevel": sumlevel, "stusab": stusab, "geoid": geoid}
        stream = export_csv(catalog, dataset_id, filters)
        return StreamingResponse(
            stream,
            media_type="text/csv",
            headers={
                "Content-Disposition": f'attachment; filename="{dataset_id}.csv"'
            },
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
