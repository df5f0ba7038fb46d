"""Rebuild survey summary-file releases into usable tables, then serve them.

The toolchain ingests a release's source layout (lookup, geography, and
estimate/margin sequence files), reconstructs each thematic table with its
margin-of-error columns adjacent, joins geography names, and emits one CSV
per table plus a hierarchical metadata dictionary. A read-only HTTP catalog
serves browsing, search, row slices, quick statistics and CSV export.
"""

from .assemble import (
    DEFAULT_JAM_POLICY,
    DEFAULT_JAM_TOKENS,
    JamPolicy,
    assemble_table,
    coerce_cell,
    format_number,
    write_table_csv,
)
from .catalog import Catalog, load_catalog, quick_stats, search, table_slice
from .errors import AcsError
from .fixtures import FixtureSpec, generate_release, oracle_tables
from .ingest import discover_release, parse_geography, parse_lookup, stream_sequence_pair
from .metadata import Dictionary, build_dictionary, emit_dictionary, load_dictionary
from .model import (
    ColumnDef,
    GeoRecord,
    Jam,
    Numeric,
    Release,
    SubjectRef,
    TableShell,
    make_column_id,
    make_dataset_id,
    parse_dataset_id,
    slugify,
)
from .pipeline import BuildResult, build_release
from .stats import (
    Z_90,
    DescriptiveStats,
    MoeStats,
    aggregate_moe,
    coefficient_of_variation,
    confidence_interval,
    describe_values,
    moe_stats,
    standard_error,
)

__version__ = "0.1.0"

__all__ = [
    "AcsError",
    "BuildResult",
    "Catalog",
    "ColumnDef",
    "DEFAULT_JAM_POLICY",
    "DEFAULT_JAM_TOKENS",
    "DescriptiveStats",
    "Dictionary",
    "FixtureSpec",
    "GeoRecord",
    "Jam",
    "JamPolicy",
    "MoeStats",
    "Numeric",
    "Release",
    "SubjectRef",
    "TableShell",
    "Z_90",
    "aggregate_moe",
    "assemble_table",
    "build_dictionary",
    "build_release",
    "coefficient_of_variation",
    "coerce_cell",
    "confidence_interval",
    "describe_values",
    "discover_release",
    "emit_dictionary",
    "format_number",
    "generate_release",
    "load_catalog",
    "load_dictionary",
    "make_column_id",
    "make_dataset_id",
    "moe_stats",
    "oracle_tables",
    "parse_dataset_id",
    "parse_geography",
    "parse_lookup",
    "quick_stats",
    "search",
    "slugify",
    "standard_error",
    "stream_sequence_pair",
    "table_slice",
    "write_table_csv",
]
