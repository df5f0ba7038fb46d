"""Exception taxonomy shared by every stage of the toolchain.

Every failure mode callers are expected to branch on gets its own class;
messages carry the identifying context (state, sequence, logrecno, table)
so diagnostics stay useful when raised deep inside a build.
"""


class AcsError(Exception):
    """Base class for all domain errors raised by this package."""


# --- identifier / vocabulary errors ---------------------------------------

class InvalidNameError(AcsError):
    """A name is empty or reduces to an empty slug."""


class LineRangeError(AcsError):
    """A column line number is outside [1, 999]."""


class DatasetIdError(AcsError):
    """A dataset identifier does not match the expected grammar."""


# --- source ingestion ------------------------------------------------------

class IngestError(AcsError):
    """Base class for source-layout and parse failures."""


class MissingReleaseError(IngestError):
    """The release directory does not exist under the source root."""


class MissingLookupError(IngestError):
    """The release directory has no lookup.csv."""


class NoDataFilesError(IngestError):
    """The release directory contains no estimate/margin file pairs."""


class UnpairedFileError(IngestError):
    """An estimate file has no margin counterpart, or vice versa."""


class MissingGeographyError(IngestError):
    """A state has data files but no geography file."""


class LookupFormatError(IngestError):
    """lookup.csv violates the lookup grammar."""


class GeographyFormatError(IngestError):
    """A geography file violates the geography grammar."""


class SequencePairError(IngestError):
    """Estimate and margin files disagree on row count or join keys."""


class RowWidthError(SequencePairError):
    """A data row does not carry exactly the expected number of cells."""


# --- table assembly --------------------------------------------------------

class AssemblyError(AcsError):
    """Base class for table reconstruction failures."""


class SliceBoundsError(AssemblyError):
    """A table's cell slice exceeds the width of a sequence row."""


class UnknownGeographyError(AssemblyError):
    """A data row references a (stusab, logrecno) with no geography record."""


class PartitionError(AssemblyError):
    """Shells within a sequence overlap or leave gaps."""


class ColumnSetError(AssemblyError):
    """The column definitions passed to assembly are not the shell's lines."""


class OverwriteError(AcsError):
    """An output file exists and overwriting was not requested."""


# --- metadata dictionary ---------------------------------------------------

class DictionaryError(AcsError):
    """Base class for metadata dictionary construction failures."""


class DanglingColumnError(DictionaryError):
    """A column definition references a table with no shell."""


class MissingSubjectError(DictionaryError):
    """A table shell references a subject with no definition."""


# --- statistics ------------------------------------------------------------

class StatsDomainError(AcsError):
    """A statistic was requested outside its domain (negative MOE, ...)."""


class UndefinedCvError(StatsDomainError):
    """Coefficient of variation is undefined for a zero estimate."""


# --- catalog / service -----------------------------------------------------

class CatalogError(AcsError):
    """Base class for catalog loading and query failures."""


class CatalogLoadError(CatalogError):
    """Built outputs are missing or inconsistent with their dictionary."""


class UnknownDatasetError(CatalogError):
    """No table with the requested dataset id exists in the catalog."""


class UnknownColumnError(CatalogError):
    """The requested column is not a column of the table."""


class MoeColumnError(CatalogError):
    """A margin-of-error column was requested where an estimate is needed."""


class InvalidQueryError(CatalogError):
    """A search query is empty or otherwise unusable."""


# --- fixtures --------------------------------------------------------------

class FixtureError(AcsError):
    """A fixture specification violates its own invariants."""
