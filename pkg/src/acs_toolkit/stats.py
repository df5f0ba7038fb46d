"""MOE-aware descriptive statistics over assembled table columns.

All published margins of error are at the 90% confidence level, so the
standard error divisor is fixed at 1.645. That constant reproduces the
known CV of 48.6% for an estimate of 60 with an MOE of 48.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import StatsDomainError, UndefinedCvError
from .model import CellValue, Numeric

Z_90 = 1.645


@dataclass(frozen=True, slots=True)
class DescriptiveStats:
    """Counts plus basic aggregates; aggregates are None when count == 0."""

    count: int
    nulls: int
    mean: float | None = None
    median: float | None = None
    stddev: float | None = None
    min: float | None = None
    max: float | None = None


@dataclass(frozen=True, slots=True)
class MoeStats:
    """Survey error measures for a single (estimate, moe) pair.

    cv_percent is None when the estimate is zero (CV undefined).
    """

    estimate: float
    moe: float
    standard_error: float
    cv_percent: float | None
    ci_low: float
    ci_high: float


def standard_error(moe: float) -> float:
    """Standard error implied by a 90%-level margin of error."""
    if moe < 0:
        raise StatsDomainError(f"moe must be non-negative, got {moe}")
    return moe / Z_90


def coefficient_of_variation(estimate: float, moe: float) -> float:
    """CV as a percent: 100 * (moe / 1.645) / |estimate|."""
    if estimate == 0:
        raise UndefinedCvError("coefficient of variation is undefined for a zero estimate")
    return 100.0 * standard_error(moe) / abs(estimate)


def confidence_interval(estimate: float, moe: float) -> tuple[float, float]:
    """90% confidence interval (estimate - moe, estimate + moe)."""
    if moe < 0:
        raise StatsDomainError(f"moe must be non-negative, got {moe}")
    return estimate - moe, estimate + moe


def aggregate_moe(moes: Iterable[float]) -> float:
    """MOE of a sum of estimates: root of the sum of squared MOEs."""
    total = 0.0
    for m in moes:
        if m < 0:
            raise StatsDomainError(f"moe must be non-negative, got {m}")
        total += m * m
    return math.sqrt(total)


def moe_stats(estimate: float, moe: float) -> MoeStats:
    """Bundle every error measure for one cell; CV is None at estimate 0."""
    se = standard_error(moe)
    cv = None if estimate == 0 else 100.0 * se / abs(estimate)
    low, high = confidence_interval(estimate, moe)
    return MoeStats(
        estimate=estimate,
        moe=moe,
        standard_error=se,
        cv_percent=cv,
        ci_low=low,
        ci_high=high,
    )


def describe_values(values: Sequence[CellValue]) -> DescriptiveStats:
    """Descriptive statistics over a cell column.

    Jam cells are excluded from the aggregates and counted as nulls.
    The standard deviation is the sample (n-1) form and is None for
    fewer than two numeric values.
    """
    numbers = [v.value for v in values if isinstance(v, Numeric)]
    nulls = len(values) - len(numbers)
    if not numbers:
        return DescriptiveStats(count=0, nulls=nulls)
    return DescriptiveStats(
        count=len(numbers),
        nulls=nulls,
        mean=statistics.fmean(numbers),
        median=statistics.median(numbers),
        stddev=statistics.stdev(numbers) if len(numbers) >= 2 else None,
        min=min(numbers),
        max=max(numbers),
    )


def sumlevel_frequency(table) -> dict[str, int]:
    """Row counts per summary level.

    Accepts an assembled table (anything with ``.rows`` carrying
    ``.sumlevel``) or a bare iterable of sumlevel codes. The counts
    always partition the rows.
    """
    rows = getattr(table, "rows", table)
    levels = (getattr(row, "sumlevel", row) for row in rows)
    return dict(sorted(Counter(levels).items()))
