"""Main terms of the Mertens-type estimates and their measured residuals."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from semiprime.errors import DomainError
from semiprime.master import MasterSeries

STATISTICS = (
    "psi",
    "sum_log2n",
    "sum_logn",
    "sum_logn_over_n",
    "sum_recip",
    "sum_upsilon_over_n",
)
DEFAULT_BOUND = 5.0


@dataclass(frozen=True)
class ResidualRow:
    x: float
    statistic: str
    actual: float
    main_term: float
    residual: float
    normalizer: float
    normalized_residual: float

    def as_dict(self) -> dict:
        return asdict(self)


def _logs(x: float) -> tuple[float, float]:
    if not x >= 4:
        raise DomainError(f"estimates hold for x >= 4, got {x}")
    lx = math.log(x)
    return lx, math.log(lx)


def main_term(statistic: str, x: float) -> float:
    lx, llx = _logs(x)
    if statistic in ("psi", "sum_logn"):
        return x * llx
    if statistic == "sum_log2n":
        return x * lx * llx
    if statistic == "sum_recip":
        return 0.5 * llx * llx
    if statistic in ("sum_logn_over_n", "sum_upsilon_over_n"):
        return lx * llx
    raise KeyError(f"unknown statistic {statistic!r}")


def normalizer(statistic: str, x: float) -> float:
    """Scale of the O-term for ``statistic`` at x."""
    lx, llx = _logs(x)
    if statistic in ("psi", "sum_logn"):
        return x
    if statistic == "sum_log2n":
        return x * lx
    if statistic == "sum_recip":
        return llx
    if statistic in ("sum_logn_over_n", "sum_upsilon_over_n"):
        return lx
    raise KeyError(f"unknown statistic {statistic!r}")


def residual_report(
    series: MasterSeries, statistics: tuple[str, ...] = STATISTICS
) -> list[ResidualRow]:
    """Rows ordered by x ascending, then statistic name ascending."""
    rows = []
    names = sorted(statistics)
    for i, x in enumerate(series.grid.tolist()):
        for name in names:
            actual = float(series.column(name)[i])
            main = main_term(name, x)
            scale = normalizer(name, x)
            residual = actual - main
            rows.append(
                ResidualRow(x, name, actual, main, residual, scale, residual / scale)
            )
    return rows


@dataclass(frozen=True)
class BoundednessResult:
    statistic: str
    bound: float
    max_abs_normalized: float
    passed: bool


def boundedness_check(
    rows: list[ResidualRow], bound: float = DEFAULT_BOUND
) -> dict[str, BoundednessResult]:
    if not rows:
        raise DomainError("no residual rows to check")
    if bound <= 0:
        raise DomainError("bound must be positive")
    worst: dict[str, float] = {}
    for r in rows:
        worst[r.statistic] = max(worst.get(r.statistic, 0.0), abs(r.normalized_residual))
    return {
        name: BoundednessResult(name, bound, w, w <= bound)
        for name, w in sorted(worst.items())
    }


def stabilization(rows: list[ResidualRow], statistic: str, last: int = 3) -> list[float]:
    """|differences| of consecutive normalized residuals over the last ``last`` points."""
    seq = [r.normalized_residual for r in rows if r.statistic == statistic]
    tail = seq[-last:]
    return [abs(b - a) for a, b in zip(tail, tail[1:])]
