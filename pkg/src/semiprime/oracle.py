"""Per-integer trial-division recomputation of every accumulated sum.

Deliberately shares no code with the sieve pipeline.
"""

from __future__ import annotations

import math

from semiprime.master import SUM_COLUMNS, MasterSeries

MAX_ORACLE_LIMIT = 10**6


def _least_factor(n: int, start: int = 2) -> int:
    if n % 2 == 0 and start <= 2:
        return 2
    d = max(3, start | 1)
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def semiprime_split(n: int) -> tuple[int, int] | None:
    """(p, q) with p <= q primes and p*q == n, or None when omega(n) != 2."""
    if n < 4:
        return None
    p = _least_factor(n)
    if p == n:
        return None
    q = n // p
    return (p, q) if _least_factor(q, p) == q else None


def oracle_sums(limit: int, checkpoints: list[int]) -> dict[int, dict[str, float]]:
    """All eight sums and the semiprime count at each checkpoint <= limit."""
    if limit > MAX_ORACLE_LIMIT:
        raise ValueError(f"oracle limit {limit} exceeds {MAX_ORACLE_LIMIT}")
    terms: dict[str, list[float]] = {name: [] for name in SUM_COLUMNS}
    marks = sorted(set(c for c in checkpoints if c <= limit))
    out = {}
    mi = 0
    for n in range(1, limit + 1):
        split = semiprime_split(n)
        if split is not None:
            p, q = split
            log_n = math.log(n)
            ups = math.log(p) if p == q else math.log(p) + math.log(q)
            terms["psi"].append(ups)
            terms["sum_logn"].append(log_n)
            terms["sum_log2n"].append(log_n**2)
            terms["sum_recip"].append(1 / n)
            terms["sum_logn_over_n"].append(log_n / n)
            terms["sum_upsilon_over_n"].append(ups / n)
            terms["sum_upsilon_logn"].append(ups * log_n)
            terms["sum_upsilon_over_nlogn"].append(ups / (n * log_n))
        while mi < len(marks) and marks[mi] == n:
            snap = {name: math.fsum(v) for name, v in terms.items()}
            snap["semiprime_count"] = len(terms["psi"])
            out[n] = snap
            mi += 1
    return out


def compare_series(series: MasterSeries, expected: dict[int, dict[str, float]]) -> dict[str, float]:
    """Max relative deviation per column between a series and oracle snapshots."""
    worst = {name: 0.0 for name in (*SUM_COLUMNS, "semiprime_count")}
    for i, x in enumerate(series.grid.tolist()):
        ref = expected[math.floor(x)]
        for name in worst:
            a = float(series.column(name)[i])
            b = float(ref[name])
            worst[name] = max(worst[name], abs(a - b) / max(abs(b), 1.0))
    return worst
