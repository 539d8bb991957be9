"""Exact identities linking the master function, theta, pi and von Mangoldt.

Every check returns an :class:`IdentityReport`; an integer of the wrong
shape for a relation raises :class:`ShapeError` instead of failing it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from semiprime.errors import ShapeError
from semiprime.master import (
    MasterSeries,
    psi_prime_sum,
    sum_pi_over_primes,
    upsilon,
)
from semiprime.sieve import (
    Factorization,
    PrimeTable,
    build_prime_table,
    factorize,
    sieving_primes,
    theta,
)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class IdentityReport:
    name: str
    x_or_n: float
    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float
    passed: bool
    coefficients: tuple[int, ...] = ()
    note: str = ""

    def as_dict(self) -> dict:
        out = asdict(self)
        out["coefficients"] = list(self.coefficients)
        return out


def compare(
    name: str,
    arg: float,
    lhs: float,
    rhs: float,
    tolerance: float = DEFAULT_TOLERANCE,
    **extra,
) -> IdentityReport:
    abs_diff = abs(lhs - rhs)
    rel_diff = abs_diff / max(abs(lhs), 1.0)
    return IdentityReport(name, arg, lhs, rhs, abs_diff, rel_diff, rel_diff <= tolerance, **extra)


def _small_prime_sums(x: float, table: PrimeTable) -> tuple[float, float, float]:
    """Sums over p <= sqrt(x) of log^2 p, 1/p^2 and log p / p^2."""
    p = sieving_primes(table, math.floor(x)).astype(np.float64)
    lp = np.log(p)
    return (
        math.fsum((lp * lp).tolist()),
        math.fsum((1.0 / (p * p)).tolist()),
        math.fsum((lp / (p * p)).tolist()),
    )


def check_decompositions(
    series: MasterSeries, table: PrimeTable, tolerance: float = DEFAULT_TOLERANCE
) -> list[IdentityReport]:
    """Square terms carry half the full-log weight in the master function;
    each sum over omega(n) == 2 differs from its master-function twin by a
    sum over p <= sqrt(x)."""
    reports = []
    for i, x in enumerate(series.grid.tolist()):
        log2_sum, recip_sq, log_over_sq = _small_prime_sums(x, table)
        th = theta(table, math.isqrt(math.floor(x)))
        pairs = (
            ("decomp_psi", series.psi[i], series.sum_logn[i] - th),
            ("decomp_upsilon_logn", series.sum_upsilon_logn[i],
             series.sum_log2n[i] - 2.0 * log2_sum),
            ("decomp_upsilon_over_nlogn", series.sum_upsilon_over_nlogn[i],
             series.sum_recip[i] - 0.5 * recip_sq),
            ("decomp_upsilon_over_n", series.sum_upsilon_over_n[i],
             series.sum_logn_over_n[i] - log_over_sq),
        )
        for name, lhs, rhs in pairs:
            reports.append(compare(name, x, float(lhs), float(rhs), tolerance))
    return reports


def check_psi_prime_sum(
    x: float, series: MasterSeries, table: PrimeTable, tolerance: float = DEFAULT_TOLERANCE
) -> IdentityReport:
    streamed = float(series.psi[series.index_of(x)])
    return compare("psi_prime_sum", x, streamed, psi_prime_sum(x, table), tolerance)


def check_pi_sum_inequality(
    x: float, table: PrimeTable, tolerance: float = DEFAULT_TOLERANCE
) -> IdentityReport:
    """sum pi(x/p) log p <= log(x/2) * sum pi(x/p), both over p <= x/2.

    ``note`` carries the lower-bound main term (x/log x) log log x for
    comparison with sum pi(x/p); it is informational only.
    """
    lhs = psi_prime_sum(x, table)
    pi_sum = sum_pi_over_primes(x, table)
    rhs = math.log(x / 2) * pi_sum
    abs_diff = abs(lhs - rhs)
    slack = tolerance * max(abs(rhs), 1.0)
    lower = x / math.log(x) * math.log(math.log(x))
    return IdentityReport(
        "pi_sum_inequality",
        x,
        lhs,
        rhs,
        abs_diff,
        abs_diff / max(abs(lhs), 1.0),
        lhs <= rhs + slack,
        note=f"sum_pi={pi_sum:.0f} lower_bound_main_term={lower:.6f}",
    )


def mangoldt_divisor_sum(f: Factorization) -> float:
    """Sum of von Mangoldt over divisors: sum of k_i log p_i."""
    return math.fsum(k * math.log(p) for p, k in f.factors)


def upsilon_divisor_sum(f: Factorization) -> float:
    """Sum of Upsilon(d) over divisors d of n, without enumerating divisors.

    Squares p_i**2 | n contribute log p_i; each pair p_i p_j contributes
    log p_i + log p_j, i.e. every log p_i appears r - 1 times.
    """
    logs = [math.log(p) for p, _ in f.factors]
    squares = [lp for lp, (_, k) in zip(logs, f.factors) if k >= 2]
    r = len(logs)
    return math.fsum(squares + [(r - 1) * lp for lp in logs])


def upsilon_divisor_sum_bruteforce(f: Factorization, table: PrimeTable) -> float:
    ranges = [[p**j for j in range(k + 1)] for p, k in f.factors]
    total = []
    for combo in itertools.product(*ranges):
        d = math.prod(combo)
        total.append(upsilon(factorize(d, table)))
    return math.fsum(total)


def _as_factorization(n, table: PrimeTable | None) -> Factorization:
    if isinstance(n, Factorization):
        return n
    if table is None or table.limit < math.isqrt(n):
        table = build_prime_table(max(2, math.isqrt(n)))
    return factorize(n, table)


def check_relation_i(n, table: PrimeTable | None = None, tolerance: float = DEFAULT_TOLERANCE):
    """n = p**k, k >= 2: mangoldt divisor sum == k * upsilon divisor sum."""
    f = _as_factorization(n, table)
    if len(f.factors) != 1 or f.factors[0][1] < 2:
        raise ShapeError(f"relation i needs n = p**k with k >= 2, got {f.n}")
    k = f.factors[0][1]
    return compare("relation_i", f.n, mangoldt_divisor_sum(f), k * upsilon_divisor_sum(f), tolerance)


def check_relation_ii(n, table: PrimeTable | None = None, tolerance: float = DEFAULT_TOLERANCE):
    """n = (p_1 ... p_k)**k, k >= 2: the two divisor sums agree."""
    f = _as_factorization(n, table)
    k = len(f.factors)
    if k < 2 or any(e != k for _, e in f.factors):
        raise ShapeError(f"relation ii needs n = (p_1...p_k)**k with k >= 2, got {f.n}")
    return compare("relation_ii", f.n, mangoldt_divisor_sum(f), upsilon_divisor_sum(f), tolerance)


def check_relation_iii(n, table: PrimeTable | None = None, tolerance: float = DEFAULT_TOLERANCE):
    """Every k_i >= 2 and r <= k_i: the sums differ by sum (k_i - r) log p_i."""
    f = _as_factorization(n, table)
    r = len(f.factors)
    if r == 0 or any(k < 2 or k < r for _, k in f.factors):
        raise ShapeError(
            f"relation iii needs every exponent k_i >= max(2, r), got {f.n}"
        )
    coeffs = tuple(k - r for _, k in f.factors)
    extra = math.fsum(c * math.log(p) for c, (p, _) in zip(coeffs, f.factors))
    note = "zero coefficient present" if 0 in coeffs else ""
    return compare(
        "relation_iii",
        f.n,
        mangoldt_divisor_sum(f),
        upsilon_divisor_sum(f) + extra,
        tolerance,
        coefficients=coeffs,
        note=note,
    )


def prime_powers(limit: int) -> Iterator[int]:
    """p**k <= limit with k >= 2, ascending."""
    out = []
    for p in build_prime_table(max(2, math.isqrt(limit))).primes.tolist():
        q = p * p
        while q <= limit:
            out.append(q)
            q *= p
    yield from sorted(out)


def relation_ii_numbers(limit: int) -> Iterator[int]:
    """(p_1 ... p_k)**k <= limit with k >= 2 distinct primes, ascending."""
    out = []
    primes = build_prime_table(max(2, math.isqrt(limit))).primes.tolist()
    k = 2
    while k <= len(primes) and math.prod(primes[:k]) ** k <= limit:
        cap = math.floor(limit ** (1.0 / k)) + 1
        cands = [p for p in primes if p <= cap]
        for combo in itertools.combinations(cands, k):
            v = math.prod(combo) ** k
            if v <= limit:
                out.append(v)
        k += 1
    yield from sorted(out)


def relation_iii_numbers(limit: int) -> Iterator[int]:
    """n <= limit whose exponents all satisfy k_i >= max(2, r), ascending."""
    primes = build_prime_table(max(2, math.isqrt(limit))).primes.tolist()
    found = []

    # powerful numbers by depth-first extension over increasing primes
    def extend(start: int, value: int, exps: tuple[int, ...]) -> None:
        if exps and min(exps) >= len(exps):
            found.append(value)
        for i in range(start, len(primes)):
            p = primes[i]
            if value * p * p > limit:
                break
            v, e = value * p * p, 2
            while v <= limit:
                extend(i + 1, v, exps + (e,))
                v *= p
                e += 1

    extend(0, 1, ())
    yield from sorted(found)
