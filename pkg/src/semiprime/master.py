"""The master function and its partial sums over integers with two prime factors.

Upsilon(n) is log p for n = p**2, log(p*q) for n = p*q with p != q, else 0.
``accumulate_series`` streams [2, max(grid)] through the omega sieve once and
snapshots every accumulated sum at each grid point.

Summation scheme: each segment's terms are summed exactly-rounded with
``math.fsum``; segment totals are merged in ascending order with Neumaier
compensation.  A grid point inside a segment reads the merged state plus an
fsum of that segment's prefix.  Segment boundaries are fixed multiples of the
segment size, so results do not depend on the worker count or on which other
grid points were requested.
"""

from __future__ import annotations

import math
import os
from contextlib import nullcontext
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from semiprime.errors import CapacityError, DomainError
from semiprime.sieve import (
    DEFAULT_SEGMENT_SIZE,
    MAX_X,
    Factorization,
    PrimeTable,
    _omega_block,
    prime_count,
    sieving_primes,
)

SUM_COLUMNS = (
    "psi",
    "sum_logn",
    "sum_log2n",
    "sum_recip",
    "sum_logn_over_n",
    "sum_upsilon_over_n",
    "sum_upsilon_logn",
    "sum_upsilon_over_nlogn",
)


def upsilon(f: Factorization) -> float:
    if f.big_omega != 2:
        return 0.0
    if len(f.factors) == 1:
        return math.log(f.factors[0][0])
    return math.log(f.n)


@dataclass(frozen=True)
class MasterSeries:
    grid: np.ndarray
    psi: np.ndarray
    sum_logn: np.ndarray
    sum_log2n: np.ndarray
    sum_recip: np.ndarray
    sum_logn_over_n: np.ndarray
    sum_upsilon_over_n: np.ndarray
    sum_upsilon_logn: np.ndarray
    sum_upsilon_over_nlogn: np.ndarray
    semiprime_count: np.ndarray

    def column(self, name: str) -> np.ndarray:
        if name not in {f.name for f in fields(self)}:
            raise KeyError(name)
        return getattr(self, name)

    def index_of(self, x: float) -> int:
        hits = np.flatnonzero(self.grid == x)
        if not len(hits):
            raise KeyError(f"x={x} is not a grid point")
        return int(hits[0])

    def at(self, x: float) -> dict[str, float]:
        i = self.index_of(x)
        out = {name: float(getattr(self, name)[i]) for name in SUM_COLUMNS}
        out["semiprime_count"] = int(self.semiprime_count[i])
        return out

    def __len__(self) -> int:
        return len(self.grid)


def _segment_terms(lo: int, hi: int, base: Sequence[int]):
    """Integers n in [lo, hi] with omega(n) == 2 and their eight summands."""
    omega = _omega_block(lo, hi, base)
    n = lo + np.flatnonzero(omega == 2).astype(np.int64)
    nf = n.astype(np.float64)
    log_n = np.log(nf)
    root = np.rint(np.sqrt(nf)).astype(np.int64)
    square = root * root == n
    ups = np.where(square, np.log(root.astype(np.float64)), log_n)
    terms = (
        ups,
        log_n,
        log_n * log_n,
        1.0 / nf,
        log_n / nf,
        ups / nf,
        ups * log_n,
        ups / (nf * log_n),
    )
    return n, terms


def _segment_job(job):
    lo, hi, base, cuts = job
    n, terms = _segment_terms(lo, hi, base)
    totals = tuple(math.fsum(t.tolist()) for t in terms)
    snaps = []
    for cut in cuts:
        k = int(np.searchsorted(n, cut, side="right"))
        snaps.append((tuple(math.fsum(t[:k].tolist()) for t in terms), k))
    return totals, len(n), snaps


def _neumaier(s: float, c: float, v: float) -> tuple[float, float]:
    t = s + v
    if abs(s) >= abs(v):
        c += (s - t) + v
    else:
        c += (v - t) + s
    return t, c


def validate_grid(grid: Iterable[float]) -> np.ndarray:
    g = np.asarray(list(grid), dtype=np.float64)
    if g.ndim != 1 or len(g) == 0:
        raise DomainError("grid must be a nonempty sequence of x values")
    if np.any(np.diff(g) <= 0):
        raise DomainError("grid must be strictly ascending")
    if g[0] < 4:
        raise DomainError(f"grid values must be >= 4, got {g[0]}")
    if g[-1] > MAX_X:
        raise CapacityError(f"x={g[-1]} exceeds the supported maximum {MAX_X}")
    return g


def default_workers() -> int:
    env = os.environ.get("SEMIPRIME_WORKERS")
    return max(1, int(env)) if env else 1


def accumulate_series(
    grid: Sequence[float],
    table: PrimeTable,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int | None = None,
) -> MasterSeries:
    g = validate_grid(grid)
    if segment_size < 1:
        raise DomainError("segment_size must be positive")
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise DomainError("workers must be >= 1")
    cuts = np.floor(g).astype(np.int64)
    top = int(cuts[-1])
    base = sieving_primes(table, top).tolist()

    jobs = []
    for k in range(top // segment_size + 1):
        lo = max(k * segment_size, 2)
        hi = min((k + 1) * segment_size - 1, top)
        if lo > hi:
            continue
        inside = cuts[(cuts >= lo) & (cuts <= hi)].tolist()
        seg_base = [p for p in base if p * p <= hi]
        jobs.append((lo, hi, seg_base, inside))

    width = len(SUM_COLUMNS)
    state = [(0.0, 0.0)] * width
    count = 0
    out = np.zeros((len(g), width))
    counts = np.zeros(len(g), dtype=np.int64)
    row = 0
    parallel = workers > 1 and len(jobs) > 1
    with ProcessPoolExecutor(workers) if parallel else nullcontext() as pool:
        results = pool.map(_segment_job, jobs) if parallel else map(_segment_job, jobs)
        # merge strictly in segment order
        for totals, seg_count, snaps in results:
            for partial, partial_count in snaps:
                for j in range(width):
                    s, c = _neumaier(*state[j], partial[j])
                    out[row, j] = s + c
                counts[row] = count + partial_count
                row += 1
            state = [_neumaier(*state[j], totals[j]) for j in range(width)]
            count += seg_count

    return MasterSeries(
        grid=g,
        **{name: out[:, j] for j, name in enumerate(SUM_COLUMNS)},
        semiprime_count=counts,
    )


def _primes_to_half(x: float, table: PrimeTable) -> np.ndarray:
    if x < 4:
        raise DomainError(f"x must be >= 4, got {x}")
    if table.limit < x / 2:
        raise CapacityError(
            f"prime table limit {table.limit} < x/2 = {x / 2}; build a larger table"
        )
    return table.primes[: prime_count(table, x / 2)]


def _pi_of_quotients(x: float, primes: np.ndarray, table: PrimeTable) -> np.ndarray:
    # pi(x/p) == pi(floor(x) // p) for integer-valued pi
    q = math.floor(x) // primes
    return np.searchsorted(table.primes, q, side="right")


def psi_prime_sum(x: float, table: PrimeTable) -> float:
    """Sum over primes p <= x/2 of pi(x/p) * log p."""
    primes = _primes_to_half(x, table)
    pis = _pi_of_quotients(x, primes, table)
    return math.fsum((pis * np.log(primes.astype(np.float64))).tolist())


def sum_pi_over_primes(x: float, table: PrimeTable) -> float:
    """Sum over primes p <= x/2 of pi(x/p)."""
    primes = _primes_to_half(x, table)
    return float(int(_pi_of_quotients(x, primes, table).sum()))
