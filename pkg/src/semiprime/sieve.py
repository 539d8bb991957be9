"""Prime tables, pi/theta lookups and segmented big-omega sieving.

All integers are held as int64; the largest supported x is ``MAX_X`` so
products p*q near x stay far from overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from semiprime.errors import CapacityError, DomainError, RangeError

MAX_X = 10**10
DEFAULT_SEGMENT_SIZE = 1 << 22
# one byte per odd number in the single-shot table sieve
MAX_TABLE_LIMIT = 2 * 10**8


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to ``limit`` with running sums of their logarithms.

    ``cumulative_log[i]`` is ``log(primes[0]) + ... + log(primes[i])``.
    Treat instances as immutable; workers share them read-only.
    """

    limit: int
    primes: np.ndarray
    cumulative_log: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def logs(self) -> np.ndarray:
        return np.log(self.primes.astype(np.float64))


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def big_omega(self) -> int:
        return sum(k for _, k in self.factors)

    @property
    def distinct(self) -> int:
        return len(self.factors)

    def value(self) -> int:
        out = 1
        for p, k in self.factors:
            out *= p**k
        return out


def _odd_sieve(limit: int) -> np.ndarray:
    """Primes <= limit from an odd-only Eratosthenes sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    # index i stands for 2*i + 1
    size = (limit - 1) // 2 + 1
    is_odd_prime = np.ones(size, dtype=bool)
    is_odd_prime[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if is_odd_prime[i]:
            p = 2 * i + 1
            is_odd_prime[p * p // 2 :: p] = False
    odd = 2 * np.flatnonzero(is_odd_prime).astype(np.int64) + 1
    return np.concatenate((np.array([2], dtype=np.int64), odd))


def build_prime_table(limit: int, max_limit: int = MAX_TABLE_LIMIT) -> PrimeTable:
    if limit < 2:
        raise DomainError(f"prime table limit must be >= 2, got {limit}")
    if limit > max_limit:
        raise CapacityError(
            f"prime table limit {limit} exceeds the memory budget {max_limit}; "
            "sieve the range in segments with omega_segment instead"
        )
    primes = _odd_sieve(int(limit))
    logs = np.log(primes.astype(np.float64))
    # extended-precision running sum keeps theta correctly rounded far longer
    cumulative = np.cumsum(logs.astype(np.longdouble)).astype(np.float64)
    return PrimeTable(limit=int(limit), primes=primes, cumulative_log=cumulative)


def _check_range(table: PrimeTable, t: float) -> None:
    if t < 0:
        raise DomainError(f"argument must be >= 0, got {t}")
    if t > table.limit:
        raise RangeError(f"t={t} exceeds prime table limit {table.limit}")


def prime_count(table: PrimeTable, t: float) -> int:
    """pi(t): number of primes <= t, by binary search."""
    _check_range(table, t)
    return int(np.searchsorted(table.primes, math.floor(t), side="right"))


def theta(table: PrimeTable, t: float) -> float:
    """Chebyshev theta(t) = sum of log p over primes p <= t."""
    k = prime_count(table, t)
    return float(table.cumulative_log[k - 1]) if k else 0.0


def factorize(n: int, table: PrimeTable) -> Factorization:
    """Trial division by table primes up to sqrt(n); any leftover is prime."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    root = math.isqrt(n)
    if table.limit < root:
        raise CapacityError(
            f"prime table limit {table.limit} cannot certify factors of {n} "
            f"(needs >= {root})"
        )
    factors = []
    m = n
    for p in table.primes.tolist():
        if p * p > m:
            break
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            factors.append((p, k))
    if m > 1:
        factors.append((m, 1))
    return Factorization(n=n, factors=tuple(factors))


def sieving_primes(table: PrimeTable, hi: int) -> np.ndarray:
    """Table primes p with p*p <= hi; raises if the table stops short of sqrt(hi)."""
    root = math.isqrt(hi)
    if table.limit < root:
        raise CapacityError(
            f"prime table limit {table.limit} < sqrt({hi}) = {root}; "
            "build a larger table"
        )
    return table.primes[: np.searchsorted(table.primes, root, side="right")]


def _omega_block(lo: int, hi: int, base: Sequence[int]) -> np.ndarray:
    numbers = np.arange(lo, hi + 1, dtype=np.int64)
    omega = np.zeros(len(numbers), dtype=np.int8)
    # product of the prime powers found so far; a mismatch with n marks a
    # single prime cofactor above sqrt(hi)
    found = np.ones(len(numbers), dtype=np.int64)
    for p in base:
        pk = p
        while pk <= hi:
            start = (-lo) % pk
            omega[start::pk] += 1
            found[start::pk] *= p
            pk *= p
    omega += found != numbers
    return omega


def omega_segment(
    lo: int,
    hi: int,
    table: PrimeTable,
    max_length: int = DEFAULT_SEGMENT_SIZE,
) -> np.ndarray:
    """Big omega of every integer in [lo, hi], as an int8 array.

    Each prime power p**j <= hi adds one to its multiples; whatever is left
    after dividing out the table primes up to sqrt(hi) is a single prime.
    """
    if lo < 2 or hi < lo:
        raise DomainError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi > MAX_X:
        raise CapacityError(f"hi={hi} exceeds the supported maximum {MAX_X}")
    if hi - lo + 1 > max_length:
        raise CapacityError(
            f"segment length {hi - lo + 1} exceeds the budget {max_length}"
        )
    base = sieving_primes(table, hi).tolist()
    return _omega_block(lo, hi, base)


def smallest_factor_sieve(limit: int) -> np.ndarray:
    """spf[n] = least prime factor of n for 2 <= n <= limit (0 for n < 2)."""
    if limit > MAX_TABLE_LIMIT:
        raise CapacityError(f"limit {limit} exceeds the memory budget {MAX_TABLE_LIMIT}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in _odd_sieve(math.isqrt(limit)).tolist()[::-1]:
        # descending order leaves the smallest prime written last
        spf[p * p :: p] = p
    unset = spf == 0
    spf[unset] = np.arange(limit + 1, dtype=np.int32)[unset]
    spf[:2] = 0
    return spf


def factorize_spf(n: int, spf: np.ndarray) -> Factorization:
    """Factorization by repeated lookup in a smallest-prime-factor array."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    if n >= len(spf):
        raise CapacityError(f"n={n} beyond smallest-factor table of size {len(spf)}")
    factors = []
    m = n
    while m > 1:
        p = int(spf[m])
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        factors.append((p, k))
    return Factorization(n=n, factors=tuple(factors))
