"""Semiprime weighted sums: the master function, its partial sums and checks."""

from semiprime.errors import CapacityError, DomainError, RangeError, ShapeError
from semiprime.sieve import (
    Factorization,
    PrimeTable,
    build_prime_table,
    factorize,
    omega_segment,
    prime_count,
    theta,
)
from semiprime.master import (
    MasterSeries,
    accumulate_series,
    psi_prime_sum,
    sum_pi_over_primes,
    upsilon,
)

__all__ = [
    "CapacityError",
    "DomainError",
    "RangeError",
    "ShapeError",
    "Factorization",
    "PrimeTable",
    "build_prime_table",
    "factorize",
    "omega_segment",
    "prime_count",
    "theta",
    "MasterSeries",
    "accumulate_series",
    "psi_prime_sum",
    "sum_pi_over_primes",
    "upsilon",
]
