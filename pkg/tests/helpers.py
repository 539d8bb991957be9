"""Brute-force references, independent of the package."""

import math


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return sorted(out.items())


def big_omega(n):
    return sum(k for _, k in factor(n))


def upsilon_bf(n):
    f = factor(n)
    if big_omega(n) != 2:
        return 0.0
    return math.log(f[0][0]) if len(f) == 1 else math.log(n)


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]
