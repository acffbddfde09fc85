"""Counting primitive Dirichlet characters whose l-th power is principal.

b_l(n) counts primitive chi mod n with chi^l principal, i.e. with order
dividing l.  This is the reading under which the published local tables
hold (b_6(3) = 1 counts the quadratic character mod 3).  b_l(1) = 1.
"""
from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .characters import group_orders, primitive_order_histogram
from .primes import ResourceLimitError, divisors, moebius

BRUTEFORCE_LIMIT = 20000


def b_bruteforce(ell: int, n: int) -> int:
    """Enumerate all characters mod n; count primitive ones with order dividing l."""
    _check(ell, n)
    if n > BRUTEFORCE_LIMIT:
        raise ResourceLimitError(f"brute-force enumeration limited to n <= {BRUTEFORCE_LIMIT}")
    return sum(c for order, c in primitive_order_histogram(n).items() if ell % order == 0)


def roots_of_unity_count(ell: int, n: int) -> int:
    """Number of characters chi mod n with chi^l principal."""
    return math.prod(math.gcd(ell, o) for o in group_orders(n))


def b_moebius(ell: int, n: int) -> int:
    """b_l(n) = sum_{d | n} mu(n/d) g(d), g(d) = #{chi mod d : chi^l = 1}."""
    _check(ell, n)
    return sum(moebius(n // d) * roots_of_unity_count(ell, d) for d in divisors(n))


def _check(ell: int, n: int) -> None:
    if ell < 1:
        raise ValueError("order must be positive")
    if n < 1:
        raise ValueError("n must be positive")


@dataclass(frozen=True, eq=False)
class CensusTable:
    order: int
    max_n: int
    counts: np.ndarray  # counts[n] = b(n), counts[0] unused
    partial_sums: np.ndarray

    def b(self, n: int) -> int:
        return int(self.counts[n])

    def S(self, n: int) -> int:
        return int(self.partial_sums[n])

    def rows(self):
        for n in range(1, self.max_n + 1):
            yield n, int(self.counts[n]), int(self.partial_sums[n])

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "b", "partial_sum"])
            w.writerows(self.rows())


def _g_table(ell: int, N: int) -> np.ndarray:
    """g(n) = #{chi mod n : chi^l principal} for n <= N, via its multiplicativity."""
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, N + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    g = np.zeros(N + 1, dtype=np.int64)
    g[1] = 1
    cache: dict[int, int] = {}
    for n in range(2, N + 1):
        p = int(spf[n])
        q = p
        m = n // p
        while m % p == 0:
            m //= p
            q *= p
        if q not in cache:
            cache[q] = roots_of_unity_count(ell, q)
        g[n] = g[m] * cache[q]
    return g


def census(ell: int, N: int, spot_checks: int = 32, seed: int = 0) -> CensusTable:
    """b_l(n) for 1 <= n <= N by Moebius inversion of g, with brute-force spot checks."""
    if ell < 1:
        raise ValueError("order must be positive")
    if N < 1:
        raise ValueError("N must be positive")
    g = _g_table(ell, N)
    mu = np.zeros(N + 1, dtype=np.int64)
    mu[1] = 1
    # mu by Dirichlet inverse of 1
    for d in range(1, N + 1):
        if mu[d]:
            mu[2 * d::d] -= mu[d]
    b = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        if g[d]:
            ks = np.arange(1, N // d + 1)
            b[d * ks] += mu[ks] * g[d]
    rng = random.Random(seed)
    sample = {1, N} | {rng.randint(1, min(N, 5000)) for _ in range(spot_checks)}
    for n in sorted(sample):
        if n <= min(N, 5000) and b[n] != b_bruteforce(ell, n):
            raise AssertionError(f"census mismatch at n={n}")
    partial = np.cumsum(b)
    b.setflags(write=False)
    partial.setflags(write=False)
    return CensusTable(ell, N, b, partial)


def divisor_count(ell: int) -> int:
    return len(divisors(ell))


def log_spaced(N: int, points_per_decade: int = 4, start: int = 10) -> list[int]:
    out = []
    x = float(start)
    while x <= N:
        out.append(int(round(x)))
        x *= 10 ** (1 / points_per_decade)
    if not out or out[-1] != N:
        out.append(N)
    return sorted(set(out))


def asymptotic_ratio(table: CensusTable, points=None) -> list[tuple[int, float]]:
    """(N', S(N') / (N' ln(N')^(d(l)-2))) at logarithmically spaced N'."""
    if table.max_n < 3:
        raise ValueError("asymptotic ratios need N >= 3")
    d = divisor_count(table.order)
    pts = points or log_spaced(table.max_n)
    return [(n, table.S(n) / (n * math.log(n) ** (d - 2))) for n in pts if n >= 3]
