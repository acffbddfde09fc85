"""Prime tables and residue-class filtering."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Bytes allowed for a sieve buffer; adjustable at runtime.
MEMORY_BUDGET = 1 << 30


class ResourceLimitError(RuntimeError):
    """A request exceeds a configured resource budget."""


@dataclass(frozen=True, eq=False)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())


def _sieve_array(limit: int) -> np.ndarray:
    # odd-only sieve: index i stands for 2i+1
    size = limit // 2 + 1
    mark = np.ones(size, dtype=bool)
    mark[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if mark[i]:
            p = 2 * i + 1
            mark[p * p // 2::p] = False
    odd = 2 * np.flatnonzero(mark) + 1
    odd = odd[odd <= limit]
    return np.concatenate(([2], odd)).astype(np.int64)


@lru_cache(maxsize=8)
def sieve(limit: int) -> PrimeTable:
    """All primes <= limit in ascending order."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if limit // 2 + 1 > MEMORY_BUDGET:
        raise ResourceLimitError(f"sieving to {limit} exceeds the memory budget")
    arr = _sieve_array(limit)
    arr.setflags(write=False)
    return PrimeTable(limit, arr)


def primes_in_class(table: PrimeTable, modulus: int, classes) -> np.ndarray:
    """Primes of ``table`` whose residue mod ``modulus`` lies in ``classes``."""
    classes = sorted(set(classes))
    if modulus < 1:
        raise ValueError("modulus must be positive")
    for r in classes:
        if not 0 <= r < modulus:
            raise ValueError(f"residue {r} is not reduced mod {modulus}")
    mask = np.isin(table.primes % modulus, classes)
    return table.primes[mask]


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    return sieve(limit).primes.tolist()


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, ascending primes."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def totient(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)
