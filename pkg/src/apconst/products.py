"""Prime zeta functions over residue classes and accelerated Euler products.

For a class k mod l and primes p > P,

    sum_{p = k, p > P} p^-s
        = (1/phi(l)) sum_chi conj(chi(k)) sum_{j>=1} (mu(j)/j) log L_P(js, chi^j)

where L_P(s, chi) = prod_{p > P} (1 - chi(p) p^-s)^-1 is the stripped
L-function.  Stripped values sit close to 1, so principal-branch logarithms
are safe, and log L_P(js) decays like P^-js, so few terms are needed.
Primes p <= P are always handled explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .characters import characters_mod
from .lseries import _s_value, stripped_log
from .numerics import GUARD_BITS, Approx, rounding_error
from .primes import moebius, primes_up_to, sieve, totient

DEFAULT_STRIP = 1000


def tail_bound(sigma, strip_below: int) -> mpf:
    """Upper bound for sum_{n > P} n^-sigma (sigma > 1)."""
    q = mpf(strip_below + 1)
    sigma = _s_value(sigma)
    return q ** (-sigma) + q ** (1 - sigma) / (sigma - 1)


def default_depth(s, strip_below: int, prec: int) -> int:
    """Smallest J with tail_bound((J+1) s, P) below 2^-(prec+16)."""
    target = mpf(2) ** (-(prec + 16))
    sv = _s_value(s)
    j = 0
    while tail_bound((j + 1) * sv, strip_below) >= target:
        j += 1
    return j


def _geometric_factor(s, strip_below: int) -> mpf:
    return 1 / (1 - mpf(strip_below + 1) ** (-_s_value(s)))


@dataclass(frozen=True)
class ClassPrimeZeta:
    modulus: int
    k: int
    s: object
    value: mpf
    error: mpf
    strip_below: int
    depth: int
    imag_residue: mpf
    prec: int

    @property
    def approx(self) -> Approx:
        return Approx(self.value, self.error, self.prec)


def _check_class(modulus: int, k: int) -> int:
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(k, modulus) != 1:
        raise ValueError(f"class {k} is not coprime to {modulus}")
    return k % modulus


def _mul_key(j: int, s):
    return j * s


def large_prime_zeta(modulus: int, k: int, s, strip_below: int, depth: int,
                     prec: int) -> tuple:
    """(complex value, error) of sum_{p = k mod l, p > P} p^-s by Moebius inversion.

    The error covers the L-value errors and the truncation at depth J;
    the residual imaginary part is left in the value for the caller.
    """
    chars = characters_mod(modulus)
    phi = len(chars)
    total = mpmath.mpc(0)
    err = mpf(0)
    with mpmath.workprec(prec + GUARD_BITS + 8):
        for chi in chars:
            w = chi.value(k).conjugate().to_complex()
            inner = mpmath.mpc(0)
            for j in range(1, depth + 1):
                mu = moebius(j)
                if mu == 0:
                    continue
                lv = stripped_log(chi.power(j), _mul_key(j, s), strip_below, prec)
                inner += mpf(mu) / j * lv.value
                err += lv.error / j
            total += w * inner
        total /= phi
        err = err / phi + tail_bound((depth + 1) * _s_value(s), strip_below) * _geometric_factor(s, strip_below)
    return total, err


def class_prime_zeta(modulus: int, k: int, s, strip_below: int = DEFAULT_STRIP,
                     depth: Optional[int] = None, prec: int = 256) -> ClassPrimeZeta:
    """sum_{p = k mod l} p^-s for real s > 1.

    ``depth=0`` means direct summation over p <= P only, with the whole
    tail sum_{n > P} n^-s taken as the error.
    """
    k = _check_class(modulus, k)
    sv = _s_value(s)
    if sv <= 1:
        raise ValueError("s must exceed 1")
    if depth is None:
        depth = default_depth(s, strip_below, prec)
    small = [p for p in primes_up_to(strip_below) if p % modulus == k]
    with mpmath.workprec(prec + GUARD_BITS + 8):
        head = mpmath.fsum(mpf(p) ** (-sv) for p in small)
        head_err = rounding_error(head, prec, len(small) + 1)
        if depth == 0:
            return ClassPrimeZeta(modulus, k, s, head, head_err + tail_bound(sv, strip_below),
                                  strip_below, 0, mpf(0), prec)
        large, err = large_prime_zeta(modulus, k, s, strip_below, depth, prec)
        imag = abs(mpmath.im(large))
        value = head + mpmath.re(large)
        err = err + head_err + imag
    return ClassPrimeZeta(modulus, k, s, value, err, strip_below, depth, imag, prec)


# ---------------------------------------------------------------------------
# Euler products over classes


@dataclass(frozen=True)
class ClassProductSpec:
    """prod_{p mod l in classes} (1 - p^-s)^-exponent."""

    modulus: int
    classes: frozenset
    exponent: int
    s: object

    def __post_init__(self):
        object.__setattr__(self, "classes", frozenset(c % self.modulus for c in self.classes))


def _log_class_product_large(modulus: int, classes: Sequence[int], s, strip_below: int,
                             prec: int) -> tuple:
    """log prod_{p > P, p mod l in classes} (1 - p^-s)^-1 as (value, error)."""
    sv = _s_value(s)
    target = mpf(2) ** (-(prec + 16))
    total = mpf(0)
    err = mpf(0)
    m = 1
    with mpmath.workprec(prec + GUARD_BITS + 8):
        while True:
            ms = _mul_key(m, s)
            depth = default_depth(ms, strip_below, prec)
            for k in classes:
                if depth == 0:
                    # PZ_k(ms) over p > P is already below target
                    err += tail_bound(m * sv, strip_below)
                    continue
                large, e = large_prime_zeta(modulus, k, ms, strip_below, depth, prec)
                total += mpmath.re(large) / m
                err += (e + abs(mpmath.im(large))) / m
            m += 1
            rest = tail_bound(m * sv, strip_below) * _geometric_factor(s, strip_below)
            if rest < target:
                err += rest
                break
    return total, err


def class_euler_product(spec: ClassProductSpec, strip_below: int = DEFAULT_STRIP,
                        prec: int = 256) -> Approx:
    """Accelerated value of prod_{p in classes} (1 - p^-s)^-e."""
    ell, e = spec.modulus, spec.exponent
    sv = _s_value(spec.s)
    if sv <= 1:
        raise ValueError("s must exceed 1")
    if not spec.classes or e == 0:
        return Approx(mpf(1), mpf(0), prec)
    coprime = sorted(c for c in spec.classes if math.gcd(c, ell) == 1)
    small = [p for p in primes_up_to(max(strip_below, ell)) if p % ell in spec.classes]
    # primes dividing l form singleton classes and are always explicit
    small_set = set(small)
    small = sorted(p for p in small_set if p <= strip_below or ell % p == 0)
    with mpmath.workprec(prec + GUARD_BITS + 8):
        log_head = -mpmath.fsum(mpmath.log1p(-mpf(p) ** (-sv)) for p in small)
        err = rounding_error(log_head, prec, len(small) + 1)
        if coprime:
            large, large_err = _log_class_product_large(ell, coprime, spec.s, strip_below, prec)
            log_head += large
            err += large_err
        log_val = Approx(e * log_head, abs(e) * err, prec)
        out = log_val.exp()
    return out


def class_product(modulus: int, classes: Iterable[int], exponent: int, s,
                  strip_below: int = DEFAULT_STRIP, prec: int = 256) -> Approx:
    return class_euler_product(ClassProductSpec(modulus, frozenset(classes), exponent, s),
                               strip_below, prec)


# ---------------------------------------------------------------------------
# Products of rational functions over a class


def _power_sums(coeffs: Sequence[Fraction], count: int) -> list[Fraction]:
    """p_1..p_count of the roots of the monic polynomial with descending coeffs."""
    lead = Fraction(coeffs[0])
    e = [Fraction(c) / lead for c in coeffs]  # x^d + e1 x^{d-1} + ...
    d = len(e) - 1
    ps = [Fraction(0)] * (count + 1)
    for n in range(1, count + 1):
        acc = -n * e[n] if n <= d else Fraction(0)
        for i in range(1, min(n - 1, d) + 1):
            acc -= e[i] * ps[n - i]
        ps[n] = acc
    return ps[1:]


def _poly_eval(coeffs: Sequence[int], x) -> object:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def log_coefficients(numerator: Sequence[int], denominator: Sequence[int], count: int) -> list[Fraction]:
    """c_1..c_count with log(N(p)/D(p)) = sum_n c_n p^-n (descending coefficients)."""
    if len(numerator) != len(denominator) or numerator[0] != denominator[0]:
        raise ValueError("numerator and denominator must share degree and leading coefficient")
    pn = _power_sums(numerator, count)
    pd = _power_sums(denominator, count)
    return [(b - a) / (n + 1) for n, (a, b) in enumerate(zip(pn, pd))]


def _root_radius(numerator: Sequence[int], denominator: Sequence[int]) -> float:
    r = 0.0
    for poly in (numerator, denominator):
        if len(poly) > 1:
            roots = np.roots(np.array(poly, dtype=float))
            if len(roots):
                r = max(r, float(np.max(np.abs(roots))))
    return r * 1.01 + 1e-9


def class_rational_product(modulus: int, classes: Iterable[int], numerator: Sequence[int],
                           denominator: Sequence[int], strip_below: int = DEFAULT_STRIP,
                           prec: int = 256) -> Approx:
    """prod_{p mod l in classes} N(p)/D(p) for integer polynomials N, D.

    Coefficients are in descending powers of p.  N/D must be 1 + O(p^-2).
    Large primes are handled through log(N/D) = sum_n c_n p^-n with exact
    c_n (Newton power sums) and accelerated class prime zeta values.
    """
    classes = sorted({c % modulus for c in classes})
    if any(math.gcd(c, modulus) != 1 for c in classes):
        raise ValueError("classes must be coprime to the modulus")
    deg = len(numerator) - 1
    radius = _root_radius(numerator, denominator)
    if radius >= strip_below:
        raise ValueError("strip_below must exceed every root of N and D")
    c1 = log_coefficients(numerator, denominator, 1)[0]
    if c1 != 0:
        raise ValueError("N(p)/D(p) - 1 must be O(p^-2) for convergence")
    small = [p for p in primes_up_to(strip_below) if p % modulus in classes]
    target = mpf(2) ** (-(prec + 16))
    with mpmath.workprec(prec + GUARD_BITS + 8):
        log_head = mpmath.fsum(mpmath.log(mpf(_poly_eval(numerator, p)) / _poly_eval(denominator, p))
                               for p in small)
        err = rounding_error(log_head, prec, 2 * len(small) + 1)
        # pick the number of series terms
        ratio = mpf(radius) / (strip_below + 1)
        count = 2
        while 2 * deg * mpf(radius) ** (count + 1) * tail_bound(count + 1, strip_below) / (1 - ratio) >= target:
            count += 1
        coeffs = log_coefficients(numerator, denominator, count)
        total = mpf(0)
        for n, c in enumerate(coeffs, start=1):
            if c == 0:
                continue
            depth = default_depth(n, strip_below, prec)
            cval = mpf(c.numerator) / c.denominator
            for k in classes:
                if depth == 0:
                    err += abs(cval) * tail_bound(n, strip_below)
                    continue
                large, e = large_prime_zeta(modulus, k, n, strip_below, depth, prec)
                total += cval * mpmath.re(large)
                err += abs(cval) * (e + abs(mpmath.im(large)))
        err += 2 * deg * mpf(radius) ** (count + 1) * tail_bound(count + 1, strip_below) / (1 - ratio)
        out = Approx(log_head + total, err, prec).exp()
    return out


# ---------------------------------------------------------------------------
# Empirical Mertens partial products


def mertens_partial(modulus: int, k: int, limit: int) -> mpf:
    """ln(P)^(1/phi(l)) * prod_{p < P, p = k mod l} (1 - 1/p), in double precision."""
    if limit < 3:
        raise ValueError("P must be at least 3")
    k = _check_class(modulus, k)
    primes = sieve(limit).primes
    primes = primes[primes < limit]
    sel = primes[primes % modulus == k].astype(float)
    log_prod = math.fsum(np.log1p(-1.0 / sel).tolist())
    return mpf(math.exp(log_prod + math.log(math.log(limit)) / totient(modulus)))
