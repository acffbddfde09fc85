"""Arbitrary-precision numeric kernel.

Real and complex values are mpmath ``mpf``/``mpc`` numbers; every routine
here returns an :class:`Approx` carrying the value together with an absolute
error bound.  Work is done at ``prec + GUARD_BITS`` bits and truncation
errors are bounded analytically per routine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

import mpmath
from mpmath import mpc, mpf

GUARD_BITS = 32

Real = Union[int, Fraction, float, mpf]


@dataclass(frozen=True)
class Approx:
    """A real or complex value with an absolute error bound."""

    value: Union[mpf, mpc]
    error: mpf
    prec: int

    @property
    def real(self) -> "Approx":
        return Approx(mpmath.re(self.value), self.error, self.prec)

    def _ctx(self, other: "Approx | None" = None):
        p = self.prec if other is None else max(self.prec, other.prec)
        return mpmath.workprec(p + GUARD_BITS)

    def __add__(self, other: "Approx") -> "Approx":
        with self._ctx(other):
            return Approx(self.value + other.value, self.error + other.error,
                          min(self.prec, other.prec))

    def __sub__(self, other: "Approx") -> "Approx":
        with self._ctx(other):
            return Approx(self.value - other.value, self.error + other.error,
                          min(self.prec, other.prec))

    def __mul__(self, other: "Approx") -> "Approx":
        with self._ctx(other):
            v = self.value * other.value
            err = (abs(self.value) * other.error + abs(other.value) * self.error
                   + self.error * other.error + rounding_error(v, min(self.prec, other.prec)))
            return Approx(v, err, min(self.prec, other.prec))

    def __truediv__(self, other: "Approx") -> "Approx":
        with self._ctx(other):
            d = abs(other.value)
            if other.error * 2 >= d:
                raise ZeroDivisionError("divisor indistinguishable from zero")
            v = self.value / other.value
            err = (self.error + abs(v) * other.error) / (d - other.error) + rounding_error(v, self.prec)
            return Approx(v, err, min(self.prec, other.prec))

    def scale(self, c) -> "Approx":
        """Multiply by an exact (or exactly representable) constant."""
        with self._ctx():
            if isinstance(c, Fraction):
                c = mpf(c.numerator) / c.denominator
            return Approx(self.value * c, self.error * abs(c), self.prec)

    def power(self, q) -> "Approx":
        """Real power of a positive value, q rational or mpf."""
        with self._ctx():
            return self.log().scale(q).exp()

    def exp(self) -> "Approx":
        with self._ctx():
            v = mpmath.exp(self.value)
            # |exp(x+d) - exp(x)| <= |exp(x)| (e^|d| - 1)
            return Approx(v, abs(v) * mpmath.expm1(self.error) + rounding_error(v, self.prec, 4),
                          self.prec)

    def log(self) -> "Approx":
        """Principal-branch logarithm; requires error < |value| / 2."""
        with self._ctx():
            r = abs(self.value)
            if self.error * 2 >= r:
                raise ArithmeticError("logarithm of a value indistinguishable from zero")
            v = mpmath.log(self.value)
            return Approx(v, 2 * self.error / r + rounding_error(v, self.prec, 4), self.prec)

    def agrees_with(self, other, digits: int | None = None) -> bool:
        """True when the values coincide within the combined error bounds
        (or, with ``digits``, within 10**-digits relative)."""
        with self._ctx(other if isinstance(other, Approx) else None):
            return self._agrees(other, digits)

    def _agrees(self, other, digits):
        if isinstance(other, Approx):
            diff = abs(self.value - other.value)
            tol = self.error + other.error
        else:
            diff = abs(self.value - other)
            tol = self.error
        if digits is not None:
            tol = max(tol, mpf(10) ** (-digits) * abs(self.value))
        return diff <= tol

    def correct_digits(self) -> int:
        """Number of correct significant decimal digits implied by the bound."""
        if self.error == 0:
            return self.prec * 3 // 10
        mag = abs(self.value)
        if mag == 0:
            return 0
        return max(0, int(mpmath.floor(mpmath.log10(mag / self.error))))


def rounding_error(value, prec: int, ops: int = 1) -> mpf:
    """Bound on accumulated rounding error of ``ops`` operations near ``value``."""
    return abs(value) * ops * mpf(2) ** (-(prec + GUARD_BITS - 2)) + mpf(2) ** (-(prec + GUARD_BITS))


def _to_mpf(x: Real) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # Akiyama–Tanigawa yields B_1 = +1/2; flipped below.
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n, with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > 1 and n % 2:
        return Fraction(0)
    size = max(16, 1 << (n.bit_length()))
    return _bernoulli_table(size)[n]


# ---------------------------------------------------------------------------
# Constants


@lru_cache(maxsize=None)
def euler_gamma(prec: int) -> Approx:
    """Euler's constant by the Brent–McMillan algorithm (B1).

    gamma ~ U/V with U = sum A_k, V = sum B_k, where A_0 = -log n, B_0 = 1,
    B_k = B_{k-1} n^2/k^2 and A_k = (A_{k-1} n^2/k + B_k)/k.  The truncation
    error is below pi*exp(-4n).
    """
    if prec < 16:
        raise ValueError("precision must be at least 16 bits")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp + 16):
        n = int(math.ceil(wp * math.log(2) / 4)) + 2
        n2 = mpf(n) ** 2
        a = -mpmath.log(n)
        b = mpf(1)
        u, v = a, b
        eps = mpf(2) ** (-(wp + 16))
        k = 1
        while True:
            b = b * n2 / (k * k)
            a = (a * n2 / k + b) / k
            u += a
            v += b
            if k > n and abs(a) < eps * abs(u) and b < eps * v:
                break
            k += 1
        value = u / v
        err = mpmath.pi * mpmath.exp(-4 * n) + rounding_error(value, prec, 4 * k)
    return Approx(value, err, prec)


# ---------------------------------------------------------------------------
# Hurwitz and Riemann zeta


@lru_cache(maxsize=4096)
def _hurwitz_cached(s_key, a: Fraction, prec: int) -> Approx:
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp + 10):
        s = _to_mpf(s_key)
        av = _to_mpf(a)
        target = mpf(2) ** (-(wp + 4))
        n_direct = int(prec * 0.15) + 12
        total = mpf(0)
        for k in range(n_direct):
            total += (k + av) ** (-s)
        x = n_direct + av
        xs = x ** (-s)
        total += x * xs / (s - 1) + xs / 2
        # Euler–Maclaurin correction terms
        rising = s  # (s)_{2j-1}
        xpow = xs / x  # x^{-s-1}
        inv_x2 = 1 / (x * x)
        j = 1
        remainder = None
        while True:
            term = _to_mpf(bernoulli(2 * j)) / mpmath.factorial(2 * j) * rising * xpow
            total += term
            # |R_j| <= 4 (s)_{2j} x^{-s-2j} / (2 pi)^{2j+1}
            rising_even = rising * (s + 2 * j - 1)
            remainder = 4 * rising_even * xs * inv_x2 ** j / (2 * mpmath.pi) ** (2 * j + 1)
            if remainder < target * abs(total) or j > 4 * wp:
                break
            rising = rising_even * (s + 2 * j)
            xpow *= inv_x2
            j += 1
        err = remainder + rounding_error(total, prec, n_direct + 2 * j)
    return Approx(total, err, prec)


def _check_real_gt_one(s) -> None:
    if _to_mpf(s) <= 1:
        raise ValueError("s must be a real number greater than 1")


def _key(s):
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, Rational):
        return Fraction(s.numerator, s.denominator)
    return mpf(s)


def hurwitz_zeta(s: Real, a, prec: int) -> Approx:
    """Hurwitz zeta function sum_{n>=0} (n+a)^-s for real s > 1, rational 0 < a <= 1."""
    _check_real_gt_one(s)
    a = Fraction(a)
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    return _hurwitz_cached(_key(s), a, prec)


def zeta(s: Real, prec: int) -> Approx:
    """Riemann zeta at real s > 1."""
    _check_real_gt_one(s)
    return _hurwitz_cached(_key(s), Fraction(1), prec)


# ---------------------------------------------------------------------------
# Digamma at rational points


@lru_cache(maxsize=4096)
def digamma_rational(a, prec: int) -> Approx:
    """psi(r/m) for 0 < r/m < 1 via Gauss's digamma theorem:

        psi(r/m) = -gamma - log(2m) - (pi/2) cot(pi r/m)
                   + 2 sum_{n=1}^{ceil(m/2)-1} cos(2 pi n r/m) log sin(pi n/m)
    """
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    r, m = a.numerator, a.denominator
    g = euler_gamma(prec)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp + 8):
        pi = mpmath.pi
        total = -g.value - mpmath.log(2 * m) - pi / 2 * mpmath.cot(pi * r / m)
        for n in range(1, (m + 1) // 2):
            total += 2 * mpmath.cos(2 * pi * n * r / m) * mpmath.log(mpmath.sin(pi * n / m))
        err = g.error + rounding_error(mpf(m) + abs(total), prec, 4 * m)
    return Approx(total, err, prec)


# ---------------------------------------------------------------------------
# Complex roots


def principal_root(z, n: int, prec: int) -> Approx:
    """Principal n-th root, argument in (-pi/n, pi/n]."""
    if n < 1:
        raise ValueError("n must be positive")
    with mpmath.workprec(prec + GUARD_BITS):
        z = mpmath.mpmathify(z)
        if z == 0:
            raise ValueError("root of zero is not defined here")
        if n == 1:
            w = mpc(z)
        else:
            w = mpmath.exp(mpmath.log(z) / n)
        err = rounding_error(w, prec, 8)
    return Approx(w, err, prec)
