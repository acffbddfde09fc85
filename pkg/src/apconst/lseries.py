"""Dirichlet L-functions at real points s >= 1."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mpf

from .characters import DirichletCharacter
from .numerics import GUARD_BITS, Approx, digamma_rational, hurwitz_zeta, rounding_error
from .primes import factorize, primes_up_to


@dataclass(frozen=True)
class LValue:
    character: DirichletCharacter
    s: object
    value: mpmath.mpc
    error: mpf
    strip_below: int = 0
    prec: int = 0

    @property
    def approx(self) -> Approx:
        return Approx(self.value, self.error, self.prec)


def _s_value(s):
    if isinstance(s, Fraction):
        return mpf(s.numerator) / s.denominator
    return mpf(s)


@lru_cache(maxsize=8192)
def _l_full(chi: DirichletCharacter, s, prec: int) -> tuple:
    n = chi.modulus
    with mpmath.workprec(prec + GUARD_BITS + 8):
        sv = _s_value(s)
        total = mpmath.mpc(0)
        err = mpf(0)
        for a in range(1, n + 1):
            v = chi.value(a)
            if v is None:
                continue
            h = hurwitz_zeta(s, Fraction(a, n), prec)
            total += v.to_complex() * h.value
            err += h.error
        scale = mpf(n) ** (-sv)
        total *= scale
        err = err * scale + rounding_error(total, prec, 2 * n)
    return total, err


def l_at(chi: DirichletCharacter, s, prec: int) -> LValue:
    """L(s, chi) = n^-s sum_a chi(a) zeta(s, a/n) for real s >= 2."""
    if _s_value(s) < 2:
        raise ValueError("l_at needs s >= 2; use l_at_one for s = 1")
    value, err = _l_full(chi, s, prec)
    return LValue(chi, s, value, err, 0, prec)


@lru_cache(maxsize=4096)
def _l_one(chi: DirichletCharacter, prec: int) -> tuple:
    n = chi.modulus
    with mpmath.workprec(prec + GUARD_BITS + 8):
        total = mpmath.mpc(0)
        err = mpf(0)
        for a in range(1, n):
            v = chi.value(a)
            if v is None:
                continue
            d = digamma_rational(Fraction(a, n), prec)
            total += v.to_complex() * d.value
            err += d.error
        total = -total / n
        err = err / n + rounding_error(total, prec, 2 * n)
    return total, err


def l_at_one(chi: DirichletCharacter, prec: int) -> LValue:
    """L(1, chi) = -(1/n) sum_a chi(a) psi(a/n) for nonprincipal chi."""
    if chi.is_principal():
        raise ValueError("L(s, chi) has a pole at s = 1 for principal chi")
    value, err = _l_one(chi, prec)
    return LValue(chi, 1, value, err, 0, prec)


def principal_residue(modulus: int) -> Fraction:
    """prod_{p | modulus} (1 - 1/p): the residue of L(s, chi_0) at s = 1."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    out = Fraction(1)
    for p, _ in factorize(modulus) if modulus > 1 else []:
        out *= Fraction(p - 1, p)
    return out


@lru_cache(maxsize=16384)
def _stripped(chi: DirichletCharacter, s, strip_below: int, prec: int) -> tuple:
    if s == 1:
        value, err = _l_one(chi, prec)
    else:
        value, err = _l_full(chi, s, prec)
    primes = primes_up_to(strip_below)
    with mpmath.workprec(prec + GUARD_BITS + 8):
        sv = _s_value(s)
        prod = mpmath.mpc(1)
        for p in primes:
            v = chi.value(p)
            if v is None:
                continue
            prod *= 1 - v.to_complex() * mpf(p) ** (-sv)
        out = value * prod
        err = err * abs(prod) + rounding_error(out, prec, 2 * len(primes) + 2)
    return out, err


def l_stripped(chi: DirichletCharacter, s, strip_below: int, prec: int) -> LValue:
    """L(s, chi) * prod_{p <= P} (1 - chi(p) p^-s): the Euler product over p > P.

    Accepts s >= 2, and s = 1 for nonprincipal chi.
    """
    if strip_below < 0:
        raise ValueError("strip_below must be nonnegative")
    sv = _s_value(s)
    if sv == 1:
        if chi.is_principal():
            raise ValueError("L(s, chi) has a pole at s = 1 for principal chi")
        s = 1
    elif sv < 2:
        raise ValueError("l_stripped needs s >= 2 (or s = 1 for nonprincipal chi)")
    value, err = _stripped(chi, s, strip_below, prec)
    return LValue(chi, s, value, err, strip_below, prec)


def stripped_log(chi: DirichletCharacter, s, strip_below: int, prec: int) -> Approx:
    """Principal log of the stripped L-value for any real s > 1 (or s = 1, chi nonprincipal)."""
    if _s_value(s) == 1:
        s = 1
    value, err = _stripped(chi, s, strip_below, prec)
    return Approx(value, err, prec).log()
