"""Residues rho(k, l) of class Euler products and the Mertens constants mu(k, l).

    rho(k, l) = lim_{s->1} (s-1) prod_{p = k mod l} (1 - p^-s)^-phi(l)
    rho(k, l) = exp(-gamma) mu(k, l)^-phi(l)

``rho_analytic`` works for every coprime pair.  Expanding the log of the
class product with characters and Moebius inversion gives, for a strip
bound P (taken >= every prime factor of l),

    log rho = -phi * sum_{p<=P, p=k} log(1 - 1/p)
              + sum_{p<=P or p|l} log(1 - 1/p)              (pole of L(s, chi_0))
              + sum_{chi != chi_0} conj(chi(k)) log L_P(1, chi)
              + sum_chi conj(chi(k)) sum_{j>=2} (mu(j)/j) log L_P(j, chi^j)
              + phi * sum_{m>=2} (1/m) sum_{p>P, p=k} p^-m

with L_P the Euler product over p > P.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath
from mpmath import mpf

from .characters import characters_mod
from .lseries import stripped_log
from .numerics import GUARD_BITS, Approx, euler_gamma, rounding_error
from .primes import factorize, moebius, primes_up_to, totient
from .products import (DEFAULT_STRIP, _geometric_factor, class_product, default_depth,
                       large_prime_zeta, tail_bound)

CLOSED_FORM_MODULI = (2, 3, 4, 5, 6, 8, 10, 12)


class CrossCheckError(ArithmeticError):
    """Two independent computations of the same constant disagree."""


@dataclass(frozen=True)
class ResidueResult:
    modulus: int
    k: int
    rho: Approx
    mu: Approx
    method: str
    parameters: dict = field(default_factory=dict)
    rho_closed: Optional[Approx] = None
    rho_analytic: Optional[Approx] = None


def _mu_from_rho(rho: Approx, phi: int, prec: int) -> Approx:
    g = euler_gamma(prec)
    with mpmath.workprec(prec + GUARD_BITS):
        log_mu = (Approx(-g.value, g.error, prec) - rho.log()).scale(mpf(1) / phi)
    return log_mu.exp()


def _closed_prefactor(ell: int) -> tuple:
    """(prefactor, exponent of the p = 1 mod l product of (1 - p^-2)^-1)."""
    pi = mpmath.pi
    r3, r2, r5 = mpmath.sqrt(3), mpmath.sqrt(2), mpmath.sqrt(5)
    if ell in (3, 6):
        return r3 / (2 * pi), 1
    if ell == 4:
        return 1 / pi, 1
    if ell == 8:
        return 2 * mpmath.log(1 + r2) / pi ** 2, 2
    if ell == 12:
        return 3 * mpmath.log(2 + r3) / (2 * pi ** 2), 2
    if ell in (5, 10):
        return 5 * mpmath.log(2 + r5) / (3 * pi ** 2), 2
    raise ValueError(f"no closed form for modulus {ell}")


def rho_closed(ell: int, prec: int = 256, strip_below: int = DEFAULT_STRIP) -> ResidueResult:
    """rho(1, l) from the closed forms for l in {2, 3, 4, 5, 6, 8, 10, 12}."""
    if ell not in CLOSED_FORM_MODULI:
        raise ValueError(f"no closed form for modulus {ell}; use rho_analytic")
    phi = totient(ell)
    if ell == 2:
        rho = Approx(mpf(1) / 2, mpf(0), prec)
    else:
        with mpmath.workprec(prec + GUARD_BITS):
            pref, e = _closed_prefactor(ell)
            prod = class_product(ell, [1], e, 2, strip_below, prec)
            rho = Approx(pref, rounding_error(pref, prec, 8), prec) * prod
    return ResidueResult(ell, 1, rho, _mu_from_rho(rho, phi, prec), "closed-form",
                         {"precision": prec, "strip_below": strip_below})


def log_rho_analytic(ell: int, k: int, prec: int = 256,
                     strip_below: int = DEFAULT_STRIP) -> Approx:
    """log rho(k, l) by the character expansion in the module docstring."""
    if ell < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(k, ell) != 1:
        raise ValueError(f"class {k} is not coprime to {ell}")
    k %= ell
    ell_primes = [p for p, _ in factorize(ell)] if ell > 1 else []
    strip = max(strip_below, max(ell_primes, default=2))
    chars = characters_mod(ell)
    phi = len(chars)
    small = primes_up_to(strip)
    target = mpf(2) ** (-(prec + 16))
    with mpmath.workprec(prec + GUARD_BITS + 8):
        total = mpmath.mpc(0)
        err = mpf(0)
        # explicit small primes
        total -= phi * mpmath.fsum(mpmath.log1p(-mpf(1) / p) for p in small if p % ell == k)
        total += mpmath.fsum(mpmath.log1p(-mpf(1) / p) for p in small)
        err += rounding_error(total, prec, 4 * len(small))
        # character sums
        j_max = 1
        while tail_bound(j_max + 1, strip) * _geometric_factor(1, strip) >= target:
            j_max += 1
        for chi in chars:
            w = chi.value(k).conjugate().to_complex()
            inner = mpmath.mpc(0)
            for j in range(1, j_max + 1):
                mu = moebius(j)
                if mu == 0 or (j == 1 and chi.is_principal()):
                    continue
                lv = stripped_log(chi.power(j), j, strip, prec)
                inner += mpf(mu) / j * lv.value
                err += lv.error / j
            total += w * inner
        err += phi * tail_bound(j_max + 1, strip) * _geometric_factor(1, strip)
        # higher powers of the class primes
        m = 2
        while True:
            depth = default_depth(m, strip, prec)
            if depth == 0:
                break
            large, e = large_prime_zeta(ell, k, m, strip, depth, prec)
            total += phi * large / m
            err += phi * e / m
            m += 1
        err += phi * tail_bound(m, strip) * _geometric_factor(1, strip)
        err += abs(mpmath.im(total))
        value = mpmath.re(total)
    return Approx(value, err, prec)


def rho_analytic(ell: int, k: int, prec: int = 256,
                 strip_below: int = DEFAULT_STRIP) -> ResidueResult:
    log_rho = log_rho_analytic(ell, k, prec, strip_below)
    rho = log_rho.exp()
    return ResidueResult(ell, k % ell if ell > 1 else k, rho,
                         _mu_from_rho(rho, totient(ell), prec), "analytic",
                         {"precision": prec, "strip_below": strip_below})


def rho(ell: int, k: int, prec: int = 256, strip_below: int = DEFAULT_STRIP,
        method: str = "both") -> ResidueResult:
    """rho(k, l) by the requested method(s).

    With ``method="both"`` the closed form (when one exists) and the analytic
    value are both computed and a disagreement beyond the combined error
    bounds raises :class:`CrossCheckError`.
    """
    if method not in ("closed", "analytic", "both"):
        raise ValueError(f"unknown method {method!r}")
    closed = None
    has_closed = ell in CLOSED_FORM_MODULI and k % ell == 1 % ell
    if method == "closed":
        if not has_closed:
            raise ValueError(f"no closed form for rho({k}, {ell})")
        res = rho_closed(ell, prec, strip_below)
        return ResidueResult(res.modulus, res.k, res.rho, res.mu, res.method, res.parameters,
                             rho_closed=res.rho)
    ana = rho_analytic(ell, k, prec, strip_below)
    if method == "both" and has_closed:
        closed = rho_closed(ell, prec, strip_below).rho
        if not closed.agrees_with(ana.rho):
            raise CrossCheckError(f"rho(1, {ell}): closed form and analytic values disagree")
    return ResidueResult(ana.modulus, ana.k, ana.rho, ana.mu,
                         "analytic" if closed is None else "analytic+closed-form",
                         ana.parameters, rho_closed=closed, rho_analytic=ana.rho)


def mu(ell: int, k: int, prec: int = 256, strip_below: int = DEFAULT_STRIP) -> ResidueResult:
    """Mertens constant mu(k, l) = (exp(-gamma) / rho(k, l))^(1/phi(l))."""
    return rho(ell, k, prec, strip_below, method="both")


def rho_one_five_alternative(prec: int = 256, strip_below: int = DEFAULT_STRIP) -> Approx:
    """rho(1, 5) = 50 ln(2+sqrt5) / (13 pi^2 sqrt5) * prod_{p=1} (1-p^-4)^-1
    * prod_{p=4} (1-p^-2) / (1+p^-2).

    The last factor is (1-p^-2)^2 (1-p^-4)^-1, so three class products suffice.
    """
    with mpmath.workprec(prec + GUARD_BITS):
        r5 = mpmath.sqrt(5)
        pref = 50 * mpmath.log(2 + r5) / (13 * mpmath.pi ** 2 * r5)
        out = Approx(pref, rounding_error(pref, prec, 8), prec)
        out = out * class_product(5, [1], 1, 4, strip_below, prec)
        out = out * class_product(5, [4], -2, 2, strip_below, prec)
        out = out * class_product(5, [4], 1, 4, strip_below, prec)
    return out


def six_root5_over_13_product(prec: int = 256, strip_below: int = DEFAULT_STRIP) -> Approx:
    """prod_{p = 1, 4 mod 5} (p^2+1)/(p^2-1) = prod (1-p^-4) (1-p^-2)^-2."""
    with mpmath.workprec(prec + GUARD_BITS):
        return (class_product(5, [1, 4], -1, 4, strip_below, prec)
                * class_product(5, [1, 4], 2, 2, strip_below, prec))
