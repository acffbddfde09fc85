r"""Leading constants K_l of sum_{n<=N} b_l(n) ~ K_l N ln(N)^(d(l)-2).

Three routes are provided.

``kappa_closed``
    The published closed formulas (l = 2, 3, 4, 5, 6, 8), with the class
    products accelerated.  For l = 5, 6, 8 (and 4) the compact form of the
    local factor is evaluated as well and must agree.

``kappa_assembled``
    A generic assembly from the Dirichlet series.  For p not dividing l the
    only nonzero local count is b(p) = gcd(l, p-1) - 1, which depends on the
    class k = p mod l only; write c_k = gcd(l, k-1) - 1.  Then

        F(s) = sum b(n) n^-s
             = E(s) * prod_k prod_{p = k} (1 + c_k p^-s)
             = E(s) * prod_k prod_{p = k} (1 - p^-s)^(-c_k) h_k(p^-s),

    with E(s) = prod_{p | l} sum_r b(p^r) p^-rs and
    h_k(x) = (1 + c_k x)(1 - x)^(c_k) = 1 + O(x^2).  Near s = 1,

        prod_{p = k} (1 - p^-s)^(-c_k) ~ (rho(k, l) / (s - 1))^(c_k / phi(l)),

    and sum_k c_k = phi(l) (d(l) - 1) (Menon's identity), so F has a pole of
    order a = d(l) - 1 with leading coefficient

        C = E(1) * prod_k rho(k, l)^(c_k / phi(l)) * prod_k prod_{p = k} h_k(1/p).

    A pole (s-1)^-a of a Dirichlet series with nonnegative coefficients gives
    sum_{n<=N} b(n) ~ C N ln(N)^(a-1) / (a-1)!, hence K_l = C / (d(l) - 2)!.
    For l = 5 this reduces to (29/25) rho(1, 5) prod (1 + 4/p)(1 - 1/p)^4,
    the published K_5.

``kappa_gcd_slow``
    The truncated product
        K_l ~ R_l / (d(l)-2)! * prod_{p <= P} (1 + gcd(l, p-1)/(p-1)) (1 - 1/p)^d(l),
    with rational R_l = prod_{p | l} G_p / (1 + gcd(l, p-1)/(p-1)), where
    G_p = sum_r g(p^r) p^-r and g(m) counts chi mod m with chi^l = 1.
    This gives R_5 = 29/25, R_7 = 55/49, R_9 = 13/9.  Convergence is slow and
    no error bound is claimed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpf

from .census import b_moebius, divisor_count, roots_of_unity_count
from .numerics import GUARD_BITS, Approx, rounding_error
from .primes import factorize, sieve, totient
from .products import DEFAULT_STRIP, class_rational_product
from .residues import CrossCheckError, log_rho_analytic

CLOSED_ORDERS = (2, 3, 4, 5, 6, 8)
ASSEMBLED_ORDERS = (2, 3, 4, 5, 6, 7, 8, 9)
GCD_SLOW_ORDERS = (2, 3, 4, 5, 6, 7, 8, 9)


@dataclass(frozen=True)
class KappaResult:
    order: int
    value: Approx
    method: str
    components: dict = field(default_factory=dict)
    flags: tuple = ()

    @property
    def heuristic(self) -> bool:
        return self.method.startswith("gcd-slow")


# ---------------------------------------------------------------------------
# integer polynomials, descending coefficients


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    a = [0] * (n - len(a)) + list(a)
    b = [0] * (n - len(b)) + list(b)
    out = [x + y for x, y in zip(a, b)]
    while len(out) > 1 and out[0] == 0:
        out.pop(0)
    return out


def _psub(a, b):
    return _padd(a, [-y for y in b])


def _ppow(a, k):
    out = [1]
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _peval(a, x):
    acc = 0
    for c in a:
        acc = acc * x + c
    return acc


P = [1, 0]
ONE = [1]


def _one_minus(num, den):
    """1 - num/den as (den - num, den)."""
    return _psub(den, num), den


def _times(f, g):
    return _pmul(f[0], g[0]), _pmul(f[1], g[1])


def _inv_one_minus_p2(k):
    """(1 - p^-2)^-k = p^2k / (p^2 - 1)^k."""
    return _ppow([1, 0, 0], k), _ppow([1, 0, -1], k)


def _local_k4_long():
    return _times(_inv_one_minus_p2(1), _one_minus([5, -3], _pmul([1, 0, 0], [1, 1])))


def _local_k4_compact():
    return _one_minus([4], _ppow([1, 1], 2))


def _local_k5_long():
    return _times(_inv_one_minus_p2(1), _one_minus([9, -11, 4], _pmul([1, 0, 0, 0], [1, 1])))


def _local_k5_compact():
    return _one_minus([8, -4], _pmul(P, _ppow([1, 1], 2)))


def _local_k6_long():
    return _times(_inv_one_minus_p2(2),
                  _one_minus([14, -26, 19, -5], _pmul([1, 0, 0, 0, 0], [1, 1])))


def _local_k6_compact():
    return _one_minus([12, -4], _ppow([1, 1], 3))


def _local_k8_long():
    return _times(_inv_one_minus_p2(3),
                  _one_minus([27, -85, 125, -99, 41, -7], _pmul(_ppow(P, 6), [1, 1])))


def _local_k8_compact():
    return _one_minus([24, -16, 8], _ppow([1, 1], 4))


def _local_k3():
    return _one_minus([2], _pmul(P, [1, 1]))


def _rational_product(ell, classes, f, strip_below, prec) -> Approx:
    return class_rational_product(ell, classes, f[0], f[1], strip_below, prec)


# ---------------------------------------------------------------------------
# compact identities


COMPACT_IDENTITIES = (
    ("(1-p^-2)^-1 (1-(5p-3)/(p^2(p+1))) = 1-4/(p+1)^2", _local_k4_long, _local_k4_compact),
    ("(1-p^-2)^-2 (1-(14p^3-26p^2+19p-5)/(p^4(p+1))) = 1-(12p-4)/(p+1)^3",
     _local_k6_long, _local_k6_compact),
    ("(1-p^-2)^-3 (1-(27p^5-85p^4+125p^3-99p^2+41p-7)/(p^6(p+1))) = 1-(24p^2-16p+8)/(p+1)^4",
     _local_k8_long, _local_k8_compact),
)


def verify_compact_identities() -> list[dict]:
    """Check each compact identity as an exact rational-function identity.

    The cross-multiplied difference N1*D2 - N2*D1 is evaluated exactly at
    deg + 2 integer points; a polynomial of degree deg vanishing there is zero.
    """
    report = []
    for name, long_form, compact_form in COMPACT_IDENTITIES:
        n1, d1 = long_form()
        n2, d2 = compact_form()
        diff = _psub(_pmul(n1, d2), _pmul(n2, d1))
        deg = max(len(n1) + len(d2), len(n2) + len(d1)) - 2
        points = list(range(2, deg + 4))
        holds = all(_peval(diff, x) == 0 for x in points)
        lhs = Fraction(_peval(n1, 2), _peval(d1, 2))
        rhs = Fraction(_peval(n2, 2), _peval(d2, 2))
        report.append({"identity": name, "degree_bound": deg, "points_checked": len(points),
                       "holds": holds, "lhs_at_2": str(lhs), "rhs_at_2": str(rhs)})
    return report


# ---------------------------------------------------------------------------
# closed formulas


def _const(x, prec) -> Approx:
    return Approx(x, rounding_error(x, prec, 16), prec)


def kappa_closed(ell: int, prec: int = 256, strip_below: int = DEFAULT_STRIP) -> KappaResult:
    """K_l from the published closed formula for l in {2, 3, 4, 5, 6, 8}."""
    if ell not in CLOSED_ORDERS:
        raise ValueError(f"no closed formula for K_{ell}")
    comps: dict = {}
    with mpmath.workprec(prec + GUARD_BITS):
        pi = mpmath.pi
        if ell == 2:
            value = _const(6 / pi ** 2, prec)
            return KappaResult(2, value, "closed", {"formula": "6/pi^2"})
        if ell == 3:
            pref = _const(11 * mpmath.sqrt(3) / (18 * pi), prec)
            value = pref * _rational_product(3, [1], _local_k3(), strip_below, prec)
            return KappaResult(3, value, "closed", {"prefactor": pref})
        if ell == 4:
            pref = _const(7 / pi ** 3, prec)
            main = pref * _rational_product(4, [1], _local_k4_long(), strip_below, prec)
            alt = pref * _rational_product(4, [1], _local_k4_compact(), strip_below, prec)
        elif ell == 5:
            pref = _const(29 * mpmath.log(2 + mpmath.sqrt(5)) / (15 * pi ** 2), prec)
            main = pref * _rational_product(5, [1], _local_k5_long(), strip_below, prec)
            alt = pref * _rational_product(5, [1], _local_k5_compact(), strip_below, prec)
        elif ell == 6:
            pref = _const(6 / pi ** 4 / 2, prec)
            main = pref * _rational_product(6, [1], _local_k6_long(), strip_below, prec)
            alt = pref * _rational_product(6, [1], _local_k6_compact(), strip_below, prec)
        else:
            pref = _const(16 * mpmath.log(1 + mpmath.sqrt(2)) / pi ** 5 / 2, prec)
            main = (pref * _rational_product(8, [5], _local_k4_long(), strip_below, prec)
                    * _rational_product(8, [1], _local_k8_long(), strip_below, prec))
            alt = (pref * _rational_product(8, [5], _local_k4_compact(), strip_below, prec)
                   * _rational_product(8, [1], _local_k8_compact(), strip_below, prec))
        comps = {"prefactor": pref, "compact_form": alt}
        if not main.agrees_with(alt):
            raise CrossCheckError(f"K_{ell}: long and compact forms disagree")
    return KappaResult(ell, main, "closed", comps)


# ---------------------------------------------------------------------------
# generic assembly


def local_series_at_one(ell: int, p: int) -> Fraction:
    """E_p(1) = sum_r b_l(p^r) p^-r (finite: b vanishes for large r)."""
    v = 0
    m = ell
    while m % p == 0:
        m //= p
        v += 1
    total = Fraction(1)
    for r in range(1, v + 4):
        total += Fraction(b_moebius(ell, p ** r), p ** r)
    return total


def class_weights(ell: int) -> dict[int, int]:
    """c_k = gcd(l, k-1) - 1: b(p) for primes p = k mod l."""
    return {k: math.gcd(ell, k - 1) - 1 for k in range(1, ell + 1) if math.gcd(k, ell) == 1}


def _h_factor(c: int):
    """(1 + c/p)(1 - 1/p)^c = (p + c)(p - 1)^c / p^(c+1)."""
    return _pmul([1, c], _ppow([1, -1], c)), _ppow(P, c + 1)


def _published_correction(poly):
    """(1 - p^-2)(1 - poly(p)/(p^(deg+1) (p+1))) for the single-class orders."""
    tail = _one_minus(poly, _pmul(_ppow(P, len(poly)), [1, 1]))
    return _times(([1, 0, -1], [1, 0, 0]), tail)


# the same correction products written as in the published factorizations
PUBLISHED_CORRECTIONS = {
    5: {1: [9, -11, 4]},
    6: {1: [14, -26, 19, -5], 5: [0]},
    7: {1: [20, -50, 55, -29, 6]},
    9: {1: [35, -133, 245, -259, 161, -55, 8], 4: [2], 7: [2]},
}


def kappa_assembled(ell: int, prec: int = 256, strip_below: int = DEFAULT_STRIP) -> KappaResult:
    """K_l assembled from local factors, residues rho(k, l) and correction products."""
    if ell not in ASSEMBLED_ORDERS:
        raise ValueError(f"assembly supported for l in {ASSEMBLED_ORDERS}")
    d = divisor_count(ell)
    phi = totient(ell)
    weights = class_weights(ell)
    local = Fraction(1)
    for p, _ in factorize(ell):
        local *= local_series_at_one(ell, p)
    with mpmath.workprec(prec + GUARD_BITS):
        log_rho_part = Approx(mpf(0), mpf(0), prec)
        rho_logs = {}
        for k, c in weights.items():
            if c == 0:
                continue
            lr = log_rho_analytic(ell, k % ell, prec, strip_below)
            rho_logs[k % ell] = lr
            log_rho_part = log_rho_part + lr.scale(Fraction(c, phi))
        rho_power = log_rho_part.exp()
        correction = Approx(mpf(1), mpf(0), prec)
        for k, c in weights.items():
            if c == 0:
                continue
            correction = correction * _rational_product(ell, [k % ell], _h_factor(c),
                                                        strip_below, prec)
        published = None
        if ell in PUBLISHED_CORRECTIONS:
            published = Approx(mpf(1), mpf(0), prec)
            for k, poly in PUBLISHED_CORRECTIONS[ell].items():
                published = published * _rational_product(ell, [k], _published_correction(poly),
                                                          strip_below, prec)
            if not published.agrees_with(correction):
                raise CrossCheckError(f"K_{ell}: correction products disagree")
        local_a = _const(mpf(local.numerator) / local.denominator, prec)
        value = (local_a * rho_power * correction).scale(Fraction(1, math.factorial(d - 2)))
    comps = {"local_factor": local, "rho_power": rho_power, "correction": correction,
             "published_correction": published,
             "class_weights": weights, "log_rho": rho_logs, "factorial": math.factorial(d - 2)}
    flags = ("derived-normalization",) if d >= 3 and ell not in (4, 6, 8) else ()
    return KappaResult(ell, value, "assembled", comps, flags)


# ---------------------------------------------------------------------------
# slow gcd product


def gcd_prefactor(ell: int) -> Fraction:
    """R_l = prod_{p | l} G_p / (1 + gcd(l, p-1)/(p-1))."""
    out = Fraction(1)
    for p, e in factorize(ell):
        r0 = e + 3
        g_stable = roots_of_unity_count(ell, p ** r0)
        assert roots_of_unity_count(ell, p ** (r0 + 1)) == g_stable
        gp = sum((Fraction(roots_of_unity_count(ell, p ** r), p ** r) for r in range(r0)),
                 Fraction(0))
        gp += Fraction(g_stable, p ** r0) / (1 - Fraction(1, p))
        out *= gp / (1 + Fraction(math.gcd(ell, p - 1), p - 1))
    return out


def kappa_gcd_slow(ell: int, prime_limit: int, prec: int = 256) -> KappaResult:
    """Truncated gcd product over p <= P (double precision, heuristic)."""
    if ell not in GCD_SLOW_ORDERS:
        raise ValueError(f"gcd product supported for l in {GCD_SLOW_ORDERS}")
    if prime_limit < 1000:
        raise ValueError("prime limit must be at least 1000")
    d = divisor_count(ell)
    pref = gcd_prefactor(ell)
    p = sieve(prime_limit).primes
    pm1 = (p - 1).astype(np.int64)
    g = np.gcd(pm1, ell).astype(float)
    pf = p.astype(float)
    terms = np.log1p(g / pm1.astype(float)) + d * np.log1p(-1.0 / pf)
    scale = float(pref) / math.factorial(d - 2)
    cut = int(np.searchsorted(p, prime_limit // 10, side="right"))
    log_short = math.fsum(terms[:cut].tolist())
    log_prod = log_short + math.fsum(terms[cut:].tolist())
    value = scale * math.exp(log_prod)
    # not a bound: the change over the last decade of primes
    estimate = abs(value - scale * math.exp(log_short))
    approx = Approx(mpf(value), mpf(estimate), 53)
    return KappaResult(ell, approx, f"gcd-slow({prime_limit})",
                       {"prefactor": pref, "prime_limit": prime_limit,
                        "decade_change": estimate}, ("heuristic",))


def kappa(ell: int, method: str = "closed", prec: int = 256, strip_below: int = DEFAULT_STRIP,
          prime_limit: Optional[int] = None) -> KappaResult:
    if method == "closed":
        return kappa_closed(ell, prec, strip_below)
    if method == "assembled":
        return kappa_assembled(ell, prec, strip_below)
    if method == "gcd-slow":
        return kappa_gcd_slow(ell, prime_limit or 10 ** 6, prec)
    raise ValueError(f"unknown method {method!r}")
