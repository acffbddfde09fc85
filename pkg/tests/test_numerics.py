from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from apconst.numerics import (GUARD_BITS, Approx, bernoulli, digamma_rational, euler_gamma,
                              hurwitz_zeta, principal_root, zeta)


def gamma_by_harmonic_sums(prec):
    """gamma = H_n - ln n - 1/(2n) + sum B_2k / (2k n^2k), n = 10^4."""
    with mpmath.workprec(prec + 40):
        n = 10 ** 4
        h = mpmath.fsum(mpf(1) / j for j in range(1, n + 1))
        g = h - mpmath.log(n) - mpf(1) / (2 * n)
        for k in range(1, 12):
            b = mpmath.bernoulli(2 * k)
            g += b / (2 * k * mpf(n) ** (2 * k))
        return g


def test_gamma_against_harmonic_oracle():
    g = euler_gamma(256)
    with mpmath.workprec(300):
        oracle = gamma_by_harmonic_sums(256)
        assert abs(g.value - oracle) < mpf(10) ** -70
        assert abs(g.value - mpmath.euler) <= g.error
    assert g.correct_digits() >= 75


def test_gamma_rejects_tiny_precision():
    with pytest.raises(ValueError):
        euler_gamma(8)


@pytest.mark.parametrize("n,expected", [(0, Fraction(1)), (1, Fraction(-1, 2)), (2, Fraction(1, 6)),
                                        (3, Fraction(0)), (4, Fraction(-1, 30)),
                                        (12, Fraction(-691, 2730)), (20, Fraction(-174611, 330))])
def test_bernoulli_values(n, expected):
    assert bernoulli(n) == expected


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=60))
def test_bernoulli_matches_mpmath(n):
    with mpmath.workprec(400):
        b = bernoulli(n)
        assert abs(mpf(b.numerator) / b.denominator - mpmath.bernoulli(n)) < mpf(10) ** -80


def test_zeta_two_and_four():
    z2 = zeta(2, 200)
    z4 = zeta(4, 200)
    with mpmath.workprec(240):
        assert abs(z2.value - mpmath.pi ** 2 / 6) <= z2.error
        assert abs(z4.value - mpmath.pi ** 4 / 90) <= z4.error


def test_hurwitz_against_direct_sum():
    # zeta(3, 1/3) by direct summation with an integral tail bound
    with mpmath.workprec(120):
        a = mpf(1) / 3
        N = 20000
        direct = mpmath.fsum((k + a) ** -3 for k in range(N))
        tail_lo = (N + a) ** -2 / 2
        h = hurwitz_zeta(3, Fraction(1, 3), 100)
        assert direct + tail_lo - mpf(10) ** -12 < h.value < direct + tail_lo + (N + a) ** -3


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(1, 12), st.integers(1, 12))
def test_hurwitz_matches_mpmath(s, p, q):
    a = Fraction(min(p, q), max(p, q))
    h = hurwitz_zeta(s, a, 160)
    with mpmath.workprec(200):
        ref = mpmath.zeta(s, mpf(a.numerator) / a.denominator)
        assert abs(h.value - ref) <= h.error + mpf(2) ** -180


def test_hurwitz_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hurwitz_zeta(1, Fraction(1, 2), 64)
    with pytest.raises(ValueError):
        hurwitz_zeta(2, Fraction(3, 2), 64)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30))
def test_digamma_matches_mpmath(p, q):
    a = Fraction(p, p + q)
    d = digamma_rational(a, 160)
    with mpmath.workprec(200):
        ref = mpmath.digamma(mpf(a.numerator) / a.denominator)
        assert abs(d.value - ref) <= d.error + mpf(2) ** -180


def test_digamma_rejects_outside_unit_interval():
    with pytest.raises(ValueError):
        digamma_rational(Fraction(1), 64)


def test_digamma_half():
    # psi(1/2) = -gamma - 2 ln 2
    d = digamma_rational(Fraction(1, 2), 200)
    with mpmath.workprec(240):
        assert abs(d.value - (-mpmath.euler - 2 * mpmath.log(2))) <= d.error


def test_principal_root():
    r = principal_root(mpmath.mpc(3, 4), 4, 128)
    with mpmath.workprec(160):
        assert abs(r.value ** 4 - mpmath.mpc(3, 4)) < mpf(10) ** -35
        assert -mpmath.pi / 4 < mpmath.arg(r.value) <= mpmath.pi / 4
    with pytest.raises(ValueError):
        principal_root(0, 2, 64)


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
errs = st.floats(min_value=0, max_value=1e-3)


@settings(max_examples=60, deadline=None)
@given(finite, errs, finite, errs, st.floats(-1, 1), st.floats(-1, 1))
def test_approx_arithmetic_encloses_true_values(x, ex, y, ey, tx, ty):
    # any point of the input intervals maps into the output interval
    a, b = Approx(mpf(x), mpf(ex), 64), Approx(mpf(y), mpf(ey), 64)
    with mpmath.workprec(64 + GUARD_BITS):
        xs, ys = mpf(x) + tx * mpf(ex), mpf(y) + ty * mpf(ey)
        for got, true in ((a + b, xs + ys), (a - b, xs - ys), (a * b, xs * ys)):
            assert abs(got.value - true) <= got.error * (1 + mpf(2) ** -40)
        if abs(y) > 4 * ey + 1e-9:
            q = a / b
            assert abs(q.value - xs / ys) <= q.error * (1 + mpf(2) ** -40)


def test_approx_log_exp_roundtrip_and_guards():
    a = Approx(mpf(2), mpf(10) ** -30, 128)
    b = a.log().exp()
    assert b.agrees_with(a)
    with pytest.raises(ArithmeticError):
        Approx(mpf(1) / 10 ** 40, mpf(1) / 10 ** 39, 128).log()
    with pytest.raises(ZeroDivisionError):
        a / Approx(mpf(0), mpf(1), 128)


def test_approx_power_and_digits():
    a = Approx(mpf(4), mpf(0), 128)
    r = a.power(Fraction(1, 2))
    with mpmath.workprec(160):
        assert abs(r.value - 2) <= r.error
    assert Approx(mpf(1), mpf(10) ** -20, 128).correct_digits() == 20
