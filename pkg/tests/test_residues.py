import math

import mpmath
import pytest
from mpmath import mpf

from apconst import residues
from apconst.numerics import Approx, euler_gamma
from apconst.primes import factorize, totient
from apconst.residues import (CrossCheckError, log_rho_analytic, mu, rho, rho_analytic, rho_closed,
                              rho_one_five_alternative)

PREC = 256
MU_REF = {
    (1, 5): "1.22523843853908458005760977474922052754059550939164",
    (1, 7): "1.20435271605501440413126997959392601183676589049086",
    (1, 9): "1.17384958686544919027013946839197396049956269282192",
    (4, 9): "1.13360386133436932499173359590759623742339637224206",
    (7, 9): "1.05470661565485874510828199884014910243407287242835",
}


def test_rho_two_is_one_half():
    assert rho_closed(2).rho.value == mpf(1) / 2
    r = rho(2, 1, PREC)
    with mpmath.workprec(PREC):
        assert abs(r.rho.value - mpf(1) / 2) <= r.rho.error


def test_rho_one_one_is_one():
    r = rho_analytic(1, 1, PREC)
    with mpmath.workprec(PREC):
        assert abs(r.rho.value - 1) <= r.rho.error
        g = euler_gamma(PREC).value
        assert abs(r.mu.value - mpmath.exp(-g)) < mpf(10) ** -60


@pytest.mark.parametrize("ell", [3, 4, 5, 6, 8, 10, 12])
def test_closed_and_analytic_agree(ell):
    a = rho_closed(ell, PREC).rho
    b = rho_analytic(ell, 1, PREC).rho
    assert a.agrees_with(b)
    with mpmath.workprec(PREC):
        assert abs(a.value - b.value) < mpf(10) ** -60 * a.value


@pytest.mark.parametrize("k,ell", sorted(MU_REF))
def test_mu_reference_values(k, ell):
    r = mu(ell, k, PREC)
    with mpmath.workprec(PREC):
        ref = mpf(MU_REF[(k, ell)])
        assert abs(r.mu.value - ref) < mpf(10) ** -49
    assert r.mu.correct_digits() >= 50


@pytest.mark.parametrize("ell", [5, 7, 8, 9, 12])
def test_product_of_class_residues(ell):
    # prod_k of the class products is zeta(s)^phi prod_{p | l} (1 - p^-s)^phi
    phi = totient(ell)
    total = mpf(0)
    with mpmath.workprec(PREC):
        for k in range(1, ell):
            if math.gcd(k, ell) == 1:
                total += log_rho_analytic(ell, k, PREC).value
        expected = phi * mpmath.fsum(mpmath.log1p(-mpf(1) / p) for p, _ in factorize(ell))
        assert abs(total - expected) < mpf(10) ** -60


def test_mu_rho_relation():
    r = rho(7, 3, PREC, method="analytic")
    with mpmath.workprec(PREC):
        g = euler_gamma(PREC).value
        assert abs(r.rho.value - mpmath.exp(-g) * r.mu.value ** -6) < mpf(10) ** -60


def test_alternative_rho_one_five():
    a = rho_one_five_alternative(PREC)
    assert a.agrees_with(rho_closed(5, PREC).rho)


def test_method_selection_and_errors():
    assert rho(5, 1, 128, method="both").method == "analytic+closed-form"
    assert rho(7, 1, 128, method="both").method == "analytic"
    with pytest.raises(ValueError):
        rho(7, 1, 128, method="closed")
    with pytest.raises(ValueError):
        rho(6, 3, 128)
    with pytest.raises(ValueError):
        rho(5, 1, 128, method="guess")


def test_cross_check_failure_is_raised(monkeypatch):
    real = residues.rho_closed

    def corrupted(ell, prec=256, strip_below=1000):
        out = real(ell, prec, strip_below)
        bad = Approx(out.rho.value * (1 + mpf(10) ** -20), out.rho.error, out.rho.prec)
        return residues.ResidueResult(out.modulus, out.k, bad, out.mu, out.method, out.parameters)

    monkeypatch.setattr(residues, "rho_closed", corrupted)
    with pytest.raises(CrossCheckError):
        rho(5, 1, 128)


def test_strip_bound_does_not_change_value():
    a = rho_analytic(9, 4, PREC, strip_below=200).rho
    b = rho_analytic(9, 4, PREC, strip_below=2000).rho
    assert a.agrees_with(b)
