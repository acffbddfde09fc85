import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from apconst.characters import (RootOfUnity, character, characters_mod, group_orders,
                                primitive_inducing, primitive_order_histogram, principal_character,
                                unit_group)
from apconst.primes import divisors, moebius, totient

moduli = st.integers(min_value=1, max_value=150)


def definitional_conductor(chi):
    """Smallest f | n with chi(a) = 1 for every unit a = 1 mod f."""
    n = chi.modulus
    for f in divisors(n):
        if all(chi.value(a).is_one() for a in range(1, n + 1)
               if math.gcd(a, n) == 1 and a % f == 1 % f):
            return f
    raise AssertionError


def test_root_of_unity_arithmetic():
    i = RootOfUnity(Fraction(1, 4))
    assert (i * i).turn == Fraction(1, 2)
    assert (i ** 4).is_one()
    assert i.conjugate().turn == Fraction(3, 4)
    assert i.order == 4
    roots = RootOfUnity(Fraction(1, 2)).roots(2)
    assert [r.turn for r in roots] == [Fraction(1, 4), Fraction(3, 4)]
    assert all((r ** 2).turn == Fraction(1, 2) for r in roots)
    assert complex(i.to_complex()) == 1j


@settings(max_examples=40, deadline=None)
@given(moduli)
def test_group_structure(n):
    g = unit_group(n)
    assert math.prod(g.orders) == totient(n) == len(characters_mod(n))
    assert tuple(group_orders(n)) == tuple(g.orders)
    logs = {g.log(a) for a in range(1, n + 1) if math.gcd(a, n) == 1}
    assert len(logs) == totient(n)
    assert g.log(n) is None or n == 1


@settings(max_examples=40, deadline=None)
@given(moduli)
def test_orthogonality(n):
    chars = characters_mod(n)
    phi = len(chars)
    for a in range(1, n + 1):
        if math.gcd(a, n) != 1:
            assert all(chi.value(a) is None for chi in chars)
            continue
        s = sum(complex(chi(a)) for chi in chars)
        assert abs(s - (phi if a % n == 1 % n else 0)) < 1e-9
    for chi in chars:
        s = sum(complex(chi(a)) for a in range(1, n + 1) if math.gcd(a, n) == 1)
        assert abs(s - (phi if chi.is_principal() else 0)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(moduli, st.data())
def test_complete_multiplicativity(n, data):
    chars = characters_mod(n)
    chi = chars[data.draw(st.integers(0, len(chars) - 1))]
    a = data.draw(st.integers(1, 10 ** 6))
    b = data.draw(st.integers(1, 10 ** 6))
    va, vb, vab = chi.value(a), chi.value(b), chi.value(a * b)
    if va is None or vb is None:
        assert vab is None
    else:
        assert vab == va * vb
    assert chi.value(a + n) == va


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=120))
def test_conductor_matches_definition(n):
    for chi in characters_mod(n):
        assert chi.conductor == definitional_conductor(chi)
        assert chi.is_primitive() == (chi.conductor == n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8, 9, 12, 16, 24, 45, 63])
def test_order_and_group_operations(n):
    chars = characters_mod(n)
    for chi in chars:
        assert chi.power(chi.order).is_principal()
        assert all(not chi.power(d).is_principal() for d in divisors(chi.order) if d < chi.order)
        assert (chi * chi.conjugate()).is_principal()
        assert chi.is_real() == (chi.order <= 2)
        assert character(n, chi.index) == chi
    assert chars[0] == principal_character(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=200))
def test_primitive_inducing(n):
    for chi in characters_mod(n)[:12]:
        prim = primitive_inducing(chi)
        assert prim.modulus == chi.conductor and prim.is_primitive()
        for a in range(1, n + 1):
            if math.gcd(a, n) == 1:
                assert prim.value(a) == chi.value(a)


@pytest.mark.parametrize("n", range(1, 200))
def test_primitive_count_formula(n):
    # number of primitive characters mod n = sum_{d | n} mu(n/d) phi(d)
    expected = sum(moebius(n // d) * totient(d) for d in divisors(n))
    assert sum(primitive_order_histogram(n).values()) == expected


def test_canonical_labels_mod_5():
    chars = characters_mod(5)
    assert [c.order for c in chars] == [1, 4, 2, 4]
    quartic = [c for c in chars if c.order == 4]
    # one quartic character takes the values 1, i, -i, -1 on the classes 1, 2, 3, 4
    patterns = [[c.value(k).turn for k in (1, 2, 3, 4)] for c in quartic]
    assert [Fraction(0), Fraction(1, 4), Fraction(3, 4), Fraction(1, 2)] in patterns


def test_value_table_and_index_bounds():
    chi = characters_mod(8)[1]
    assert len(chi.value_table()) == 8
    with pytest.raises((ValueError, IndexError)):
        character(8, 5)
