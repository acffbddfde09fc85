"""Dirichlet characters with exact root-of-unity values.

A character mod n is stored as an exponent tuple over the canonical
generators of (Z/n)^*: chi(g_i) = exp(2 pi i a_i / o_i).  Generators come
from the prime-power factorization of n, ascending primes.  For 2^r with
r >= 3 the part is generated by -1 (order 2) and 5 (order 2^(r-2)), in that
order; for 4 it is generated by -1 alone.  For an odd p^e the generator is
the smallest primitive root mod p^e.  Every generator is lifted by CRT so
that it is 1 modulo the other prime-power parts.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

import mpmath

from .primes import factorize


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """exp(2 pi i * turn) with turn reduced to [0, 1)."""

    turn: Fraction

    def __post_init__(self):
        object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    @classmethod
    def one(cls) -> "RootOfUnity":
        return cls(Fraction(0))

    @property
    def numerator(self) -> int:
        return self.turn.numerator

    @property
    def denominator(self) -> int:
        return self.turn.denominator

    @property
    def order(self) -> int:
        return self.turn.denominator

    def is_one(self) -> bool:
        return self.turn == 0

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.turn + other.turn)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.turn * k)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.turn)

    def roots(self, m: int) -> list["RootOfUnity"]:
        """All w with w**m == self, ascending by turn."""
        return sorted(RootOfUnity((self.turn + j) / m) for j in range(m))

    def to_complex(self):
        """Value as mpc at the current mpmath precision (exact for orders 1, 2, 4)."""
        t = self.turn
        if t == 0:
            return mpmath.mpc(1)
        if t == Fraction(1, 2):
            return mpmath.mpc(-1)
        if t == Fraction(1, 4):
            return mpmath.mpc(0, 1)
        if t == Fraction(3, 4):
            return mpmath.mpc(0, -1)
        return mpmath.expjpi(2 * mpmath.mpf(t.numerator) / t.denominator)

    def __repr__(self) -> str:
        return f"RootOfUnity({self.turn})"


@dataclass(frozen=True)
class _LocalPart:
    prime: int
    exponent: int
    modulus: int
    generators: tuple  # local generators mod p^e
    orders: tuple

    @property
    def logs(self) -> dict:
        """residue mod p^e -> exponent tuple over the local generators."""
        return _local_logs(self.prime, self.exponent)


@dataclass(frozen=True)
class Component:
    prime: int
    generator: int  # residue mod n
    order: int


def _is_primitive_root(g: int, q: int, phi: int) -> bool:
    if math.gcd(g, q) != 1:
        return False
    for r, _ in factorize(phi):
        if pow(g, phi // r, q) == 1:
            return False
    return True


def _local_orders(p: int, e: int) -> tuple:
    if p == 2:
        return () if e == 1 else (2,) if e == 2 else (2, 1 << (e - 2))
    return (p ** (e - 1) * (p - 1),)


def group_orders(n: int) -> tuple:
    """Orders of the canonical cyclic components of (Z/n)^*."""
    if n < 1:
        raise ValueError("modulus must be positive")
    out = ()
    for p, e in (factorize(n) if n > 1 else []):
        out += _local_orders(p, e)
    return out


@lru_cache(maxsize=None)
def _local_part(p: int, e: int) -> _LocalPart:
    q = p ** e
    if p == 2:
        gens = () if e == 1 else (3,) if e == 2 else (q - 1, 5)
        return _LocalPart(2, e, q, gens, _local_orders(2, e))
    phi = q - q // p
    g = next(g for g in range(2, q) if _is_primitive_root(g, q, phi))
    return _LocalPart(p, e, q, (g,), (phi,))


@lru_cache(maxsize=256)
def _local_logs(p: int, e: int) -> dict:
    part = _local_part(p, e)
    q = part.modulus
    logs = {}
    if p == 2:
        if e == 1:
            return {1: ()}
        if e == 2:
            return {1: (0,), 3: (1,)}
        x = 1
        for b in range(q >> 2):
            logs[x] = (0, b)
            logs[q - x] = (1, b)
            x = x * 5 % q
        return logs
    g = part.generators[0]
    x = 1
    for k in range(part.orders[0]):
        logs[x] = (k,)
        x = x * g % q
    return logs


def _crt_lift(residue: int, q: int, n: int) -> int:
    """x mod n with x = residue mod q and x = 1 mod n/q."""
    m = n // q
    if m == 1:
        return residue % n
    # x = 1 + m*t, need 1 + m t = residue (mod q)
    t = (residue - 1) * pow(m, -1, q) % q
    return (1 + m * t) % n


@dataclass(frozen=True, eq=False)
class UnitGroupStructure:
    modulus: int
    components: tuple
    parts: tuple = field(repr=False)

    @property
    def orders(self) -> tuple:
        return tuple(c.order for c in self.components)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def log(self, a: int) -> Optional[tuple]:
        """Exponent tuple of a over the generators, or None when gcd(a, n) > 1."""
        out = ()
        for part in self.parts:
            r = part.logs.get(a % part.modulus)
            if r is None:
                return None
            out += r
        return out


@lru_cache(maxsize=4096)
def unit_group(n: int) -> UnitGroupStructure:
    if n < 1:
        raise ValueError("modulus must be positive")
    parts = tuple(_local_part(p, e) for p, e in factorize(n)) if n > 1 else ()
    comps = []
    for part in parts:
        for g, o in zip(part.generators, part.orders):
            comps.append(Component(part.prime, _crt_lift(g, part.modulus, n), o))
    return UnitGroupStructure(n, tuple(comps), parts)


def _local_conductor_exponent(part: _LocalPart, exps: tuple) -> int:
    p, e = part.prime, part.exponent
    if all(x == 0 for x in exps):
        return 0
    if p != 2:
        a = exps[0]
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return e - v
    if e == 2:
        return 2
    a, b = exps
    if b == 0:
        return 2  # only the -1 component is active: conductor 4
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    return e - v


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple

    def __post_init__(self):
        g = unit_group(self.modulus)
        if len(self.exponents) != len(g.components):
            raise ValueError("exponent tuple does not match the unit group")
        red = tuple(a % o for a, o in zip(self.exponents, g.orders))
        object.__setattr__(self, "exponents", red)

    @property
    def group(self) -> UnitGroupStructure:
        return unit_group(self.modulus)

    @cached_property
    def order(self) -> int:
        out = 1
        for a, o in zip(self.exponents, self.group.orders):
            out = math.lcm(out, o // math.gcd(a, o))
        return out

    @cached_property
    def conductor(self) -> int:
        f = 1
        i = 0
        for part in self.group.parts:
            k = len(part.orders)
            f *= part.prime ** _local_conductor_exponent(part, self.exponents[i:i + k])
            i += k
        return f

    def is_principal(self) -> bool:
        return all(a == 0 for a in self.exponents)

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def is_real(self) -> bool:
        return self.order <= 2

    def value(self, a: int) -> Optional[RootOfUnity]:
        """chi(a) as an exact root of unity, or None when gcd(a, n) > 1."""
        logs = self.group.log(a)
        if logs is None:
            return None
        t = sum((Fraction(x * y, o) for x, y, o in zip(self.exponents, logs, self.group.orders)),
                Fraction(0))
        return RootOfUnity(t)

    def __call__(self, a: int):
        """Numeric value (mpc, or 0) at the current mpmath precision."""
        v = self.value(a)
        return mpmath.mpc(0) if v is None else v.to_complex()

    def power(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(a * k for a in self.exponents))

    def conjugate(self) -> "DirichletCharacter":
        return self.power(-1)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise ValueError("characters have different moduli")
        return DirichletCharacter(self.modulus,
                                  tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    @property
    def index(self) -> int:
        """1-based position in the canonical enumeration of characters_mod."""
        idx = 0
        for a, o in zip(self.exponents, self.group.orders):
            idx = idx * o + a
        return idx + 1

    def value_table(self) -> list:
        return [self.value(a) for a in range(self.modulus)]


def principal_character(n: int) -> DirichletCharacter:
    return DirichletCharacter(n, (0,) * len(unit_group(n).components))


def characters_mod(n: int) -> list[DirichletCharacter]:
    """All characters mod n in lexicographic exponent order (index 1 principal)."""
    g = unit_group(n)
    return [DirichletCharacter(n, t) for t in itertools.product(*(range(o) for o in g.orders))]


def character(n: int, index: int) -> DirichletCharacter:
    chars = characters_mod(n)
    if not 1 <= index <= len(chars):
        raise ValueError(f"character index must lie in 1..{len(chars)}")
    return chars[index - 1]


def value(chi: DirichletCharacter, a: int) -> Optional[RootOfUnity]:
    return chi.value(a)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def power(chi: DirichletCharacter, k: int) -> DirichletCharacter:
    return chi.power(k)


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    return chi.conjugate()


def primitive_inducing(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character mod conductor(chi) that induces chi."""
    f = chi.conductor
    gens = [c.generator for c in chi.group.components]
    target = [chi.value(g) for g in gens]
    for psi in characters_mod(f):
        if all(psi.value(g) == t for g, t in zip(gens, target)):
            return psi
    raise AssertionError("no inducing character found")


# ---------------------------------------------------------------------------
# Bulk enumeration for counting


@lru_cache(maxsize=None)
def _local_spectrum(p: int, e: int) -> tuple:
    """(order, conductor exponent) for every character of (Z/p^e)^*."""
    part = _local_part(p, e)
    out = []
    for t in itertools.product(*(range(o) for o in part.orders)):
        order = 1
        for a, o in zip(t, part.orders):
            order = math.lcm(order, o // math.gcd(a, o))
        out.append((order, _local_conductor_exponent(part, t)))
    return tuple(out)


def primitive_order_histogram(n: int) -> dict[int, int]:
    """Map order -> number of primitive characters mod n of that order.

    Enumerates every character mod n (as a combination of local characters)
    and reads off its order and conductor.
    """
    return dict(_primitive_order_histogram(n))


@lru_cache(maxsize=4096)
def _primitive_order_histogram(n: int) -> tuple:
    fact = factorize(n) if n > 1 else []
    spectra = [_local_spectrum(p, e) for p, e in fact]
    hist: dict[int, int] = {}
    for combo in itertools.product(*spectra):
        order = 1
        primitive = True
        for (o, c), (p, e) in zip(combo, fact):
            if c != e:
                primitive = False
            order = math.lcm(order, o)
        if primitive:
            hist[order] = hist.get(order, 0) + 1
    return tuple(sorted(hist.items()))
