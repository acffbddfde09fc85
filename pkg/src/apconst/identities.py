"""Exact search for L-function combinations isolating the class-1 product.

An atom (k, w) stands for log prod_{p = k mod l} (1 - w p^-s)^-1 with w a
root of unity.  Since 1 - u x^m = prod_{w^m = u} (1 - w x), the value
L(ms, chi) expands into atoms with +1 at (k, w) for every m-th root w of
chi(k).  A combination prod L(ms, chi_j)^e_jm equal to

    g(s) = prod_{p = 1} ((1 + p^-s) / (1 - p^-s))^t

is an integer solution of a linear system over the atoms.  The system is
solved exactly: a unimodular row echelon form of the transposed matrix gives
a particular solution and a kernel basis, the kernel is LLL reduced and
small solutions are enumerated.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mpf
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from .characters import DirichletCharacter, RootOfUnity, characters_mod
from .lseries import l_at
from .numerics import GUARD_BITS, Approx
from .products import DEFAULT_STRIP, class_product

MAX_CANDIDATES = 100

Atom = tuple  # (k, RootOfUnity)


@dataclass(frozen=True)
class PlaceholderVector:
    """Integer combination of atoms; zero entries are dropped."""

    modulus: int
    entries: tuple  # sorted ((k, RootOfUnity), exponent) pairs

    @classmethod
    def from_dict(cls, modulus: int, d: dict) -> "PlaceholderVector":
        return cls(modulus, tuple(sorted((a, e) for a, e in d.items() if e != 0)))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __add__(self, other: "PlaceholderVector") -> "PlaceholderVector":
        d = self.as_dict()
        for a, e in other.entries:
            d[a] = d.get(a, 0) + e
        return PlaceholderVector.from_dict(self.modulus, d)

    def scale(self, c: int) -> "PlaceholderVector":
        return PlaceholderVector.from_dict(self.modulus, {a: c * e for a, e in self.entries})

    def __neg__(self) -> "PlaceholderVector":
        return self.scale(-1)

    def __sub__(self, other: "PlaceholderVector") -> "PlaceholderVector":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.entries

    def describe(self) -> str:
        parts = []
        for (k, w), e in self.entries:
            parts.append(f"[{k}|{w.turn}]^{e}")
        return " ".join(parts) or "1"


def l_vector(chi: DirichletCharacter, m: int) -> PlaceholderVector:
    """Atoms of L(ms, chi): +1 at (k, w) for each w with w^m = chi(k)."""
    if m < 1:
        raise ValueError("dilation must be at least 1")
    d = {}
    for k in range(1, chi.modulus + 1):
        u = chi.value(k)
        if u is None:
            continue
        for w in u.roots(m):
            d[(k % chi.modulus, w)] = 1
    return PlaceholderVector.from_dict(chi.modulus, d)


def target_vector(ell: int, t: int) -> PlaceholderVector:
    one = RootOfUnity.one()
    return PlaceholderVector.from_dict(ell, {(1, one): t, (1, RootOfUnity(Fraction(1, 2))): -t})


@dataclass(frozen=True)
class IdentityCandidate:
    modulus: int
    target: int
    coefficients: tuple  # sorted ((character index, dilation), exponent)
    residual: PlaceholderVector

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()

    @property
    def pole_order(self) -> int:
        """Order of the pole at s = 1 (only the principal L(s) has one)."""
        return dict(self.coefficients).get((1, 1), 0)

    def l1_norm(self) -> int:
        return sum(abs(e) for _, e in self.coefficients)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "target": self.target,
                "terms": [{"character": j, "dilation": m, "exponent": e}
                          for (j, m), e in self.coefficients],
                "exact": self.exact, "pole_order": self.pole_order}

    def describe(self) -> str:
        num = [f"L{j}({'' if m == 1 else m}s)" + (f"^{e}" if e != 1 else "")
               for (j, m), e in self.coefficients if e > 0]
        den = [f"L{j}({'' if m == 1 else m}s)" + (f"^{-e}" if e != -1 else "")
               for (j, m), e in self.coefficients if e < 0]
        return " ".join(num) + (" / (" + " ".join(den) + ")" if den else "")


def candidate_from_json(d: dict) -> IdentityCandidate:
    ell = d["modulus"]
    coeffs = {(t["character"], t["dilation"]): t["exponent"] for t in d["terms"]}
    return make_candidate(ell, d["target"], coeffs)


def _combination(ell: int, coeffs: dict) -> PlaceholderVector:
    chars = characters_mod(ell)
    total = PlaceholderVector(ell, ())
    for (j, m), e in coeffs.items():
        total = total + l_vector(chars[j - 1], m).scale(e)
    return total


def make_candidate(ell: int, t: int, coeffs: dict) -> IdentityCandidate:
    coeffs = {k: v for k, v in coeffs.items() if v != 0}
    residual = _combination(ell, coeffs) - target_vector(ell, t)
    return IdentityCandidate(ell, t, tuple(sorted(coeffs.items())), residual)


# ---------------------------------------------------------------------------
# exact integer linear algebra


def row_echelon_unimodular(rows: list[list[int]]) -> tuple:
    """Row echelon form H = U A over the integers with U unimodular.

    Returns (H, U, pivots) with pivots[i] the pivot column of row i for the
    nonzero rows 0..len(pivots)-1.
    """
    a = [list(r) for r in rows]
    n = len(a)
    ncols = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, n):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if any(a[i][c] for i in range(r, n)):
            pivots.append(c)
            r += 1
    return a, u, pivots


def _lll(basis: list[list[int]]) -> list[list[int]]:
    if len(basis) <= 1:
        return basis
    m = DomainMatrix([[ZZ(x) for x in row] for row in basis], (len(basis), len(basis[0])), ZZ)
    return [[int(x) for x in row] for row in m.lll().to_list()]


@dataclass
class SolveReport:
    modulus: int
    target: int
    max_dilation: int
    variables: int
    atoms: int
    rank: int
    solvable: bool
    kernel_rank: int
    particular: Optional[tuple] = None
    kernel_basis: list = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "target": self.target, "max_dilation": self.max_dilation,
                "variables": self.variables, "atoms": self.atoms, "rank": self.rank,
                "solvable": self.solvable, "kernel_rank": self.kernel_rank, "note": self.note}


class Solutions(list):
    """Candidates sorted by L1 norm, with the rank analysis in ``report``."""

    report: SolveReport


def _enumeration_radius(kernel_rank: int, limit: int = 20000) -> int:
    radius = 3
    while radius > 0 and (2 * radius + 1) ** kernel_rank > limit:
        radius -= 1
    return radius


def solve(ell: int, t: int, max_dilation: int, cap: int = MAX_CANDIDATES) -> Solutions:
    """Integer combinations of L(ms, chi), m <= max_dilation, equal to the target."""
    if ell < 3 or t < 1 or max_dilation < 2:
        raise ValueError("need l >= 3, t >= 1 and max dilation >= 2")
    chars = characters_mod(ell)
    variables = [(j, m) for m in range(1, max_dilation + 1) for j in range(1, len(chars) + 1)]
    vectors = [l_vector(chars[j - 1], m).as_dict() for j, m in variables]
    target = target_vector(ell, t).as_dict()
    atoms = sorted(set().union(*vectors) | set(target))
    col = {a: i for i, a in enumerate(atoms)}
    rows = []
    for v in vectors:
        r = [0] * len(atoms)
        for a, e in v.items():
            r[col[a]] = e
        rows.append(r)
    h, u, pivots = row_echelon_unimodular(rows)
    rank = len(pivots)
    kernel = [u[i] for i in range(rank, len(rows))]
    # particular solution: y with sum_i y_i h_i = target
    rhs = [0] * len(atoms)
    for a, e in target.items():
        rhs[col[a]] = e
    y = [0] * rank
    solvable = True
    for i, c in enumerate(pivots):
        if rhs[c] % h[i][c]:
            solvable = False
            break
        y[i] = rhs[c] // h[i][c]
        rhs = [x - y[i] * z for x, z in zip(rhs, h[i])]
    if solvable and any(rhs):
        solvable = False
    report = SolveReport(ell, t, max_dilation, len(variables), len(atoms), rank, solvable,
                         len(kernel))
    out = Solutions()
    out.report = report
    if not solvable:
        report.note = "target not in the integer span"
        return out
    part = [sum(y[i] * u[i][v] for i in range(rank)) for v in range(len(variables))]
    kernel = _lll(kernel)
    part = _size_reduce(part, kernel)
    report.particular = tuple(part)
    report.kernel_basis = kernel
    radius = _enumeration_radius(len(kernel))
    found = {}
    for cs in itertools.product(range(-radius, radius + 1), repeat=len(kernel)):
        e = list(part)
        for c, k in zip(cs, kernel):
            if c:
                e = [x + c * z for x, z in zip(e, k)]
        key = tuple(e)
        if key not in found:
            found[key] = sum(abs(x) for x in e)
    if kernel:
        report.note = f"kernel enumerated with coefficients in [-{radius}, {radius}]"
    ranked = sorted(found, key=lambda e: (found[e], [-x for x in e]))[:cap]
    for e in ranked:
        coeffs = {variables[i]: x for i, x in enumerate(e) if x}
        cand = make_candidate(ell, t, coeffs)
        assert cand.exact
        out.append(cand)
    return out


def _size_reduce(vec: list[int], basis: list[list[int]]) -> list[int]:
    """Greedy reduction of a particular solution by kernel vectors."""
    best = list(vec)
    improved = True
    while improved and basis:
        improved = False
        for b in basis:
            for sign in (1, -1):
                cand = [x - sign * z for x, z in zip(best, b)]
                if sum(abs(x) for x in cand) < sum(abs(x) for x in best):
                    best = cand
                    improved = True
    return best


# ---------------------------------------------------------------------------
# numeric confirmation


@dataclass(frozen=True)
class NumericCheck:
    holds: bool
    discrepancy: mpf
    tolerance: mpf
    lhs: Approx
    rhs: Approx


def _int_power(x: Approx, e: int) -> Approx:
    out = Approx(mpmath.mpc(1), mpf(0), x.prec)
    base = x if e > 0 else Approx(mpmath.mpc(1), mpf(0), x.prec) / x
    for _ in range(abs(e)):
        out = out * base
    return out


def verify_numeric(candidate: IdentityCandidate, s=2, prec: int = 192,
                   strip_below: int = DEFAULT_STRIP) -> NumericCheck:
    """Compare prod L(ms, chi_j)^e with the class-1 product g(s) numerically."""
    if s <= 1:
        raise ValueError("s must exceed 1")
    ell, t = candidate.modulus, candidate.target
    chars = characters_mod(ell)
    with mpmath.workprec(prec + GUARD_BITS):
        lhs = Approx(mpmath.mpc(1), mpf(0), prec)
        for (j, m), e in candidate.coefficients:
            lhs = lhs * _int_power(l_at(chars[j - 1], m * s, prec).approx, e)
        rhs = (class_product(ell, [1], 2 * t, s, strip_below, prec)
               * class_product(ell, [1], -t, 2 * s, strip_below, prec))
        diff = abs(lhs.value - rhs.value)
        tol = lhs.error + rhs.error
    return NumericCheck(bool(diff <= tol), diff, tol, lhs, rhs)


def candidates_to_json(cands, report: Optional[SolveReport] = None) -> str:
    data = {"candidates": [c.to_json() for c in cands]}
    if report is not None:
        data["report"] = report.to_json()
    return json.dumps(data, indent=2, sort_keys=True)
