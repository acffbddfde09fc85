"""Mertens constants mu(k, l) for every reduced class mod 5, 7 and 9.

Prints each constant to 40 digits, then checks that the product over the
classes of a modulus recovers e^-gamma / prod_{p | l} (1 - 1/p), which holds
because the class products multiply back to the full Mertens product.
"""
import math

import mpmath

from apconst import mu
from apconst.numerics import euler_gamma
from apconst.primes import factorize

PREC = 200

for ell in (5, 7, 9):
    total = mpmath.mpf(1)
    print(f"modulus {ell}")
    for k in range(1, ell):
        if math.gcd(k, ell) != 1:
            continue
        r = mu(ell, k, PREC)
        with mpmath.workprec(PREC):
            total *= r.mu.value
            print(f"  mu({k},{ell}) = {mpmath.nstr(r.mu.value, 40)}")
    with mpmath.workprec(PREC):
        expected = mpmath.exp(-euler_gamma(PREC).value)
        for p, _ in factorize(ell):
            expected /= 1 - mpmath.mpf(1) / p
        print(f"  product over classes    {mpmath.nstr(total, 40)}")
        print(f"  e^-gamma / prod(1-1/p)  {mpmath.nstr(expected, 40)}")
