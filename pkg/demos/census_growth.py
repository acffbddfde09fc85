"""How fast does the character census approach its leading constant?

S_l(N) / (N log(N)^(d(l) - 2)) tends to K_l, but only logarithmically.  The
table shows the ratio at a few N next to K_l from the fast assembly.
"""
import mpmath

from apconst.census import asymptotic_ratio, census
from apconst.kappa import kappa

N = 10 ** 6

for ell in (3, 5, 6, 7):
    k = kappa(ell, "closed" if ell != 7 else "assembled", 128)
    table = census(ell, N)
    ratios = dict(asymptotic_ratio(table))
    print(f"l = {ell}: K = {mpmath.nstr(k.value.value, 15)}")
    for n in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
        print(f"  N = {n:>8}  ratio {ratios[n]:.6f}")
