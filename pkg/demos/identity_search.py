"""Search for L-function quotients isolating the primes = 1 (mod l).

For l = 5 the solver finds the quotient L1 L2 L3 L4 (s) / (L1 L3 (2s)), and
for l = 7 and l = 9 it prints the rank analysis up to dilation 6.
"""
from apconst.identities import solve, verify_numeric

for ell, t in ((5, 2), (8, 2)):
    sols = solve(ell, t, 2)
    print(f"l = {ell}, t = {t}: {len(sols)} candidates")
    for c in sols[:3]:
        check = verify_numeric(c, 2)
        print(f"  {c.describe():50s} verified at s=2: {check.holds}")

for ell in (7, 9):
    for M in (2, 4, 6):
        rep = solve(ell, 1, M).report
        print(f"l = {ell}, M = {M}: variables {rep.variables}, atoms {rep.atoms}, "
              f"rank {rep.rank}, solvable {rep.solvable}")
