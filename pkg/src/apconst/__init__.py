"""High-precision Euler products over primes in arithmetic progressions."""
from .numerics import Approx
from .characters import DirichletCharacter, RootOfUnity, characters_mod
from .lseries import l_at, l_at_one, l_stripped
from .products import class_prime_zeta, class_product, class_rational_product, mertens_partial
from .residues import CrossCheckError, mu, rho, rho_analytic, rho_closed
from .census import b_bruteforce, b_moebius, census
from .kappa import kappa_assembled, kappa_closed, kappa_gcd_slow, verify_compact_identities
from .identities import l_vector, solve, verify_numeric

__version__ = "0.1.0"
