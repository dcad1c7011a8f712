"""The elliptic identity in floating point, and how precision is controlled.

Theta products are truncated once the tail drops below 2^-(working+guard);
agreement between a run at 256 bits and one at 512 bits is the evidence
that the truncation and rounding are under control.
"""

from fractions import Fraction

import mpmath

from hyperdual.identities import IdentityId, Side, quasiperiodicity_deviation, side_eval
from hyperdual.numerics import PrecisionPolicy, relative_deviation, theta_eval, theta_truncation_index
from hyperdual.sampling import cell_rng, random_elliptic_point

policy = PrecisionPolicy(working_bits=256, guard_bits=32, agreement_bits=150)
nome = Fraction(3, 10)
print("theta(1/2; 3/10) =", theta_eval(Fraction(1, 2), nome, policy))
print("  factors used:", theta_truncation_index(Fraction(1, 2), nome, policy))

point = random_elliptic_point(cell_rng(seed=2, cell=0), 2, nome, policy)
for K in (1, 2, 3):
    lhs = side_eval(IdentityId.Elliptic_A6, Side.LHS, 2, K, point)
    rhs = side_eval(IdentityId.Elliptic_A6, Side.RHS, 2, K, point)
    fine = point.with_policy(policy.doubled())
    lhs2 = side_eval(IdentityId.Elliptic_A6, Side.LHS, 2, K, fine)
    print(f"K={K}: |LHS-RHS|/|LHS| = {mpmath.nstr(relative_deviation(lhs, rhs), 3)}, "
          f"256 vs 512 bits: {mpmath.nstr(relative_deviation(lhs, lhs2, 512), 3)}")

print("\nmultiplying u_1 by the nome scales each side by t^-K, v_1 by t^K:")
for group in ("u", "v"):
    dev = max(quasiperiodicity_deviation(side, 2, 2, point, group) for side in Side)
    print(f"  {group}_1 -> p {group}_1: deviation {mpmath.nstr(dev, 3)}")
