"""Both sides of the rational and trigonometric duality identities at a random
exact point.

Each side is a sum over compositions k of K into n parts. The two sums are
different rational functions term by term, yet their totals agree exactly.
"""

from hyperdual.combinatorics import compositions
from hyperdual.identities import IdentityId, Side, side_eval, summand_eval, trig_to_sym_factor, wk_eval
from hyperdual.sampling import cell_rng, random_rational_point, random_sqrt_point

n, K = 3, 3
rng = cell_rng(seed=1, cell=0)

point = random_rational_point(rng, n)
print("rational point: alpha =", point.alpha)
for side in Side:
    value = side_eval(IdentityId.Rational_I2, side, n, K, point)
    print(f"  {side.value} = {str(value)[:60]}...")
print("  difference:", wk_eval(IdentityId.Rational_I2, n, K, point).value)

point = random_sqrt_point(rng, n)
print("\nsymmetric q-form, summand by summand:")
for k in list(compositions(n, K))[:4]:
    lhs = summand_eval(IdentityId.SymTrig_p4, Side.LHS, k, point)
    rhs = summand_eval(IdentityId.SymTrig_p4, Side.RHS, k, point)
    print(f"  k={k}: U_k == V_k ? {lhs == rhs}")
print("  sums differ by", wk_eval(IdentityId.SymTrig_p4, n, K, point).value)

# the q-Pochhammer form is the same sum with every summand scaled by t^K
factor = trig_to_sym_factor(K, point)
same = all(
    summand_eval(IdentityId.Trig_I5, s, k, point) == factor * summand_eval(IdentityId.SymTrig_p4, s, k, point)
    for k in compositions(n, K)
    for s in Side
)
print("  q-Pochhammer summands = t^K * symmetric summands:", same)
