"""Exact residues of the symmetric summands and the two pole lemmas.

On u_1 = q^p u_2 the summands indexed by k and by its partner
(k_2 - p, k_1 + p, ...) have simple poles whose residues cancel. On
v_1 = q^(p-1) u_1 the residue of a summand is a fixed rational function
times a summand with K lowered by p at shifted variables.
"""

from hyperdual.combinatorics import phi_map, pole_set
from hyperdual.identities import IdentityId, Side, summand_eval
from hyperdual.pochhammer import poch_sym
from hyperdual.residues import (
    LocusKind,
    PoleLocus,
    factorize_summand,
    lemma1_check,
    lemma2_check,
    phi_prefactor,
    residue_at,
    star_point,
)
from hyperdual.sampling import cell_rng, random_sqrt_point

n, K, p = 3, 3, 1
point = random_sqrt_point(cell_rng(seed=3, cell=0), n)
locus = PoleLocus(LocusKind.UU, p)
at = locus.constrain(point)
for k in pole_set(n, K, p):
    partner = phi_map(k, p)
    a = residue_at(factorize_summand(IdentityId.SymTrig_p4, Side.LHS, k, n), locus, at)
    b = residue_at(factorize_summand(IdentityId.SymTrig_p4, Side.LHS, partner, n), locus, at)
    print(f"k={k} <-> {partner}: residues sum to {a + b}")
print("pairing lemma holds on both loci:", lemma1_check(n, K, p, point))

k, p = (2, 1, 0), 2
locus = PoleLocus(LocusKind.UV, p)
at = locus.constrain(point)
residue = residue_at(factorize_summand(IdentityId.SymTrig_p4, Side.RHS, k, n), locus, at)
lowered = summand_eval(IdentityId.SymTrig_p4, Side.RHS, (0, 1, 0), star_point(at))
print("\nmixed diagonal, k=(2,1,0), p=2")
print("  residue / lowered summand == derived prefactor:", residue / lowered == phi_prefactor(p, at))
print("  lemma check, both sides:", lemma2_check(n, k, p, point))
ratio = phi_prefactor(p, at) / phi_prefactor(p, at, "printed")
qs, ts = at.q_sqrt, at.t_sqrt
print("  the [tq]_2p variant is off by [t q^(1-p)]_2p / [tq]_2p:",
      ratio == poch_sym(ts * qs ** (1 - p), qs, 2 * p) / poch_sym(ts * qs, qs, 2 * p))
