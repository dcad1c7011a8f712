from collections import Counter

import mpmath
import pytest

from hyperdual.combinatorics import PoleSet, compositions, phi_map, pole_set
from hyperdual.errors import DomainError, NonSimplePoleError
from hyperdual.identities import IdentityId, Side, summand_eval
from hyperdual.pochhammer import SqrtPoint, poch_sym
from hyperdual.residues import (
    FactoredSummand,
    LinearFactor,
    LocusKind,
    PoleLocus,
    _block_factors,
    factorize_summand,
    lemma1_check,
    lemma2_check,
    phi_prefactor,
    pole_order,
    residue_at,
    wk_residue,
    wk_residue_relation,
)
from hyperdual.sampling import cell_rng, random_sqrt_point

FD_BITS = 512


def _mpf(x):
    return mpmath.mpf(x.numerator) / x.denominator


def _mp_point(point: SqrtPoint) -> SqrtPoint:
    # caller holds workprec(FD_BITS)
    return SqrtPoint(
        _mpf(point.q_sqrt),
        _mpf(point.t_sqrt),
        tuple(map(_mpf, point.u_sqrts)),
        tuple(map(_mpf, point.v_sqrts)),
    )


def fd_residue(side, k, locus: PoleLocus, point: SqrtPoint, h_exp=60):
    """Average of (x - c) g(x) at x = c (1 +- h), with g the summand (times 1/v_1
    on the mixed locus), at 512 bits."""
    group, index = locus.variable
    with mpmath.workprec(FD_BITS):
        base = _mp_point(point)
        h = mpmath.mpf(2) ** -h_exp
        c = _mpf(_sqrt(point, group, index) ** 2)
        total = 0
        for sign in (1, -1):
            scale = mpmath.sqrt(1 + sign * h)
            values = list(base.u_sqrts if group == "u" else base.v_sqrts)
            values[index] = values[index] * scale
            moved = base.replace(**{f"{group}_sqrts": values})
            g = summand_eval(IdentityId.SymTrig_p4, side, k, moved)
            x = c * (1 + sign * h)
            if locus.kind is LocusKind.UV:
                g = g / x
            total += (x - c) * g
        return total / 2


def _sqrt(point, group, index):
    return point.u_sqrts[index] if group == "u" else point.v_sqrts[index]


def _agrees(exact, approx, bits=100):
    with mpmath.workprec(FD_BITS):
        e = _mpf(exact)
        return abs(e - approx) <= mpmath.mpf(2) ** -bits * max(abs(e), 1)


def test_zero_composition_has_no_factors():
    assert factorize_summand(IdentityId.SymTrig_p4, Side.LHS, (0, 0), 2).factors == ()
    with pytest.raises(DomainError):
        factorize_summand(IdentityId.Rational_I2, Side.LHS, (1, 0), 2)


def test_factor_multiset_for_n2_k10():
    """Hand expansion of the left summand at k = (1, 0):
    [qt]_1/[q]_1 * [u1/(t u2)]_1/[u1/u2]_1 * prod_a [t u1/v_a]_1/[u1/v_a]_1."""
    u1, u2, v1, v2 = ("u", 0), ("u", 1), ("v", 0), ("v", 1)

    def f(family, qp, tp, *variables):
        return LinearFactor(family, qp, tp, tuple(variables))

    expected = Counter({
        f("qt", 1, 1): 1,
        f("q", 1, 0): -1,
        f("uu", 0, -1, (*u1, 1), (*u2, -1)): 1,
        f("uu", 0, 0, (*u1, 1), (*u2, -1)): -1,
        f("uv", 0, 1, (*u1, 1), (*v1, -1)): 1,
        f("uv", 0, 0, (*u1, 1), (*v1, -1)): -1,
        f("uv", 0, 1, (*u1, 1), (*v2, -1)): 1,
        f("uv", 0, 0, (*u1, 1), (*v2, -1)): -1,
    })
    got = Counter(dict(factorize_summand(IdentityId.SymTrig_p4, Side.LHS, (1, 0), 2).factors))
    assert got == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_factored_form_matches_summand(n):
    for K in range(5):
        for k in compositions(n, K):
            point = random_sqrt_point(cell_rng(20, 100 * n + K), n)
            for side in Side:
                factored = factorize_summand(IdentityId.SymTrig_p4, side, k, n)
                assert factored.evaluate(point) == summand_eval(IdentityId.SymTrig_p4, side, k, point)


def test_regular_locus_gives_zero_residue():
    point = random_sqrt_point(cell_rng(21, 0), 2)
    locus = PoleLocus(LocusKind.UU, 1)
    at = locus.constrain(point)
    summand = factorize_summand(IdentityId.SymTrig_p4, Side.LHS, (0, 0), 2)
    assert residue_at(summand, locus, at) == 0
    with pytest.raises(DomainError):
        residue_at(summand, locus, point)


def test_paired_vanishing_factors_are_negatives():
    point = PoleLocus(LocusKind.UU, 2).constrain(random_sqrt_point(cell_rng(22, 0), 2))
    qs, us = point.q_sqrt, point.u_sqrts
    a = qs**-1 * us[0] / us[1] - qs * us[1] / us[0]
    b = qs * us[1] / us[0] - qs**-1 * us[0] / us[1]
    assert a == -b
    assert (qs**-2 * us[0] / us[1]) - 1 / (qs**-2 * us[0] / us[1]) == 0


def test_double_pole_is_rejected():
    point = PoleLocus(LocusKind.UU, 0).constrain(random_sqrt_point(cell_rng(23, 0), 2))
    factor = LinearFactor("uu", 0, 0, (("u", 0, 1), ("u", 1, -1)))
    summand = FactoredSummand(Side.LHS, (0, 0), ((factor, -2),))
    assert pole_order(summand, point) == -2
    with pytest.raises(NonSimplePoleError):
        residue_at(summand, PoleLocus(LocusKind.UU, 0), point)


def _pole_composition(n, K, p):
    return pole_set(n, K, p)[0]


CASES = [
    (Side.LHS, LocusKind.UU, 1, _pole_composition(2, 3, 1)),
    (Side.LHS, LocusKind.UU, 0, _pole_composition(2, 3, 0)),
    (Side.LHS, LocusKind.UU, -1, _pole_composition(3, 3, -1)),
    (Side.LHS, LocusKind.UU, 2, _pole_composition(3, 4, 2)),
    (Side.RHS, LocusKind.VV, 1, _pole_composition(2, 3, 1)),
    (Side.RHS, LocusKind.VV, -1, _pole_composition(3, 3, -1)),
    (Side.RHS, LocusKind.UV, 1, (2, 0)),
    (Side.LHS, LocusKind.UV, 2, (3, 1, 0)),
]


@pytest.mark.parametrize("case", range(len(CASES)))
def test_residue_matches_finite_differences(case):
    side, kind, p, k = CASES[case]
    n = len(k)
    locus = PoleLocus(kind, p)
    at = locus.constrain(random_sqrt_point(cell_rng(24, case), n))
    summand = factorize_summand(IdentityId.SymTrig_p4, side, k, n)
    assert pole_order(summand, at) == -1
    exact = residue_at(summand, locus, at)
    assert exact != 0
    assert _agrees(exact, fd_residue(side, k, locus, at))


FAMILIES = ("qt", "q", "uu", "vv", "uv")


def _factors_of(family, n=3, K=4):
    out = set()
    for k in compositions(n, K):
        for side in Side:
            for with_t in (True, False):
                out |= {f for f in _block_factors(side, k, with_t) if f.family == family}
    return sorted(out, key=str)


@pytest.mark.parametrize("family", FAMILIES)
def test_factor_derivatives_match_finite_differences(family):
    """Analytic d/dx of each factor against a 512-bit central difference with
    relative step 2^-100, on 10 random instances."""
    factors = _factors_of(family)
    assert factors
    for trial in range(10):
        rng = cell_rng(25, 1000 * FAMILIES.index(family) + trial)
        point = random_sqrt_point(rng, 3)
        factor = factors[int(rng.integers(len(factors)))]
        involved = [(g, i) for g, i, _ in factor.variables] or [("u", 0)]
        variable = involved[int(rng.integers(len(involved)))]
        exact = factor.derivative(point, variable)
        with mpmath.workprec(FD_BITS):
            base = _mp_point(point)
            x = _mpf(_sqrt(point, *variable) ** 2)
            h = x * mpmath.mpf(2) ** -100
            values = []
            for sign in (1, -1):
                w = mpmath.sqrt(x + sign * h)
                group, index = variable
                roots = list(base.u_sqrts if group == "u" else base.v_sqrts)
                roots[index] = w
                values.append(factor.value(base.replace(**{f"{group}_sqrts": roots})))
            approx = (values[0] - values[1]) / (2 * h)
        assert _agrees(exact, approx)


def test_lemma1_examples():
    point = random_sqrt_point(cell_rng(26, 0), 2)
    assert pole_set(2, 0, 1, PoleSet.IN_I) == []
    assert lemma1_check(2, 0, 1, point)
    assert lemma1_check(2, 2, 1, point)
    assert lemma1_check(3, 3, -1, random_sqrt_point(cell_rng(26, 1), 3))
    with pytest.raises(DomainError):
        lemma1_check(1, 2, 1, random_sqrt_point(cell_rng(26, 2), 1))


def test_lemma1_residues_cancel_pairwise():
    point = random_sqrt_point(cell_rng(27, 0), 3)
    locus = PoleLocus(LocusKind.UU, 1)
    at = locus.constrain(point)
    for k in pole_set(3, 4, 1):
        a = residue_at(factorize_summand(IdentityId.SymTrig_p4, Side.LHS, k, 3), locus, at)
        b = residue_at(factorize_summand(IdentityId.SymTrig_p4, Side.LHS, phi_map(k, 1), 3), locus, at)
        assert a != 0 and a + b == 0


def test_lemma2_examples():
    point = random_sqrt_point(cell_rng(28, 0), 2)
    assert lemma2_check(2, (2, 0), 1, point)
    assert lemma2_check(3, (3, 1, 0), 2, random_sqrt_point(cell_rng(28, 1), 3))
    with pytest.raises(DomainError):
        lemma2_check(2, (1, 1), 2, point)
    with pytest.raises(DomainError):
        phi_prefactor(1, point, "other")


@pytest.mark.parametrize("k, p", [((2, 0), 1), ((2, 1), 2), ((3, 0, 1), 2), ((4, 0), 3)])
def test_printed_prefactor_misses_by_constant(k, p):
    """The form with [tq]_{2p} fails, and its ratio to the working form is
    exactly [t q^(1-p)]_{2p} / [tq]_{2p}, independent of u and v."""
    n = len(k)
    point = PoleLocus(LocusKind.UV, p).constrain(random_sqrt_point(cell_rng(29, p), n))
    assert lemma2_check(n, k, p, point)
    assert not lemma2_check(n, k, p, point, prefactor="printed")
    qs, ts = point.q_sqrt, point.t_sqrt
    ratio = phi_prefactor(p, point) / phi_prefactor(p, point, "printed")
    assert ratio == poch_sym(ts * qs ** (1 - p), qs, 2 * p) / poch_sym(ts * qs, qs, 2 * p)


def test_residue_relation_examples():
    point = random_sqrt_point(cell_rng(30, 0), 2)
    assert wk_residue(2, 2, 2, point) == 0
    assert wk_residue_relation(2, 2, 1, point)
    assert wk_residue_relation(3, 3, 2, random_sqrt_point(cell_rng(30, 1), 3))
    with pytest.raises(DomainError):
        wk_residue_relation(2, 2, 3, point)


def test_individual_summand_residues_are_nonzero():
    """The mixed-diagonal residue of W_K vanishes only after summing."""
    at = PoleLocus(LocusKind.UV, 1).constrain(random_sqrt_point(cell_rng(31, 0), 2))
    summand = factorize_summand(IdentityId.SymTrig_p4, Side.LHS, (2, 0), 2)
    assert residue_at(summand, PoleLocus(LocusKind.UV, 1), at) != 0


def test_lemma2_with_derived_prefactor_on_full_grid():
    """Every n in {2, 3}, k with k_1 <= 4, 1 <= p <= k_1, both sides."""
    index = 0
    for n in (2, 3):
        for K in range(1, 5):
            for k in compositions(n, K):
                for p in range(1, k[0] + 1):
                    assert lemma2_check(n, k, p, random_sqrt_point(cell_rng(32, index), n))
                    index += 1
    assert index == 55
