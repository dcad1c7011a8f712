from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperdual.combinatorics import compositions
from hyperdual.errors import DomainError, PoleError
from hyperdual.identities import (
    EllipticPoint,
    IdentityId,
    KernelPoint,
    OddFunctionKind,
    RationalPoint,
    Side,
    asymptotic_deviation,
    diagonal_probe,
    h_eval,
    involution_check,
    kernel_diff,
    kernel_eval,
    limit_decomposition_coefficients,
    limit_relation_check,
    limit_side_decomposition_holds,
    plane_point,
    quasiperiodicity_deviation,
    riemann_check,
    side_eval,
    summand_eval,
    trig_to_sym_factor,
    wk_eval,
)
from hyperdual.numerics import PrecisionPolicy, relative_deviation
from hyperdual.pochhammer import SqrtPoint
from hyperdual.sampling import (
    cell_rng,
    random_elliptic_point,
    random_kernel_point,
    random_rational_point,
    random_sqrt_point,
)
from oracles import rational_side, summand_n2_k10

EXACT = (IdentityId.Rational_I2, IdentityId.Trig_I5, IdentityId.SymTrig_p4)


def _point(identity, rng, n):
    return random_rational_point(rng, n) if identity is IdentityId.Rational_I2 else random_sqrt_point(rng, n)


@pytest.mark.parametrize("identity", EXACT)
@pytest.mark.parametrize("side", Side)
def test_zero_composition_summand_is_one(identity, side):
    point = _point(identity, cell_rng(1, 0), 3)
    assert summand_eval(identity, side, (0, 0, 0), point) == 1
    assert side_eval(identity, side, 3, 0, point) == 1


def test_zero_composition_elliptic():
    point = random_elliptic_point(cell_rng(1, 1), 2, Fraction(1, 5), PrecisionPolicy(128, 16, 96))
    for side in Side:
        assert relative_deviation(summand_eval(IdentityId.Elliptic_A6, side, (0, 0), point), 1) == 0


@pytest.mark.parametrize("identity", EXACT)
def test_single_variable_summands_coincide(identity):
    point = _point(identity, cell_rng(2, 0), 1)
    for K in range(5):
        assert summand_eval(identity, Side.LHS, (K,), point) == summand_eval(identity, Side.RHS, (K,), point)


@pytest.mark.parametrize("seed", range(5))
def test_summand_matches_hand_expansion(seed):
    point = random_sqrt_point(cell_rng(seed, 7), 2)
    args = (point.q_sqrt, point.t_sqrt, point.u_sqrts, point.v_sqrts)
    for side in Side:
        assert summand_eval(IdentityId.SymTrig_p4, side, (1, 0), point) == summand_n2_k10(side.value, *args)


def test_rational_example_against_oracle():
    point = RationalPoint((Fraction(0), Fraction(1, 2)), (Fraction(5), Fraction(7)), Fraction(1, 3))
    for side in Side:
        assert side_eval(IdentityId.Rational_I2, side, 2, 1, point) == rational_side(
            side.value, point.x, point.y, point.alpha, 1
        )
    assert wk_eval(IdentityId.Rational_I2, 2, 1, point).is_exact_zero


@pytest.mark.parametrize("n, K", [(2, 3), (3, 2)])
def test_rational_sides_against_oracle(n, K):
    point = random_rational_point(cell_rng(3, n * 10 + K), n)
    for side in Side:
        assert side_eval(IdentityId.Rational_I2, side, n, K, point) == rational_side(
            side.value, point.x, point.y, point.alpha, K
        )


@pytest.mark.parametrize("identity", EXACT)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_main_identities_vanish(identity, n):
    for K in range(4):
        point = _point(identity, cell_rng(4, 100 * n + K), n)
        diff = wk_eval(identity, n, K, point)
        assert diff.is_exact_zero
        assert diff.lhs == diff.rhs


def test_identity_is_not_vacuous():
    """Using different alphas on the two sides breaks the equality."""
    point = random_rational_point(cell_rng(5, 0), 2)
    other = RationalPoint(point.x, point.y, point.alpha + 1)
    assert side_eval(IdentityId.Rational_I2, Side.LHS, 2, 2, point) != side_eval(
        IdentityId.Rational_I2, Side.RHS, 2, 2, other
    )


@pytest.mark.parametrize("K", range(4))
def test_trig_summands_are_t_power_times_symmetric(K):
    point = random_sqrt_point(cell_rng(6, K), 2)
    factor = trig_to_sym_factor(K, point)
    for k in compositions(2, K):
        for side in Side:
            assert summand_eval(IdentityId.Trig_I5, side, k, point) == factor * summand_eval(
                IdentityId.SymTrig_p4, side, k, point
            )


def test_point_checks():
    point = random_sqrt_point(cell_rng(7, 0), 2)
    with pytest.raises(DomainError):
        side_eval(IdentityId.Rational_I2, Side.LHS, 2, 1, point)
    with pytest.raises(DomainError):
        side_eval(IdentityId.SymTrig_p4, Side.LHS, 3, 1, point)
    with pytest.raises(DomainError):
        summand_eval(IdentityId.SymTrig_p4, Side.LHS, (2, -1), point)


def test_pole_error_names_the_composition():
    qs = Fraction(3)
    point = SqrtPoint(qs, Fraction(5, 7), (Fraction(2), Fraction(2)), (Fraction(11), Fraction(13)))
    with pytest.raises(PoleError) as info:
        side_eval(IdentityId.SymTrig_p4, Side.LHS, 2, 2, point)
    assert info.value.k is not None


@given(st.integers(0, 2**32))
def test_involution(seed):
    point = random_sqrt_point(cell_rng(seed, 0), 2)
    for k in compositions(2, 3):
        assert involution_check(k, point)


@pytest.mark.parametrize("n", [2, 3])
def test_plane_vanishing(n):
    point = plane_point(random_sqrt_point(cell_rng(8, n), n))
    for K in range(1, 5):
        assert side_eval(IdentityId.SymTrig_p4, Side.LHS, n, K, point) == 0
        assert side_eval(IdentityId.SymTrig_p4, Side.RHS, n, K, point) == 0


def test_asymptotic_zone():
    for side in Side:
        far = asymptotic_deviation(side, 2, 2, 10**4, 2, Fraction(1, 3))
        near = asymptotic_deviation(side, 2, 2, 10**3, 2, Fraction(1, 3))
        assert far < near
        assert far <= mpmath.mpf("0.01")


def test_elliptic_example():
    policy = PrecisionPolicy(256, 32, 150)
    point = random_elliptic_point(cell_rng(9, 0), 2, Fraction(1, 5), policy)
    diff = wk_eval(IdentityId.Elliptic_A6, 2, 1, point)
    assert relative_deviation(diff.lhs, diff.rhs, 256) <= mpmath.mpf(2) ** -150
    assert abs(diff.lhs) > mpmath.mpf(2) ** -40


def test_elliptic_reduces_to_trigonometric_at_zero_nome():
    """At p = 0 the theta function is 1 - z and the elliptic summand is the
    q-Pochhammer summand."""
    sp = random_sqrt_point(cell_rng(9, 1), 2)
    policy = PrecisionPolicy(192, 32, 140)
    ep = EllipticPoint(sp.q, sp.t, sp.u, sp.v, 0, policy)
    for k in compositions(2, 2):
        for side in Side:
            exact = summand_eval(IdentityId.Trig_I5, side, k, sp)
            assert relative_deviation(summand_eval(IdentityId.Elliptic_A6, side, k, ep), exact, 192) < mpmath.mpf(
                2
            ) ** -150


@pytest.mark.parametrize("group", ["u", "v"])
def test_quasiperiodicity(group):
    policy = PrecisionPolicy(256, 32, 150)
    point = random_elliptic_point(cell_rng(10, 0), 2, Fraction(1, 5), policy)
    for side in Side:
        assert quasiperiodicity_deviation(side, 2, 2, point, group) < mpmath.mpf(2) ** -100


def test_diagonal_regularity():
    """Approaching u_1 = q u_2 the side values converge instead of blowing up."""
    point = random_sqrt_point(cell_rng(11, 0), 2)
    deltas = [Fraction(1, 2**e) for e in (10, 20, 30, 40)]
    for side in Side:
        values = diagonal_probe(side, 2, 3, point, 1, deltas)
        steps = [abs(b - a) for a, b in zip(values, values[1:])]
        assert steps[-1] < steps[0] * Fraction(1, 2**15)
        assert max(abs(v) for v in values) < 2 * abs(values[-1]) + 1


def test_kernel_examples():
    lin = OddFunctionKind.LINEAR
    point = KernelPoint((Fraction(1), Fraction(2)), (Fraction(10), Fraction(20)), Fraction(1, 7))
    assert kernel_diff(IdentityId.Kernel_I1, lin, 2, 1, point) == 0
    for side in Side:
        assert kernel_eval(IdentityId.Kernel_I1, side, lin, 2, 0, point) == 1
    rng = cell_rng(12, 0)
    x = random_kernel_point(rng, 3).x
    point = KernelPoint(x, alpha=Fraction(2, 5), beta=Fraction(3, 7))
    assert kernel_diff(IdentityId.RuijMac_I6, lin, 3, 2, point) == 0
    with pytest.raises(DomainError):
        kernel_eval(IdentityId.Kernel_I1, Side.LHS, lin, 2, 3, point)
    with pytest.raises(DomainError):
        kernel_eval(IdentityId.RatKernel_A2, Side.LHS, OddFunctionKind.TRIG_EXP, 3, 1, point)


@pytest.mark.parametrize("s", OddFunctionKind)
@pytest.mark.parametrize("identity", [IdentityId.Kernel_I1, IdentityId.RuijMac_I6])
def test_kernel_identities(identity, s):
    for n in (2, 3, 4):
        point = random_kernel_point(cell_rng(13, n), n)
        for r in range(n + 1):
            assert kernel_diff(identity, s, n, r, point) == 0


def test_kernel_identity_is_not_vacuous():
    lin = OddFunctionKind.LINEAR
    point = random_kernel_point(cell_rng(14, 0), 3)
    shifted = KernelPoint(point.x, point.y, point.alpha + 1)
    assert kernel_eval(IdentityId.Kernel_I1, Side.LHS, lin, 3, 1, point) != kernel_eval(
        IdentityId.Kernel_I1, Side.RHS, lin, 3, 1, shifted
    )


def test_riemann_examples():
    lin = OddFunctionKind.LINEAR
    assert riemann_check(lin, 1, 2, 3, 4)
    assert 3 * (-1) * 7 * (-1) == 96 - 75 == 21
    assert riemann_check(lin, 5, 5, 3, 4)
    assert riemann_check(lin, 1, 2, 6, 6)


@given(st.lists(st.fractions(Fraction(1, 100), Fraction(100), max_denominator=100), min_size=4, max_size=4))
def test_riemann_relation(args):
    for s in OddFunctionKind:
        assert riemann_check(s, *args)


def test_riemann_relation_rejects_even_function():
    """cos-type s(w) = w + 1/w is not odd and fails the relation."""
    args = [Fraction(2), Fraction(3), Fraction(5), Fraction(7)]

    def cos_like(a, b):
        r = a / b
        return r + 1 / r

    plus = lambda a, b: cos_like(a * b, 1)  # noqa: E731
    minus = cos_like
    x, y, u, v = args
    lhs = plus(x, y) * minus(x, y) * plus(u, v) * minus(u, v)
    rhs = plus(x, u) * minus(x, u) * plus(y, v) * minus(y, v) - plus(x, v) * minus(x, v) * plus(y, u) * minus(y, u)
    assert lhs != rhs


def test_limit_identity_examples():
    point = random_rational_point(cell_rng(15, 0), 2)
    for side in Side:
        assert h_eval(side, 2, 0, point) == 1
        assert h_eval(side, 2, 1, point) == kernel_eval(
            IdentityId.RatKernel_A2, side, OddFunctionKind.LINEAR, 2, 1, KernelPoint(point.x, point.y, point.alpha)
        )
    assert wk_eval(IdentityId.RatLimit_A1, 2, 2, point).is_exact_zero


@pytest.mark.parametrize("n", [1, 2, 3])
def test_limit_relations(n):
    for trial in range(3):
        assert limit_relation_check(n, random_rational_point(cell_rng(16, 10 * n + trial), n))


def test_limit_decomposition_coefficients():
    assert limit_decomposition_coefficients(1, 3) == {1: 1}
    assert limit_decomposition_coefficients(2, 3) == {1: 1, 2: 1}
    assert limit_decomposition_coefficients(4, 3) == {1: 1, 2: 3, 3: 3}


@pytest.mark.parametrize("n", [2, 3])
def test_limit_decomposition_beyond_two(n):
    point = random_rational_point(cell_rng(17, n), n)
    for K in range(1, 6):
        for side in Side:
            assert limit_side_decomposition_holds(side, n, K, point)
