"""Factored summands of the symmetric identity and exact residues at simple poles.

Every summand U_k, V_k is a product of linear factors M - 1/M where M is a
monomial in the square roots of q, t, u_i, v_a. Keeping the factors apart
lets us find the one that vanishes on a pole locus and replace it by its
derivative, which gives the residue exactly.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import PoleSet, compositions, phi_map, pole_set
from .errors import DomainError, NonSimplePoleError, PoleError
from .identities import IdentityId, Side, summand_eval, wk_eval
from .pochhammer import SqrtPoint, poch_sym


@dataclass(frozen=True)
class LinearFactor:
    """M - 1/M with M = q_sqrt^q_power * t_sqrt^t_power * prod sqrt(var)^exponent.

    ``variables`` holds ``(group, index, exponent)`` triples, group 'u' or 'v',
    index 0-based. ``family`` is 'qt', 'q', 'uu', 'vv' or 'uv'.
    """

    family: str
    q_power: int
    t_power: int
    variables: tuple = ()

    def monomial(self, point: SqrtPoint):
        m = point.q_sqrt**self.q_power * point.t_sqrt**self.t_power
        for group, index, exponent in self.variables:
            m *= _sqrt_of(point, group, index) ** exponent
        return m

    def value(self, point: SqrtPoint):
        m = self.monomial(point)
        return m - 1 / m

    def derivative(self, point: SqrtPoint, variable: tuple):
        """d/dx of the factor, x = ``variable`` = (group, index) itself (not its root).

        With x = w^2 and M proportional to w^e: dM/dx = e M / (2 x), and
        d(M - 1/M)/dM = 1 + 1/M^2.
        """
        exponent = sum(e for g, i, e in self.variables if (g, i) == variable)
        if exponent == 0:
            return 0 * point.q_sqrt
        m = self.monomial(point)
        x = _sqrt_of(point, *variable) ** 2
        return (1 + 1 / m**2) * exponent * m / (2 * x)

    def __str__(self):
        parts = []
        if self.q_power:
            parts.append(f"q^({self.q_power}/2)")
        if self.t_power:
            parts.append(f"t^({self.t_power}/2)")
        for g, i, e in self.variables:
            parts.append(f"{g}{i + 1}^({e}/2)")
        return "M - 1/M, M = " + (" ".join(parts) or "1")


def _sqrt_of(point: SqrtPoint, group: str, index: int):
    return point.u_sqrts[index] if group == "u" else point.v_sqrts[index]


def _poch_factors(family, q_power, t_power, variables, length):
    return [LinearFactor(family, q_power + m, t_power, variables) for m in range(length)]


def _block_factors(side: Side, k, with_t: bool) -> list:
    """Linear factors of X_k(u;v;t) (left side) or its right-side analog; with
    ``with_t=False`` t is set to 1, giving the denominator of the summand."""
    n = len(k)
    tp = 1 if with_t else 0
    out = []
    for i in range(n):
        out += _poch_factors("qt" if with_t else "q", 1, tp, (), k[i])
    if side is Side.LHS:
        for i in range(n):
            for j in range(n):
                if i != j:
                    out += _poch_factors("uu", -k[j], -tp, (("u", i, 1), ("u", j, -1)), k[i])
        for a in range(n):
            for j in range(n):
                out += _poch_factors("uv", 0, tp, (("u", j, 1), ("v", a, -1)), k[j])
    else:
        for a in range(n):
            for b in range(n):
                if a != b:
                    out += _poch_factors("vv", -k[a], -tp, (("v", a, 1), ("v", b, -1)), k[b])
        for a in range(n):
            for j in range(n):
                out += _poch_factors("uv", 0, tp, (("u", j, 1), ("v", a, -1)), k[a])
    return out


def block_eval(side: Side, k, point: SqrtPoint, with_t: bool = True):
    """X_k(u;v;t) for the left side (or the right-side analog) at ``point``;
    ``with_t=False`` evaluates X_k(u;v;1)."""
    result = Fraction(1)
    for factor in _block_factors(side, tuple(k), with_t):
        result *= factor.value(point)
    return result


@dataclass(frozen=True)
class FactoredSummand:
    side: Side
    k: tuple
    factors: tuple  # ((LinearFactor, exponent), ...)

    def evaluate(self, point: SqrtPoint):
        num = Fraction(1)
        den = Fraction(1)
        for factor, exponent in self.factors:
            value = factor.value(point)
            if exponent > 0:
                num *= value**exponent
            else:
                if value == 0:
                    raise PoleError(str(factor), self.k)
                den *= value ** (-exponent)
        return num / den


def _random_sqrt_point(rng: random.Random, n: int) -> SqrtPoint:
    r = lambda: Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))  # noqa: E731
    return SqrtPoint(r(), r(), [r() for _ in range(n)], [r() for _ in range(n)])


@lru_cache(maxsize=4096)
def _factorize_cached(side: Side, k: tuple) -> FactoredSummand:
    counts = Counter()
    for f in _block_factors(side, k, with_t=True):
        counts[f] += 1
    for f in _block_factors(side, k, with_t=False):
        counts[f] -= 1
    factors = tuple((f, e) for f, e in counts.items() if e)
    summand = FactoredSummand(side, k, factors)
    rng = random.Random(f"{side.value}:{k}")
    checked = 0
    while checked < 5:
        point = _random_sqrt_point(rng, len(k))
        try:
            expected = summand_eval(IdentityId.SymTrig_p4, side, k, point)
        except PoleError:
            continue
        assert summand.evaluate(point) == expected, f"factored form disagrees for k={k}"
        checked += 1
    return summand


def factorize_summand(identity: IdentityId, side: Side, k, n: int) -> FactoredSummand:
    """Linear-factor form of U_k / V_k, checked against :func:`summand_eval`
    at five random points before being returned."""
    if identity is not IdentityId.SymTrig_p4:
        raise DomainError("only the symmetric trigonometric summands are factorized")
    k = tuple(k)
    if len(k) != n:
        raise DomainError(f"composition {k} does not have n={n} parts")
    return _factorize_cached(side, k)


class LocusKind(enum.Enum):
    UU = "UU"  # u_1 = q^p u_2, residue in u_1
    VV = "VV"  # v_2 = q^p v_1, residue in v_2
    UV = "UV"  # v_1 = q^(p-1) u_1, residue of (1/v_1) * summand in v_1


@dataclass(frozen=True)
class PoleLocus:
    kind: LocusKind
    shift: int

    @property
    def variable(self) -> tuple:
        return {LocusKind.UU: ("u", 0), LocusKind.VV: ("v", 1), LocusKind.UV: ("v", 0)}[self.kind]

    def _target(self, point: SqrtPoint):
        qs = point.q_sqrt
        if self.kind is LocusKind.UU:
            return qs**self.shift * point.u_sqrts[1]
        if self.kind is LocusKind.VV:
            return qs**self.shift * point.v_sqrts[0]
        return qs ** (self.shift - 1) * point.u_sqrts[0]

    def contains(self, point: SqrtPoint) -> bool:
        return _sqrt_of(point, *self.variable) == self._target(point)

    def constrain(self, point: SqrtPoint) -> SqrtPoint:
        """Set the constrained variable's square root so that ``point`` lies on the locus."""
        group, index = self.variable
        values = list(point.u_sqrts if group == "u" else point.v_sqrts)
        values[index] = self._target(point)
        if group == "u":
            return point.replace(u_sqrts=values)
        return point.replace(v_sqrts=values)


def pole_order(summand: FactoredSummand, point: SqrtPoint) -> int:
    """Net order of vanishing of the summand's factors at ``point`` (negative = pole)."""
    return sum(e for f, e in summand.factors if f.value(point) == 0)


def residue_at(summand: FactoredSummand, locus: PoleLocus, point: SqrtPoint):
    """Exact residue of the summand (times 1/v_1 for the UV locus) on ``locus``.

    Returns 0 where the summand is regular. A pole of order two or more
    raises :class:`NonSimplePoleError`; a vanishing factor that does not
    depend on the residue variable means the point is degenerate and raises
    :class:`PoleError` so the caller can resample.
    """
    if not locus.contains(point):
        raise DomainError(f"point is not on the locus {locus}")
    variable = locus.variable
    result = Fraction(1)
    order = 0
    for factor, exponent in summand.factors:
        value = factor.value(point)
        if value == 0:
            slope = factor.derivative(point, variable)
            if slope == 0:
                raise PoleError(f"{factor} vanishes independently of {variable}", summand.k)
            order += exponent
            value = slope
        result *= value**exponent
    if order >= 0:
        return Fraction(0)
    if order < -1:
        raise NonSimplePoleError(f"pole of order {-order} for k={summand.k} on {locus}")
    if locus.kind is LocusKind.UV:
        result /= point.v_sqrts[0] ** 2
    return result


def _check_bijection(n: int, K: int, p: int) -> bool:
    first = pole_set(n, K, p, PoleSet.IN_I)
    second = pole_set(n, K, p, PoleSet.IN_II)
    image = [phi_map(k, p) for k in first]
    back = [phi_map(k, p) for k in image]
    return sorted(image) == sorted(second) and len(set(image)) == len(image) and back == first


def _nonvanishing_product(factors, point):
    result = Fraction(1)
    zeros = 0
    for f in factors:
        value = f.value(point)
        if value == 0:
            zeros += 1
        else:
            result *= value
    return result, zeros


def lemma1_check(n: int, K: int, p: int, point: SqrtPoint) -> bool:
    """Pairing of poles on the same-group diagonals.

    ``point`` is projected onto u_1 = q^p u_2 and, separately, onto
    v_2 = q^p v_1. For each k in I_p this checks that the t-blocks of k and
    phi_p(k) coincide on the locus, that the non-vanishing denominator factors
    have equal products with exactly one vanishing factor each, and that
    the two residues cancel. The bijection I_p -> II_p is checked as well.
    """
    if n < 2:
        raise DomainError("the same-group diagonals need n >= 2")
    ok = _check_bijection(n, K, p)
    loci = ((Side.LHS, PoleLocus(LocusKind.UU, p)), (Side.RHS, PoleLocus(LocusKind.VV, p)))
    for side, locus in loci:
        at = locus.constrain(point)
        for k in pole_set(n, K, p, PoleSet.IN_I):
            partner = phi_map(k, p)
            ok &= block_eval(side, k, at) == block_eval(side, partner, at)
            den_k, zeros_k = _nonvanishing_product(_block_factors(side, k, False), at)
            den_partner, zeros_partner = _nonvanishing_product(_block_factors(side, partner, False), at)
            ok &= zeros_k == 1 and zeros_partner == 1 and den_k == den_partner
            first = factorize_summand(IdentityId.SymTrig_p4, side, k, n)
            second = factorize_summand(IdentityId.SymTrig_p4, side, partner, n)
            ok &= pole_order(first, at) == -1 and pole_order(second, at) == -1
            res_first = residue_at(first, locus, at)
            ok &= res_first != 0 and res_first + residue_at(second, locus, at) == 0
    return bool(ok)


def phi_prefactor(p: int, point: SqrtPoint, form: str = "derived"):
    """The rational function multiplying the shifted summand in the mixed-diagonal residue:

    (-1)^p [t q^(1-p)]_{2p} / ([q]_p [q]_{p-1})
      * prod_{j>=2} [t u_j/v_1]_p / [u_1/u_j]_p * prod_{b>=2} [t u_1/v_b]_p / [v_b/v_1]_p

    ``form="printed"`` swaps the leading symbol for [tq]_{2p}; that variant
    misses the residue by the factor [t q^(1-p)]_{2p} / [tq]_{2p} and is kept
    only to reproduce the mismatch.
    """
    if p < 1:
        raise DomainError(f"prefactor needs p >= 1, got {p}")
    if form not in ("derived", "printed"):
        raise DomainError(f"form must be 'derived' or 'printed', got {form!r}")
    qs, ts = point.q_sqrt, point.t_sqrt
    us, vs = point.u_sqrts, point.v_sqrts
    lead = ts * qs ** (1 - p) if form == "derived" else ts * qs
    value = Fraction((-1) ** p) * poch_sym(lead, qs, 2 * p) / (poch_sym(qs, qs, p) * poch_sym(qs, qs, p - 1))
    for j in range(1, point.n):
        den = poch_sym(us[0] / us[j], qs, p)
        if den == 0:
            raise PoleError(f"[u1/u{j + 1}]_{p}")
        value *= poch_sym(ts * us[j] / vs[0], qs, p) / den
    for b in range(1, point.n):
        den = poch_sym(vs[b] / vs[0], qs, p)
        if den == 0:
            raise PoleError(f"[v{b + 1}/v1]_{p}")
        value *= poch_sym(ts * us[0] / vs[b], qs, p) / den
    return value


def star_point(point: SqrtPoint) -> SqrtPoint:
    """(u, v) -> ((q v_1, u'), (u_1 / q, v'))."""
    qs = point.q_sqrt
    u = (qs * point.v_sqrts[0], *point.u_sqrts[1:])
    v = (point.u_sqrts[0] / qs, *point.v_sqrts[1:])
    return point.replace(u_sqrts=u, v_sqrts=v)


def lemma2_check(n: int, k, p: int, point: SqrtPoint, prefactor: str = "derived") -> bool:
    """Residue of (1/v_1) V_k and (1/v_1) U_k at v_1 = q^(p-1) u_1 equals the
    prefactor times the summand with k_1 lowered by p at the starred point.

    ``point`` is projected onto the locus first. ``prefactor`` selects the
    form passed to :func:`phi_prefactor`.
    """
    k = tuple(k)
    if len(k) != n:
        raise DomainError(f"composition {k} does not have n={n} parts")
    if not 1 <= p <= k[0]:
        raise DomainError(f"need 1 <= p <= k_1, got p={p}, k_1={k[0]}")
    locus = PoleLocus(LocusKind.UV, p)
    at = locus.constrain(point)
    lowered = (k[0] - p, *k[1:])
    factor = phi_prefactor(p, at, prefactor)
    shifted = star_point(at)
    ok = True
    for side in (Side.RHS, Side.LHS):
        summand = factorize_summand(IdentityId.SymTrig_p4, side, k, n)
        ok &= pole_order(summand, at) == -1
        residue = residue_at(summand, locus, at)
        ok &= residue == factor * summand_eval(IdentityId.SymTrig_p4, side, lowered, shifted)
    return bool(ok)


def wk_residue(n: int, K: int, p: int, point: SqrtPoint):
    """Res_{v_1 = q^(p-1) u_1} (1/v_1) W_K, summed summand by summand."""
    locus = PoleLocus(LocusKind.UV, p)
    at = locus.constrain(point)
    total = Fraction(0)
    for k in compositions(n, K):
        for side, sign in ((Side.LHS, 1), (Side.RHS, -1)):
            summand = factorize_summand(IdentityId.SymTrig_p4, side, k, n)
            total += sign * residue_at(summand, locus, at)
    return total


def wk_residue_relation(n: int, K: int, p: int, point: SqrtPoint, prefactor: str = "derived") -> bool:
    """Residue of W_K on the mixed diagonal equals prefactor * W_{K-p} at the
    starred point, and both are exactly zero."""
    if not 1 <= p <= K:
        raise DomainError(f"need 1 <= p <= K, got p={p}, K={K}")
    at = PoleLocus(LocusKind.UV, p).constrain(point)
    residue = wk_residue(n, K, p, point)
    reduced = wk_eval(IdentityId.SymTrig_p4, n, K - p, star_point(at)).value
    rhs = phi_prefactor(p, at, prefactor) * reduced
    return residue == rhs and residue == 0

