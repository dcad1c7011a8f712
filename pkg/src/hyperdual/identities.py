"""Evaluators for both sides of the duality identities and the kernel-function
identities, plus the global properties of the difference W_K.

Families and their points:

* ``Rational_I2``  -- rising factorials in x, y, alpha (:class:`RationalPoint`);
* ``Trig_I5``      -- q-Pochhammer symbols in q, t, u, v (:class:`SqrtPoint`,
  only the squares are used);
* ``SymTrig_p4``   -- symmetric q-Pochhammer symbols (:class:`SqrtPoint`);
* ``Elliptic_A6``  -- elliptic Pochhammer symbols (:class:`EllipticPoint`);
* ``Kernel_I1``, ``RuijMac_I6``, ``RatKernel_A2`` -- subset sums of ratios of an
  odd function s (:class:`KernelPoint`);
* ``RatLimit_A1``  -- the support-only limit of the rational identity.

The exact families return :class:`fractions.Fraction` values and an identity
holds at a point iff the difference is literally ``Fraction(0)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import mpmath

from .combinatorics import compositions, subsets
from .errors import DomainError, PoleError
from .numerics import MPComplex, PrecisionPolicy, relative_deviation, to_mpc
from .pochhammer import SqrtPoint, _poch_elliptic_raw, poch_q, poch_rational, poch_sym


class IdentityId(enum.Enum):
    Rational_I2 = "Rational_I2"
    Trig_I5 = "Trig_I5"
    SymTrig_p4 = "SymTrig_p4"
    Elliptic_A6 = "Elliptic_A6"
    Kernel_I1 = "Kernel_I1"
    RuijMac_I6 = "RuijMac_I6"
    RatLimit_A1 = "RatLimit_A1"
    RatKernel_A2 = "RatKernel_A2"


HYPERGEOMETRIC = (
    IdentityId.Rational_I2,
    IdentityId.Trig_I5,
    IdentityId.SymTrig_p4,
    IdentityId.Elliptic_A6,
)
KERNELS = (IdentityId.Kernel_I1, IdentityId.RuijMac_I6, IdentityId.RatKernel_A2)


class Side(enum.Enum):
    LHS = "LHS"
    RHS = "RHS"


@dataclass(frozen=True)
class RationalPoint:
    x: tuple
    y: tuple
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        if len(self.x) == 0 or len(self.x) != len(self.y):
            raise DomainError("x and y must have the same length n >= 1")

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class EllipticPoint:
    """Variables of the elliptic identity; any value accepted by
    :meth:`MPComplex.from_value` may be used for the entries."""

    q: object
    t: object
    u: tuple
    v: tuple
    nome: object
    policy: PrecisionPolicy = field(default_factory=PrecisionPolicy)

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if len(self.u) == 0 or len(self.u) != len(self.v):
            raise DomainError("u and v must have the same length n >= 1")

    @property
    def n(self) -> int:
        return len(self.u)

    def with_policy(self, policy: PrecisionPolicy) -> EllipticPoint:
        return EllipticPoint(self.q, self.t, self.u, self.v, self.nome, policy)

    def coordinates(self):
        """Raw mpmath values (q, t, u, v, p) at ``policy.internal_bits``."""
        bits = self.policy.internal_bits
        conv = lambda z: to_mpc(z, bits)  # noqa: E731
        return (
            conv(self.q),
            conv(self.t),
            tuple(map(conv, self.u)),
            tuple(map(conv, self.v)),
            conv(self.nome),
        )


@dataclass(frozen=True)
class KernelPoint:
    """Arguments of the kernel identities.

    For ``OddFunctionKind.LINEAR`` the entries are the variables themselves;
    for ``OddFunctionKind.TRIG_EXP`` they are exponential coordinates
    w = exp(i beta z), so that shifts become products. ``beta`` is the second
    shift of the single-tuple identity and is unused elsewhere.
    """

    x: tuple
    y: tuple = ()
    alpha: object = None
    beta: object = None

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))

    @property
    def n(self) -> int:
        return len(self.x)


class OddFunctionKind(enum.Enum):
    """Odd functions s obeying the Riemann relation, in coordinates where the
    identities stay rational.

    LINEAR: s(z) = z, coordinates are z, shifts are sums.
    TRIG_EXP: s(z) = 2i sin(beta z) expressed through w = exp(i beta z) as
    w - 1/w; coordinates are w and shifts are products. The dropped constant
    2i cancels in every ratio of the kernel identities and in the Riemann
    relation.
    """

    LINEAR = "Linear"
    TRIG_EXP = "TrigExp"

    def add(self, a, b):
        return a + b if self is OddFunctionKind.LINEAR else a * b

    def negate(self, a):
        return -a if self is OddFunctionKind.LINEAR else 1 / a

    def s(self, a):
        return a if self is OddFunctionKind.LINEAR else a - 1 / a

    def s_diff(self, a, b):
        """s(a - b) in coordinates."""
        if self is OddFunctionKind.LINEAR:
            return a - b
        ratio = a / b
        return ratio - 1 / ratio


@dataclass(frozen=True)
class IdentityDiff:
    value: object
    identity: IdentityId
    n: int
    K: int
    point: object
    lhs: object = None
    rhs: object = None

    @property
    def is_exact_zero(self) -> bool:
        return isinstance(self.value, Fraction) and self.value == 0


def _ratio_product(terms, k):
    num = Fraction(1)
    den = Fraction(1)
    for label, top, bottom in terms:
        if bottom == 0:
            raise PoleError(label, k)
        num *= top
        den *= bottom
    return num / den


def _float_ratio_product(terms, k):
    num = 1
    den = 1
    for label, top, bottom in terms:
        if bottom == 0:
            raise PoleError(label, k)
        num *= top
        den *= bottom
    return num / den


def multiplicative_terms(side: Side, k, qc, tc, uc, vc, poch: Callable):
    """Yield (label, numerator, denominator) for the three products of a summand.

    The coordinates ``qc, tc, uc, vc`` are either the variables themselves
    (q-Pochhammer and elliptic families) or their square roots (symmetric
    family); ``poch(z, m)`` is the family's Pochhammer symbol in the same
    coordinates.
    """
    n = len(k)
    for i in range(n):
        if k[i]:
            yield (f"[qt;q]_{k[i]}/[q;q]_{k[i]}", i), poch(qc * tc, k[i]), poch(qc, k[i])
    if side is Side.LHS:
        for i in range(n):
            if not k[i]:
                continue
            for j in range(n):
                if i == j:
                    continue
                base = qc ** (-k[j]) * uc[i] / uc[j]
                yield (
                    (f"q^-{k[j]} u{i + 1}/u{j + 1}, index {k[i]}", i, j),
                    poch(base / tc, k[i]),
                    poch(base, k[i]),
                )
        for j in range(n):
            if not k[j]:
                continue
            for a in range(n):
                base = uc[j] / vc[a]
                yield (f"u{j + 1}/v{a + 1}, index {k[j]}", j, a), poch(tc * base, k[j]), poch(base, k[j])
    else:
        for b in range(n):
            if not k[b]:
                continue
            for a in range(n):
                if a == b:
                    continue
                base = qc ** (-k[a]) * vc[a] / vc[b]
                yield (
                    (f"q^-{k[a]} v{a + 1}/v{b + 1}, index {k[b]}", a, b),
                    poch(base / tc, k[b]),
                    poch(base, k[b]),
                )
        for a in range(n):
            if not k[a]:
                continue
            for j in range(n):
                base = uc[j] / vc[a]
                yield (f"u{j + 1}/v{a + 1}, index {k[a]}", j, a), poch(tc * base, k[a]), poch(base, k[a])


def rational_terms(side: Side, k, point: RationalPoint):
    n = len(k)
    x, y, alpha = point.x, point.y, point.alpha
    for i in range(n):
        if k[i]:
            yield (f"(1+alpha)_{k[i]}/{k[i]}!", i), poch_rational(1 + alpha, k[i]), poch_rational(
                Fraction(1), k[i]
            )
    if side is Side.LHS:
        for i in range(n):
            if not k[i]:
                continue
            for j in range(n):
                if i != j:
                    base = x[i] - x[j] - k[j]
                    yield (
                        (f"(x{i + 1}-x{j + 1}-{k[j]})_{k[i]}", i, j),
                        poch_rational(base - alpha, k[i]),
                        poch_rational(base, k[i]),
                    )
        for j in range(n):
            if not k[j]:
                continue
            for a in range(n):
                base = x[j] - y[a]
                yield (
                    (f"(x{j + 1}-y{a + 1})_{k[j]}", j, a),
                    poch_rational(base + alpha, k[j]),
                    poch_rational(base, k[j]),
                )
    else:
        for b in range(n):
            if not k[b]:
                continue
            for a in range(n):
                if a != b:
                    base = y[a] - y[b] - k[a]
                    yield (
                        (f"(y{a + 1}-y{b + 1}-{k[a]})_{k[b]}", a, b),
                        poch_rational(base - alpha, k[b]),
                        poch_rational(base, k[b]),
                    )
        for a in range(n):
            if not k[a]:
                continue
            for j in range(n):
                base = x[j] - y[a]
                yield (
                    (f"(x{j + 1}-y{a + 1})_{k[a]}", j, a),
                    poch_rational(base + alpha, k[a]),
                    poch_rational(base, k[a]),
                )


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _sym_summand(side, k, point: SqrtPoint):
    qs = point.q_sqrt
    terms = multiplicative_terms(
        side, k, qs, point.t_sqrt, point.u_sqrts, point.v_sqrts, lambda z, m: poch_sym(z, qs, m)
    )
    if _is_exact(qs, point.t_sqrt, *point.u_sqrts, *point.v_sqrts):
        return _ratio_product(terms, k)
    return _float_ratio_product(terms, k)


def _trig_summand(side, k, point: SqrtPoint):
    q = point.q
    terms = multiplicative_terms(side, k, q, point.t, point.u, point.v, lambda z, m: poch_q(z, q, m))
    if _is_exact(q, point.t_sqrt, *point.u_sqrts, *point.v_sqrts):
        return _ratio_product(terms, k)
    return _float_ratio_product(terms, k)


def _elliptic_summand_raw(side, k, coords, bits):
    # caller holds workprec(bits)
    q, t, u, v, p = coords
    terms = multiplicative_terms(side, k, q, t, u, v, lambda z, m: _poch_elliptic_raw(z, p, q, m, bits))
    return _float_ratio_product(terms, k)


def _check_point(identity: IdentityId, point, n: int | None = None):
    expected = {
        IdentityId.Rational_I2: RationalPoint,
        IdentityId.RatLimit_A1: RationalPoint,
        IdentityId.Trig_I5: SqrtPoint,
        IdentityId.SymTrig_p4: SqrtPoint,
        IdentityId.Elliptic_A6: EllipticPoint,
    }.get(identity)
    if expected is None:
        raise DomainError(f"{identity.value} is not a hypergeometric identity")
    if not isinstance(point, expected):
        raise DomainError(f"{identity.value} needs a {expected.__name__}, got {type(point).__name__}")
    if n is not None and point.n != n:
        raise DomainError(f"point has n={point.n}, expected n={n}")


def summand_eval(identity: IdentityId, side: Side, k, point):
    """One summand of the chosen side: U_k for the left side, V_k for the right.

    Raises :class:`PoleError` naming the vanishing denominator and ``k``.
    """
    k = tuple(k)
    _check_point(identity, point, len(k))
    if any(part < 0 for part in k):
        raise DomainError(f"composition parts must be non-negative, got {k}")
    if identity is IdentityId.SymTrig_p4:
        return _sym_summand(side, k, point)
    if identity is IdentityId.Trig_I5:
        return _trig_summand(side, k, point)
    if identity is IdentityId.Rational_I2:
        return _ratio_product(rational_terms(side, k, point), k)
    if identity is IdentityId.Elliptic_A6:
        bits = point.policy.internal_bits
        coords = point.coordinates()
        with mpmath.workprec(bits):
            value = _elliptic_summand_raw(side, k, coords, bits)
        return MPComplex.from_value(value, point.policy.working_bits)
    raise DomainError(f"no summand evaluator for {identity.value}")


def side_eval(identity: IdentityId, side: Side, n: int, K: int, point):
    """Sum of :func:`summand_eval` over all compositions of K into n parts."""
    _check_point(identity, point, n)
    if identity is IdentityId.RatLimit_A1:
        return h_eval(side, n, K, point)
    if identity is IdentityId.Elliptic_A6:
        bits = point.policy.internal_bits
        coords = point.coordinates()
        with mpmath.workprec(bits):
            total = mpmath.mpc(0)
            for k in compositions(n, K):
                total += _elliptic_summand_raw(side, k, coords, bits)
        return MPComplex.from_value(total, point.policy.working_bits)
    total = Fraction(0)
    for k in compositions(n, K):
        total += summand_eval(identity, side, k, point)
    return total


def wk_eval(identity: IdentityId, n: int, K: int, point) -> IdentityDiff:
    """W_K = left side minus right side."""
    lhs = side_eval(identity, Side.LHS, n, K, point)
    rhs = side_eval(identity, Side.RHS, n, K, point)
    return IdentityDiff(lhs - rhs, identity, n, K, point, lhs, rhs)


# kernel-function identities


def _kernel_term_i1(side, members, s: OddFunctionKind, point: KernelPoint):
    n = point.n
    x, y, alpha = point.x, point.y, point.alpha
    chosen = [m - 1 for m in members]
    rest = [j for j in range(n) if j not in chosen]
    num = Fraction(1) if _is_exact(*x, *y, alpha) else 1
    den = num
    if side is Side.LHS:
        for i in chosen:
            for j in rest:
                num *= s.s_diff(x[i], s.add(x[j], alpha))
                den *= s.s_diff(x[i], x[j])
            for a in range(n):
                num *= s.s_diff(s.add(x[i], alpha), y[a])
                den *= s.s_diff(x[i], y[a])
    else:
        for a in chosen:
            for b in rest:
                num *= s.s_diff(s.add(y[a], alpha), y[b])
                den *= s.s_diff(y[a], y[b])
            for i in range(n):
                num *= s.s_diff(s.add(x[i], alpha), y[a])
                den *= s.s_diff(x[i], y[a])
    if den == 0:
        raise PoleError(f"kernel denominator for subset {tuple(members)}")
    return num / den


def _kernel_term_i6(side, members, s: OddFunctionKind, point: KernelPoint):
    n = point.n
    x = point.x if side is Side.LHS else tuple(s.negate(c) for c in point.x)
    alpha, beta = point.alpha, point.beta
    chosen = [m - 1 for m in members]
    rest = [j for j in range(n) if j not in chosen]
    num = Fraction(1) if _is_exact(*x, alpha, beta) else 1
    den = num
    for i in chosen:
        for j in rest:
            num *= s.s_diff(x[i], s.add(x[j], alpha)) * s.s_diff(s.add(x[i], alpha), s.add(x[j], beta))
            den *= s.s_diff(x[i], x[j]) * s.s_diff(x[i], s.add(x[j], beta))
    if den == 0:
        raise PoleError(f"kernel denominator for subset {tuple(members)}")
    return num / den


def kernel_eval(identity: IdentityId, side: Side, s: OddFunctionKind, n: int, r: int, point: KernelPoint):
    """Subset sum over r-subsets of {1..n} for the kernel identities.

    ``Kernel_I1`` and ``RatKernel_A2`` use ``point.x`` (the z variables),
    ``point.y`` and ``point.alpha``; ``RuijMac_I6`` uses ``point.x``,
    ``point.alpha`` and ``point.beta`` and its right side is the left side
    with all x negated.
    """
    if identity not in KERNELS:
        raise DomainError(f"{identity.value} is not a kernel identity")
    if point.n != n:
        raise DomainError(f"point has n={point.n}, expected n={n}")
    if not 0 <= r <= n:
        raise DomainError(f"r must satisfy 0 <= r <= n, got r={r}, n={n}")
    if identity is IdentityId.RatKernel_A2 and s is not OddFunctionKind.LINEAR:
        raise DomainError("the rational kernel identity uses s(z) = z")
    if identity is IdentityId.RuijMac_I6:
        if point.beta is None or point.alpha is None:
            raise DomainError("RuijMac_I6 needs alpha and beta")
        term = _kernel_term_i6
    else:
        if len(point.y) != n or point.alpha is None:
            raise DomainError("kernel identity needs n y-variables and alpha")
        term = _kernel_term_i1
    total = 0
    for members in subsets(n, r):
        total += term(side, members, s, point)
    return Fraction(total) if isinstance(total, int) else total


def kernel_diff(identity: IdentityId, s: OddFunctionKind, n: int, r: int, point: KernelPoint):
    return kernel_eval(identity, Side.LHS, s, n, r, point) - kernel_eval(identity, Side.RHS, s, n, r, point)


def riemann_check(s: OddFunctionKind, x, y, u, v) -> bool:
    """Three-term Riemann relation for s at (x, y, u, v), given in s's coordinates."""

    def plus(a, b):
        return s.s_diff(a, s.negate(b))

    def minus(a, b):
        return s.s_diff(a, b)

    lhs = plus(x, y) * minus(x, y) * plus(u, v) * minus(u, v)
    rhs = plus(x, u) * minus(x, u) * plus(y, v) * minus(y, v) - plus(x, v) * minus(x, v) * plus(
        y, u
    ) * minus(y, u)
    return lhs == rhs


# rational limit identity


def _support_term(side: Side, support: frozenset, point: RationalPoint):
    n = point.n
    x, y, alpha = point.x, point.y, point.alpha
    num = Fraction(1)
    den = Fraction(1)
    inside = sorted(support)
    outside = [j for j in range(n) if j not in support]
    if side is Side.LHS:
        for i in inside:
            for j in outside:
                num *= x[i] - x[j] - alpha
                den *= x[i] - x[j]
        for j in inside:
            for a in range(n):
                num *= x[j] - y[a] + alpha
                den *= x[j] - y[a]
    else:
        for a in outside:
            for b in inside:
                num *= y[a] - y[b] - alpha
                den *= y[a] - y[b]
        for a in inside:
            for j in range(n):
                num *= x[j] - y[a] + alpha
                den *= x[j] - y[a]
    if den == 0:
        raise PoleError(f"limit-identity denominator for support {tuple(i + 1 for i in inside)}")
    return num / den


def h_eval(side: Side, n: int, K: int, point: RationalPoint) -> Fraction:
    """One side of the rational limit identity, summed over all compositions of K.

    Each summand depends on k only through its support; values are cached
    per support but every composition contributes once.
    """
    if point.n != n:
        raise DomainError(f"point has n={point.n}, expected n={n}")
    cache = {}
    total = Fraction(0)
    for k in compositions(n, K):
        support = frozenset(i for i, part in enumerate(k) if part)
        if support not in cache:
            cache[support] = _support_term(side, support, point)
        total += cache[support]
    return total


def limit_decomposition_coefficients(K: int, n: int) -> dict:
    """Multiplicity of the r-subset sum inside the K-th limit sum.

    A composition of K with support of size r exists in C(K-1, r-1) ways, so
    H_K = sum_r C(K-1, r-1) K_r side by side.
    """
    return {r: comb(K - 1, r - 1) for r in range(1, min(K, n) + 1)}


def _kernel_point_from(point: RationalPoint) -> KernelPoint:
    return KernelPoint(point.x, point.y, point.alpha)


def limit_side_decomposition_holds(side: Side, n: int, K: int, point: RationalPoint) -> bool:
    kp = _kernel_point_from(point)
    expected = Fraction(0)
    for r, coefficient in limit_decomposition_coefficients(K, n).items():
        expected += coefficient * kernel_eval(IdentityId.RatKernel_A2, side, OddFunctionKind.LINEAR, n, r, kp)
    if K == 0:
        expected = Fraction(1)
    return h_eval(side, n, K, point) == expected


def limit_relation_check(n: int, point: RationalPoint) -> bool:
    """H_1 = K_1 and H_2 = K_2 + K_1, both side by side and as differences.

    K_r with r > n is an empty subset sum and counts as 0.
    """
    kp = _kernel_point_from(point)
    lin = OddFunctionKind.LINEAR

    def kernel(side, r):
        if r > n:
            return Fraction(0)
        return kernel_eval(IdentityId.RatKernel_A2, side, lin, n, r, kp)

    ok = True
    for side in Side:
        ok &= h_eval(side, n, 1, point) == kernel(side, 1)
        ok &= h_eval(side, n, 2, point) == kernel(side, 2) + kernel(side, 1)
    H = {K: h_eval(Side.LHS, n, K, point) - h_eval(Side.RHS, n, K, point) for K in (1, 2)}
    Kr = {r: kernel(Side.LHS, r) - kernel(Side.RHS, r) for r in (1, 2)}
    ok &= H[1] == Kr[1]
    ok &= H[2] == Kr[2] + Kr[1]
    return bool(ok)


# global properties of W_K


def trig_to_sym_factor(K: int, point: SqrtPoint):
    """Each summand of the q-Pochhammer form equals t^K times the matching
    summand of the symmetric form."""
    return point.t**K


def involution_check(k, point: SqrtPoint) -> bool:
    return summand_eval(IdentityId.SymTrig_p4, Side.RHS, k, point) == summand_eval(
        IdentityId.SymTrig_p4, Side.LHS, k, point.involution()
    )


def plane_point(point: SqrtPoint) -> SqrtPoint:
    """Move ``point`` onto the plane u_i = v_i / t with matching square roots."""
    return point.replace(u_sqrts=[v / point.t_sqrt for v in point.v_sqrts])


def asymptotic_point(n: int, Lambda, q, t, precision_bits: int = 256) -> SqrtPoint:
    """u_i = Lambda^i, v_a = Lambda^(2n+1-a) as floating square roots."""
    with mpmath.workprec(precision_bits):
        lam = to_mpc(Lambda, precision_bits).real
        return SqrtPoint(
            mpmath.sqrt(to_mpc(q, precision_bits).real),
            mpmath.sqrt(to_mpc(t, precision_bits).real),
            tuple(mpmath.sqrt(lam**i) for i in range(1, n + 1)),
            tuple(mpmath.sqrt(lam ** (2 * n + 1 - a)) for a in range(1, n + 1)),
        )


def asymptotic_limit(n: int, K: int, q_sqrt, t_sqrt):
    """Common limit of both sides deep in the zone u_1 << ... << u_n << v_n << ... << v_1."""
    total = 0
    for k in compositions(n, K):
        term = 1
        for i, part in enumerate(k):
            term *= poch_sym(q_sqrt * t_sqrt, q_sqrt, part) / poch_sym(q_sqrt, q_sqrt, part)
        exponent = sum((n + 1 - 2 * (i + 1)) * part for i, part in enumerate(k)) - n * K
        total += term * t_sqrt**exponent
    return total


def asymptotic_deviation(side: Side, n: int, K: int, Lambda, q, t, precision_bits: int = 256):
    """Relative deviation of one side from :func:`asymptotic_limit` at scale Lambda."""
    point = asymptotic_point(n, Lambda, q, t, precision_bits)
    with mpmath.workprec(precision_bits):
        value = side_eval(IdentityId.SymTrig_p4, side, n, K, point)
        limit = asymptotic_limit(n, K, point.q_sqrt, point.t_sqrt)
        return abs(value - limit) / abs(limit)


def shift_by_nome(point: EllipticPoint, group: str, index: int = 0) -> EllipticPoint:
    """Multiply u[index] (group 'u') or v[index] (group 'v') by the nome."""
    bits = point.policy.internal_bits
    p = to_mpc(point.nome, bits)
    if group == "u":
        u = list(point.u)
        with mpmath.workprec(bits):
            u[index] = p * to_mpc(u[index], bits)
        return EllipticPoint(point.q, point.t, u, point.v, point.nome, point.policy)
    if group == "v":
        v = list(point.v)
        with mpmath.workprec(bits):
            v[index] = p * to_mpc(v[index], bits)
        return EllipticPoint(point.q, point.t, point.u, v, point.nome, point.policy)
    raise DomainError(f"group must be 'u' or 'v', got {group!r}")


def quasiperiodicity_deviation(side: Side, n: int, K: int, point: EllipticPoint, group: str, index: int = 0):
    """Relative deviation between side(shifted point) and t^(-K) (group 'u') or
    t^K (group 'v') times side(point)."""
    shifted = shift_by_nome(point, group, index)
    before = side_eval(IdentityId.Elliptic_A6, side, n, K, point)
    after = side_eval(IdentityId.Elliptic_A6, side, n, K, shifted)
    bits = point.policy.working_bits
    t = MPComplex.from_value(point.t, bits)
    factor = t ** (-K if group == "u" else K)
    return relative_deviation(after, factor * before, bits)


def diagonal_probe(side: Side, n: int, K: int, point: SqrtPoint, p: int, deltas: Sequence) -> list:
    """Side values at u_1 = q^p u_2 (1 + delta)^2 for each delta (exact)."""
    values = []
    for delta in deltas:
        u = list(point.u_sqrts)
        u[0] = point.q_sqrt**p * u[1] * (1 + Fraction(delta))
        values.append(side_eval(IdentityId.SymTrig_p4, side, n, K, point.replace(u_sqrts=u)))
    return values
