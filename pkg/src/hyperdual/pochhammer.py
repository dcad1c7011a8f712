"""Pochhammer symbols: rational, q-analog, symmetric q-analog and elliptic.

The symmetric symbol

    [z; q]_n = prod_{m=0}^{n-1} (q^{m/2} z^{1/2} - q^{-m/2} z^{-1/2})

involves half-integer powers, so it takes the square roots of ``z`` and ``q``
as input. With rational square roots every factor is an exact rational.
Negative indices follow the convention [z]_{-n} = 1 / [q^{-n} z]_n, which is
the one that makes [z]_{a+b} = [z]_a [q^a z]_b hold for all integers a, b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import DomainError, PoleError
from .numerics import MPComplex, PrecisionPolicy, _theta, to_mpc


def _check_index(n, allow_negative=False):
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"Pochhammer index must be an integer, got {n!r}")
    if n < 0 and not allow_negative:
        raise DomainError(f"Pochhammer index must be non-negative, got {n}")


def poch_rational(x, n: int):
    """Rising factorial x (x+1) ... (x+n-1)."""
    _check_index(n)
    result = Fraction(1) if isinstance(x, (int, Fraction)) else 1
    for m in range(n):
        result *= x + m
    return result


def poch_q(z, q, n: int):
    """(z; q)_n = (1 - z)(1 - q z) ... (1 - q^{n-1} z)."""
    _check_index(n)
    result = Fraction(1) if isinstance(z, (int, Fraction)) else 1
    power = 1
    for _ in range(n):
        result *= 1 - power * z
        power *= q
    return result


def sym_factor(monomial):
    """One factor M - 1/M of a symmetric Pochhammer symbol, M = q^{m/2} z^{1/2}."""
    return monomial - 1 / monomial


def poch_sym(z_sqrt, q_sqrt, n: int):
    """Symmetric q-Pochhammer symbol [z; q]_n from square roots of z and q.

    Works for any field type supporting exact or floating arithmetic
    (``Fraction``, mpmath numbers). For ``n < 0`` a vanishing factor raises
    :class:`PoleError`.
    """
    _check_index(n, allow_negative=True)
    if z_sqrt == 0 or q_sqrt == 0:
        raise DomainError("square roots of z and q must be nonzero")
    if isinstance(z_sqrt, int):
        z_sqrt = Fraction(z_sqrt)
    if isinstance(q_sqrt, int):
        q_sqrt = Fraction(q_sqrt)
    if n >= 0:
        result = Fraction(1) if isinstance(z_sqrt, Fraction) else 1
        monomial = z_sqrt
        for _ in range(n):
            result *= sym_factor(monomial)
            monomial *= q_sqrt
        return result
    denominator = 1
    monomial = z_sqrt
    for j in range(1, -n + 1):
        monomial /= q_sqrt
        factor = sym_factor(monomial)
        if factor == 0:
            raise PoleError(f"[z;q]_{n}: factor q^(-{j}/2) z^(1/2) - q^({j}/2) z^(-1/2)")
        denominator *= factor
    return 1 / denominator


@dataclass(frozen=True)
class SqrtPoint:
    """Evaluation point for the symmetric identities, stored as square roots.

    The represented variables are ``q = q_sqrt**2``, ``t = t_sqrt**2``,
    ``u[i] = u_sqrts[i]**2`` and ``v[a] = v_sqrts[a]**2``.
    """

    q_sqrt: object
    t_sqrt: object
    u_sqrts: tuple
    v_sqrts: tuple

    def __post_init__(self):
        object.__setattr__(self, "u_sqrts", tuple(self.u_sqrts))
        object.__setattr__(self, "v_sqrts", tuple(self.v_sqrts))
        if len(self.u_sqrts) == 0 or len(self.u_sqrts) != len(self.v_sqrts):
            raise DomainError("u_sqrts and v_sqrts must have the same length n >= 1")
        if any(x == 0 for x in (self.q_sqrt, self.t_sqrt, *self.u_sqrts, *self.v_sqrts)):
            raise DomainError("all square roots must be nonzero")

    @property
    def n(self) -> int:
        return len(self.u_sqrts)

    @property
    def q(self):
        return self.q_sqrt**2

    @property
    def t(self):
        return self.t_sqrt**2

    @property
    def u(self) -> tuple:
        return tuple(x**2 for x in self.u_sqrts)

    @property
    def v(self) -> tuple:
        return tuple(x**2 for x in self.v_sqrts)

    def involution(self) -> SqrtPoint:
        """u_i -> 1/v_i, v_i -> 1/u_i (square roots go to reciprocal square roots)."""
        return SqrtPoint(
            self.q_sqrt,
            self.t_sqrt,
            tuple(1 / x for x in self.v_sqrts),
            tuple(1 / x for x in self.u_sqrts),
        )

    def replace(self, u_sqrts: Sequence | None = None, v_sqrts: Sequence | None = None,
                t_sqrt=None) -> SqrtPoint:
        return SqrtPoint(
            self.q_sqrt,
            self.t_sqrt if t_sqrt is None else t_sqrt,
            self.u_sqrts if u_sqrts is None else tuple(u_sqrts),
            self.v_sqrts if v_sqrts is None else tuple(v_sqrts),
        )


def _poch_elliptic_raw(z, p, q, k, bits):
    # caller holds workprec(bits); z, p, q are mpc
    result = mpmath.mpc(1)
    arg = z
    for _ in range(k):
        result *= _theta(arg, p, bits)
        arg = arg * q
    return result


def poch_elliptic(z, nome, q, k: int, policy: PrecisionPolicy | None = None) -> MPComplex:
    """Elliptic Pochhammer symbol theta(z;p) theta(qz;p) ... theta(q^{k-1}z;p)."""
    _check_index(k)
    policy = policy or PrecisionPolicy()
    bits = policy.internal_bits
    zz, p, qq = (to_mpc(x, bits) for x in (z, nome, q))
    with mpmath.workprec(bits):
        value = _poch_elliptic_raw(zz, p, qq, k, bits)
    return MPComplex.from_value(value, policy.working_bits)
