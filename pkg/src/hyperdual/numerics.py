"""Scalar arithmetic: exact rationals, multiprecision complex numbers and the
modified theta function.

Exact values are plain :class:`fractions.Fraction` objects, which are kept in
lowest terms by construction. Multiprecision values are :class:`MPComplex`,
a frozen pair of mpmath floats tagged with the precision they were rounded to.
Every mpmath computation runs inside ``mpmath.workprec`` so the global mpmath
context is never relied on.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import mpc, mpf

from .errors import DomainError

ExactScalar = Fraction

MIN_PRECISION_BITS = 64


def to_mpc(value, precision_bits: int) -> mpc:
    """Convert ``value`` to an mpmath complex rounded at ``precision_bits``."""
    with mpmath.workprec(precision_bits):
        if isinstance(value, MPComplex):
            return mpc(value.real, value.imag)
        if isinstance(value, Rational):
            return mpc(mpf(value.numerator) / value.denominator)
        if isinstance(value, tuple):
            re, im = value
            return mpc(to_mpc(re, precision_bits).real, to_mpc(im, precision_bits).real)
        return mpc(value)


@dataclass(frozen=True)
class MPComplex:
    real: mpf
    imag: mpf
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION_BITS:
            raise DomainError(
                f"precision_bits must be >= {MIN_PRECISION_BITS}, got {self.precision_bits}"
            )

    @classmethod
    def from_value(cls, value, precision_bits: int) -> MPComplex:
        """Round ``value`` (int, Fraction, float, complex, mpf/mpc, (re, im)
        pair or another MPComplex) to ``precision_bits``."""
        if precision_bits < MIN_PRECISION_BITS:
            raise DomainError(
                f"precision_bits must be >= {MIN_PRECISION_BITS}, got {precision_bits}"
            )
        z = to_mpc(value, precision_bits)
        with mpmath.workprec(precision_bits):
            return cls(+z.real, +z.imag, precision_bits)

    @property
    def value(self) -> mpc:
        with mpmath.workprec(self.precision_bits):
            return mpc(self.real, self.imag)

    def _binary(self, other, op, reflected=False):
        bits = self.precision_bits
        if isinstance(other, MPComplex):
            bits = max(bits, other.precision_bits)
        a = to_mpc(self, bits)
        b = to_mpc(other, bits)
        if reflected:
            a, b = b, a
        with mpmath.workprec(bits):
            return MPComplex.from_value(op(a, b), bits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: a + b, reflected=True)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: a - b, reflected=True)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: a * b, reflected=True)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: a / b, reflected=True)

    def __neg__(self):
        # mpf negation rounds to the context precision, so hold ours
        with mpmath.workprec(self.precision_bits):
            return MPComplex(-self.real, -self.imag, self.precision_bits)

    def __pow__(self, exponent: int):
        with mpmath.workprec(self.precision_bits):
            return MPComplex.from_value(self.value**exponent, self.precision_bits)

    def __abs__(self) -> mpf:
        with mpmath.workprec(self.precision_bits):
            return abs(self.value)

    def __complex__(self):
        return complex(self.value)

    def with_precision(self, precision_bits: int) -> MPComplex:
        return MPComplex.from_value(self, precision_bits)

    def __repr__(self):
        with mpmath.workprec(self.precision_bits):
            return f"MPComplex({mpmath.nstr(self.value, 20)}, bits={self.precision_bits})"


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision, extra bits for truncation and internal rounding, and
    the number of bits two evaluations must agree to."""

    working_bits: int = 256
    guard_bits: int = 32
    agreement_bits: int = 160

    def __post_init__(self):
        if self.working_bits < MIN_PRECISION_BITS:
            raise DomainError(f"working_bits must be >= {MIN_PRECISION_BITS}")
        if self.guard_bits < 1 or self.agreement_bits < 1:
            raise DomainError("guard_bits and agreement_bits must be positive")
        if self.agreement_bits > self.working_bits - self.guard_bits:
            raise DomainError(
                "agreement_bits must not exceed working_bits - guard_bits "
                f"({self.agreement_bits} > {self.working_bits} - {self.guard_bits})"
            )

    @property
    def internal_bits(self) -> int:
        return self.working_bits + self.guard_bits

    def doubled(self) -> PrecisionPolicy:
        return replace(self, working_bits=2 * self.working_bits)


def _truncation_index(z: mpc, p: mpc, bits: int) -> int:
    # caller holds the working precision
    ap = abs(p)
    az = abs(z)
    if ap >= 1:
        raise DomainError(f"nome must satisfy |p| < 1, got |p| = {mpmath.nstr(ap, 10)}")
    if az == 0:
        raise DomainError("theta function is undefined at z = 0")
    bound = max(az, 1 / az)
    eps = mpf(2) ** (-bits)
    n, power = 1, ap
    while power * bound >= eps:
        power *= ap
        n += 1
    return n


def theta_truncation_index(z, nome, policy: PrecisionPolicy) -> int:
    """Smallest N >= 1 with |p|^N * max(|z|, 1/|z|) below 2^-(working+guard)."""
    bits = policy.internal_bits
    zz = to_mpc(z, bits)
    p = to_mpc(nome, bits)
    with mpmath.workprec(bits):
        return _truncation_index(zz, p, bits)


def _theta(z: mpc, p: mpc, bits: int) -> mpc:
    # caller holds workprec(bits)
    return _theta_product(z, p, _truncation_index(z, p, bits))


def _theta_product(z: mpc, p: mpc, n_terms: int) -> mpc:
    # caller holds the working precision
    result = mpc(1)
    power = mpc(1)
    for _ in range(n_terms):
        result *= 1 - power * z
        power *= p
    power = p
    zinv = 1 / z
    for _ in range(1, n_terms):
        result *= 1 - power * zinv
        power *= p
    return result


def theta_eval(z, nome, policy: PrecisionPolicy | None = None) -> MPComplex:
    """Modified theta function prod_{n>=0}(1 - p^n z) prod_{m>0}(1 - p^m / z).

    The infinite products are cut at the index returned by
    :func:`theta_truncation_index`; the product is formed with
    ``policy.guard_bits`` extra bits and rounded to ``policy.working_bits``.
    """
    policy = policy or PrecisionPolicy()
    n_terms = theta_truncation_index(z, nome, policy)
    bits = policy.internal_bits
    zz = to_mpc(z, bits)
    p = to_mpc(nome, bits)
    with mpmath.workprec(bits):
        value = _theta_product(zz, p, n_terms)
    return MPComplex.from_value(value, policy.working_bits)


def relative_deviation(a, b, precision_bits: int | None = None) -> mpf:
    """|a - b| / max(|a|, |b|), or the absolute difference when both are below 1."""
    if precision_bits is None:
        precision_bits = max(
            getattr(a, "precision_bits", MIN_PRECISION_BITS),
            getattr(b, "precision_bits", MIN_PRECISION_BITS),
        )
    x = to_mpc(a, precision_bits)
    y = to_mpc(b, precision_bits)
    with mpmath.workprec(precision_bits):
        scale = max(abs(x), abs(y))
        diff = abs(x - y)
        if scale < 1:
            return diff
        return diff / scale


def agreement_check(value_lo, value_hi, policy: PrecisionPolicy) -> bool:
    """True when the two values agree to ``policy.agreement_bits``.

    ``value_hi`` is expected to carry at least twice the precision of
    ``value_lo``; the comparison itself runs at the higher precision.
    """
    deviation = relative_deviation(value_lo, value_hi)
    with mpmath.workprec(max(getattr(value_hi, "precision_bits", 0), MIN_PRECISION_BITS)):
        return deviation <= mpf(2) ** (-policy.agreement_bits)
