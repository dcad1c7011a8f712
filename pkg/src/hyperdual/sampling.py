"""Seeded random evaluation points.

Every cell of a verification grid owns an independent random stream derived
from (seed, cell index) through numpy's SeedSequence spawn keys and the
counter-based Philox generator, so a cell can be rerun alone, or in another
process, and still see the same points.

Exact points have entries p/q with p, q uniform in [1, 10^6]. A point that
hits a pole is thrown away and redrawn from the same stream, at most
``MAX_ATTEMPTS`` times.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import PoleError, ResamplingExhausted
from .identities import EllipticPoint, KernelPoint, RationalPoint
from .numerics import PrecisionPolicy
from .pochhammer import SqrtPoint

MAX_ATTEMPTS = 100
BOUND = 10**6


def cell_rng(seed: int, cell: int) -> np.random.Generator:
    """Independent generator for one grid cell."""
    sequence = np.random.SeedSequence(seed, spawn_key=(cell,))
    return np.random.Generator(np.random.Philox(sequence))


def random_rational(rng: np.random.Generator, bound: int = BOUND) -> Fraction:
    num, den = rng.integers(1, bound, size=2, endpoint=True)
    return Fraction(int(num), int(den))


def random_rationals(rng: np.random.Generator, count: int, bound: int = BOUND) -> tuple:
    return tuple(random_rational(rng, bound) for _ in range(count))


def random_rational_point(rng: np.random.Generator, n: int) -> RationalPoint:
    return RationalPoint(random_rationals(rng, n), random_rationals(rng, n), random_rational(rng))


def random_sqrt_point(rng: np.random.Generator, n: int) -> SqrtPoint:
    return SqrtPoint(
        random_rational(rng), random_rational(rng), random_rationals(rng, n), random_rationals(rng, n)
    )


def random_kernel_point(rng: np.random.Generator, n: int) -> KernelPoint:
    """x, y, alpha and beta all drawn; each identity reads what it needs."""
    return KernelPoint(
        random_rationals(rng, n), random_rationals(rng, n), random_rational(rng), random_rational(rng)
    )


def random_elliptic_point(
    rng: np.random.Generator, n: int, nome, policy: PrecisionPolicy | None = None
) -> EllipticPoint:
    """Complex entries (re, im) with exact rational parts.

    Real entries would leave the imaginary parts of both sides untested, so
    every variable gets a random imaginary part too.
    """
    policy = policy or PrecisionPolicy()
    pair = lambda: (random_rational(rng), random_rational(rng))  # noqa: E731
    return EllipticPoint(
        pair(), pair(), [pair() for _ in range(n)], [pair() for _ in range(n)], nome, policy
    )


def sample_until_regular(
    rng: np.random.Generator,
    draw: Callable,
    evaluate: Callable,
    max_attempts: int = MAX_ATTEMPTS,
    label: str = "",
):
    """Draw points until ``evaluate(point)`` does not raise :class:`PoleError`.

    Returns ``(point, evaluate(point), resamples)``.
    """
    last = None
    for attempt in range(max_attempts):
        point = draw(rng)
        try:
            return point, evaluate(point), attempt
        except PoleError as exc:
            last = exc
    raise ResamplingExhausted(
        f"{label or 'cell'}: no regular point in {max_attempts} attempts (last pole: {last})"
    )
