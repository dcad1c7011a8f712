"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PoleError(ZeroDivisionError):
    """A denominator factor vanished at the evaluation point.

    ``factor`` names the offending factor and ``k`` the composition being
    summed when the pole was hit (``None`` outside composition sums).
    """

    def __init__(self, factor, k=None):
        self.factor = factor
        self.k = k
        where = f" in summand k={tuple(k)}" if k is not None else ""
        super().__init__(f"vanishing denominator factor {factor}{where}")


class NonSimplePoleError(ArithmeticError):
    """The pole at a residue locus has order two or more."""


class ResamplingExhausted(RuntimeError):
    """Every sampled point hit a pole within the allowed number of attempts."""
