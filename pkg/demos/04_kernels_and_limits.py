"""Kernel-function identities for the two odd functions, and the rational
limit whose K-th sum splits into subset sums with binomial weights.
"""

from hyperdual.identities import (
    IdentityId,
    KernelPoint,
    OddFunctionKind,
    Side,
    h_eval,
    kernel_diff,
    kernel_eval,
    limit_decomposition_coefficients,
    riemann_check,
)
from hyperdual.sampling import cell_rng, random_kernel_point, random_rational, random_rational_point

rng = cell_rng(seed=4, cell=0)
for s in OddFunctionKind:
    point = random_kernel_point(rng, 4)
    diffs = [str(kernel_diff(IdentityId.Kernel_I1, s, 4, r, point)) for r in range(5)]
    mirror = [str(kernel_diff(IdentityId.RuijMac_I6, s, 4, r, point)) for r in range(5)]
    args = [random_rational(rng) for _ in range(4)]
    print(f"{s.value}: subset identity diffs {diffs}, mirrored {mirror}, Riemann {riemann_check(s, *args)}")

point = random_rational_point(rng, 3)
kp = KernelPoint(point.x, point.y, point.alpha)
for K in range(1, 5):
    weights = limit_decomposition_coefficients(K, 3)
    split = sum(c * kernel_eval(IdentityId.RatKernel_A2, Side.LHS, OddFunctionKind.LINEAR, 3, r, kp)
                for r, c in weights.items())
    print(f"K={K}: weights {weights}, H_K left side matches: {h_eval(Side.LHS, 3, K, point) == split}")
