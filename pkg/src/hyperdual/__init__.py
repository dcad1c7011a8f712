"""Exact and multiprecision checks of hypergeometric duality identities.

The package evaluates both sides of the rational, trigonometric and elliptic
duality identities at random points, the kernel-function identities they
rest on, and the residue lemmas that prove the trigonometric case.
"""

from .combinatorics import PoleSet, compositions, phi_map, pole_set, pole_set_membership, subsets
from .errors import DomainError, NonSimplePoleError, PoleError, ResamplingExhausted
from .identities import (
    EllipticPoint,
    IdentityDiff,
    IdentityId,
    KernelPoint,
    OddFunctionKind,
    RationalPoint,
    Side,
    h_eval,
    kernel_eval,
    riemann_check,
    side_eval,
    summand_eval,
    wk_eval,
)
from .numerics import ExactScalar, MPComplex, PrecisionPolicy, theta_eval
from .pochhammer import SqrtPoint, poch_elliptic, poch_q, poch_rational, poch_sym
from .residues import (
    FactoredSummand,
    LinearFactor,
    LocusKind,
    PoleLocus,
    factorize_summand,
    lemma1_check,
    lemma2_check,
    phi_prefactor,
    residue_at,
    wk_residue_relation,
)

__version__ = "0.1.0"
