"""Rigorous tail bounds for self-normalized sums, verified by simulation.

For i.i.d. centered xi_1, ..., xi_n the object of study is the
statistic ``T(n) = sqrt(n) * sum(xi_i) / sum(xi_i^2)`` and its tail
``Q_n(B) = P(T(n) > B)``.  The package computes non-asymptotic upper
bounds (an optimized-exponent Chernoff family and a Rosenthal-moment
family), exact lower bounds, and checks every bound cell against Monte
Carlo simulation with exact confidence intervals.
"""

from .bounds import (
    BoundCurve,
    BoundPoint,
    CltLowerBound,
    DEFAULT_B_GRID,
    DEFAULT_KR,
    DomainError,
    EXP_LEVEL,
    LOWER_CLT,
    LOWER_Q1,
    POWER_LEVEL,
    exp_curve,
    exp_sup_curve,
    exp_tail_bound,
    exp_tail_bound_sup,
    lower_bound_clt,
    lower_bound_q1,
    lower_clt_curve,
    lower_q1_curve,
    power_curve,
    power_sup_curve,
    power_tail_bound,
    power_tail_bound_sup,
    rosenthal_psi,
    sum_cgf,
)
from .convex import NotBracketedError, fenchel, invert_monotone, maximize_concave
from .distributions import (
    DensityLaw,
    DiscreteLaw,
    DistributionModel,
    DivergentError,
    EmpiricalLaw,
    QuadraticMoments,
    Rademacher,
    StandardGaussian,
    UniformSymmetric,
    parse_distribution,
)
from .gls import (
    PhiFunction,
    PsiFunction,
    UnboundedError,
    bphi_norm,
    bphi_tail_bound,
    degenerate_psi,
    gls_norm,
    gls_tail_bound,
    natural_phi,
    natural_psi,
    normalized_sum_tail,
    phi_bar,
    phi_bar_argmax,
    power_phi,
    power_psi,
    psi_from_phi,
)
from .mc import (
    GridMismatchError,
    MCConfig,
    TailEstimate,
    VerificationReport,
    VerificationRow,
    clopper_pearson,
    empirical_tail,
    self_normalized_stat,
    simulate_statistic,
    verify_bounds,
)

__version__ = "0.1.0"
