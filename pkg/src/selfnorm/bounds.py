"""Upper and lower bounds for the tail of the self-normalized statistic.

For i.i.d. centered xi with variance sigma^2, the statistic is
``T(n) = sqrt(n) * sum(xi) / sum(xi^2)`` and the target is
``Q_n(B) = P(T(n) > B)`` together with its supremum over n.  The event
linearizes exactly:

    T(n) > B  <=>  mean of (sqrt(n)*xi_i + B*(sigma^2 - xi_i^2)) > B*sigma^2,

so every bound here is a bound on the mean of n i.i.d. centered summands.
Two upper-bound families are provided (an optimized-exponent Chernoff
bound and a Rosenthal-moment bound valid for B >= e), plus two lower
bounds (the exact single-observation tail and the limiting normal tail,
the latter report-only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .convex import maximize_concave
from .distributions import DistributionModel
from .gls import PsiFunction, _gls_tail_opt

__all__ = [
    "BoundCurve",
    "BoundPoint",
    "CltLowerBound",
    "DEFAULT_B_GRID",
    "DEFAULT_KR",
    "DomainError",
    "EXP_LEVEL",
    "LOWER_CLT",
    "LOWER_Q1",
    "POWER_LEVEL",
    "exp_curve",
    "exp_sup_curve",
    "exp_tail_bound",
    "exp_tail_bound_sup",
    "integer_scan",
    "lower_bound_clt",
    "lower_bound_q1",
    "lower_clt_curve",
    "lower_q1_curve",
    "power_curve",
    "power_sup_curve",
    "power_tail_bound",
    "power_tail_bound_sup",
    "rosenthal_psi",
    "sum_cgf",
]

EXP_LEVEL = "ExpLevel"
POWER_LEVEL = "PowerLevel"
LOWER_CLT = "LowerCLT"
LOWER_Q1 = "LowerQ1"

DEFAULT_KR = 0.6379
DEFAULT_B_GRID = (0.25, 0.5, 1.0, 1.5, 2.0, math.e, 3.0, 5.0, 10.0, 20.0, 50.0)


class DomainError(ValueError):
    """A bound was requested outside its range of validity."""


@dataclass(frozen=True)
class BoundPoint:
    """One (B, bound value) cell with optimizer diagnostics."""

    B: float
    value: float
    optimizer: dict = field(default_factory=dict)
    per_n: tuple[tuple[int, float], ...] | None = None


@dataclass(frozen=True)
class BoundCurve:
    """A bound family evaluated over a B grid, at fixed n or sup over a range."""

    family: str
    n: int | tuple[int, int]
    points: tuple[BoundPoint, ...]


def integer_scan(n_lo: int, n_hi: int, dense_limit: int = 64,
                 ratio: float = 1.25) -> list[int]:
    """Integers n_lo..n_hi: every one up to dense_limit, then a geometric
    ladder (rounded, deduplicated) always including n_hi."""
    if not 1 <= n_lo <= n_hi:
        raise ValueError(f"bad range [{n_lo}, {n_hi}]")
    out = set(range(n_lo, min(dense_limit, n_hi) + 1))
    v = max(dense_limit, n_lo)
    out.add(min(v, n_hi))
    while v < n_hi:
        v = max(v + 1, round(v * ratio))
        out.add(min(v, n_hi))
    return sorted(out)


# -- exponential level -------------------------------------------------------


def sum_cgf(dist: DistributionModel, n: int, B: float, theta: float) -> float:
    """ln E exp(theta * mean of the n linearized summands).

    Equals n * log_mgf2(theta/sqrt(n), B*theta/n); ``+inf`` propagates
    from the log-MGF when the expectation diverges.
    """
    v = dist.log_mgf2(theta / math.sqrt(n), B * theta / n)
    return n * v if v != math.inf else math.inf


def _exp_tail_point(dist: DistributionModel, n: int, B: float,
                    tol: float = 1e-9) -> BoundPoint:
    if B <= 0.0:
        raise ValueError(f"B must be positive, got {B}")
    target = B * dist.sigma2

    def obj(theta: float) -> float:
        c = sum_cgf(dist, n, B, theta)
        if c == math.inf:
            return -math.inf
        return theta * target - c

    theta_star, exponent = maximize_concave(obj, 0.0, tol)
    exponent = max(exponent, 0.0)
    value = 0.0 if exponent == math.inf else min(1.0, math.exp(-exponent))
    return BoundPoint(B, value, {"theta_star": theta_star, "objective": exponent})


def exp_tail_bound(dist: DistributionModel, n: int, B: float,
                   tol: float = 1e-9) -> float:
    """Optimized-exponent upper bound on Q_n(B).

    ``exp(-sup_{theta>=0} [theta*B*sigma^2 - cgf(theta)])``; the
    conjugate is evaluated at B*sigma^2, the exact threshold of the
    linearized event.  Returns 0 when the supremum diverges (the event
    is impossible at this exponential level).
    """
    return _exp_tail_point(dist, n, B, tol).value


def _sup_scan(point_fn: Callable[[int], BoundPoint], B: float, n_lo: int,
              n_hi: int) -> BoundPoint:
    best: BoundPoint | None = None
    best_n = n_lo
    table = []
    for n in integer_scan(n_lo, n_hi):
        pt = point_fn(n)
        table.append((n, pt.value))
        if best is None or pt.value > best.value:
            best, best_n = pt, n
    opt = dict(best.optimizer)
    opt["n_star"] = float(best_n)
    return BoundPoint(B, best.value, opt, per_n=tuple(table))


def exp_tail_bound_sup(dist: DistributionModel, B: float, n_lo: int,
                       n_hi: int, tol: float = 1e-9) -> tuple[float, int]:
    """Max of exp_tail_bound over the scanned n range (a truncation of the
    all-n supremum; widen n_hi to see whether the sup is interior)."""
    pt = _sup_scan(lambda n: _exp_tail_point(dist, n, B, tol), B, n_lo, n_hi)
    return pt.value, int(pt.optimizer["n_star"])


# -- power level --------------------------------------------------------------


def rosenthal_psi(dist: DistributionModel, n: int, B: float,
                  kr: float = DEFAULT_KR) -> PsiFunction:
    """Moment generator kr * (p/ln p) * |summand|_p for the normalized sum.

    By Rosenthal's inequality the sqrt(n)-normalized sum of the
    linearized summands has moment-growth norm at most 1 against this
    generator.  Support is (1, b) with b limited only by which summand
    moments are finite.
    """
    for probe in (2.0, 1.5, 1.25, 1.0625):
        try:
            dist.summand_lp_norm(n, B, probe)
            break
        except ArithmeticError:
            continue
    else:
        raise DomainError("no finite summand moment beyond p = 1")

    def fn(p: float) -> float:
        return kr * (p / math.log(p)) * dist.summand_lp_norm(n, B, p)

    return PsiFunction(fn, p_lo=1.0, b=math.inf, kind="rosenthal", lo_open=True)


def _power_tail_point(dist: DistributionModel, n: int, B: float,
                      kr: float = DEFAULT_KR, p_cap: float = 1000.0,
                      tol: float = 1e-9) -> BoundPoint:
    if B < math.e:
        raise DomainError(
            f"power-level bound requires B >= e, got {B}; "
            "use the exponential-level bound below that")
    psi = rosenthal_psi(dist, n, B, kr)
    value, p_star, exponent = _gls_tail_opt(psi, 1.0, B, p_cap=p_cap, tol=tol)
    opt = {"objective": exponent}
    if p_star is not None:
        opt["p_star"] = p_star
    return BoundPoint(B, value, opt)


def power_tail_bound(dist: DistributionModel, n: int, B: float,
                     kr: float = DEFAULT_KR, p_cap: float = 1000.0,
                     tol: float = 1e-9) -> float:
    """Rosenthal-moment upper bound on Q_n(B), valid for B >= e.

    ``min_p (kr * p/ln(p) * |summand|_p / B)^p`` with the normalized-sum
    norm pinned at 1 by Rosenthal's inequality.
    """
    return _power_tail_point(dist, n, B, kr, p_cap, tol).value


def power_tail_bound_sup(dist: DistributionModel, B: float, n_lo: int,
                         n_hi: int, kr: float = DEFAULT_KR,
                         p_cap: float = 1000.0,
                         tol: float = 1e-9) -> tuple[float, int]:
    """Max of power_tail_bound over the scanned n range."""
    pt = _sup_scan(lambda n: _power_tail_point(dist, n, B, kr, p_cap, tol),
                   B, n_lo, n_hi)
    return pt.value, int(pt.optimizer["n_star"])


# -- lower bounds -------------------------------------------------------------


def lower_bound_q1(dist: DistributionModel, B: float) -> float:
    """Exact single-observation tail Q_1(B) = P(0 < xi < 1/B).

    For n = 1 the statistic is 1/xi (and 0 when xi = 0), so this is the
    exact tail probability, hence a lower bound on sup_n Q_n(B).  The
    interval is open at 1/B: an atom exactly there gives T = B, which
    does not exceed B.
    """
    if B <= 0.0:
        raise ValueError(f"B must be positive, got {B}")
    return dist.prob_between(0.0, 1.0 / B)


class CltLowerBound(NamedTuple):
    exp_quadratic: float
    normal_tail: float


def lower_bound_clt(B: float) -> CltLowerBound:
    """Limiting-tail reference values at unit variance.

    ``exp_quadratic`` is the heuristic exp(-B^2/2); ``normal_tail`` is
    the exact standard normal tail 1 - Phi(B), which is what Q_n(B)
    actually converges to.  The two disagree substantially at moderate B
    (0.607 vs 0.159 at B = 1), so reports carry both and only the normal
    tail participates in comparisons, and even that merely as a
    reference: it is a limit, not a finite-n bound.
    """
    return CltLowerBound(math.exp(-B * B / 2.0), 0.5 * math.erfc(B / math.sqrt(2.0)))


# -- curve assembly ------------------------------------------------------------


def exp_curve(dist: DistributionModel, n: int, B_grid: Sequence[float],
              tol: float = 1e-9) -> BoundCurve:
    pts = tuple(_exp_tail_point(dist, n, B, tol) for B in sorted(B_grid))
    return BoundCurve(EXP_LEVEL, n, pts)


def exp_sup_curve(dist: DistributionModel, n_range: tuple[int, int],
                  B_grid: Sequence[float], tol: float = 1e-9) -> BoundCurve:
    n_lo, n_hi = n_range
    pts = tuple(_sup_scan(lambda n, B=B: _exp_tail_point(dist, n, B, tol),
                          B, n_lo, n_hi) for B in sorted(B_grid))
    return BoundCurve(EXP_LEVEL, (n_lo, n_hi), pts)


def power_curve(dist: DistributionModel, n: int, B_grid: Sequence[float],
                kr: float = DEFAULT_KR, tol: float = 1e-9) -> BoundCurve:
    pts = tuple(_power_tail_point(dist, n, B, kr, tol=tol)
                for B in sorted(B_grid) if B >= math.e)
    return BoundCurve(POWER_LEVEL, n, pts)


def power_sup_curve(dist: DistributionModel, n_range: tuple[int, int],
                    B_grid: Sequence[float], kr: float = DEFAULT_KR,
                    tol: float = 1e-9) -> BoundCurve:
    n_lo, n_hi = n_range
    pts = tuple(_sup_scan(lambda n, B=B: _power_tail_point(dist, n, B, kr, tol=tol),
                          B, n_lo, n_hi)
                for B in sorted(B_grid) if B >= math.e)
    return BoundCurve(POWER_LEVEL, (n_lo, n_hi), pts)


def lower_q1_curve(dist: DistributionModel, B_grid: Sequence[float]) -> BoundCurve:
    pts = tuple(BoundPoint(B, lower_bound_q1(dist, B)) for B in sorted(B_grid))
    return BoundCurve(LOWER_Q1, 1, pts)


def lower_clt_curve(B_grid: Sequence[float]) -> BoundCurve:
    pts = []
    for B in sorted(B_grid):
        ref = lower_bound_clt(B)
        pts.append(BoundPoint(B, ref.normal_tail,
                              {"objective": ref.exp_quadratic}))
    return BoundCurve(LOWER_CLT, 1, tuple(pts))
