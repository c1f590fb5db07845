"""Moment-generator norm calculus.

Two norms drive the tail machinery:

* the moment-growth norm ``sup_p |zeta|_p / psi(p)`` over a generator
  ``psi`` defined on a p-interval, which turns a moment curve into an
  optimized-over-p Markov tail bound;
* the MGF-domination norm: the least ``tau`` with
  ``E exp(lam*zeta) <= exp(phi(lam*tau))``, which turns a convex MGF
  majorant ``phi`` into a Chernoff tail via the convex conjugate.

Also provided: the degenerate generator that recovers a plain Lp norm,
the conversion ``psi(p) = p / phi^{-1}(p)`` from an MGF majorant to a
moment generator, and the uniform-in-n envelope
``sup_n n*phi(lam/sqrt(n))`` that bounds MGFs of CLT-normalized sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .convex import NotBracketedError, fenchel, golden_section_max, invert_monotone
from .distributions import DivergentError

__all__ = [
    "PhiFunction",
    "PsiFunction",
    "UnboundedError",
    "bphi_norm",
    "bphi_tail_bound",
    "degenerate_psi",
    "gls_norm",
    "gls_tail_bound",
    "natural_phi",
    "natural_psi",
    "normalized_sum_tail",
    "phi_bar",
    "phi_bar_argmax",
    "power_phi",
    "power_psi",
    "psi_from_phi",
]


class UnboundedError(RuntimeError):
    """A norm supremum keeps growing at the edge of the search grid."""


@dataclass(frozen=True)
class PsiFunction:
    """Moment-growth generator p -> psi(p) > 0 on an interval of p.

    ``fn`` must be positive and finite on (p_lo, b); ``lo_open`` marks a
    generator that blows up at p_lo itself (the Rosenthal transform
    diverges at p = 1).
    """

    fn: Callable[[float], float]
    p_lo: float = 1.0
    b: float = math.inf
    kind: str = "custom"
    lo_open: bool = False

    def __call__(self, p: float) -> float:
        return self.fn(p)


@dataclass(frozen=True)
class PhiFunction:
    """Even convex MGF majorant lam -> phi(lam), zero at the origin.

    ``lambda0`` is the domain radius; evaluations at |lam| >= lambda0
    may return ``+inf`` and every search treats that as a barrier.
    """

    fn: Callable[[float], float]
    lambda0: float = math.inf
    kind: str = "custom"

    def __call__(self, lam: float) -> float:
        return self.fn(lam)


# -- generator families ------------------------------------------------------


def degenerate_psi(r: float) -> PsiFunction:
    """Generator identically 1 on [1, r]: its norm is the plain Lr norm."""
    if r < 1.0:
        raise ValueError(f"degenerate generator needs r >= 1, got {r}")
    return PsiFunction(lambda p: 1.0, p_lo=1.0, b=r, kind="degenerate")


def power_psi(m: float) -> PsiFunction:
    """Power-growth generator psi(p) = p^(1/m)."""
    if m <= 0.0:
        raise ValueError(f"power generator needs m > 0, got {m}")
    return PsiFunction(lambda p: p ** (1.0 / m), kind="power")


def natural_psi(moment_curve: Callable[[float], float],
                b: float = math.inf) -> PsiFunction:
    """The moment curve of a variable used as its own generator."""
    return PsiFunction(moment_curve, p_lo=1.0, b=b, kind="natural")


def power_phi(m: float) -> PhiFunction:
    """MGF majorant phi(lam) = |lam|^m / m (m = 2 is the subgaussian case)."""
    if m <= 0.0:
        raise ValueError(f"power majorant needs m > 0, got {m}")
    return PhiFunction(lambda lam: abs(lam) ** m / m, kind="power")


def natural_phi(dist) -> PhiFunction:
    """Symmetrized log-MGF of a law, max over both signs of the argument.

    Evaluations are memoized: norm and conjugate searches revisit the
    same arguments, and each evaluation of a density law costs a
    quadrature.
    """

    @lru_cache(maxsize=65536)
    def fn(lam: float) -> float:
        return max(dist.log_mgf2(lam, 0.0), dist.log_mgf2(-lam, 0.0))

    return PhiFunction(fn, kind="natural")


# -- grid helpers ------------------------------------------------------------


def _try_positive(fn: Callable[[float], float], x: float) -> float | None:
    try:
        v = fn(x)
    except (DivergentError, NotBracketedError):
        return None
    if not math.isfinite(v) or v <= 0.0:
        return None
    return v


def _support_grid(psi: PsiFunction, cap: float, points: int) -> np.ndarray:
    lo = psi.p_lo
    if psi.lo_open:
        lo = lo * (1.0 + 1e-6) if lo > 0 else 1e-6
    hi = min(psi.b, cap)
    if hi == lo:
        return np.array([lo])
    if hi < lo:
        raise ValueError(f"empty generator support [{lo}, {hi}]")
    grid = np.geomspace(lo, hi, points)
    grid[0], grid[-1] = lo, hi
    return grid


def _rising_through_last_decade(grid: np.ndarray, vals: list) -> bool:
    hi = grid[-1]
    idx = [i for i, (p, v) in enumerate(zip(grid, vals))
           if v is not None and p >= hi / 10.0]
    if len(idx) < 2:
        return False
    seq = [vals[i] for i in idx]
    return all(a < b for a, b in zip(seq, seq[1:])) and vals[-1] is not None


# -- moment-growth norm and tail ---------------------------------------------


def gls_norm(moment_curve: Callable[[float], float], psi: PsiFunction,
             grid_points: int = 128, p_cap: float = 256.0,
             tol: float = 1e-9) -> float:
    """sup over the generator support of moment_curve(p) / psi(p).

    Scans a geometric p-grid (capped at ``p_cap`` when the support is
    unbounded) and refines by golden section around the grid argmax.
    Raises :class:`UnboundedError` when the ratio is still strictly
    rising through the last decade of an unbounded support; p-points
    where the moment diverges are skipped.
    """
    grid = _support_grid(psi, p_cap, grid_points)

    def ratio(p: float) -> float | None:
        num = _try_positive(moment_curve, p)
        den = _try_positive(psi.fn, p)
        if num is None or den is None:
            return None
        return num / den

    vals = [ratio(p) for p in grid]
    valid = [(i, v) for i, v in enumerate(vals) if v is not None]
    if not valid:
        raise DivergentError("moment curve diverges on the whole generator support")
    i_best, best = max(valid, key=lambda iv: iv[1])
    if psi.b == math.inf and i_best == len(grid) - 1 \
            and _rising_through_last_decade(grid, vals):
        raise UnboundedError("ratio still rising at the top of the p-grid")

    a = grid[max(i_best - 1, 0)]
    c = grid[min(i_best + 1, len(grid) - 1)]
    _, refined = golden_section_max(
        lambda p: r if (r := ratio(p)) is not None else -math.inf, a, c, tol)
    return max(best, refined)


def _gls_tail_opt(psi: PsiFunction, norm: float, y: float,
                  grid_points: int = 128, p_cap: float = 1000.0,
                  tol: float = 1e-9) -> tuple[float, float | None, float]:
    """Optimized Markov bound min_p (psi(p)*norm/y)^p.

    Returns (value, attaining p or None, -ln(value)).  Clamps to 1
    whenever y <= e*norm: below that the moment method carries no
    information.
    """
    if norm <= 0.0:
        raise ValueError(f"norm must be positive, got {norm}")
    if y <= 0.0:
        raise ValueError(f"threshold must be positive, got {y}")
    if y <= math.e * norm:
        return 1.0, None, 0.0

    log_scale = math.log(norm) - math.log(y)

    def exponent(p: float) -> float | None:
        den = _try_positive(psi.fn, p)
        if den is None:
            return None
        return p * (math.log(den) + log_scale)

    grid = _support_grid(psi, p_cap, grid_points)
    vals = [exponent(p) for p in grid]
    valid = [(i, v) for i, v in enumerate(vals) if v is not None]
    if not valid:
        return 1.0, None, 0.0
    i_best, best = min(valid, key=lambda iv: iv[1])
    p_best = float(grid[i_best])

    a = grid[max(i_best - 1, 0)]
    c = grid[min(i_best + 1, len(grid) - 1)]
    p_ref, neg = golden_section_max(
        lambda p: -e if (e := exponent(p)) is not None else -math.inf, a, c, tol)
    if -neg < best:
        best, p_best = -neg, p_ref
    if best >= 0.0:
        return 1.0, p_best, 0.0
    return math.exp(best), p_best, -best


def gls_tail_bound(psi: PsiFunction, norm: float, y: float,
                   grid_points: int = 128, p_cap: float = 1000.0,
                   tol: float = 1e-9) -> float:
    """Tail bound P(|zeta| > y) <= min_p (psi(p)*norm/y)^p, clamped to [0, 1]."""
    value, _, _ = _gls_tail_opt(psi, norm, y, grid_points, p_cap, tol)
    return value


# -- MGF-domination norm and tail --------------------------------------------


def bphi_norm(law_mgf: Callable[[float], float], phi: PhiFunction,
              points_per_decade: int = 64, decades: int = 6,
              tol: float = 1e-9) -> float:
    """Least tau with ln E exp(±lam*zeta) <= phi(lam*tau) on (0, lambda0).

    ``law_mgf`` is the log-MGF of the variable.  Scans a geometric
    lambda grid (6 decades centered on 1 by default, clipped into the
    majorant's domain) of phi^{-1}(law_mgf(±lam))/lam and refines around
    the argmax.  Raises :class:`UnboundedError` when the MGF escapes the
    majorant's range or the ratio is still rising at the grid edge of an
    unbounded domain.
    """
    if phi.lambda0 == math.inf:
        half = 10.0 ** (decades / 2.0)
        lam_lo, lam_hi = 1.0 / half, half
    else:
        lam_hi = phi.lambda0 * (1.0 - 1e-12)
        lam_lo = lam_hi * 10.0 ** (-decades)
    grid = np.geomspace(lam_lo, lam_hi, points_per_decade * decades + 1)

    def ratio(lam: float, sign: float) -> float:
        y = law_mgf(sign * lam)
        if y == math.inf:
            raise UnboundedError(f"log-MGF diverges at lambda = {sign * lam}")
        y = max(y, 0.0)
        try:
            x = invert_monotone(phi.fn, y, 0.0, lam)
        except NotBracketedError:
            raise UnboundedError(
                f"majorant range exceeded at lambda = {sign * lam}") from None
        return x / lam

    best = 0.0
    for sign in (1.0, -1.0):
        vals = [ratio(lam, sign) for lam in grid]
        i_best = int(np.argmax(vals))
        if phi.lambda0 == math.inf and i_best == len(grid) - 1 \
                and _rising_through_last_decade(grid, vals):
            raise UnboundedError("norm ratio still rising at the lambda-grid edge")
        a = math.log(grid[max(i_best - 1, 0)])
        c = math.log(grid[min(i_best + 1, len(grid) - 1)])
        _, refined = golden_section_max(
            lambda t: ratio(math.exp(t), sign), a, c, tol)
        best = max(best, vals[i_best], refined)
    # grid suprema err low; round up so tails built on this norm stay
    # valid even when the Chernoff exponent is exactly tight
    return best * (1.0 + 1e-9)


def bphi_tail_bound(phi: PhiFunction, norm: float, u: float,
                    tol: float = 1e-9) -> float:
    """Chernoff tail max[P(zeta >= u), P(zeta <= -u)] <= exp(-phi*(u/norm))."""
    if u < 0.0:
        raise ValueError(f"threshold must be nonnegative, got {u}")
    if u == 0.0:
        return 1.0
    if norm == 0.0:
        return 0.0
    lam0 = phi.lambda0

    def f(x: float) -> float:
        return phi.fn(x) if x < lam0 else math.inf

    exponent = fenchel(f, u / norm, tol)
    if exponent == math.inf:
        return 0.0
    return min(1.0, math.exp(-exponent))


# -- conversions and the sum envelope ------------------------------------------


def psi_from_phi(phi: PhiFunction) -> PsiFunction:
    """Moment generator psi(p) = p / phi^{-1}(p) implied by an MGF majorant.

    The subgaussian majorant lam^2 maps to psi(p) = sqrt(p).
    """

    def fn(p: float) -> float:
        x = invert_monotone(phi.fn, p, 0.0, 1.0)
        return p / x

    return PsiFunction(fn, p_lo=1.0, b=math.inf, kind=phi.kind)


def phi_bar_argmax(phi: PhiFunction, lam: float, n_max: int) -> tuple[float, int]:
    """max over n in {1..n_max} of n*phi(lam/sqrt(n)) and the attaining n.

    Scans every integer up to 1024 and then a geometric ladder (ratio
    1.25, rounded, deduplicated) up to and including n_max.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    best_v, best_n = -math.inf, 1
    seen = 0
    n = 1
    while n <= n_max:
        v = n * phi.fn(lam / math.sqrt(n))
        if v == math.inf:
            return math.inf, n
        if v > best_v:
            best_v, best_n = v, n
        seen = n
        n = n + 1 if n < 1024 else max(n + 1, round(n * 1.25))
    if seen != n_max:
        v = n_max * phi.fn(lam / math.sqrt(n_max))
        if v == math.inf:
            return math.inf, n_max
        if v > best_v:
            best_v, best_n = v, n_max
    return best_v, best_n


def phi_bar(phi: PhiFunction, lam: float, n_max: int) -> float:
    """The uniform-in-n MGF envelope sup_{n <= n_max} n*phi(lam/sqrt(n))."""
    return phi_bar_argmax(phi, lam, n_max)[0]


def normalized_sum_tail(phi: PhiFunction, norm: float, n: int, u: float,
                        tol: float = 1e-9) -> float:
    """Tail bound for a sqrt(n)-normalized i.i.d. sum, uniform over 1..n.

    Valid whenever each summand's MGF is dominated by ``phi`` at scale
    ``norm``; the envelope from :func:`phi_bar` then dominates the MGF
    of every S(k)/sqrt(k) with k <= n at the same scale.
    """
    bar = PhiFunction(lambda lam: phi_bar(phi, lam, n),
                      lambda0=phi.lambda0, kind="custom")
    return bphi_tail_bound(bar, norm, u, tol)
