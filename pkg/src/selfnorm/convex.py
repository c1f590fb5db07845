"""One-dimensional concave maximization and convex conjugation.

All exponential tail bounds in this package reduce to evaluating
``sup_{x >= 0} (x*u - f(x))`` for a convex log-MGF ``f``, or to inverting a
monotone function.  The routines here work on the extended real line:
an objective may return ``-inf`` (resp. ``+inf`` for ``f``) outside its
domain, and searches treat such points as barriers rather than failures.
"""

from __future__ import annotations

import math
import sys
from typing import Callable

__all__ = [
    "NotBracketedError",
    "fenchel",
    "golden_section_max",
    "invert_monotone",
    "maximize_concave",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_FIRST_STEP = 1e-8
_MAX_DOUBLINGS = 64
_EPS = sys.float_info.epsilon


class NotBracketedError(ValueError):
    """A root or target value could not be bracketed on the search ray."""


def golden_section_max(fn: Callable[[float], float], a: float, c: float,
                       tol: float = 1e-9) -> tuple[float, float]:
    """Golden-section search for a maximum of ``fn`` on [a, c].

    Assumes ``fn`` is unimodal on the bracket; evaluations returning
    ``-inf`` act as barriers and simply lose every comparison.  Returns
    the best (x, fn(x)) pair seen, so the value is never worse than the
    endpoints' values even on a misjudged bracket.
    """
    best_x, best_v = a, fn(a)
    v_c = fn(c)
    if v_c > best_v:
        best_x, best_v = c, v_c
    x1 = c - _GOLDEN * (c - a)
    x2 = a + _GOLDEN * (c - a)
    f1, f2 = fn(x1), fn(x2)
    # stop at tol, at the floating-point resolution of the bracket, or
    # after a hard iteration cap; all three guard against stalling when
    # tol is below one ulp at the bracket's magnitude
    for _ in range(256):
        if c - a <= tol + 8.0 * _EPS * max(abs(a), abs(c)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (c - a)
            f2 = fn(x2)
            if f2 > best_v:
                best_x, best_v = x2, f2
        else:
            c, x2, f2 = x2, x1, f1
            x1 = c - _GOLDEN * (c - a)
            f1 = fn(x1)
            if f1 > best_v:
                best_x, best_v = x1, f1
    return best_x, best_v


def maximize_concave(obj: Callable[[float], float], x_lo: float,
                     tol: float = 1e-9) -> tuple[float, float]:
    """Maximize a concave objective on the ray [x_lo, inf).

    Brackets the maximum by doubling steps away from ``x_lo`` until the
    objective stops increasing (or hits ``-inf``), then refines by
    golden section to absolute x-tolerance ``tol``.  If the objective
    keeps growing through 64 doublings it is declared unbounded above
    and ``(inf, inf)`` is returned.

    ``obj(x_lo)`` must be finite.
    """
    v_lo = obj(x_lo)
    if not math.isfinite(v_lo):
        raise ValueError("objective must be finite at the ray origin")
    prev2_x = x_lo
    prev_x, prev_v = x_lo, v_lo
    for k in range(_MAX_DOUBLINGS):
        x = x_lo + _FIRST_STEP * 2.0 ** k
        v = obj(x)
        if v <= prev_v or v == -math.inf:
            return golden_section_max(obj, prev2_x, x, tol)
        prev2_x = prev_x
        prev_x, prev_v = x, v
    return math.inf, math.inf


def fenchel(f: Callable[[float], float], u: float, tol: float = 1e-9) -> float:
    """One-sided convex conjugate ``sup_{x >= 0} (x*u - f(x))``.

    ``f`` must be convex with ``f(0) = 0``; it may return ``+inf``
    outside its domain.  The result is always >= 0 (x = 0 is feasible)
    and ``+inf`` when the supremum diverges.
    """

    def obj(x: float) -> float:
        fx = f(x)
        if fx == math.inf:
            return -math.inf
        return x * u - fx

    _, value = maximize_concave(obj, 0.0, tol)
    return max(value, 0.0)


def invert_monotone(f: Callable[[float], float], y: float, x_lo: float,
                    x_hi_hint: float) -> float:
    """Solve f(x) = y for f continuous and strictly increasing on [x_lo, inf).

    Expands a bracket from ``x_hi_hint`` by doubling, then bisects until
    ``|f(x) - y| <= 1e-10 * max(1, |y|)``.  Raises
    :class:`NotBracketedError` when ``y`` lies below ``f(x_lo)`` or is
    never reached before the expansion overflows.
    """
    tol_y = 1e-10 * max(1.0, abs(y))
    f_lo = f(x_lo)
    if abs(f_lo - y) <= tol_y:
        return x_lo
    if f_lo > y:
        raise NotBracketedError(f"target {y} below f({x_lo}) = {f_lo}")

    step = max(x_hi_hint - x_lo, _FIRST_STEP)
    hi = x_lo + step
    for _ in range(200):
        if hi > 1e300:
            raise NotBracketedError(f"target {y} not reached before overflow")
        f_hi = f(hi)
        if f_hi >= y:
            break
        step *= 2.0
        hi = x_lo + step
    else:
        raise NotBracketedError(f"target {y} not reached on the search ray")

    lo = x_lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid - y) <= tol_y:
            return mid
        if f_mid < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)
