"""Monte Carlo estimation of the self-normalized tail, with exact
binomial confidence intervals; the empirical referee for every bound.

Simulation is chunked: chunk k draws from its own counter-based
substream seeded by (seed, k), and chunk hit-counts are reduced in chunk
order.  Results are therefore bit-identical for a given
(seed, chunk_size, trials) regardless of how many worker threads run the
chunks.  Tail cells routinely see single-digit hit counts, so intervals
are exact Clopper-Pearson rather than normal-approximate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import beta as _beta

from .bounds import BoundCurve, BoundPoint, EXP_LEVEL, LOWER_CLT, LOWER_Q1, POWER_LEVEL
from .distributions import DistributionModel

__all__ = [
    "GridMismatchError",
    "MCConfig",
    "TailEstimate",
    "VerificationReport",
    "VerificationRow",
    "clopper_pearson",
    "empirical_tail",
    "self_normalized_stat",
    "simulate_statistic",
    "verify_bounds",
    "worker_count",
]

THREADS_ENV = "SELFNORM_THREADS"


class GridMismatchError(ValueError):
    """Bound curves do not line up with the verification grid."""


@dataclass(frozen=True)
class MCConfig:
    """Simulation plan: sample size n, trial count, seed, chunking, CI level."""

    n: int
    trials: int
    seed: int
    chunk_size: int = 8192
    confidence: float = 0.999

    def __post_init__(self):
        if self.n < 1 or self.trials < 1 or self.chunk_size < 1:
            raise ValueError("n, trials, and chunk_size must all be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must be in (0,1), got {self.confidence}")


@dataclass(frozen=True)
class TailEstimate:
    """Point estimate of P(T(n) > B) with an exact two-sided interval."""

    B: float
    n: int
    hits: int
    trials: int
    point: float
    ci_lo: float
    ci_hi: float
    confidence: float


def self_normalized_stat(x: np.ndarray) -> np.ndarray:
    """sqrt(n) * sum(x) / sum(x^2) along the last axis; 0 when sum(x^2) = 0.

    A zero denominator forces a zero numerator (all draws are 0), and
    defining the statistic as 0 there leaves every event {T > B}, B > 0,
    untouched.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    num = x.sum(axis=-1)
    den = (x * x).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = math.sqrt(n) * num / den
    return np.where(den == 0.0, 0.0, t)


def simulate_statistic(dist: DistributionModel, n: int,
                       rng: np.random.Generator, size: int | None = None):
    """Draw T(n) once (size=None) or as a vector of independent replicas."""
    shape = (n,) if size is None else (size, n)
    t = self_normalized_stat(dist.sample(rng, shape))
    return float(t) if size is None else t


def clopper_pearson(hits: int, trials: int, confidence: float) -> tuple[float, float]:
    """Exact binomial interval from the Beta-quantile characterization."""
    alpha = 1.0 - confidence
    lo = 0.0 if hits == 0 else float(_beta.ppf(alpha / 2.0, hits, trials - hits + 1))
    hi = 1.0 if hits == trials else float(_beta.ppf(1.0 - alpha / 2.0, hits + 1,
                                                    trials - hits))
    return lo, hi


def worker_count(num_chunks: int) -> int:
    """Worker threads for a run, capped by the SELFNORM_THREADS env var."""
    workers = min(8, os.cpu_count() or 1, num_chunks)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            workers = min(workers, max(1, int(env)))
        except ValueError:
            pass
    return max(1, workers)


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, chunk_index])
    return np.random.Generator(np.random.Philox(ss))


def empirical_tail(dist: DistributionModel, cfg: MCConfig,
                   B_grid: Sequence[float]) -> list[TailEstimate]:
    """One simulation pass counting exceedances of every B simultaneously."""
    B_arr = np.asarray(list(B_grid), dtype=float)
    num_chunks = -(-cfg.trials // cfg.chunk_size)

    def run_chunk(k: int) -> np.ndarray:
        m = min(cfg.chunk_size, cfg.trials - k * cfg.chunk_size)
        rng = _chunk_rng(cfg.seed, k)
        t = self_normalized_stat(dist.sample(rng, (m, cfg.n)))
        return (t[:, None] > B_arr[None, :]).sum(axis=0)

    workers = worker_count(num_chunks)
    if workers == 1:
        counts = sum(run_chunk(k) for k in range(num_chunks))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = sum(pool.map(run_chunk, range(num_chunks)))

    out = []
    for B, hits in zip(B_arr, counts):
        hits = int(hits)
        lo, hi = clopper_pearson(hits, cfg.trials, cfg.confidence)
        out.append(TailEstimate(float(B), cfg.n, hits, cfg.trials,
                                hits / cfg.trials, lo, hi, cfg.confidence))
    return out


# -- verification -------------------------------------------------------------


@dataclass(frozen=True)
class VerificationRow:
    """One bound cell matched against its Monte Carlo estimate."""

    dist: str
    n_label: str
    point: BoundPoint
    family: str
    estimate: TailEstimate | None
    status: str
    margin: float | None = None
    tightness: float | None = None


@dataclass
class VerificationReport:
    rows: list[VerificationRow] = field(default_factory=list)
    estimates: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[VerificationRow]:
        return [r for r in self.rows if r.status == "FAIL"]

    @property
    def all_pass(self) -> bool:
        return not self.failures


def _n_label(n) -> str:
    if isinstance(n, tuple):
        return f"sup({n[0]}..{n[1]})"
    return str(n)


def _check_grids(curves: Sequence[BoundCurve], n_grid: Sequence[int],
                 B_grid: Sequence[float]) -> None:
    b_set = set(float(b) for b in B_grid)
    for curve in curves:
        bs = {pt.B for pt in curve.points}
        if not bs <= b_set:
            raise GridMismatchError(
                f"{curve.family} curve has B values {sorted(bs - b_set)} "
                "outside the verification grid")
        if curve.family == LOWER_CLT:
            continue
        if curve.family == LOWER_Q1:
            if 1 not in n_grid:
                raise GridMismatchError("single-observation lower bound needs n = 1 "
                                        "in the grid")
        elif isinstance(curve.n, int) and curve.n not in n_grid:
            raise GridMismatchError(
                f"{curve.family} curve at n = {curve.n} not in the grid")


def verify_bounds(dist: DistributionModel, n_grid: Sequence[int],
                  B_grid: Sequence[float], cfg: MCConfig,
                  bound_curves: Sequence[BoundCurve]) -> VerificationReport:
    """Check every bound cell against simulation.

    Upper bounds must sit at or above the lower confidence limit of the
    matching estimate (for sup-over-n curves: of every n in the grid);
    the single-observation lower bound must sit at or below the upper
    limit at n = 1.  The limiting normal tail is attached as REPORT rows
    and asserts nothing.  Raises :class:`GridMismatchError` when curves
    and grid disagree.
    """
    _check_grids(bound_curves, n_grid, B_grid)
    report = VerificationReport()
    for n in sorted(set(n_grid)):
        for est in empirical_tail(dist, MCConfig(n, cfg.trials, cfg.seed,
                                                 cfg.chunk_size, cfg.confidence),
                                  B_grid):
            report.estimates[(n, est.B)] = est

    for curve in bound_curves:
        for pt in curve.points:
            if curve.family in (EXP_LEVEL, POWER_LEVEL):
                if isinstance(curve.n, tuple):
                    cands = [report.estimates[(n, pt.B)] for n in sorted(set(n_grid))]
                    est = max(cands, key=lambda e: e.ci_lo)
                else:
                    est = report.estimates[(curve.n, pt.B)]
                ok = pt.value >= est.ci_lo
                row = VerificationRow(
                    dist.name, _n_label(curve.n), pt, curve.family, est,
                    "PASS" if ok else "FAIL",
                    margin=pt.value - est.ci_lo,
                    tightness=pt.value / est.point if est.point > 0 else math.inf)
            elif curve.family == LOWER_Q1:
                est = report.estimates[(1, pt.B)]
                ok = pt.value <= est.ci_hi
                row = VerificationRow(
                    dist.name, "1", pt, curve.family, est,
                    "PASS" if ok else "FAIL",
                    margin=est.ci_hi - pt.value,
                    tightness=pt.value / est.point if est.point > 0 else math.inf)
            elif curve.family == LOWER_CLT:
                est = report.estimates.get((1, pt.B))
                row = VerificationRow(dist.name, _n_label(curve.n), pt,
                                      curve.family, est, "REPORT")
            else:
                raise GridMismatchError(f"unknown bound family {curve.family!r}")
            report.rows.append(row)
    return report
