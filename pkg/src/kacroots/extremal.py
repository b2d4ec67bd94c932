"""Extremal-root observables and the statistics used to test them.

Works on plain sample vectors: smallest/largest root moduli per trial, Hill
tail-index estimates, exact one- and two-sample Kolmogorov-Smirnov
statistics, log-log slopes of the empirical CDF near zero, and truncated
moment curves for diagnosing divergent moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import CoefficientModel
from .polyroots import RootSet


class DegenerateTail(ValueError):
    """Top order statistics are all equal; the Hill denominator vanishes."""


class InsufficientMass(ValueError):
    """Empirical CDF is zero on (almost) the whole requested grid."""


@dataclass(frozen=True)
class ExtremalSample:
    """One Monte Carlo trial's extremal observables."""

    trial_id: int
    n: int
    x1: float
    xn: float
    model: str
    seed: int

    def __post_init__(self):
        if not (0.0 < self.x1 <= self.xn):
            raise ValueError(f"need 0 < x1 <= xn, got ({self.x1}, {self.xn})")


@dataclass(frozen=True)
class TailEstimate:
    alpha_hat: float
    k_used: int
    stderr: float


def extremes_of(roots: RootSet) -> tuple[float, float]:
    """(min, max) of the root moduli."""
    if len(roots) == 0:
        raise ValueError("empty root set")
    mods = roots.moduli
    return float(mods.min()), float(mods.max())


def hill_estimator(samples, k_used: int | None = None) -> TailEstimate:
    """Hill tail-index estimate from the top k_used order statistics.

    alpha_hat = k / sum_{i<=k} (ln X_(i) - ln X_(k+1)) with X_(1) >= X_(2) >= ...
    Default k_used = floor(sqrt(N)).
    """
    x = np.asarray(samples, dtype=float)
    if np.any(x <= 0):
        raise ValueError("samples must be positive")
    n = x.size
    if k_used is None:
        k_used = int(math.isqrt(n))
    if not 1 <= k_used < n:
        raise ValueError(f"need 1 <= k_used < {n}")
    top = np.sort(x)[::-1][:k_used + 1]
    spacings = np.log(top[:-1]) - math.log(top[-1])
    denom = float(spacings.sum())
    if denom == 0.0:
        raise DegenerateTail("top order statistics are identical")
    alpha = k_used / denom
    return TailEstimate(alpha_hat=alpha, k_used=k_used,
                        stderr=alpha / math.sqrt(k_used))


def ks_two_sample(a, b) -> float:
    """Exact sup-distance between two empirical CDFs (merge-scan)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


def ks_against_cdf(samples, cdf) -> float:
    """Exact one-sample KS statistic against a monotone CDF callable."""
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("samples must be non-empty")
    try:
        f = np.asarray(cdf(x), dtype=float)
    except (TypeError, ValueError):
        f = np.array([float(cdf(v)) for v in x])
    n = x.size
    i = np.arange(1, n + 1)
    d_plus = (i / n - f).max()
    d_minus = (f - (i - 1) / n).max()
    return float(max(d_plus, d_minus))


def ks_critical_value(n1: int, n2: int | None = None, level: float = 1e-3) -> float:
    """Asymptotic KS critical value c(level) * sqrt(effective 1/n).

    Two-sample when n2 is given: c * sqrt((n1+n2)/(n1*n2)).
    """
    c = math.sqrt(-math.log(level / 2.0) / 2.0)
    if n2 is None:
        return c / math.sqrt(n1)
    return c * math.sqrt((n1 + n2) / (n1 * n2))


def small_t_exponent(samples, t_grid) -> float:
    """Least-squares slope of ln(empirical CDF(t)) against ln t.

    Estimates the exponent governing the mass of the sample near zero.  Grid
    points where the empirical CDF vanishes carry no information and are
    dropped; fewer than 3 surviving points raises InsufficientMass.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    t = np.asarray(t_grid, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t_grid must be positive")
    ecdf = np.searchsorted(x, t, side="right") / x.size
    keep = ecdf > 0
    if keep.sum() < 3:
        raise InsufficientMass(
            f"empirical CDF nonzero at only {int(keep.sum())} of {t.size} grid points")
    lt = np.log(t[keep])
    lf = np.log(ecdf[keep])
    slope = np.polyfit(lt, lf, 1)[0]
    return float(slope)


def truncated_moment_curve(samples, p: float, caps) -> np.ndarray:
    """Empirical E[min(X, cap)^p] for each cap.

    A curve that keeps growing (log-log slope vs cap bounded away from 0)
    diagnoses a divergent p-th moment.
    """
    if p <= 0:
        raise ValueError("moment order p must be positive")
    caps = np.asarray(caps, dtype=float)
    if np.any(np.diff(caps) <= 0):
        raise ValueError("caps must be strictly increasing")
    x = np.asarray(samples, dtype=float)
    return np.array([np.mean(np.minimum(x, c) ** p) for c in caps])


def tail_report(samples, model: CoefficientModel,
                t_grid=None, moment_order: float = 1.0) -> dict:
    """Tail diagnostics for largest-root-modulus samples under one model.

    Bounded-modulus coefficient laws keep all roots in an annulus, so no
    heavy tail can exist; in that case the report carries the bounded-support
    diagnosis instead of a Hill index.
    """
    x = np.asarray(samples, dtype=float)
    lo, hi = model.modulus_support
    if math.isfinite(hi) and lo > 0.0:
        bound = 1.0 + hi / lo
        return {
            "diagnosis": "bounded_support",
            "model": str(model),
            "root_modulus_bound": bound,
            "sample_max": float(x.max()),
            "samples": int(x.size),
        }
    est = hill_estimator(x)
    report = {
        "diagnosis": "heavy_tail_estimate",
        "model": str(model),
        "alpha_hat": est.alpha_hat,
        "k_used": est.k_used,
        "stderr": est.stderr,
        "samples": int(x.size),
    }
    witness = model.zero_exponent
    if witness is not None:
        report["declared_zero_exponent"] = witness.k
    if t_grid is not None:
        inv = 1.0 / x[x > 0]
        try:
            report["small_t_slope_of_reciprocal"] = small_t_exponent(inv, t_grid)
        except InsufficientMass:
            report["small_t_slope_of_reciprocal"] = None
    caps = np.geomspace(10.0, 1e4, 4)
    curve = truncated_moment_curve(x, moment_order, caps)
    report["truncated_moment_caps"] = caps.tolist()
    report["truncated_moment_curve"] = curve.tolist()
    return report
