"""Exact limiting objects for the complex-Gaussian coefficient case.

The smallest root modulus of the limiting random power series has CDF
F(t) = 1 - prod_{k>=1} (1 - t^{2k}) on (0,1); the in-disk zero set is a
determinantal process with the Bergman kernel K(z,w) = 1/(pi (1-z conj(w))^2)
and its moduli have the law of {U_k^{1/2k}} for i.i.d. uniform U_k.  All
evaluators carry explicit truncation budgets: the tail of the product is
bounded by sum_{k>K} t^{2k} = t^{2(K+1)}/(1-t^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class CoincidentRoots(ValueError):
    """Two roots closer than the pairwise-distinct tolerance."""


class QuadratureNonConvergence(RuntimeError):
    """Circle quadrature failed to stabilize within the node budget."""


def _truncation_order(t: float, budget: float) -> int:
    """Smallest K with t^(2(K+1))/(1-t^2) <= budget (t in (0,1))."""
    if t <= 0.0:
        return 0
    log_t2 = 2.0 * math.log(t)
    k = math.ceil(math.log(budget * (1.0 - t * t)) / log_t2 - 1.0)
    return max(int(k), 0)


def limit_cdf(t, budget: float = 1e-12):
    """CDF of the limiting smallest root modulus, total error <= budget.

    Accepts scalars or arrays on [0, 1).  The product over k is truncated at
    the order given by the geometric tail bound, or earlier once the running
    partial product itself drops below the budget (the remaining error can
    never exceed the partial product).
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(arr >= 1):
        raise ValueError("t must lie in [0, 1)")
    flat = np.atleast_1d(arr).ravel()
    q = flat * flat
    prod = np.ones_like(flat)
    qk = np.ones_like(flat)
    active = flat > 0.0
    kmax = np.zeros(flat.shape, dtype=np.int64)
    if np.any(active):
        qa = q[active]
        kmax[active] = np.ceil(
            np.log(budget * (1.0 - qa)) / np.log(qa) - 1.0).astype(np.int64)
    k = 0
    while np.any(active):
        k += 1
        qk[active] *= q[active]
        prod[active] *= 1.0 - qk[active]
        active &= (k < kmax) & (prod > budget)
    # a partial product at or below the budget bounds the whole tail: rounding
    # it to 0 keeps the error one-sided and the output exactly monotone
    prod[prod <= budget] = 0.0
    out = np.clip(1.0 - prod, 0.0, 1.0).reshape(np.atleast_1d(arr).shape)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def limit_density(t, budget: float = 1e-14):
    """Density of the limiting smallest root modulus on (0, 1).

    Term-differentiated truncated product:
    F'(t) = prod_k (1-t^{2k}) * sum_k 2k t^{2k-1}/(1-t^{2k}).
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0) or np.any(arr >= 1):
        raise ValueError("t must lie in (0, 1)")
    out = np.empty(arr.shape, dtype=float)
    for idx, ti in np.ndenumerate(arr):
        out[idx] = _limit_density_scalar(float(ti), budget)
    return float(out) if out.ndim == 0 else out


def _limit_density_scalar(t: float, budget: float) -> float:
    kmax = _truncation_order(t, budget)
    q = t * t
    qk = 1.0
    prod = 1.0
    series = 0.0
    for k in range(1, kmax + 1):
        qk *= q
        fac = 1.0 - qk
        prod *= fac
        series += 2.0 * k * qk / (t * fac)
        if prod < 1e-320:
            break
    return prod * series


@dataclass(frozen=True)
class LimitCdf:
    """Evaluator bundling a fixed error budget, for use as a plain callable."""

    budget: float = 1e-12

    def __call__(self, t):
        return limit_cdf(t, self.budget)

    def density(self, t):
        return limit_density(t, max(self.budget, 1e-15))

    def tabulate(self, grid) -> np.ndarray:
        """Rows (t, F, f) over the grid, for figure reproduction."""
        grid = np.asarray(grid, dtype=float)
        f_vals = limit_cdf(grid, self.budget)
        d_vals = np.array([
            limit_density(g, max(self.budget, 1e-15)) if 0.0 < g < 1.0 else
            (0.0 if g == 0.0 else math.nan)
            for g in grid
        ])
        return np.column_stack([grid, f_vals, d_vals])


# ---------------------------------------------------------------------------
# moduli sampler for the limiting zero set

@dataclass(frozen=True)
class GafModuliSample:
    """Moduli below rho_max of one draw of the limiting in-disk zero set."""

    moduli: np.ndarray
    rho_max: float
    truncation_order: int
    omitted_mass_bound: float


def sample_gaf_moduli(rng: np.random.Generator, rho_max: float,
                      budget: float = 1e-9) -> GafModuliSample:
    """One draw of {U_k^{1/2k}} restricted to (0, rho_max), sorted ascending.

    Indices beyond the truncation order K could only contribute moduli below
    rho_max with probability <= sum_{k>K} rho_max^{2k} <= budget.
    """
    if not 0.0 < rho_max < 1.0:
        raise ValueError("rho_max must lie in (0, 1)")
    kmax = _truncation_order(rho_max, budget)
    k = np.arange(1, kmax + 1)
    u = rng.random(kmax)
    moduli = u ** (1.0 / (2.0 * k))
    moduli = np.sort(moduli[moduli < rho_max])
    tail = rho_max ** (2 * (kmax + 1)) / (1.0 - rho_max * rho_max)
    return GafModuliSample(moduli=moduli, rho_max=rho_max,
                           truncation_order=kmax, omitted_mass_bound=tail)


def sample_gaf_min(rng: np.random.Generator, budget: float = 1e-9,
                   block: int = 64) -> float:
    """Minimum over the full sequence {U_k^{1/2k}}, adaptively truncated.

    After k draws with running minimum m, the probability that any later
    index beats m is at most sum_{j>k} m^{2j} = m^{2(k+1)}/(1-m^2); stop once
    that bound drops below the budget.
    """
    m = math.sqrt(rng.random())
    k = 1
    while True:
        if m**(2 * (k + 1)) / (1.0 - m * m) <= budget:
            return m
        ks = np.arange(k + 1, k + block + 1)
        u = rng.random(block)
        m = min(m, float((u ** (1.0 / (2.0 * ks))).min()))
        k += block


def expected_count(rho: float) -> float:
    """Mean number of limiting zeros with modulus below rho: rho^2/(1-rho^2)."""
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    return rho * rho / (1.0 - rho * rho)


# ---------------------------------------------------------------------------
# Bergman kernel

def bergman_kernel(z: complex, w: complex) -> complex:
    """K(z, w) = 1/(pi (1 - z conj(w))^2) on the open unit disk."""
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise ValueError("kernel arguments must lie inside the unit disk")
    return 1.0 / (math.pi * (1.0 - z * np.conj(w)) ** 2)


def bergman_intensity(z) -> float:
    """First intensity K(z, z) = 1/(pi (1-|z|^2)^2) of the limiting zero set."""
    mod2 = abs(np.asarray(z)) ** 2 if np.ndim(z) else abs(z) ** 2
    mod2 = np.asarray(mod2, dtype=float)
    if np.any(mod2 >= 1.0):
        raise ValueError("point must lie inside the unit disk")
    out = 1.0 / (math.pi * (1.0 - mod2) ** 2)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# joint log-density of the zeros for complex Gaussian coefficients

def coulomb_log_density(roots, m_start: int = 1024, m_max: int = 65536,
                        rtol: float = 1e-9) -> float:
    """Unnormalized log-density of a zero configuration.

    sum_{i != j} ln|z_i - z_j|
      - (n+1) ln( (1/2pi) integral prod_k |e^{i theta} - z_k|^2 dtheta ).

    The circle integral runs on a uniform grid in log scale (max-subtracted
    exponentiation), doubling the node count from m_start until two
    consecutive levels agree to rtol.  The normalization constant is
    intentionally omitted.
    """
    z = np.asarray(roots, dtype=np.complex128).ravel()
    n = z.size
    if n == 0:
        raise ValueError("need at least one root")
    if n > 1:
        diff = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(diff, np.inf)
        if diff.min() <= 1e-12:
            raise CoincidentRoots(f"pairwise distance {diff.min():.3e} <= 1e-12")
        pair_term = float(np.log(diff[~np.eye(n, dtype=bool)]).sum())
    else:
        pair_term = 0.0

    log_integral = _circle_log_mean(z, m_start, m_max, rtol)
    return pair_term - (n + 1) * log_integral


def _circle_log_mean(z: np.ndarray, m_start: int, m_max: int, rtol: float) -> float:
    """log( (1/2pi) integral prod_k |e^{i theta}-z_k|^2 dtheta ) by trapezoid.

    The integrand is a trigonometric polynomial of degree n, so the uniform
    rule is exact once the node count passes 2n+1; doubling from m_start
    certifies that level.  Roots within 1e-6 of the circle force doubling.
    """
    prev = None
    m = m_start
    near_circle = bool(np.any(np.abs(np.abs(z) - 1.0) < 1e-6))
    while m <= m_max:
        val = _log_mean_at(z, m)
        if val == -math.inf:
            return -math.inf
        stable = prev is not None and abs(val - prev) <= rtol * (1.0 + abs(val))
        if stable and (not near_circle or m >= 4 * m_start):
            return val
        prev = val
        m *= 2
    raise QuadratureNonConvergence(
        f"circle quadrature not stable to {rtol} by {m_max} nodes")


def _log_mean_at(z: np.ndarray, m: int) -> float:
    ell = np.empty(m)
    chunk = max(1, (1 << 22) // z.size)
    theta = 2.0 * np.pi * np.arange(m) / m
    with np.errstate(divide="ignore"):
        for lo in range(0, m, chunk):
            nodes = np.exp(1j * theta[lo:lo + chunk])
            logs = np.log(np.abs(nodes[:, None] - z[None, :]))
            ell[lo:lo + chunk] = 2.0 * logs.sum(axis=1)
    peak = ell.max()
    if peak == -np.inf:
        return -math.inf
    return float(peak + math.log(np.mean(np.exp(ell - peak))))
