"""Pure-numpy backend for the simultaneous root solver.

Mirrors the compiled kernel's contract: a Jacobi-style Ehrlich-Aberth sweep
(all updates computed from the previous iterate), per-root locking once the
correction drops below newton_tol*(1+|z|), and backward-error residuals
|P(z)| / sum_j |c_j||z|^j.  Points with |z| > 1 are handled through the
reversed polynomial at 1/z so no intermediate ever overflows.

Compensated (error-free transformation) Horner evaluation kicks in for
degrees above comp_min_degree whenever plain double evaluation is
cancellation-dominated, and always for the final residual certificates.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_EPS = np.finfo(float).eps
_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


# ---------------------------------------------------------------------------
# error-free transformations (elementwise on arrays)

def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _two_prod(a, b):
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _two_prod_complex(xr, xi, yr, yi):
    """Complex product with componentwise error terms."""
    p1, e1 = _two_prod(xr, yr)
    p2, e2 = _two_prod(xi, yi)
    p3, e3 = _two_prod(xr, yi)
    p4, e4 = _two_prod(xi, yr)
    zr, f1 = _two_sum(p1, -p2)
    zi, f2 = _two_sum(p3, p4)
    return zr, zi, e1 - e2 + f1, e3 + e4 + f2


def _two_sum_complex(xr, xi, yr, yi):
    zr, er = _two_sum(xr, yr)
    zi, ei = _two_sum(xi, yi)
    return zr, zi, er, ei


def horner(coeffs: np.ndarray, z: np.ndarray):
    """Plain Horner evaluation of P and P' at each point of z."""
    c = np.asarray(coeffs, dtype=np.complex128)
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    p = np.full(z.shape, c[-1])
    dp = np.zeros(z.shape, dtype=np.complex128)
    for j in range(c.size - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[j]
    return p, dp


def horner_compensated(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Compensated Horner value of P at each point of z.

    Accumulates the rounding error of every product and sum with error-free
    transformations and adds it back at the end; the result is as accurate as
    plain Horner run in twice the working precision.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    zr, zi = z.real.copy(), z.imag.copy()
    sr = np.full(z.shape, c[-1].real)
    si = np.full(z.shape, c[-1].imag)
    er = np.zeros(z.shape)
    ei = np.zeros(z.shape)
    for j in range(c.size - 2, -1, -1):
        pr, pi, epr, epi = _two_prod_complex(sr, si, zr, zi)
        sr, si, esr, esi = _two_sum_complex(pr, pi, c[j].real, c[j].imag)
        # error recurrence evaluated in plain arithmetic
        er, ei = er * zr - ei * zi + (epr + esr), er * zi + ei * zr + (epi + esi)
    return (sr + er) + 1j * (si + ei)


def _abs_horner(abs_coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """sum_j |c_j| t^j by Horner, t >= 0."""
    s = np.full(t.shape, abs_coeffs[-1])
    for j in range(abs_coeffs.size - 2, -1, -1):
        s = s * t + abs_coeffs[j]
    return s


# ---------------------------------------------------------------------------
# robust evaluation of P/P', log-derivative, residuals

def _newton_ratio(c, rc, n, z, comp_degree):
    """w = P(z)/P'(z) elementwise, with noise-floor detection.

    Returns (w, settled_mask).  A point is settled when the computed value of
    P is below the rounding-error bound of its own evaluation: the iterate is
    a backward-stable root and further corrections are noise.  For |z| > 1
    uses the reversed polynomial: P(z) = z^n Q(1/z) gives
    w = z Q(u) / (n Q(u) - u Q'(u)) with u = 1/z.
    """
    w = np.empty(z.shape, dtype=np.complex128)
    settled = np.zeros(z.shape, dtype=bool)
    inner = np.abs(z) <= 1.0

    if np.any(inner):
        zi = z[inner]
        p, dp = horner(c, zi)
        noise = _noise_floor(c, n, zi, p, comp_degree)
        w[inner], settled[inner] = _safe_ratio(p, dp, zi, np.abs(p) <= noise)

    outer = ~inner
    if np.any(outer):
        zo = z[outer]
        u = 1.0 / zo
        q, dq = horner(rc, u)
        noise = _noise_floor(rc, n, u, q, comp_degree)
        denom = n * q - u * dq
        num = zo * q
        w_o, settled_o = _safe_ratio(num, denom, zo, np.abs(q) <= noise)
        w[outer] = w_o
        settled[outer] = settled_o
    return w, settled


def _noise_floor(cc, n, pts, p, comp_degree):
    """Rounding-error bound for the entries of p; recomputes compensated in place.

    Entries below the plain-Horner bound are recomputed with compensated
    Horner and judged against the (much smaller) compensated bound instead,
    so near-root cancellation never stalls the iteration above its attainable
    accuracy.
    """
    gamma = 2.0 * n * _EPS
    plain = gamma * _abs_horner(np.abs(cc), np.abs(pts))
    redo = np.abs(p) <= plain
    if not np.any(redo):
        return plain
    p[redo] = horner_compensated(cc, pts[redo])
    floor = plain.copy()
    floor[redo] = 4.0 * gamma * plain[redo]  # = 4 gamma^2 * sum|c||z|^j
    return floor


def _safe_ratio(p, dp, z, settled):
    """p/dp with guards: settled roots get w = 0, dp == 0 forces a nudge."""
    bad = (dp == 0) & ~settled
    dp = np.where(bad, 1.0, dp)
    w = p / dp
    if np.any(bad):
        # stationary point: take a small deterministic step instead
        w[bad] = 1e-3 * (1.0 + np.abs(z[bad])) * np.exp(0.7j)
    w[settled] = 0.0
    return w, settled


def log_derivative(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """P'(z)/P(z), stable for any |z| (reversed form outside the unit disk)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    n = c.size - 1
    rc = c[::-1].copy()
    out = np.empty(z.shape, dtype=np.complex128)
    inner = np.abs(z) <= 1.0
    if np.any(inner):
        p, dp = horner(c, z[inner])
        out[inner] = dp / p
    if np.any(~inner):
        zo = z[~inner]
        u = 1.0 / zo
        q, dq = horner(rc, u)
        out[~inner] = (n * zo * q - dq) / (zo * zo * q)
    return out


def backward_residuals(coeffs: np.ndarray, roots: np.ndarray,
                       comp_min_degree: int = 256) -> np.ndarray:
    """|P(z)| / sum_j |c_j| |z|^j per root (reversed form for |z| > 1).

    The numerator uses compensated evaluation for degrees above
    comp_min_degree so the certificate is trustworthy even when plain double
    evaluation is pure cancellation noise.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    z = np.atleast_1d(np.asarray(roots, dtype=np.complex128))
    n = c.size - 1
    rc = c[::-1].copy()
    comp = n > comp_min_degree
    res = np.empty(z.shape, dtype=float)
    inner = np.abs(z) <= 1.0
    for mask, cc in ((inner, c), (~inner, rc)):
        if not np.any(mask):
            continue
        zz = z[mask] if cc is c else 1.0 / z[mask]
        num = np.abs(horner_compensated(cc, zz) if comp else horner(cc, zz)[0])
        den = _abs_horner(np.abs(cc), np.abs(zz))
        ok = den > 0
        res[mask] = np.where(ok, num / np.where(ok, den, 1.0), np.where(num == 0, 0.0, np.inf))
    return res


# ---------------------------------------------------------------------------
# the solver kernel

def solve_kernel(coeffs: np.ndarray, z0: np.ndarray, max_sweeps: int = 200,
                 newton_tol: float = 1e-14, comp_min_degree: int = 256):
    """Ehrlich-Aberth iteration from starting points z0.

    Returns (roots, residuals, sweeps_used, n_unconverged).  Deterministic:
    every sweep updates all active roots from the previous sweep's snapshot.
    """
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    n = c.size - 1
    z = np.array(z0, dtype=np.complex128)
    if z.size != n:
        raise ValueError("z0 must supply one starting point per root")
    rc = c[::-1].copy()
    locked = np.zeros(n, dtype=bool)
    sweeps = 0

    for sweeps in range(1, max_sweeps + 1):
        active = np.flatnonzero(~locked)
        if active.size == 0:
            sweeps -= 1
            break
        za = z[active]
        _separate(z, za, active)

        w, settled = _newton_ratio(c, rc, n, za, comp_min_degree)

        diff = za[:, None] - z[None, :]
        diff[np.arange(active.size), active] = np.inf
        s = (1.0 / diff).sum(axis=1)

        denom = 1.0 - w * s
        newton = denom == 0
        delta = np.where(newton, w, w / np.where(newton, 1.0, denom))
        delta[settled] = 0.0

        z_new = za - delta
        conv = np.abs(delta) <= newton_tol * (1.0 + np.abs(z_new))
        z[active] = z_new
        locked[active] = conv
        if np.all(locked):
            break

    residuals = backward_residuals(c, z, comp_min_degree)
    return z, residuals, sweeps, int((~locked).sum())


def _separate(z, za, active):
    """Nudge exact duplicates apart so pair sums stay finite."""
    diff = za[:, None] - z[None, :]
    diff[np.arange(active.size), active] = np.inf
    coincident = np.flatnonzero(np.any(diff == 0, axis=1))
    if coincident.size:
        idx = active[coincident]
        bump = 1e-12 * (1.0 + np.abs(z[idx])) * np.exp(1j * (0.3 + 0.1 * np.arange(idx.size)))
        z[idx] += bump
        za[coincident] = z[idx]
