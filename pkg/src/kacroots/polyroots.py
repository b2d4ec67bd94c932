"""Polynomials, certified root sets, coefficient reversal, disk zero counts.

The solver is a simultaneous Ehrlich-Aberth iteration (Jacobi-style sweeps,
deterministic for fixed options) with Newton-polygon starting circles and
compensated Horner evaluation near convergence.  Every returned root carries
a backward-error residual |P(z)| / sum_j |c_j||z|^j; a solve either certifies
all roots below the residual threshold or raises NonConvergence - never a
silent bad root.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class SolveError(Exception):
    """Base class for solver and certificate failures."""


class DegenerateInput(SolveError):
    """Leading coefficient below the underflow guard."""


class NonConvergence(SolveError):
    """Iteration budget exhausted with residuals above threshold."""

    def __init__(self, message: str, worst_residual: float):
        super().__init__(message)
        self.worst_residual = worst_residual


class ZeroConstantTerm(SolveError):
    """Reversal undefined: constant term is zero."""


class BoundaryRoot(SolveError):
    """A root lies numerically on the requested contour."""


class CountMismatch(SolveError):
    """Solved-root count and argument-principle count disagree."""


_UNDERFLOW_GUARD = 1e-300


@dataclass(frozen=True)
class SolveOptions:
    max_sweeps: int = 200
    newton_tol: float = 1e-14
    residual_threshold: float = 1e-10
    compensated_min_degree: int = 256
    jitter_seed: int = 0


_DEFAULT_OPTS = SolveOptions()


class Polynomial:
    """Dense polynomial sum_k c_k z^k given by coefficients c_0..c_n, c_n != 0."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=np.complex128)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty 1-d sequence")
        if c[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        """Evaluate P at z (plain Horner; scalar in, scalar out)."""
        p, _ = _kernels.horner(self.coeffs, z)
        return complex(p[0]) if np.isscalar(z) or np.ndim(z) == 0 else p

    def log_derivative(self, z):
        """P'(z)/P(z), stable for any |z|."""
        return _kernels.log_derivative(self.coeffs, z)

    def __repr__(self):
        return f"Polynomial(degree={self.degree})"


@dataclass(frozen=True)
class RootSet:
    """All roots of one polynomial with per-root residual certificates."""

    roots: np.ndarray
    residuals: np.ndarray
    threshold: float
    sweeps: int
    backend: str

    def __post_init__(self):
        self.roots.setflags(write=False)
        self.residuals.setflags(write=False)

    def __len__(self) -> int:
        return self.roots.size

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    @property
    def min_modulus(self) -> float:
        return float(self.moduli.min())

    @property
    def max_modulus(self) -> float:
        return float(self.moduli.max())


def polynomial_from_roots(roots, leading: complex = 1.0) -> Polynomial:
    """Expand leading * prod_k (z - r_k) into coefficients."""
    c = np.array([leading], dtype=np.complex128)
    for r in np.asarray(roots, dtype=np.complex128):
        c = np.convolve(c, np.array([-r, 1.0], dtype=np.complex128))
    return Polynomial(c)


def reverse(p: Polynomial) -> Polynomial:
    """Coefficient reversal z^n P(1/z); roots map to their reciprocals."""
    if p.coeffs[0] == 0:
        raise ZeroConstantTerm("constant term is zero; reversal would drop degree")
    return Polynomial(p.coeffs[::-1])


def solve(p: Polynomial, opts: SolveOptions = _DEFAULT_OPTS) -> RootSet:
    """All complex roots of p with certified residuals.

    Deterministic given (p, opts).  Raises DegenerateInput when the leading
    coefficient is below the underflow guard and NonConvergence when the
    sweep budget ends with any residual above opts.residual_threshold.

    Random coefficient models produce simple roots almost surely; root
    clusters come back as distinct certified points, with no multiplicity
    resolution attempted.
    """
    n = p.degree
    if n < 1:
        raise ValueError("degree must be >= 1")
    c = p.coeffs
    scale = np.abs(c).max()
    if np.abs(c[-1]) / scale < _UNDERFLOW_GUARD or not np.isfinite(scale):
        raise DegenerateInput("leading coefficient below underflow guard")
    cs = c / scale

    # exact zero roots: deflate so the kernel sees a nonzero constant term
    m = int(np.flatnonzero(cs != 0)[0])
    zero_roots = np.zeros(m, dtype=np.complex128)
    work = cs[m:]

    if work.size > 1:
        z0 = _kernels.initial_guesses(work, opts.jitter_seed)
        roots, residuals, sweeps, _ = _kernels.solve_kernel(
            work, z0, opts.max_sweeps, opts.newton_tol, opts.compensated_min_degree)
    else:
        roots = np.empty(0, dtype=np.complex128)
        residuals = np.empty(0, dtype=float)
        sweeps = 0

    roots = np.concatenate([zero_roots, roots])
    residuals = np.concatenate([np.zeros(m), residuals])

    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > opts.residual_threshold:
        raise NonConvergence(
            f"residual certificate failed: worst residual {worst:.3e} "
            f"> {opts.residual_threshold:.1e} after {sweeps} sweeps", worst)

    cauchy = 1.0 + np.abs(cs[:-1]).max() / np.abs(cs[-1]) if n >= 1 else 1.0
    if np.abs(roots).max() > cauchy * (1.0 + 1e-8):
        raise SolveError(f"root escaped the Cauchy bound {cauchy:.3e}")

    return RootSet(roots=roots, residuals=residuals,
                   threshold=opts.residual_threshold, sweeps=sweeps,
                   backend=_kernels.BACKEND)


def count_zeros_in_disk(p: Polynomial, center: complex, radius: float,
                        rootset: RootSet | None = None,
                        opts: SolveOptions = _DEFAULT_OPTS) -> int:
    """Number of roots with |z - center| < radius, cross-validated.

    The solved-root count must agree with the winding number of P over the
    circle (argument-principle trapezoid quadrature, nodes doubled until the
    integer stabilizes); disagreement raises CountMismatch.  A root within
    1e-9 * radius of the circle raises BoundaryRoot.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if rootset is None:
        rootset = solve(p, opts)
    dist = np.abs(rootset.roots - center)
    if np.any(np.abs(dist - radius) < 1e-9 * radius):
        raise BoundaryRoot(f"root within 1e-9*radius of the circle |z-{center}|={radius}")
    counted = int(np.count_nonzero(dist < radius))

    winding = _winding_number(p, center, radius)
    if winding != counted:
        raise CountMismatch(
            f"solved-root count {counted} != contour count {winding}")
    return counted


def _winding_number(p: Polynomial, center: complex, radius: float,
                    m_start: int = 1024, m_max: int = 65536) -> int:
    """(1/2 pi i) contour integral of P'/P over the circle, as an integer."""
    prev = None
    m = m_start
    while m <= m_max:
        theta = 2.0 * np.pi * np.arange(m) / m
        e = np.exp(1j * theta)
        z = center + radius * e
        integrand = _kernels.log_derivative(p.coeffs, z) * radius * e
        val = integrand.mean()
        n_hat = int(np.round(val.real))
        if abs(val - n_hat) < 1e-6 and prev == n_hat:
            return n_hat
        prev = n_hat
        m *= 2
    raise CountMismatch(
        f"argument-principle quadrature did not stabilize by {m_max} nodes")


def matched_distances(found, expected) -> np.ndarray:
    """Distances after pairing two equal-size root multisets.

    Hungarian assignment for degree <= 64, greedy nearest-neighbor in
    modulus-sorted order above that.
    """
    a = np.asarray(found, dtype=np.complex128)
    b = np.asarray(expected, dtype=np.complex128)
    if a.size != b.size:
        raise ValueError("root multisets must have equal size")
    if a.size <= 64:
        from scipy.optimize import linear_sum_assignment
        cost = np.abs(a[:, None] - b[None, :])
        rows, cols = linear_sum_assignment(cost)
        return cost[rows, cols]
    order = np.argsort(np.abs(a))
    used = np.zeros(b.size, dtype=bool)
    out = np.empty(a.size)
    for idx in order:
        d = np.abs(b - a[idx])
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        out[idx] = d[j]
    return out


# ---------------------------------------------------------------------------
# plain-text polynomial and root-set I/O

def write_polynomial(p: Polynomial, path) -> None:
    """One coefficient per line as `re im`, index ascending."""
    with open(path, "w") as fh:
        for ck in p.coeffs:
            fh.write(f"{float(ck.real)!r} {float(ck.imag)!r}\n")


def read_polynomial(path) -> Polynomial:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            re_s, im_s = line.split()
            rows.append(complex(float(re_s), float(im_s)))
    return Polynomial(rows)


def write_rootset(rs: RootSet, path) -> None:
    """CSV with columns re, im, modulus, residual."""
    with open(path, "w") as fh:
        fh.write("re,im,modulus,residual\n")
        for z, r in zip(rs.roots, rs.residuals):
            fh.write(f"{float(z.real)!r},{float(z.imag)!r},{float(abs(z))!r},{float(r)!r}\n")
