"""The in-disk zero process: extraction, linear statistics, stability, intensity.

A snapshot is the set of roots with modulus below a radius rho < 1 for one
(model, seed, degree).  Increasing the degree while reusing one coefficient
stream realizes successive truncations of the same random power series, so
in-disk zeros should stabilize; the stability report quantifies that.  The
empirical radial intensity is compared against the closed-form bin masses
r^2/(1-r^2) differenced at bin edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .coeffs import CoefficientModel, sample_coefficients
from .polyroots import BoundaryRoot, Polynomial, RootSet, SolveOptions, solve

_DEFAULT_OPTS = SolveOptions()


@dataclass(frozen=True)
class DiskProcessSnapshot:
    """Zeros of one trial with |z| < rho, reproducible from (model, seed, n, rho)."""

    n: int
    rho: float
    zeros: np.ndarray
    seed: int

    def __post_init__(self):
        self.zeros.setflags(write=False)

    @property
    def count(self) -> int:
        return self.zeros.size


def in_disk_zeros(roots: RootSet, rho: float, *, n: int | None = None,
                  seed: int = -1, boundary_tol: float = 1e-9) -> DiskProcessSnapshot:
    """Filter a root set to the open disk of radius rho.

    Raises BoundaryRoot when some root lies within boundary_tol of the circle
    |z| = rho; Monte Carlo pipelines re-draw such trials.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    mods = roots.moduli
    if np.any(np.abs(mods - rho) < boundary_tol):
        raise BoundaryRoot(f"root within {boundary_tol} of the circle |z|={rho}")
    zeros = np.sort_complex(roots.roots[mods < rho])
    return DiskProcessSnapshot(n=n if n is not None else len(roots), rho=rho,
                               zeros=zeros, seed=seed)


# ---------------------------------------------------------------------------
# linear statistics

def monomial(m: int, l: int = 0):
    """Test function z^m conj(z)^l restricted to the disk."""
    if m < 0 or l < 0:
        raise ValueError("monomial exponents must be non-negative")

    def f(z):
        z = np.asarray(z)
        return z**m * np.conj(z) ** l

    f.__name__ = f"monomial_{m}_{l}"
    return f


def radial_bump(support_radius: float):
    """Smooth radial bump: exp(1 - 1/(1-(|z|/R)^2)) inside |z| < R, else 0."""
    if support_radius <= 0:
        raise ValueError("support radius must be positive")

    def f(z):
        r2 = (np.abs(np.asarray(z)) / support_radius) ** 2
        out = np.zeros(r2.shape, dtype=float)
        inside = r2 < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
        return out

    f.__name__ = f"radial_bump_{support_radius}"
    return f


def linear_statistic(snapshot: DiskProcessSnapshot, f) -> complex:
    """sum_k f(z_k) over the snapshot (0 for an empty snapshot)."""
    if snapshot.count == 0:
        return 0.0 + 0.0j
    return complex(np.sum(f(snapshot.zeros)))


# ---------------------------------------------------------------------------
# stability across degrees (shared coefficient stream)

@dataclass(frozen=True)
class PairMatch:
    """Nearest-neighbor matching of in-disk zeros at consecutive degrees."""

    n_lo: int
    n_hi: int
    count_lo: int
    count_hi: int
    matched: int
    max_displacement: float
    unmatched: int


@dataclass(frozen=True)
class StabilityReport:
    seed: int
    rho_requested: float
    rho_used: float
    jitter_events: int
    degrees: tuple
    counts: tuple
    pairs: tuple

    @property
    def counts_equal(self) -> bool:
        return len(set(self.counts)) <= 1

    @property
    def max_displacement(self) -> float:
        return max((p.max_displacement for p in self.pairs), default=0.0)


def hurwitz_stability(model: CoefficientModel, seed: int, rho: float,
                      degrees, *, match_tol: float = 1e-3,
                      opts: SolveOptions = _DEFAULT_OPTS,
                      max_jitter: int = 5) -> StabilityReport:
    """In-disk zeros across degrees sharing one coefficient stream.

    All degrees use the prefix a_0..a_n of a single draw, so the polynomials
    are successive truncations of one random series.  If any degree produces
    a boundary root the radius is jittered by +-1e-3 steps (recorded in the
    report) and the whole extraction re-runs at the new radius.
    """
    degrees = tuple(int(d) for d in degrees)
    if any(d < 2 for d in degrees) or any(b < a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be non-decreasing integers >= 2")
    rng = streams.trial_stream(seed, 0)
    coeff = sample_coefficients(model, rng, max(degrees) + 1)

    jitters = 0
    for attempt in range(max_jitter + 1):
        offset = 1e-3 * ((attempt + 1) // 2) * (1 if attempt % 2 else -1)
        rho_try = rho + offset
        try:
            snaps = [
                in_disk_zeros(solve(Polynomial(coeff[:n + 1]), opts), rho_try,
                              n=n, seed=seed)
                for n in degrees
            ]
            break
        except BoundaryRoot:
            jitters += 1
    else:
        raise BoundaryRoot(
            f"boundary root persisted through {max_jitter} radius jitters (seed {seed})")

    pairs = tuple(
        _match_pair(a, b, match_tol) for a, b in zip(snaps, snaps[1:])
    )
    return StabilityReport(seed=seed, rho_requested=rho, rho_used=rho_try,
                           jitter_events=jitters, degrees=degrees,
                           counts=tuple(s.count for s in snaps), pairs=pairs)


def _match_pair(a: DiskProcessSnapshot, b: DiskProcessSnapshot,
                tol: float) -> PairMatch:
    """Greedy nearest-neighbor matching; unmatched zeros are reported, never dropped."""
    za, zb = a.zeros, b.zeros
    small, large = (za, zb) if za.size <= zb.size else (zb, za)
    used = np.zeros(large.size, dtype=bool)
    matched = 0
    worst = 0.0
    order = np.lexsort((np.angle(small), np.abs(small)))
    for idx in order:
        if not np.any(~used):
            break
        d = np.abs(large - small[idx])
        d[used] = np.inf
        j = int(np.argmin(d))
        if d[j] <= tol:
            used[j] = True
            matched += 1
            worst = max(worst, float(d[j]))
    unmatched = (small.size - matched) + (large.size - matched)
    return PairMatch(n_lo=a.n, n_hi=b.n, count_lo=za.size, count_hi=zb.size,
                     matched=matched, max_displacement=worst,
                     unmatched=unmatched)


def stability_table(reports) -> str:
    """Plain-text table, one row per degree pair of every report."""
    lines = [
        f"{'seed':>8} {'n':>6} {'n+':>6} {'cnt':>4} {'cnt+':>4} "
        f"{'matched':>7} {'max_disp':>12} {'unmatched':>9} {'rho':>8} {'jit':>3}"
    ]
    for rep in reports:
        for p in rep.pairs:
            lines.append(
                f"{rep.seed:>8d} {p.n_lo:>6d} {p.n_hi:>6d} {p.count_lo:>4d} "
                f"{p.count_hi:>4d} {p.matched:>7d} {p.max_displacement:>12.3e} "
                f"{p.unmatched:>9d} {rep.rho_used:>8.4f} {rep.jitter_events:>3d}"
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# radial intensity

def predicted_bin_masses(bin_edges) -> np.ndarray:
    """Expected count per radial bin: r^2/(1-r^2) differenced at the edges."""
    e = np.asarray(bin_edges, dtype=float)
    if np.any(e < 0) or np.any(e >= 1) or np.any(np.diff(e) <= 0):
        raise ValueError("bin edges must be increasing in [0, 1)")
    mass = e * e / (1.0 - e * e)
    return np.diff(mass)


def radial_intensity_histogram(snapshots, bin_edges):
    """(mean count per bin per trial, standard error per bin).

    Comparable to predicted_bin_masses for complex Gaussian coefficients at
    large degree.
    """
    snapshots = list(snapshots)
    if len(snapshots) < 1:
        raise ValueError("need at least one snapshot")
    e = np.asarray(bin_edges, dtype=float)
    counts = np.empty((len(snapshots), e.size - 1))
    for i, s in enumerate(snapshots):
        counts[i], _ = np.histogram(np.abs(s.zeros), bins=e)
    mean = counts.mean(axis=0)
    if len(snapshots) > 1:
        stderr = counts.std(axis=0, ddof=1) / math.sqrt(len(snapshots))
    else:
        stderr = np.full(e.size - 1, np.nan)
    return mean, stderr


# ---------------------------------------------------------------------------
# snapshot CSV

def write_snapshots(snapshots, path, header_lines=()) -> None:
    """CSV `seed,n,rho,re,im`, one row per zero; empty snapshots keep a row
    with blank re/im so trial counts survive a round trip."""
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("seed,n,rho,re,im\n")
        for s in snapshots:
            if s.count == 0:
                fh.write(f"{s.seed},{s.n},{float(s.rho)!r},,\n")
            for z in s.zeros:
                fh.write(f"{s.seed},{s.n},{float(s.rho)!r},{float(z.real)!r},{float(z.imag)!r}\n")


def read_snapshots(path) -> list[DiskProcessSnapshot]:
    groups: dict[tuple, list[complex]] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("seed,"):
                continue
            seed_s, n_s, rho_s, re_s, im_s = line.split(",")
            key = (int(seed_s), int(n_s), float(rho_s))
            groups.setdefault(key, [])
            if re_s:
                groups[key].append(complex(float(re_s), float(im_s)))
    return [
        DiskProcessSnapshot(n=n, rho=rho, zeros=np.asarray(zs, dtype=np.complex128),
                            seed=seed)
        for (seed, n, rho), zs in groups.items()
    ]
