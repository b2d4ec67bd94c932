"""Starting points for the simultaneous root iteration.

Radii come from the upper convex hull of (k, log|c_k|): for a hull edge from
index i to index j the j-i starting points sit on the circle of radius
(|c_i|/|c_j|)^(1/(j-i)), which tracks the moduli predicted by the Newton
polygon of the polynomial.  Angles are equispaced per circle with a
deterministic pseudo-random phase (splitmix64 of jitter_seed) so symmetric
configurations are broken identically on every run.
"""

from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int):
    """Yield an endless stream of uniform floats in [0, 1)."""
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        yield (z >> 11) * 2.0**-53


def _upper_hull(ks: np.ndarray, logs: np.ndarray) -> list[int]:
    """Indices into (ks, logs) forming the upper convex hull, x ascending."""
    hull: list[int] = []
    for idx in range(ks.size):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # pop j if it lies on or below the chord i -> idx
            cross = (ks[j] - ks[i]) * (logs[idx] - logs[i]) - (ks[idx] - ks[i]) * (logs[j] - logs[i])
            if cross >= 0.0:
                hull.pop()
            else:
                break
        hull.append(idx)
    return hull


def initial_guesses(coeffs: np.ndarray, jitter_seed: int = 0) -> np.ndarray:
    """Initial root estimates for a polynomial with coeffs c_0..c_n, c_n != 0.

    The caller must have removed exact zero roots (c_0 != 0), so every hull
    radius is finite and positive.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    n = c.size - 1
    if n < 1:
        raise ValueError("degree must be >= 1")
    mags = np.abs(c)
    nonzero = np.flatnonzero(mags > 0.0)
    ks = nonzero.astype(float)
    logs = np.log(mags[nonzero])

    hull = _upper_hull(ks, logs)
    jitter = _splitmix64(jitter_seed & _MASK64)

    z0 = np.empty(n, dtype=np.complex128)
    pos = 0
    for seg, (h0, h1) in enumerate(zip(hull[:-1], hull[1:])):
        i, j = int(ks[h0]), int(ks[h1])
        count = j - i
        radius = math.exp((logs[h0] - logs[h1]) / count)
        phase0 = 2.0 * math.pi * next(jitter) + 0.26 * seg
        m = np.arange(count)
        angles = 2.0 * math.pi * m / count + phase0
        z0[pos:pos + count] = radius * np.exp(1j * angles)
        pos += count
    assert pos == n
    return z0
