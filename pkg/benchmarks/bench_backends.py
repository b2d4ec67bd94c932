#!/usr/bin/env python3
"""Benchmark the compiled solver kernel against the pure-numpy fallback.

Times full certified solves on complex-Gaussian coefficient draws at several
degrees and reports per-solve time plus trials/second at n=500 (the figure
the experiment reports record).  With --update-baseline the n=500 compiled
throughput is stored; on later runs the script warns (exit 3) if throughput
moved by more than the +-30% regression guard.

Usage:
    python benchmarks/bench_backends.py [--degrees 64,256,500] [--repeats 5]
                                        [--baseline benchmarks/baseline.json]
                                        [--update-baseline]
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kacroots._kernels import available_backends, initial_guesses, load_backend  # noqa: E402

GUARD = 0.30


def coefficient_draw(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)) / np.sqrt(2)


def time_backend(backend, n: int, repeats: int) -> float:
    """Median seconds per solve."""
    times = []
    for rep in range(repeats):
        c = coefficient_draw(n, seed=1000 + rep)
        z0 = initial_guesses(c)
        t0 = time.perf_counter()
        roots, residuals, sweeps, bad = backend.solve_kernel(c, z0)
        times.append(time.perf_counter() - t0)
        if bad or residuals.max() > 1e-10:
            raise RuntimeError(f"benchmark solve failed at n={n}")
    return float(np.median(times))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degrees", default="64,256,500")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--baseline", default=str(Path(__file__).parent / "baseline.json"))
    ap.add_argument("--update-baseline", action="store_true")
    args = ap.parse_args(argv)

    degrees = [int(d) for d in args.degrees.split(",")]
    names = available_backends()
    print(f"backends: {', '.join(names)}")
    print(f"{'n':>6} " + " ".join(f"{name:>16}" for name in names) + f" {'speedup':>9}")

    per_solve = {}
    for n in degrees:
        row = []
        for name in names:
            sec = time_backend(load_backend(name), n, args.repeats)
            per_solve[(name, n)] = sec
            row.append(sec)
        speed = row[-1] / row[0] if len(row) > 1 else 1.0
        print(f"{n:>6} " + " ".join(f"{1e3 * sec:>13.2f} ms" for sec in row)
              + f" {speed:>8.1f}x")

    ref = 500 if 500 in degrees else degrees[-1]
    fast = names[0]
    throughput = 1.0 / per_solve[(fast, ref)]
    print(f"\n{fast} backend: {throughput:.1f} trials/second at n={ref}")

    baseline_path = Path(args.baseline)
    if args.update_baseline:
        baseline_path.write_text(json.dumps(
            {"backend": fast, "n": ref, "trials_per_second": throughput}, indent=2) + "\n")
        print(f"baseline written to {baseline_path}")
        return 0
    if baseline_path.exists():
        base = json.loads(baseline_path.read_text())
        old = base["trials_per_second"]
        change = throughput / old - 1.0
        print(f"baseline {old:.1f} trials/s, change {100 * change:+.1f}%")
        if abs(change) > GUARD:
            print(f"regression guard: |{100 * change:.1f}%| > {100 * GUARD:.0f}%",
                  file=sys.stderr)
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
