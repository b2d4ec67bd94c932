"""Shared registry of the heavy acceptance ensembles, with disk caching.

The acceptance criteria need Monte Carlo ensembles that take minutes to
generate (10^5 degree-500 solves per coefficient model).  Each ensemble is
produced through the ordinary experiment harness and cached as its CSV under
tests/_data_cache; reruns load the cache.  Regenerate from scratch by
deleting the directory or running `python tests/_acceptance_data.py`.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kacroots.coeffs import complex_gaussian, exponential_real, real_gaussian
from kacroots.harness import ExperimentConfig, run_experiment

CACHE_DIR = Path(__file__).resolve().parent / "_data_cache"

ENSEMBLES: dict[str, ExperimentConfig] = {
    # 10^5-trial extremal ensembles at n=500 (criteria 3, 5, 6)
    "cg_extremes": ExperimentConfig(kind="extremes", model=complex_gaussian(),
                                    n=500, trials=100_000, master_seed=1001),
    "exp_extremes": ExperimentConfig(kind="extremes", model=exponential_real(1.0),
                                     n=500, trials=100_000, master_seed=1002),
    "rg_extremes": ExperimentConfig(kind="extremes", model=real_gaussian(1.0),
                                    n=500, trials=100_000, master_seed=1003),
    # independent 2000-trial ensembles at n=100 (criterion 2)
    "cg100_a": ExperimentConfig(kind="extremes", model=complex_gaussian(),
                                n=100, trials=2000, master_seed=1004),
    "cg100_b": ExperimentConfig(kind="extremes", model=complex_gaussian(),
                                n=100, trials=2000, master_seed=1005),
    # in-disk snapshots at n=500 (criteria 4, 8)
    "cg_snapshots": ExperimentConfig(kind="intensity", model=complex_gaussian(),
                                     n=500, trials=10_000, rho=0.8, bins=8,
                                     master_seed=1006),
    # shared-stream stability over 10^3 seeds (criterion 7)
    "stability": ExperimentConfig(kind="stability", model=complex_gaussian(),
                                  trials=1000, degrees=(200, 400), rho=0.8,
                                  master_seed=1007),
    # direct draws from the limiting moduli law (criterion 10)
    "gaf": ExperimentConfig(kind="gaf_moduli", trials=10_000, rho=0.7,
                            master_seed=1008),
    # figure reproductions (criterion 12 and the histogram-vs-density check)
    "figure1": ExperimentConfig(kind="figure1", n=500, trials=10_000, bins=40,
                                master_seed=1009),
    "figure2": ExperimentConfig(kind="figure2", n=500, trials=10_000, bins=40,
                                master_seed=1010),
}


def cache_path(name: str) -> Path:
    cfg = ENSEMBLES[name]
    ext = ".txt" if cfg.kind == "stability" else ".csv"
    return CACHE_DIR / f"{name}{ext}"


def ensure(name: str) -> Path:
    """Path of the cached data for `name`, generating it if missing.

    The report JSON is written after the data file, so its presence marks a
    complete cache entry.
    """
    path = cache_path(name)
    report = path.with_suffix(".report.json")
    if path.exists() and report.exists():
        return path
    CACHE_DIR.mkdir(exist_ok=True)
    cfg = ENSEMBLES[name]
    run_experiment(ExperimentConfig(**{**cfg.__dict__, "out": str(path)}))
    return path


def report_of(name: str) -> dict:
    path = ensure(name).with_suffix(".report.json")
    import json
    return json.loads(path.read_text())


def main(argv=None) -> int:
    names = argv[1:] if argv and len(argv) > 1 else list(ENSEMBLES)
    unknown = [n for n in names if n not in ENSEMBLES]
    if unknown:
        print(f"unknown ensemble names: {', '.join(unknown)}", file=sys.stderr)
        return 2
    for name in names:
        path = cache_path(name)
        if path.exists():
            print(f"{name}: cached at {path}")
            continue
        print(f"{name}: generating ...", flush=True)
        ensure(name)
        print(f"{name}: wrote {path}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
