"""Experiment driver: reproducible parallel Monte Carlo over the root solver.

Every trial derives its own counter-based stream from (master_seed,
trial_id), so results are bit-identical for a fixed configuration no matter
how trials are scheduled across workers.  Outputs are CSV files whose header
block echoes the configuration, plus a JSON report; everything except the
report's `timing` section is deterministic.

Failed trials (solver non-convergence, boundary roots in disk pipelines) are
re-drawn with a replacement stream (trial_id offset by 2^32 per round) and
counted; an experiment aborts when more than 0.1% of trials needed
replacement.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import limits, streams
from .coeffs import CoefficientModel, complex_gaussian, model_record, parse_model, sample_coefficients
from .extremal import ks_against_cdf, small_t_exponent, tail_report
from .polyroots import BoundaryRoot, NonConvergence, Polynomial, solve
from .process import (DiskProcessSnapshot, hurwitz_stability, in_disk_zeros,
                      predicted_bin_masses, radial_intensity_histogram,
                      stability_table, write_snapshots)

EXPERIMENT_KINDS = (
    "extremes", "limit_compare", "intensity", "stability",
    "figure1", "figure2", "coulomb_check", "tail", "gaf_moduli",
)

_MAX_REPLACEMENTS = 8
_FAILURE_BUDGET = 1e-3


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    model: CoefficientModel = field(default_factory=complex_gaussian)
    n: int = 500
    trials: int = 10_000
    master_seed: int = 1
    rho: float = 0.7
    bins: int = 40
    degrees: tuple = (200, 400)
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1 or self.n < 1 or self.bins < 1 or self.workers < 1:
            raise ValueError("trials, n, bins, workers must all be >= 1")

    def echo(self) -> dict:
        """All fields, for the JSON report."""
        d = {
            "kind": self.kind,
            "model": model_record(self.model),
            "n": self.n,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "rho": self.rho,
            "bins": self.bins,
            "degrees": ",".join(str(d) for d in self.degrees),
            "out": self.out or "",
            "workers": self.workers,
        }
        return d

    def data_echo(self) -> dict:
        """Fields that determine the data, for CSV headers.

        Excludes execution-only fields (out, workers) so data files are
        byte-identical across worker counts and output locations.
        """
        d = self.echo()
        del d["out"]
        del d["workers"]
        return d

    def output_path(self) -> Path:
        if self.out:
            return Path(self.out)
        stem = f"{self.kind}_{self.model.kind}_n{self.n}_t{self.trials}_s{self.master_seed}"
        ext = ".txt" if self.kind == "stability" else ".csv"
        return Path(stem + ext)


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    results: dict
    data_files: tuple
    timing: dict

    def to_json(self) -> str:
        payload = {
            "config": self.config,
            "results": self.results,
            "data_files": list(self.data_files),
            "timing": self.timing,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def write(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")


def report_path(config: ExperimentConfig) -> Path:
    return config.output_path().with_suffix(".report.json")


# ---------------------------------------------------------------------------
# per-trial workers (module level: picklable under any start method)

def _extremes_trial(args) -> tuple:
    record, n, master_seed, trial_id = args
    model = parse_model(record)
    for rnd in range(_MAX_REPLACEMENTS + 1):
        sid = streams.stream_id(trial_id, rnd)
        rng = streams.trial_stream(master_seed, trial_id, rnd)
        coeff = sample_coefficients(model, rng, n + 1)
        try:
            rs = solve(Polynomial(coeff))
        except NonConvergence:
            continue
        mods = rs.moduli
        return (trial_id, sid, float(mods.min()), float(mods.max()), rnd)
    raise RuntimeError(f"trial {trial_id}: no convergence after {_MAX_REPLACEMENTS} replacements")


def _intensity_trial(args) -> tuple:
    record, n, rho, master_seed, trial_id = args
    model = parse_model(record)
    for rnd in range(_MAX_REPLACEMENTS + 1):
        sid = streams.stream_id(trial_id, rnd)
        rng = streams.trial_stream(master_seed, trial_id, rnd)
        coeff = sample_coefficients(model, rng, n + 1)
        try:
            snap = in_disk_zeros(solve(Polynomial(coeff)), rho, n=n, seed=sid)
        except (NonConvergence, BoundaryRoot):
            continue
        return (trial_id, sid, snap.zeros, rnd)
    raise RuntimeError(f"trial {trial_id}: no clean snapshot after {_MAX_REPLACEMENTS} replacements")


def _stability_trial(args):
    record, rho, degrees, seed = args
    return hurwitz_stability(parse_model(record), seed, rho, degrees)


def _gaf_trial(args) -> tuple:
    rho, master_seed, trial_id = args
    rng = streams.trial_stream(master_seed, trial_id)
    m = limits.sample_gaf_min(rng)
    count = limits.sample_gaf_moduli(rng, rho).moduli.size
    return (trial_id, m, count)


def _parallel_map(func, argses, workers: int) -> list:
    if workers <= 1 or len(argses) <= 1:
        return [func(a) for a in argses]
    chunk = max(1, len(argses) // (workers * 16))
    with multiprocessing.Pool(workers) as pool:
        out = pool.map(func, argses, chunksize=chunk)
    return out


def _check_failures(rows, trials: int, replacement_index: int) -> int:
    failed = sum(1 for r in rows if r[replacement_index] > 0)
    if failed > _FAILURE_BUDGET * trials:
        raise RuntimeError(
            f"{failed} of {trials} trials needed replacement streams "
            f"(> {100 * _FAILURE_BUDGET}% budget)")
    return failed


# ---------------------------------------------------------------------------
# histogram (density-normalized)

def histogram(values, bins: int, value_range: tuple[float, float]):
    """(edges, densities) with the densities integrating to 1 over the range.

    Empty input (or no values inside the range) gives all-zero densities.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    lo, hi = value_range
    if not hi > lo:
        raise ValueError("range must be non-degenerate")
    values = np.asarray(values, dtype=float)
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    total = counts.sum()
    widths = np.diff(edges)
    if total == 0:
        return edges, np.zeros(bins)
    return edges, counts / (total * widths)


def _write_histogram_csv(path, edges, densities, header: dict) -> None:
    with open(path, "w") as fh:
        for key, val in header.items():
            fh.write(f"# {key}={val}\n")
        fh.write("bin_lo,bin_hi,density\n")
        for lo, hi, d in zip(edges[:-1], edges[1:], densities):
            fh.write(f"{float(lo)!r},{float(hi)!r},{float(d)!r}\n")


# ---------------------------------------------------------------------------
# experiment dispatch

def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Execute one experiment, write its data files, return the report.

    Raises on certificate failures (solver non-convergence beyond the
    replacement budget, quadrature non-convergence, >0.1% failed trials); the
    CLI maps that to a nonzero exit code.
    """
    t0 = time.perf_counter()
    runner = _RUNNERS[config.kind]
    results, data_files = runner(config)
    wall = time.perf_counter() - t0
    timing = {"wall_seconds": wall}
    if config.kind in ("extremes", "intensity", "figure1", "figure2", "tail"):
        timing["trials_per_second"] = config.trials / wall if wall > 0 else math.inf
    report = ExperimentReport(config=config.echo(), results=results,
                              data_files=tuple(str(f) for f in data_files),
                              timing=timing)
    report.write(report_path(config))
    return report


def _run_extremes_rows(model: CoefficientModel, n: int, trials: int,
                       master_seed: int, workers: int):
    record = model_record(model)
    argses = [(record, n, master_seed, tid) for tid in range(trials)]
    rows = _parallel_map(_extremes_trial, argses, workers)
    rows.sort(key=lambda r: r[0])
    failed = _check_failures(rows, trials, replacement_index=4)
    return rows, failed


def _write_extremes_csv(path, rows, n: int, record: str, header: dict) -> None:
    with open(path, "w") as fh:
        for key, val in header.items():
            fh.write(f"# {key}={val}\n")
        fh.write("trial_id,n,x1,xn,model,seed\n")
        for tid, sid, x1, xn, _ in rows:
            fh.write(f"{tid},{n},{x1!r},{xn!r},{record},{sid}\n")


def read_extremes_csv(path):
    """(trial_ids, x1, xn) arrays from an extremes CSV."""
    tids, x1s, xns = [], [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("trial_id"):
                continue
            parts = line.split(",")
            tids.append(int(parts[0]))
            x1s.append(float(parts[2]))
            xns.append(float(parts[3]))
    return np.asarray(tids), np.asarray(x1s), np.asarray(xns)


def _extremes(config: ExperimentConfig):
    rows, failed = _run_extremes_rows(config.model, config.n, config.trials,
                                      config.master_seed, config.workers)
    out = config.output_path()
    _write_extremes_csv(out, rows, config.n, model_record(config.model),
                        config.data_echo())
    x1 = np.array([r[2] for r in rows])
    xn = np.array([r[3] for r in rows])
    results = {
        "trials": config.trials,
        "failed_trials": failed,
        "x1_mean": float(x1.mean()),
        "x1_min": float(x1.min()),
        "x1_max": float(x1.max()),
        "xn_mean_log": float(np.log(xn).mean()),
        "xn_max": float(xn.max()),
    }
    return results, [out]


def _tail(config: ExperimentConfig):
    results, files = _extremes(config)
    _, x1, xn = read_extremes_csv(config.output_path())
    rep = tail_report(xn, config.model, t_grid=np.geomspace(0.01, 0.1, 10))
    try:
        rep["x1_small_t_slope"] = small_t_exponent(x1, np.geomspace(0.01, 0.1, 10))
    except Exception:
        rep["x1_small_t_slope"] = None
    results["tail"] = rep
    return results, files


def _limit_compare(config: ExperimentConfig):
    grid = np.linspace(0.0, 1.0, config.bins + 1)[:-1]
    evaluator = limits.LimitCdf(budget=1e-12)
    table = evaluator.tabulate(grid)
    out = config.output_path()
    with open(out, "w") as fh:
        for key, val in config.data_echo().items():
            fh.write(f"# {key}={val}\n")
        fh.write("t,F,f\n")
        for t, f_val, d_val in table:
            fh.write(f"{float(t)!r},{float(f_val)!r},{float(d_val)!r}\n")
    results = {"grid_points": int(config.bins), "budget": 1e-12,
               "F_max": float(table[:, 1].max())}
    return results, [out]


def _intensity(config: ExperimentConfig):
    record = model_record(config.model)
    argses = [(record, config.n, config.rho, config.master_seed, tid)
              for tid in range(config.trials)]
    rows = _parallel_map(_intensity_trial, argses, config.workers)
    rows.sort(key=lambda r: r[0])
    failed = _check_failures(rows, config.trials, replacement_index=3)
    snaps = [DiskProcessSnapshot(n=config.n, rho=config.rho, zeros=z, seed=sid)
             for _, sid, z, _ in rows]
    out = config.output_path()
    header = [f"{k}={v}" for k, v in config.data_echo().items()]
    write_snapshots(snaps, out, header_lines=header)

    edges = np.linspace(0.0, config.rho, config.bins + 1)
    mean, stderr = radial_intensity_histogram(snaps, edges)
    predicted = predicted_bin_masses(edges)
    counts = np.array([s.count for s in snaps], dtype=float)
    results = {
        "trials": config.trials,
        "failed_trials": failed,
        "mean_count": float(counts.mean()),
        "count_stderr": float(counts.std(ddof=1) / math.sqrt(counts.size)),
        "expected_count": limits.expected_count(config.rho),
        "bin_edges": edges.tolist(),
        "bin_mean": mean.tolist(),
        "bin_stderr": stderr.tolist(),
        "bin_predicted": predicted.tolist(),
    }
    return results, [out]


def _stability(config: ExperimentConfig):
    record = model_record(config.model)
    argses = [(record, config.rho, config.degrees, seed)
              for seed in range(config.trials)]
    reports = _parallel_map(_stability_trial, argses, config.workers)
    reports.sort(key=lambda r: r.seed)
    out = config.output_path()
    header = "".join(f"# {k}={v}\n" for k, v in config.data_echo().items())
    Path(out).write_text(header + stability_table(reports))
    stable = [r.counts_equal and r.max_displacement < 1e-6 for r in reports]
    results = {
        "seeds": config.trials,
        "stable_fraction": float(np.mean(stable)),
        "jitter_events": int(sum(r.jitter_events for r in reports)),
        "worst_displacement": float(max(r.max_displacement for r in reports)),
        "count_mismatches": int(sum(not r.counts_equal for r in reports)),
    }
    return results, [out]


def _figure1(config: ExperimentConfig):
    out = config.output_path()
    files = []
    decile_masses = {}
    for tag, model in (("exponential", parse_model("exponential_real:mean=1")),
                       ("radial", parse_model("radial_exponential"))):
        rows, failed = _run_extremes_rows(model, config.n, config.trials,
                                          config.master_seed, config.workers)
        x1 = np.array([r[2] for r in rows])
        edges, dens = histogram(x1, config.bins, (0.0, 1.0))
        path = out.with_name(f"{out.stem}_{tag}{out.suffix}")
        header = dict(config.data_echo(), model=model_record(model), panel=tag)
        _write_histogram_csv(path, edges, dens, header)
        files.append(path)
        inside = x1[(x1 >= 0) & (x1 < 1.0)]
        decile_masses[tag] = float(np.mean(inside < 0.1)) if inside.size else 0.0
    results = {
        "trials": config.trials,
        "first_decile_mass_exponential": decile_masses["exponential"],
        "first_decile_mass_radial": decile_masses["radial"],
        "radial_vanishes_at_zero": decile_masses["radial"] < 0.5 * decile_masses["exponential"],
    }
    return results, files


def _figure2(config: ExperimentConfig):
    model = complex_gaussian()
    rows, failed = _run_extremes_rows(model, config.n, config.trials,
                                      config.master_seed, config.workers)
    x1 = np.array([r[2] for r in rows])
    edges, dens = histogram(x1, config.bins, (0.0, 1.0))
    out = config.output_path()
    header = dict(config.data_echo(), model=model_record(model))
    _write_histogram_csv(out, edges, dens, header)

    centers = 0.5 * (edges[:-1] + edges[1:])
    limit_dens = limits.limit_density(centers)
    sup_dist = float(np.abs(dens - limit_dens).max())
    density_path = out.with_name(f"{out.stem}_limit_density{out.suffix}")
    with open(density_path, "w") as fh:
        for key, val in header.items():
            fh.write(f"# {key}={val}\n")
        fh.write("t,f\n")
        for t, d in zip(centers, limit_dens):
            fh.write(f"{float(t)!r},{float(d)!r}\n")
    results = {
        "trials": config.trials,
        "failed_trials": failed,
        "sup_distance_histogram_vs_density": sup_dist,
    }
    return results, [out, density_path]


def _coulomb_check(config: ExperimentConfig):
    # analytic single-root cases
    single = {}
    for z in (0.0, 1.0, 0.5 + 0.5j):
        got = limits.coulomb_log_density([z])
        want = -2.0 * math.log(1.0 + abs(z) ** 2)
        single[str(z)] = abs(got - want)
    # rotation invariance over random configurations
    worst_rot = 0.0
    for tid in range(config.trials):
        rng = streams.trial_stream(config.master_seed, tid)
        pts = rng.uniform(-0.6, 0.6, config.n) + 1j * rng.uniform(-0.6, 0.6, config.n)
        base = limits.coulomb_log_density(pts)
        for phi in (math.pi / 7, 1.0):
            rotated = limits.coulomb_log_density(pts * np.exp(1j * phi))
            worst_rot = max(worst_rot, abs(rotated - base) / max(1.0, abs(base)))
    results = {
        "single_root_errors": single,
        "worst_single_root_error": max(single.values()),
        "rotation_invariance_worst_rel": worst_rot,
        "configurations": config.trials,
        "points_per_configuration": config.n,
    }
    out = config.output_path()
    with open(out, "w") as fh:
        for key, val in config.data_echo().items():
            fh.write(f"# {key}={val}\n")
        fh.write("check,value\n")
        for key, val in single.items():
            fh.write(f"single_root_error_{key},{val!r}\n")
        fh.write(f"rotation_invariance_worst_rel,{worst_rot!r}\n")
    return results, [out]


def _gaf_moduli(config: ExperimentConfig):
    argses = [(config.rho, config.master_seed, tid) for tid in range(config.trials)]
    rows = _parallel_map(_gaf_trial, argses, config.workers)
    rows.sort(key=lambda r: r[0])
    out = config.output_path()
    with open(out, "w") as fh:
        for key, val in config.data_echo().items():
            fh.write(f"# {key}={val}\n")
        fh.write("trial_id,min_modulus,count_below_rho\n")
        for tid, m, cnt in rows:
            fh.write(f"{tid},{m!r},{cnt}\n")
    mins = np.array([r[1] for r in rows])
    counts = np.array([r[2] for r in rows], dtype=float)
    results = {
        "trials": config.trials,
        "ks_min_vs_limit_cdf": float(ks_against_cdf(mins, limits.limit_cdf)),
        "mean_count": float(counts.mean()),
        "count_stderr": float(counts.std(ddof=1) / math.sqrt(counts.size)),
        "expected_count": limits.expected_count(config.rho),
    }
    return results, [out]


_RUNNERS = {
    "extremes": _extremes,
    "limit_compare": _limit_compare,
    "intensity": _intensity,
    "stability": _stability,
    "figure1": _figure1,
    "figure2": _figure2,
    "coulomb_check": _coulomb_check,
    "tail": _tail,
    "gaf_moduli": _gaf_moduli,
}


# ---------------------------------------------------------------------------
# plain-text configuration files

def load_config_file(path) -> dict:
    """key=value lines (# comments allowed) into a flat dict of strings."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line {raw!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def config_from_mapping(kind: str, mapping: dict) -> ExperimentConfig:
    """Build a config from string-valued keys (config file or CLI merge)."""
    kwargs = {"kind": kind}
    if "model" in mapping and mapping["model"]:
        kwargs["model"] = parse_model(mapping["model"])
    for key, conv in (("n", int), ("trials", int), ("master_seed", int),
                      ("rho", float), ("bins", int), ("workers", int)):
        if key in mapping and mapping[key] not in (None, ""):
            kwargs[key] = conv(mapping[key])
    if "seed" in mapping and mapping["seed"] not in (None, ""):
        kwargs["master_seed"] = int(mapping["seed"])
    if "degrees" in mapping and mapping["degrees"] not in (None, ""):
        kwargs["degrees"] = tuple(int(x) for x in str(mapping["degrees"]).split(","))
    if "out" in mapping and mapping["out"]:
        kwargs["out"] = str(mapping["out"])
    return ExperimentConfig(**kwargs)
