"""Monte Carlo laboratory for extremal roots of random polynomials.

Samples polynomials with i.i.d. coefficients, computes all complex roots
with certified residuals, and checks the distributional facts about the
extremal root moduli: the reciprocal law between largest and smallest, heavy
tails governed by the coefficient law at zero, convergence of the in-disk
zero process, and (for complex Gaussian coefficients) the exact limiting
CDF, intensity, and moduli law.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .coeffs import (CoefficientModel, cauchy, complex_gaussian,
                     declared_zero_exponent, exponential_real,
                     growth_diagnostic, make_model, model_record, modulus_cdf,
                     parse_model, radial_exponential, real_gaussian,
                     sample_coefficient, sample_coefficients, uniform_annulus,
                     uniform_real)
from .extremal import (ExtremalSample, TailEstimate, extremes_of,
                       hill_estimator, ks_against_cdf, ks_critical_value,
                       ks_two_sample, small_t_exponent, tail_report,
                       truncated_moment_curve)
from .harness import ExperimentConfig, ExperimentReport, histogram, run_experiment
from .limits import (GafModuliSample, LimitCdf, bergman_intensity,
                     bergman_kernel, coulomb_log_density, expected_count,
                     limit_cdf, limit_density, sample_gaf_min,
                     sample_gaf_moduli)
from .polyroots import (BoundaryRoot, DegenerateInput, NonConvergence,
                        Polynomial, RootSet, SolveOptions, ZeroConstantTerm,
                        count_zeros_in_disk, matched_distances,
                        polynomial_from_roots, reverse, solve)
from .process import (DiskProcessSnapshot, StabilityReport, hurwitz_stability,
                      in_disk_zeros, linear_statistic, monomial,
                      predicted_bin_masses, radial_bump,
                      radial_intensity_histogram)
from .streams import stream_id, trial_stream
