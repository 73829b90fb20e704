"""Logarithmic-order Sobolev seminorms on sampled functions, with an inequality-verification harness."""

from .errors import InvariantError, ParameterError
from .grid import (AnalyticFunction, Domain, SampledFunction, abs_kink, affine, cell_index, constant,
                   evaluate, gaussian, indicator_ball, indicator_union, lp_norm, sample, step_sum,
                   trig_poly, truncated_power, weak_lp_quasinorm)
from .quadrature import KernelSpec, RadialScheme, build_radial_scheme, kernel_mass, kernel_mass_exact
from .seminorms import (SeminormParams, default_scheme, truncated_q_seminorm, w_norm, w_seminorm,
                        w_tail_bound, w_tail_exact, x_norm, x_seminorm)
from .spectral import (Spectrum, compute_spectrum, equivalence_ratio, kernel_moment,
                       plancherel_seminorm_sq, spectral_x_norm)
from .maximal import (hajlasz_check, hl_maximal, holder_pair_ratio, lusin_converse_seminorm,
                      lusin_functional, lusin_pair_ratio, make_pairs, phi_star, frac_functional)

__version__ = "0.1.0"

__all__ = [
    "InvariantError", "ParameterError",
    "AnalyticFunction", "Domain", "SampledFunction", "abs_kink", "affine", "cell_index", "constant",
    "evaluate", "gaussian", "indicator_ball", "indicator_union", "lp_norm", "sample", "step_sum",
    "trig_poly", "truncated_power", "weak_lp_quasinorm",
    "KernelSpec", "RadialScheme", "build_radial_scheme", "kernel_mass", "kernel_mass_exact",
    "SeminormParams", "default_scheme", "truncated_q_seminorm", "w_norm", "w_seminorm",
    "w_tail_bound", "w_tail_exact", "x_norm", "x_seminorm",
    "Spectrum", "compute_spectrum", "equivalence_ratio", "kernel_moment", "plancherel_seminorm_sq",
    "spectral_x_norm",
    "hajlasz_check", "hl_maximal", "holder_pair_ratio", "lusin_converse_seminorm", "lusin_functional",
    "lusin_pair_ratio", "make_pairs", "phi_star", "frac_functional",
]
