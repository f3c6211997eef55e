"""Excited-state dynamics of a two-level emitter at a band-gap edge.

Analytic amplitude evaluators (closed half-exponent form, entire-kernel double
series, rational-exponent pole-plus-cut representation), two independent
numerical oracles (product-integration Volterra solver, unitary discrete-mode
evolution), and the long-time law machinery, all cross-validated against each
other.
"""
__version__ = "0.1.0"

from ._kernels import USING_COMPILED_KERNELS
from .asymptotics import (AsymptoticLaw, asymptotic_amplitude, asymptotic_population,
                          critical_n, hybrid_population, large_ensemble_time_scale,
                          law_constant_based, law_root_based, relaxation_tail_coefficient)
from .closed_half import (QuarticSolution, amplitude_half, amplitude_half_relaxation,
                          leading_term_cancellation, population_half, quartic_roots,
                          rational_r)
from .curves import DecayCurve
from .errors import (DegenerateRootsError, DivergenceError, DomainError, GapCoverageError,
                     GapDecayError, GridResolutionError, InstabilityError, MultiplicityError,
                     NonConvergenceError, PoleError, QuadratureError, RootQualityError,
                     SeriesHorizonError, UsageError)
from .oracles import ModeGrid, VolterraConfig, mode_discretize, mode_evolve, volterra_solve
from .rational_rep import (RationalAlpha, RationalRep, amplitude_rational, build_poly_roots,
                           phi_kernel)
from .reservoir import (BoundState, DerivedConstants, ReservoirParams, SpectralPeak,
                        bound_state, correlation, derived_constants, dicke_scale,
                        relaxation_modes, special_amplitude, spectral_density, spectral_peak,
                        zero_lag)
from .series_gen import (SeriesControls, SeriesResult, amplitude_series,
                         amplitude_series_z1zero, population_series, series_horizon)
from .specfun import (WrightKernelParams, complex_gamma, scaled_erfc_kernel,
                      scaled_upper_gamma_half, wright_kernel)
from .validation import ValidationReport, run_validation
