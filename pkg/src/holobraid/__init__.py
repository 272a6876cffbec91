"""Cyclic representations of quantum gl2 at odd roots of unity, the braiding
map on central characters, and numerically verified holonomy R-matrices."""

from .roots import RootContext, primitive_root
from .qseries import (Series, check_f_functional, pairing_monomial, phi_orbit,
                      phi_series, q_factorial_b, q_shift_coefficient_check,
                      series_f, series_f_product)
from .cyclic import (ClockShift, RepMatrices, RepParams, build_rep, clock_shift,
                     gauge_U, is_generic, lift_character, z0_character)
from .glstar import (IDENTITY_CHAR, Z0Char, beta_forward, beta_inverse,
                     conserved_quantities, glstar_multiply, matrix_route_beta,
                     refactor_gl2)
from .intertwiner import (ChiData, Intertwiner, braided_rep_pair,
                          check_generator_action, chi_data, closed_form_R,
                          compare_up_to_scalar, coproduct_rep,
                          det_exponent_probe, solve_intertwiner)
from .hybe import ColoringTriple, derive_colorings, hybe_residual, s0_diagnostic
from .sampling import sample_params
from .suite import SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "RootContext", "primitive_root",
    "Series", "series_f", "series_f_product", "check_f_functional",
    "phi_series", "phi_orbit", "q_factorial_b", "pairing_monomial",
    "q_shift_coefficient_check",
    "RepParams", "RepMatrices", "ClockShift", "clock_shift", "build_rep",
    "z0_character", "lift_character", "gauge_U", "is_generic",
    "Z0Char", "IDENTITY_CHAR", "glstar_multiply", "beta_forward",
    "beta_inverse", "conserved_quantities", "refactor_gl2", "matrix_route_beta",
    "Intertwiner", "ChiData", "coproduct_rep", "braided_rep_pair",
    "solve_intertwiner", "chi_data", "closed_form_R", "compare_up_to_scalar",
    "check_generator_action", "det_exponent_probe",
    "ColoringTriple", "derive_colorings", "hybe_residual", "s0_diagnostic",
    "sample_params", "SuiteConfig", "run_suite",
]
