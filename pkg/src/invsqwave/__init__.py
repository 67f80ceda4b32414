"""Wave operators, Riesz-type kernels, and dispersive experiments for the
Schroedinger operator with an inverse-square potential, L_a = -Lap + a/|x|^2.
"""

from .errors import (
    DomainError,
    SubcriticalCouplingError,
    WindowError,
    ResonanceError,
    PoleError,
    GridMismatchError,
    BudgetExceededError,
    NonconvergenceError,
    VerificationError,
)
from .spectral import (
    SpectralParams,
    ModeIndices,
    IndexInterval,
    make_params,
    mode_indices,
    admissible_p,
    theta_pd,
    OPERATOR_TAGS,
)
from .transforms import (
    RadialGrid,
    RadialFunction,
    make_log_grid,
    reciprocal_grid,
    bessel_transform,
    hankel_transform,
    apply_mode_waveop,
    spectral_multiplier,
)
from .waveop import (
    KernelQuery,
    CoeffTable,
    coeff_A,
    coeff_table,
    kernel_ktilde,
    kernel_quadrature_oracle,
    diagonal_limit,
    prefactor_exponents,
    exponent_sign_predicate,
    small_ratio_asymptote,
)
from .riesz import (
    FoxHInstance,
    RieszCoeffs,
    make_foxh_instance,
    mellin_symbol,
    riesz_coeffs,
    kernel_riesz,
    kernel_even,
    inverse_mellin_oracle,
    riesz_diagonal_limit,
)
from .multiplier import (
    SequenceSample,
    finite_diff,
    bc_report,
    smooth_sufficiency_check,
    product_rule_check,
    appendix_bound_check,
    bc_order,
)
from .harmonics import (
    AngularGrid,
    ModeExpansion,
    Field,
    make_angular_grid,
    mode_count,
    analyze,
    synthesize,
    apply_W,
    apply_function_of_La,
    dispersive_experiment,
    QuadraticPhase,
)
from .verify import run_suite, SUITES

__version__ = "0.1.0"
