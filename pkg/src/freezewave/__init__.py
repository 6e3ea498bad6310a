"""Freezing method with Lie/Strang operator splitting for viscous Burgers waves."""
from .driver import (
    ConvergenceRow,
    ConvergenceTable,
    DivergenceError,
    FitError,
    RunReport,
    convergence_study,
    error_profile,
    fit_order,
    run_to_steady,
    shifted_steady_error,
    steady_error,
)
from .exact import WaveParams, profile_on_grid, rough_reference, traveling_wave
from .grid import (
    BoundaryData,
    Grid1D,
    central_diff,
    discrete_laplacian,
    inner_product,
    l2_norm,
    make_grid,
)
from .hyperbolic import (
    HyperbolicContext,
    burgers_flux,
    kappa_from_initial,
    kt_rhs,
    kt_slopes,
    minmod,
    rusanov_rhs,
)
from .parabolic import SingularSystemError, backward_euler_step, crank_nicolson_step, tridiagonal_solve
from .phase import DegeneratePhase, PhaseCondition, PhaseKind, fixed_phase_speed, orthogonal_speed
from .splitting import (
    FrozenState,
    Scheme,
    SchemeConfig,
    lie_step,
    make_config,
    phi_A_be,
    phi_A_cn,
    phi_B_kt_fixed,
    phi_B_kt_orth,
    phi_B_rs_fixed,
    phi_B_rs_orth,
    kt_heun_update,
    rs_euler_update,
    step,
    strang_step,
)

__version__ = "0.1.0"
