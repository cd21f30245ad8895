"""Stabilized exponential Runge-Kutta solvers for the 2-D Swift-Hohenberg
gradient flow under Fourier pseudo-spectral collocation, with comparison
schemes, energy diagnostics, and an executable verification harness."""

__version__ = "0.1.0"

from .energy import EnergyTrace, check_monotone, energy, kappa_rule, stability_bounds
from .grid import (
    Grid,
    GridError,
    GridMismatchError,
    RealField,
    SpectralField,
    apply_divergence,
    apply_gradient,
    apply_laplacian,
    forward,
    inner,
    inverse,
    make_grid,
    norm_l2,
    norm_linf,
)
from .operators import (
    GFamily,
    LKappa,
    apply_g_family,
    apply_phi1,
    apply_semigroup,
    h1,
    h2,
    make_lkappa,
    phi,
)
from .scenarios import SCENARIOS, ScenarioConfig, initial_data, preset
from .schemes import (
    SCHEMES,
    BlowUpError,
    SchemeConfig,
    SimState,
    make_stepper,
    n_kappa,
    run,
    step_erk22,
    step_erk_general,
    step_etd1,
    step_etdrk2,
    step_imex1,
    step_imexrk22,
)
from .verify import (
    OrderReport,
    SweepSpec,
    check_lipschitz,
    check_prop31,
    check_prop32,
    check_prop33,
    estimate_sobolev_constant,
    fit_order,
    measure_order,
)
