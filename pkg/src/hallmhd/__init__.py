"""Periodic-box pseudo-spectral Hall-MHD solver and verification harness.

The package splits into a spectral core (grids, fields, operators, norms,
checkpoints), a constructor for the large annular-spectrum Beltrami data
family, an integrating-factor RK4 time stepper for the full system and its
background/perturbation split, and a diagnostics layer that verifies every
numerically checkable identity and estimate behind the solver.
"""

from .checkpoint import read_checkpoint, write_checkpoint
from .diagnostics import (
    BootstrapReport,
    SeriesCollector,
    TimeSeriesRecord,
    bootstrap_monitor,
    cancellation_residuals,
    commutator_check,
    energy_rate_decomposition,
    forcing_bound_table,
    hall_energy_residual,
    reformulation_check,
    write_series_csv,
)
from .evolution import (
    ALL_TERMS,
    BlowUpError,
    PhysicalParams,
    SchemeParams,
    State,
    TermToggles,
    Trajectory,
    background,
    background_forcing,
    background_residual,
    beltrami_forcing,
    cfl_dt,
    coupling_terms,
    hall_term,
    integrate,
    recover_pressure,
    rhs_full,
    rhs_perturbation,
    step,
)
from .fields import (
    SpectralScalarField,
    SpectralVectorField,
    random_scalar,
    random_solenoidal,
    to_physical,
    to_spectral,
    vector_to_physical,
    vector_to_spectral,
    zeros_scalar,
    zeros_vector,
)
from .grid import GridSpec, make_grid
from .initial_data import (
    EPSILON_MAX,
    ConditionReport,
    DataNormReport,
    DataRecipe,
    GridResolutionError,
    annular_bump,
    build_beltrami_data,
    build_seed,
    bump_profile,
    check_condition,
    check_grid_for_recipe,
    data_norms,
    helical_project,
    structure_residuals,
)
from .operators import (
    advect,
    curl,
    derivative,
    divergence,
    fractional_power,
    gradient,
    inner_l2,
    leray_project,
    linf,
    norm_l2,
    pointwise_cross,
    pointwise_product,
    sobolev_norm,
    spectral_l1,
)

__version__ = "0.1.0"
