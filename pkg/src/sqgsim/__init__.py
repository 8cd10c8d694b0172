"""Pseudo-spectral simulator and experiment harness for critically
dissipative surface quasi-geostrophic dynamics on the 2-torus."""

__version__ = "0.1.0"

from .errors import (
    BlowUpError,
    CFLViolationError,
    CheckpointFormatError,
    ConfigError,
    PaddingError,
    SQGError,
)
from .fields import (
    Grid,
    SpectralField,
    from_function,
    from_physical,
    grid_for,
    resample,
    single_mode,
    to_physical,
)
from .operators import cutoff, dealias, fractional_laplacian, gradient, riesz_perp
from .norms import c3_lattice_norm, hamiltonian, inner_hs, lp_norm, sobolev_norm, sobolev_sq
from .weights import ConvexWeight, power, quadratic, smoothed_four_thirds
from .commutator import commutator_apply, exact_product, weak_nonlinearity_both_sides
from .solver import SolverConfig, Trajectory, nonlinear_term, run, run_recorded, step, u_max
from .checkpoint import read_checkpoint, write_checkpoint
from .diagnostics import (
    DEFAULT_C_LIST,
    DEFAULT_P_LIST,
    DiagnosticsRecord,
    cordoba_check,
    dissipation_scale_pair,
    energy_balance_residual,
    equiintegrability_functional,
    higher_bound_check,
    record,
    records_for_trajectory,
    tail_sum,
    write_diagnostics_csv,
)
from .tailbound import (
    SOBOLEV_EMBED_CONSTANT,
    TailBoundReport,
    calibrate_sobolev_constant,
    find_r_eps,
    tail_bound_report,
)
from .initial_data import InitialDatumSpec, make_datum
from .sweeps import (
    RateResult,
    SweepResult,
    SweepSpec,
    gronwall_decay_check,
    grid_n_for_nu,
    predicted_rate,
    rate_experiment,
    run_sweep,
    small_time_dissipation_profile,
)
