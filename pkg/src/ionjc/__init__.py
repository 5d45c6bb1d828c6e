"""Dressed-state dephasing of a trapped-ion anti-Jaynes-Cummings system.

A small numpy/scipy library for the dynamics of the lower-state population
P_down(t) when the blue-sideband spin-boson coupling of a trapped ion is
dephased by a bosonic reservoir, along with rate tables, power-law exponent
fitting and collapse/revival diagnostics.  See README.md for a tour.
"""

from .analysis import (
    DecayEstimate,
    PowerLawFit,
    RevivalReport,
    extract_decay,
    fit_power_law,
    revival_report,
)
from .dynamics import (
    BlockTrajectories,
    PropagatorParams,
    TimeSeries,
    block_generator,
    coherence_envelope,
    default_time_grid,
    integrate_blocks_ode,
    pdown_trace,
    phenom_trace,
    propagate_block_analytic,
    propagator_params,
    real_coherence,
    timeseries_from_json,
    timeseries_to_csv,
    timeseries_to_json,
    to_radian_time,
)
from .errors import (
    InsufficientDataError,
    IntegrationError,
    OverdampedError,
    TruncationError,
    UnsupportedInitialStateError,
    ValidityWarning,
)
from .model import (
    HBAR,
    BlockState,
    Branch,
    DressedIndex,
    MotionalDistribution,
    RamanCoupling,
    RamanInputs,
    SystemParams,
    coherent_dist,
    dressed_eigenvalue,
    fock_dist,
    initial_block_state,
    normalized_rate,
    omega_tilde,
    p_down,
    rabi_freq,
    raman_coupling,
    thermal_dist,
)
from .reservoir import (
    RateTable,
    ReservoirSpec,
    calibrate_a,
    damping_kappa,
    rate,
    rate_highT,
    rate_split,
    rate_table,
    rate_table_to_csv,
    thermal_factor,
    thermal_factor_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR",
    "BlockState",
    "BlockTrajectories",
    "Branch",
    "DecayEstimate",
    "DressedIndex",
    "InsufficientDataError",
    "IntegrationError",
    "MotionalDistribution",
    "OverdampedError",
    "PowerLawFit",
    "PropagatorParams",
    "RamanCoupling",
    "RamanInputs",
    "RateTable",
    "ReservoirSpec",
    "RevivalReport",
    "SystemParams",
    "TimeSeries",
    "TruncationError",
    "UnsupportedInitialStateError",
    "ValidityWarning",
    "block_generator",
    "calibrate_a",
    "coherence_envelope",
    "coherent_dist",
    "damping_kappa",
    "default_time_grid",
    "dressed_eigenvalue",
    "extract_decay",
    "fit_power_law",
    "fock_dist",
    "initial_block_state",
    "integrate_blocks_ode",
    "normalized_rate",
    "omega_tilde",
    "p_down",
    "pdown_trace",
    "phenom_trace",
    "propagate_block_analytic",
    "propagator_params",
    "rabi_freq",
    "raman_coupling",
    "rate",
    "rate_highT",
    "rate_split",
    "rate_table",
    "rate_table_to_csv",
    "real_coherence",
    "revival_report",
    "thermal_dist",
    "thermal_factor",
    "thermal_factor_ratio",
    "timeseries_from_json",
    "timeseries_to_csv",
    "timeseries_to_json",
    "to_radian_time",
]
