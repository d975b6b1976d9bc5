"""Capacity of ligand-receptor molecular communication channels."""
from .bounds import (
    BoundInputs,
    VacuousBoundWarning,
    asymptotic_capacity,
    binary_entropy,
    kl_bound_case,
    kl_upper_bound,
    lower_bound,
    symmetrized_kl,
)
from .model import (
    BlockingParams,
    ConfigurationError,
    DiscreteChannel,
    LigandParams,
    ScenarioConfig,
    binding_prob,
    binomial_rows,
    blocking_probs,
    build_blocking_channel,
    build_channel,
    channel_row,
)
from .scenarios import (
    ResourceBudgetError,
    SweepRecord,
    SweepSpec,
    ls_capacity,
    run_sweep,
    ts_blocking_capacity,
    ts_capacity,
)
from .solver import (
    CapacityResult,
    InfeasibleBudgetError,
    SolverOptions,
    blahut_arimoto,
    blahut_arimoto_constrained,
    capacity_certificate,
    mutual_information,
)
from .tables import format_csv, preset, read_spec_file, write_csv

__version__ = "0.1.0"
