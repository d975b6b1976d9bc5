"""Level (LS) and type (TS) signalling scenarios and parameter sweeps."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .bounds import BoundInputs, kl_upper_bound, lower_bound
from .model import (
    BlockingParams,
    ConfigurationError,
    LigandParams,
    ScenarioConfig,
    build_blocking_channel,
    build_channel,
)
from .solver import CapacityResult, SolverOptions, blahut_arimoto_constrained

__all__ = [
    "ResourceBudgetError",
    "SweepSpec",
    "SweepRecord",
    "ls_capacity",
    "ts_capacity",
    "ts_blocking_capacity",
    "run_sweep",
]

log = logging.getLogger(__name__)

# float64 entries of the joint transition matrix (about 400 MB)
MAX_JOINT_ENTRIES = 50_000_000


class ResourceBudgetError(MemoryError):
    pass


def ls_capacity(
    config: ScenarioConfig,
    params: LigandParams,
    opts: SolverOptions | None = None,
    grid_points: int = 201,
) -> CapacityResult:
    """Single colony of ``nN`` receptors, peak ``A_s`` and mean budget ``alpha``."""
    channel = build_channel(config, params, grid_points)
    return blahut_arimoto_constrained(channel, config.alpha, opts)


def ts_capacity(
    config: ScenarioConfig,
    params: LigandParams,
    opts: SolverOptions | None = None,
    grid_points: int = 201,
) -> CapacityResult:
    """``m`` independent colonies: ``m`` times the capacity of one colony.

    The returned distribution is the optimal law of a single colony input.
    """
    one = ls_capacity(config.colony(), params, opts, grid_points)
    if config.m == 1:
        return one
    return replace(one, capacity=config.m * one.capacity, gap=config.m * one.gap)


def ts_blocking_capacity(
    config: ScenarioConfig,
    params: BlockingParams,
    opts: SolverOptions | None = None,
    grid_per_dim: int = 41,
    *,
    full_peak: bool = False,
    max_entries: int = MAX_JOINT_ENTRIES,
) -> CapacityResult:
    """Joint capacity of ``m`` colonies whose receptors block each other.

    Every colony's input has mean budget ``alpha / m``. Its peak is
    ``A_s / m`` unless ``full_peak`` is set.
    """
    m = config.m
    inputs = grid_per_dim**m if config.A_s > 0 else 1
    outputs = (config.receptors_per_colony + 1) ** m
    if inputs * outputs > max_entries:
        raise ResourceBudgetError(
            f"joint channel needs {inputs} x {outputs} = {inputs * outputs} entries, "
            f"budget is {max_entries}; lower grid_per_dim or m"
        )
    channel = build_blocking_channel(config, params, grid_per_dim, full_peak=full_peak)
    return blahut_arimoto_constrained(channel, [config.alpha / m] * m, opts)


VARYING = ("A_s", "A_ne", "m")


@dataclass(frozen=True)
class SweepSpec:
    """One figure-style sweep.

    ``alpha_ls`` and ``alpha_ts`` give the level and type budgets as fractions
    of ``A_s`` at every point (``None`` keeps ``config.alpha``, clipped to
    ``A_s``); the type
    budget is the total over colonies, each colony gets ``1/m`` of it.
    """

    varying: str
    values: tuple
    config: ScenarioConfig = ScenarioConfig()
    params: LigandParams = LigandParams()
    blocking_params: BlockingParams | None = None
    solver: SolverOptions = SolverOptions()
    ls: bool = True
    ts_m: tuple = ()
    include_bounds: bool = False
    blocking: bool = False
    blocking_m: int = 2
    full_peak: bool = False
    alpha_ls: float | None = None
    alpha_ts: float | None = None
    grid_points: int = 201
    grid_per_dim: int = 41
    workers: int = 1

    def __post_init__(self):
        if self.varying not in VARYING:
            raise ConfigurationError(f"varying must be one of {VARYING}, got {self.varying!r}")
        values = tuple(self.values)
        if not values:
            raise ConfigurationError("sweep needs at least one value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigurationError("sweep values must be strictly increasing")
        if self.varying == "m" and self.ts_m:
            raise ConfigurationError("ts_m must be empty when sweeping m")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ts_m", tuple(int(k) for k in self.ts_m))


@dataclass
class SweepRecord:
    parameter: float
    capacity_ls: float | None = None
    capacity_ts: dict = field(default_factory=dict)
    upper_bound: float | None = None
    lower_bound: float | None = None
    blocking_capacity: float | None = None
    converged: bool = True
    gap: float = 0.0
    error: str | None = None


def _alpha(fraction, A_s, default):
    return default if fraction is None else fraction * A_s


def _point(spec: SweepSpec, value) -> SweepRecord:
    record = SweepRecord(parameter=float(value))
    try:
        _fill(spec, value, record)
    except Exception as exc:  # recorded per point; the sweep goes on
        log.warning("sweep point %s=%s failed: %s", spec.varying, value, exc)
        record.error = f"{type(exc).__name__}: {exc}"
        record.converged = False
    return record


def _fill(spec: SweepSpec, value, record: SweepRecord):
    base = spec.config
    if spec.varying == "m":
        ts_m = (int(value),)
        A_s, A_ne = base.A_s, base.A_ne
    else:
        ts_m = spec.ts_m
        A_s = float(value) if spec.varying == "A_s" else base.A_s
        A_ne = float(value) if spec.varying == "A_ne" else base.A_ne
    alpha_ls = _alpha(spec.alpha_ls, A_s, min(base.alpha, A_s))
    alpha_ts = _alpha(spec.alpha_ts, A_s, alpha_ls)
    ls_cfg = replace(base, m=1, A_s=A_s, alpha=alpha_ls, A_ne=A_ne)
    ts_cfg = replace(ls_cfg, alpha=alpha_ts)

    def track(result: CapacityResult):
        record.converged &= result.converged
        record.gap = max(record.gap, result.gap)
        return result.capacity

    if spec.ls:
        record.capacity_ls = track(ls_capacity(ls_cfg, spec.params, spec.solver, spec.grid_points))
    for m in ts_m:
        record.capacity_ts[m] = track(ts_capacity(replace(ts_cfg, m=m), spec.params, spec.solver, spec.grid_points))
    if spec.include_bounds:
        if ls_cfg.A_ne > 0:
            record.upper_bound = kl_upper_bound(BoundInputs(ls_cfg.receptors, A_s, alpha_ls, ls_cfg.A_ne, spec.params))
        else:
            record.upper_bound = math.inf
            record.lower_bound = lower_bound(A_s, ls_cfg.receptors, spec.params)[0]
    if spec.blocking:
        bp = spec.blocking_params or BlockingParams.from_ligand(spec.params, 0.0005, 0.01)
        b_cfg = replace(ts_cfg, m=spec.blocking_m)
        record.blocking_capacity = track(
            ts_blocking_capacity(b_cfg, bp, spec.solver, spec.grid_per_dim, full_peak=spec.full_peak)
        )


def run_sweep(spec: SweepSpec) -> list[SweepRecord]:
    """Evaluate every requested quantity at every value, in ``spec.values`` order.

    A failing point is reported in its record's ``error`` field.
    """
    if spec.workers > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            return list(pool.map(lambda v: _point(spec, v), spec.values))
    return [_point(spec, v) for v in spec.values]
