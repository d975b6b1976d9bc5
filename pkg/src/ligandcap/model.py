"""Ligand-receptor binding probabilities and the finite channels built on them.

Concentrations are in the relative units of the rate constants; no unit
conversion is done anywhere in the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlogy

__all__ = [
    "ConfigurationError",
    "LigandParams",
    "BlockingParams",
    "ScenarioConfig",
    "DiscreteChannel",
    "binding_prob",
    "blocking_probs",
    "channel_row",
    "binomial_rows",
    "build_channel",
    "build_blocking_channel",
]

ROW_SUM_TOL = 1e-12


class ConfigurationError(ValueError):
    """Colony layout or grid settings that cannot describe a channel."""


@dataclass(frozen=True)
class LigandParams:
    """Association rate ``gamma`` and dissociation rate ``kappa``."""

    gamma: float = 0.0004
    kappa: float = 0.1

    def __post_init__(self):
        if not (self.gamma > 0 and self.kappa > 0):
            raise ValueError(f"rates must be positive, got gamma={self.gamma}, kappa={self.kappa}")

    @property
    def half_saturation(self) -> float:
        """Concentration at which half the receptors are bound (kappa / gamma)."""
        return self.kappa / self.gamma


@dataclass(frozen=True)
class BlockingParams:
    """Rates for one receptor type: its own ligand and the blocking ligands.

    ``gamma_block`` may be zero, which switches blocking off entirely.
    """

    gamma: float = 0.0004
    kappa: float = 0.1
    gamma_block: float = 0.0005
    kappa_block: float = 0.01

    def __post_init__(self):
        if not (self.gamma > 0 and self.kappa > 0 and self.kappa_block > 0):
            raise ValueError("gamma, kappa and kappa_block must be positive")
        if self.gamma_block < 0:
            raise ValueError("gamma_block must be nonnegative")

    @classmethod
    def from_ligand(cls, own: LigandParams, gamma_block: float, kappa_block: float) -> "BlockingParams":
        return cls(own.gamma, own.kappa, gamma_block, kappa_block)

    @property
    def own(self) -> LigandParams:
        return LigandParams(self.gamma, self.kappa)

    @property
    def affinity(self) -> float:
        return self.gamma / self.kappa

    @property
    def block_affinity(self) -> float:
        return self.gamma_block / self.kappa_block


@dataclass(frozen=True)
class ScenarioConfig:
    """Colony layout and signal constraints.

    ``n`` bacteria with ``N`` receptors each are split evenly into ``m``
    colonies, one per molecule type. ``A_s`` is the peak concentration,
    ``alpha`` the average-concentration budget and ``A_ne`` the background
    concentration of same-type molecules.
    """

    n: int = 16
    N: int = 5
    m: int = 1
    A_s: float = 80.0
    alpha: float = 40.0
    A_ne: float = 0.0

    def __post_init__(self):
        if self.n < 1 or self.N < 1 or self.m < 1:
            raise ConfigurationError("n, N and m must be positive integers")
        if self.n % self.m or (self.n * self.N) % self.m:
            raise ConfigurationError(f"m={self.m} must divide n={self.n} and nN={self.n * self.N}")
        if self.A_s < 0 or self.A_ne < 0:
            raise ValueError("concentrations must be nonnegative")
        if not 0 <= self.alpha <= self.A_s:
            raise ValueError(f"need 0 <= alpha <= A_s, got alpha={self.alpha}, A_s={self.A_s}")

    @property
    def receptors(self) -> int:
        return self.n * self.N

    @property
    def receptors_per_colony(self) -> int:
        return self.n * self.N // self.m

    def colony(self) -> "ScenarioConfig":
        """One colony of the type scenario as a stand-alone level-scenario config."""
        return replace(self, n=self.n // self.m, m=1, A_s=self.A_s / self.m, alpha=self.alpha / self.m)


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Finite-input channel with a cost attached to every input.

    ``inputs`` is ``(K,)`` for scalar inputs or ``(K, d)`` for vector inputs
    in lexicographic order; ``costs`` has the same shape. ``transition[k, y]``
    is ``p(y | inputs[k])``.
    """

    inputs: np.ndarray
    costs: np.ndarray
    transition: np.ndarray
    output_size: int = field(init=False)

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        costs = np.asarray(self.costs, dtype=float)
        W = np.asarray(self.transition, dtype=float)
        if W.ndim != 2 or W.shape[0] == 0:
            raise ValueError("transition must be a nonempty 2-D array")
        if inputs.shape[0] != W.shape[0] or costs.shape != inputs.shape:
            raise ValueError("inputs, costs and transition rows disagree in size")
        if np.any(W < 0) or np.any(W > 1):
            raise ValueError("transition entries must lie in [0, 1]")
        if np.any(np.abs(W.sum(axis=1) - 1) > ROW_SUM_TOL):
            raise ValueError("every transition row must sum to 1")
        if np.any(costs < 0):
            raise ValueError("costs must be nonnegative")
        if not _strictly_increasing(inputs):
            raise ValueError("inputs must be strictly increasing")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "transition", W)
        object.__setattr__(self, "output_size", W.shape[1])

    @classmethod
    def from_matrix(cls, transition, costs=None) -> "DiscreteChannel":
        """Channel on inputs ``0..K-1``; costs default to zero."""
        W = np.asarray(transition, dtype=float)
        k = W.shape[0]
        return cls(np.arange(k, dtype=float), np.zeros(k) if costs is None else costs, W)

    @property
    def size(self) -> int:
        return self.transition.shape[0]

    @property
    def cost_matrix(self) -> np.ndarray:
        """Costs as a ``(K, d)`` array."""
        return self.costs.reshape(self.size, -1)

    def restrict(self, mask) -> "DiscreteChannel":
        return DiscreteChannel(self.inputs[mask], self.costs[mask], self.transition[mask])


def _strictly_increasing(inputs: np.ndarray) -> bool:
    if inputs.shape[0] < 2:
        return True
    if inputs.ndim == 1:
        return bool(np.all(np.diff(inputs) > 0))
    rows = [tuple(r) for r in inputs]
    return all(a < b for a, b in zip(rows, rows[1:]))


def binding_prob(x, a_ne, params: LigandParams):
    """Steady-state probability that a receptor is bound at concentration ``x + a_ne``."""
    x = np.asarray(x, dtype=float)
    a_ne = np.asarray(a_ne, dtype=float)
    if np.any(x < 0) or np.any(a_ne < 0):
        raise ValueError("concentrations must be nonnegative")
    total = x + a_ne
    out = total / (total + params.half_saturation)
    return float(out) if out.ndim == 0 else out


def blocking_probs(x_own, x_others: Sequence[float], params: BlockingParams, a_ne: float = 0.0):
    """Steady-state (full, block, empty) probabilities of one receptor type.

    The receptor is bound by its own ligand at concentration ``x_own`` and
    blocked by the other ligands, whose concentrations add up. Background
    noise ``a_ne`` is added to the own ligand and to each other ligand.
    """
    x_own = float(x_own)
    others = np.asarray(x_others, dtype=float)
    if x_own < 0 or np.any(others < 0) or a_ne < 0:
        raise ValueError("concentrations must be nonnegative")
    own = params.affinity * (x_own + a_ne)
    block = params.block_affinity * (others.sum() + others.size * a_ne)
    denom = own + block + 1.0
    return own / denom, block / denom, 1.0 / denom


def binomial_rows(p, trials: int) -> np.ndarray:
    """Binomial pmfs over ``0..trials``, one row per success probability in ``p``.

    Evaluated in the log domain; ``xlogy`` keeps ``p`` in {0, 1} exact.
    Rows are renormalised to absorb the rounding of ``gammaln`` at large
    ``trials``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    if trials < 1:
        raise ValueError("trials must be a positive integer")
    y = np.arange(trials + 1)
    log_choose = gammaln(trials + 1) - gammaln(y + 1) - gammaln(trials - y + 1)
    pc = p[:, None]
    rows = np.exp(log_choose + xlogy(y, pc) + xlogy(trials - y, 1 - pc))
    return rows / rows.sum(axis=1, keepdims=True)


def channel_row(p: float, trials: int) -> np.ndarray:
    """Binomial(trials, p) pmf as a vector of length ``trials + 1``."""
    return binomial_rows([p], trials)[0]


def build_channel(config: ScenarioConfig, params: LigandParams, grid_points: int = 201) -> DiscreteChannel:
    """Binomial channel of all ``n * N`` receptors on a uniform grid over ``[0, A_s]``.

    A zero peak collapses the grid to the single input 0.
    """
    if grid_points < 2:
        raise ConfigurationError("grid_points must be at least 2")
    if config.A_s == 0:
        x = np.zeros(1)
    else:
        x = np.linspace(0.0, config.A_s, grid_points)
    W = binomial_rows(binding_prob(x, config.A_ne, params), config.receptors)
    return DiscreteChannel(x, x.copy(), W)


def build_blocking_channel(
    config: ScenarioConfig,
    params: BlockingParams | Sequence[BlockingParams],
    grid_points_per_dim: int = 41,
    *,
    full_peak: bool = False,
) -> DiscreteChannel:
    """Joint channel of ``m`` colonies whose receptors can be blocked by foreign types.

    Each coordinate runs over a uniform grid on ``[0, A_s / m]`` (``[0, A_s]``
    with ``full_peak``). Given all inputs, colony outputs are independent
    binomials with ``nN / m`` trials; the joint output index is the row-major
    flattening of ``(y_1, ..., y_m)``.
    """
    m = config.m
    if m < 2:
        raise ConfigurationError("the blocking channel needs at least two molecule types")
    if grid_points_per_dim < 2:
        raise ConfigurationError("grid_points_per_dim must be at least 2")
    if isinstance(params, BlockingParams):
        params = [params] * m
    if len(params) != m:
        raise ConfigurationError(f"expected {m} blocking parameter sets, got {len(params)}")
    peak = config.A_s if full_peak else config.A_s / m
    axis = np.zeros(1) if peak == 0 else np.linspace(0.0, peak, grid_points_per_dim)
    X = np.array(list(itertools.product(axis, repeat=m)))
    R = config.receptors_per_colony

    total = X.sum(axis=1)
    W = np.ones((X.shape[0], 1))
    for i, par in enumerate(params):
        own = par.affinity * (X[:, i] + config.A_ne)
        block = par.block_affinity * (total - X[:, i] + (m - 1) * config.A_ne)
        rows = binomial_rows(own / (own + block + 1.0), R)
        W = (W[:, :, None] * rows[:, None, :]).reshape(X.shape[0], -1)
    return DiscreteChannel(X, X.copy(), W)
