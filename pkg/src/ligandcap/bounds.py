"""Closed-form bounds on the capacity of the binomial ligand channel.

All values are in nats.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, xlogy

from .model import LigandParams, binding_prob

__all__ = [
    "VacuousBoundWarning",
    "BoundInputs",
    "binary_entropy",
    "symmetrized_kl",
    "kl_upper_bound",
    "kl_bound_case",
    "lower_bound",
    "asymptotic_capacity",
]


class VacuousBoundWarning(UserWarning):
    """The symmetrized-KL bound is infinite without background noise."""


@dataclass(frozen=True)
class BoundInputs:
    """Receptor count ``R = nN``, peak ``A``, average budget ``alpha`` and noise ``A_ne``."""

    R: int
    A: float
    alpha: float
    A_ne: float
    params: LigandParams = LigandParams()

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("R must be at least 1")
        if not 0 <= self.alpha <= self.A:
            raise ValueError("need 0 <= alpha <= A")
        if self.A_ne < 0:
            raise ValueError("A_ne must be nonnegative")


def binary_entropy(p):
    """Natural-log binary entropy, 0 at p in {0, 1}."""
    p = np.asarray(p, dtype=float)
    out = -xlogy(p, p) - xlogy(1 - p, 1 - p)
    return float(out) if out.ndim == 0 else out


def symmetrized_kl(p_x, binding, trials: int) -> float:
    """``trials * Cov(f, log(f / (1 - f)))`` with ``f`` the binding probability per input.

    This is the symmetrized KL divergence between the joint law and the
    product of marginals for the binomial channel, an upper bound on the
    mutual information of ``p_x``.
    """
    p = np.asarray(p_x, dtype=float)
    f = np.asarray(binding, dtype=float)
    if p.shape != f.shape:
        raise ValueError("p_x and binding values must have the same shape")
    live = p > 0
    p, f = p[live], f[live]
    if np.all(f == f[0]):
        return 0.0
    if np.any((f <= 0) | (f >= 1)):
        return math.inf
    logit = np.log(f) - np.log1p(-f)
    ef = p @ f
    cov = p @ ((f - ef) * logit)
    return float(trials * max(cov, 0.0))


def _bound_terms(b: BoundInputs):
    f_alpha = binding_prob(b.alpha, b.A_ne, b.params)
    f_peak = binding_prob(b.A, b.A_ne, b.params)
    f_zero = binding_prob(0.0, b.A_ne, b.params)
    return f_alpha, f_peak, f_zero


def kl_bound_case(b: BoundInputs) -> str:
    """``"*"`` or ``"**"`` for the branch of the closed form, ``"vacuous"`` at zero noise."""
    if b.A_ne == 0:
        return "vacuous"
    f_alpha, f_peak, _ = _bound_terms(b)
    return "*" if f_alpha < f_peak / 2 else "**"


def kl_upper_bound(b: BoundInputs) -> float:
    """Maximum symmetrized-KL bound under peak ``A`` and mean ``alpha``.

    Infinite when ``A_ne == 0`` (with a :class:`VacuousBoundWarning`), since
    the binding probability at zero input is then 0.
    """
    if b.A_ne == 0:
        warnings.warn("symmetrized-KL bound is vacuous at zero noise", VacuousBoundWarning, stacklevel=2)
        return math.inf
    if b.A == 0:
        return 0.0
    f_alpha, f_peak, f_zero = _bound_terms(b)
    E = (math.log(f_peak) + math.log1p(-f_zero)) - (math.log(f_zero) + math.log1p(-f_peak))
    if f_alpha < f_peak / 2:
        return b.R * (f_alpha / f_peak) * (f_peak - f_alpha) * E
    return b.R * (f_peak / 4) * E


def lower_bound(A_s: float, R: int, params: LigandParams) -> tuple[float, float]:
    """Capacity of the on-off input {0, A_s} without noise, and its optimal P(X = 0).

    Outputs above zero identify the ``A_s`` input, so the channel is a
    Z-channel whose one-input misses with probability ``(1 - p_b)^R``.
    """
    if A_s < 0:
        raise ValueError("A_s must be nonnegative")
    if R < 1:
        raise ValueError("R must be at least 1")
    if A_s == 0:
        return 0.0, 1.0
    p_b = binding_prob(A_s, 0.0, params)
    log_miss = R * math.log1p(-p_b)
    p_c = math.exp(log_miss)
    hit = -math.expm1(log_miss)
    g = binary_entropy(p_c) / hit
    on = expit(-g)  # 1 / (1 + e^g)
    capacity = binary_entropy(on) - g * on
    weight = 1.0 / (1.0 + 1.0 / (math.exp(-p_c * log_miss / hit) - p_c))
    return float(capacity), float(weight)


def asymptotic_capacity(trials: float) -> float:
    """Large-``trials`` capacity of the unconstrained binomial channel on p in [0, 1].

    Only meaningful asymptotically; warns below ten trials.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if trials < 10:
        warnings.warn("asymptotic capacity formula used with very few trials", RuntimeWarning, stacklevel=2)
    return 0.5 * math.log(trials / (2 * math.pi * math.e)) + math.log(math.pi)
