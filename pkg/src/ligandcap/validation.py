"""Closed-form oracle checks for the solver and the channel model.

Each check compares against a result computed without the code under test:
textbook capacity formulas, the on-off lower bound, and a direct linear
solve of the receptor's three-state Markov chain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import binary_entropy, lower_bound
from .model import BlockingParams, DiscreteChannel, LigandParams, binding_prob, binomial_rows, blocking_probs
from .solver import SolverOptions, blahut_arimoto, blahut_arimoto_constrained

__all__ = [
    "Check",
    "bsc_capacity",
    "z_channel_capacity",
    "two_point_channel",
    "stationary_distribution",
    "markov_blocking_probs",
    "run_checks",
]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    error: float
    tolerance: float

    @property
    def detail(self) -> str:
        return f"max error {self.error:.2e} (tolerance {self.tolerance:.0e})"


def bsc_capacity(eps: float) -> float:
    return math.log(2) - binary_entropy(eps)


def z_channel_capacity(eps: float) -> float:
    """Z-channel where input 1 is received as 0 with probability ``eps``."""
    if eps == 0:
        return math.log(2)
    if eps == 1:
        return 0.0
    return math.log1p((1 - eps) * eps ** (eps / (1 - eps)))


def two_point_channel(A_s: float, R: int, params: LigandParams) -> DiscreteChannel:
    """Binomial channel restricted to the inputs {0, A_s}, without noise."""
    x = np.array([0.0, A_s])
    return DiscreteChannel(x, x.copy(), binomial_rows(binding_prob(x, 0.0, params), R))


def stationary_distribution(Q) -> np.ndarray:
    """Stationary law of a finite CTMC generator by Grassmann-Taksar-Heyman reduction.

    Only off-diagonal rates are used, with no subtractions, so the result
    keeps full relative accuracy however far apart the rates are.
    """
    A = np.array(Q, dtype=float)
    np.fill_diagonal(A, 0.0)
    n = A.shape[0]
    for k in range(n - 1, 0, -1):
        out = A[k, :k].sum()
        if out == 0:
            raise ValueError("generator is reducible; no unique stationary law")
        A[:k, k] /= out
        A[:k, :k] += np.outer(A[:k, k], A[k, :k])
        np.fill_diagonal(A, 0.0)
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ A[:k, k]
    return pi / pi.sum()


def markov_blocking_probs(x_own, x_others, params: BlockingParams, a_ne: float = 0.0):
    """Stationary (full, block, empty) law of the three-state receptor chain."""
    bind = params.gamma * (x_own + a_ne)
    block = params.gamma_block * (float(np.sum(x_others)) + len(x_others) * a_ne)
    # states: full, block, empty
    Q = np.array(
        [
            [-params.kappa, 0.0, params.kappa],
            [0.0, -params.kappa_block, params.kappa_block],
            [bind, block, -(bind + block)],
        ]
    )
    return tuple(stationary_distribution(Q))


def _bsc(tol):
    eps = 0.1
    W = np.array([[1 - eps, eps], [eps, 1 - eps]])
    got = blahut_arimoto(DiscreteChannel.from_matrix(W), SolverOptions(tolerance=1e-10)).capacity
    err = abs(got - bsc_capacity(eps))
    return Check("BSC(0.1) capacity", err <= tol, err, tol)


def _z(tol):
    eps = 0.3
    W = np.array([[1.0, 0.0], [eps, 1 - eps]])
    got = blahut_arimoto(DiscreteChannel.from_matrix(W), SolverOptions(tolerance=1e-10)).capacity
    err = abs(got - z_channel_capacity(eps))
    return Check("Z-channel(0.3) capacity", err <= tol, err, tol)


def _on_off(tol):
    params = LigandParams()
    err = 0.0
    for n, N in ((4, 5), (16, 5)):
        for A_s in (5.0, 10.0, 20.0, 40.0, 80.0):
            ch = two_point_channel(A_s, n * N, params)
            got = blahut_arimoto_constrained(ch, A_s, SolverOptions(tolerance=1e-10)).capacity
            err = max(err, abs(got - lower_bound(A_s, n * N, params)[0]))
    return Check("two-point grid against the on-off lower bound", err <= tol, err, tol)


def _markov(tol, draws=1000, seed=0):
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(draws):
        g, k, gb, kb = 10.0 ** rng.uniform(-5, 0, size=4)
        params = BlockingParams(g, k, gb, kb)
        m = int(rng.integers(2, 6))
        x = rng.uniform(0, 200, size=m)
        a_ne = float(rng.choice([0.0, rng.uniform(0, 20)]))
        got = np.array(blocking_probs(x[0], x[1:], params, a_ne))
        want = np.array(markov_blocking_probs(x[0], x[1:], params, a_ne))
        err = max(err, float(np.max(np.abs(got - want))))
    return Check(f"blocking steady state, {draws} random draws", err <= tol, err, tol)


def run_checks() -> list[Check]:
    return [_bsc(1e-6), _z(1e-6), _on_off(1e-6), _markov(1e-10)]
