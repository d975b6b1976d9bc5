"""Blahut-Arimoto capacity of discrete channels, with input-cost budgets.

Every iterate carries the duality certificate

    I(p) <= C <= max_x D(p(.|x) || q)

so a result states how far its capacity can be from the true grid capacity.
Once plain Blahut-Arimoto iterations have located the support, a
sequential-QP step (an NNLS subproblem on the candidate support) closes
the remaining gap quickly; every step increases the objective, so the
monotonicity of the iteration is kept.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import nnls
from scipy.special import xlogy

from .model import DiscreteChannel

__all__ = [
    "InfeasibleBudgetError",
    "SolverOptions",
    "CapacityResult",
    "mutual_information",
    "capacity_certificate",
    "blahut_arimoto",
    "blahut_arimoto_constrained",
]

log = logging.getLogger(__name__)


class InfeasibleBudgetError(ValueError):
    """The average-cost budget is below the cheapest input."""


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-7
    max_iterations: int = 50_000
    multiplier_tolerance: float = 1e-4
    # BA iterations between support polishes; polish=False gives plain BA
    polish_every: int = 300
    polish: bool = True

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.multiplier_tolerance > 0:
            raise ValueError("multiplier_tolerance must be positive")


@dataclass(frozen=True, eq=False)
class CapacityResult:
    """Outcome of a capacity computation, all information in nats.

    ``capacity`` is the mutual information of ``input_distribution`` and
    ``gap`` bounds how far the grid capacity can lie above it. With an active
    budget the certificate refers to the budget actually spent,
    ``mean_cost``, which is within the multiplier tolerance of the request.
    """

    capacity: float
    input_distribution: np.ndarray
    mean_cost: float | np.ndarray
    iterations: int
    gap: float
    converged: bool
    multiplier: float | np.ndarray = 0.0

    @property
    def upper(self) -> float:
        return self.capacity + self.gap


def _check_distribution(p_x, channel: DiscreteChannel) -> np.ndarray:
    p = np.asarray(p_x, dtype=float)
    if p.shape != (channel.size,):
        raise ValueError(f"input distribution has shape {p.shape}, channel has {channel.size} inputs")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-9:
        raise ValueError("input distribution must be nonnegative and sum to 1")
    return p


def _row_negentropy(W: np.ndarray) -> np.ndarray:
    return xlogy(W, W).sum(axis=1)


def _divergences(W: np.ndarray, h: np.ndarray, p: np.ndarray):
    """Output law q and D(W_x || q) for every input x.

    An input that reaches an output of zero probability under q gets
    divergence +inf; outputs no input reaches drop out.
    """
    q = p @ W
    zero = q <= 0
    logq = np.log(np.where(zero, 1.0, q))
    D = h - W @ logq
    if zero.any():
        D[(W[:, zero] > 0).any(axis=1)] = np.inf
    return q, D


def _expect(p: np.ndarray, v: np.ndarray) -> float:
    s = p > 0
    return float(p[s] @ v[s])


def mutual_information(p_x, channel: DiscreteChannel) -> float:
    """I(X; Y) in nats for input law ``p_x``."""
    p = _check_distribution(p_x, channel)
    W = channel.transition
    _, D = _divergences(W, _row_negentropy(W), p)
    return max(_expect(p, D), 0.0)


def capacity_certificate(p_x, channel: DiscreteChannel) -> tuple[float, float]:
    """``(I(p_x), max_x D(p(.|x) || q))``, which sandwich the channel capacity."""
    p = _check_distribution(p_x, channel)
    W = channel.transition
    _, D = _divergences(W, _row_negentropy(W), p)
    lower = max(_expect(p, D), 0.0)
    return lower, max(float(D.max()), lower)


class _Tilted:
    """max_p I(p) - <s, E_p[cost]> over the simplex of one channel."""

    def __init__(self, W: np.ndarray, costs: np.ndarray):
        self.W = W
        self.h = _row_negentropy(W)
        self.costs = costs
        self.s = np.zeros(costs.shape[1])

    def evaluate(self, p):
        q, D = _divergences(self.W, self.h, p)
        w = D - self.costs @ self.s
        info = _expect(p, D)
        gap = float(w.max()) - _expect(p, w)
        return D, w, info, gap

    def objective(self, rows: np.ndarray, v: np.ndarray) -> float:
        q = v @ self.W[rows]
        return float(v @ self.h[rows] - xlogy(q, q).sum() - v @ (self.costs[rows] @ self.s))

    def ba_step(self, p, w):
        live = p > 0
        step = np.zeros_like(p)
        step[live] = p[live] * np.exp(w[live] - w[live].max())
        return step / step.sum()

    def polish(self, p, w, tol: float, max_steps: int = 30):
        """SQP on the candidate support: each step maximises the local
        quadratic model over the simplex exactly (NNLS), then backtracks."""
        lam = _expect(p, w)
        rows = np.flatnonzero((p > 1e-8 * p.max()) | (w > lam))
        v = p[rows] / p[rows].sum()
        W, h, c = self.W[rows], self.h[rows], self.costs[rows] @ self.s
        n = rows.size
        if np.any(W[:, v @ W <= 0] > 0):
            # candidates that alone reach some output get a foothold first
            v = 0.999 * v + 0.001 / n
        steps = 0
        for steps in range(1, max_steps + 1):
            q = v @ W
            nz = q > 0
            g = h - W[:, nz] @ np.log(q[nz]) - c
            if g.max() - v @ g <= 1e-2 * tol:
                break
            L = (W[:, nz] / np.sqrt(q[nz])).T
            ridge = 1e-12 * np.einsum("ij,ij->", L, L) / n
            La = np.vstack([L, np.sqrt(ridge) * np.eye(n)])
            b = La @ v + np.linalg.lstsq(La.T, g, rcond=None)[0]
            rho = 1e3 * np.sqrt(np.einsum("ij,ij->", La, La) / n)
            u, _ = nnls(np.vstack([La, np.full((1, n), rho)]), np.append(b, rho), maxiter=50 * n)
            if u.sum() <= 0:
                break
            d = u / u.sum() - v
            slope = float(g @ d)
            if slope <= 0:
                break
            f0 = self.objective(rows, v)
            t = 1.0
            while t > 1e-12 and self.objective(rows, v + t * d) < f0 + 1e-4 * t * slope:
                t *= 0.5
            if t <= 1e-12:
                break
            v = np.maximum(v + t * d, 0.0)
            v /= v.sum()
        out = np.zeros_like(p)
        out[rows] = v
        return out, steps


def _maximize(problem: _Tilted, p, options: SolverOptions, *, polish_first=False, callback=None):
    """Alternate BA iterations and support polishes until the certificate closes."""
    it = 0
    since_polish = options.polish_every if polish_first else 0
    while True:
        D, w, info, gap = problem.evaluate(p)
        if callback is not None:
            callback(it, p, info, info + gap)
        if gap <= options.tolerance:
            return p, D, info, gap, it, True
        if it >= options.max_iterations:
            return p, D, info, gap, it, False
        if options.polish and since_polish >= options.polish_every and np.isfinite(gap):
            p, steps = problem.polish(p, w, options.tolerance)
            it += steps
            since_polish = 0
            continue
        if not np.isfinite(gap):
            # a zero-mass input reaches an output nothing else reaches: re-seed
            p = 0.99 * p + 0.01 / p.size
        else:
            p = problem.ba_step(p, w)
        it += 1
        since_polish += 1


def blahut_arimoto(
    channel: DiscreteChannel,
    options: SolverOptions | None = None,
    *,
    callback: Callable | None = None,
) -> CapacityResult:
    """Unconstrained capacity, starting from the uniform input law.

    ``callback(iteration, p, lower, upper)`` sees every certificate.
    Running out of iterations is reported through ``converged``.
    """
    options = options or SolverOptions()
    problem = _Tilted(channel.transition, channel.cost_matrix)
    p0 = np.full(channel.size, 1.0 / channel.size)
    p, D, info, gap, it, ok = _maximize(problem, p0, options, callback=callback)
    return _result(channel, p, info, gap, it, ok, problem.s)


def _result(channel, p, info, gap, iterations, converged, s) -> CapacityResult:
    mean = p @ channel.cost_matrix
    scalar = channel.costs.ndim == 1
    return CapacityResult(
        capacity=max(info, 0.0),
        input_distribution=p,
        mean_cost=float(mean[0]) if scalar else mean,
        iterations=int(iterations),
        gap=max(float(gap), 0.0),
        converged=bool(converged),
        multiplier=float(s[0]) if scalar else s.copy(),
    )


def blahut_arimoto_constrained(
    channel: DiscreteChannel,
    budget,
    options: SolverOptions | None = None,
    *,
    max_passes: int = 10,
) -> CapacityResult:
    """Capacity subject to ``E[cost] <= budget`` (per cost dimension).

    If the unconstrained optimum already fits the budget it is returned as
    is. Otherwise one Lagrange multiplier per binding dimension is found by
    bisection, cycling over dimensions until every mean cost is within the
    multiplier tolerance of its budget, or below it with a zero multiplier.
    """
    options = options or SolverOptions()
    costs = channel.cost_matrix
    budget = np.broadcast_to(np.asarray(budget, dtype=float), (costs.shape[1],)).copy()
    cmin = costs.min(axis=0)
    if np.any(budget < cmin):
        raise InfeasibleBudgetError(f"budget {budget} below the cheapest input cost {cmin}")

    # dimensions with no slack at all pin the law to their cheapest inputs
    tight = budget <= cmin
    if tight.any():
        mask = np.all(costs[:, tight] <= budget[tight], axis=1)
        if not mask.all():
            sub = blahut_arimoto_constrained(channel.restrict(mask), budget, options, max_passes=max_passes)
            p = np.zeros(channel.size)
            p[mask] = sub.input_distribution
            s = np.zeros(costs.shape[1])
            s[~tight] = np.atleast_1d(sub.multiplier)[~tight]
            return _result(channel, p, sub.capacity, sub.gap, sub.iterations, sub.converged, s)

    base = blahut_arimoto(channel, options)
    if np.all(np.atleast_1d(base.mean_cost) <= budget * (1 + options.multiplier_tolerance)):
        return base

    problem = _Tilted(channel.transition, costs)
    total = base.iterations
    state = {"p": base.input_distribution}

    def solve_at(s):
        problem.s = s
        p, D, info, gap, it, ok = _maximize(problem, state["p"], options, polish_first=True)
        nonlocal total
        total += it
        state["p"] = p
        return p, info, gap, ok

    def satisfied(i, mean, s):
        rel = (mean[i] - budget[i]) / budget[i]
        return abs(rel) <= options.multiplier_tolerance or (s[i] == 0 and rel <= 0)

    s = np.zeros(costs.shape[1])
    p, info, gap, ok = solve_at(s.copy())
    for _ in range(max_passes if costs.shape[1] > 1 else 1):
        for i in range(costs.shape[1]):
            mean = p @ costs
            if satisfied(i, mean, s):
                continue
            p, info, gap, ok = _bisect(solve_at, s, i, costs, budget[i], options)
        mean = p @ costs
        if all(satisfied(i, mean, s) for i in range(costs.shape[1])):
            break
    mean = p @ costs
    done = ok and all(satisfied(i, mean, s) for i in range(costs.shape[1]))
    if not done:
        log.warning("constrained solve stopped with mean cost %s for budget %s", mean, budget)
    return _result(channel, p, info, gap, total, done, s)


def _bisect(solve_at, s, i, costs, target, options):
    """Set ``s[i]`` so the mean of cost ``i`` meets ``target``; ``s`` is updated in place.

    Mean cost is nonincreasing in its own multiplier. The final law is taken
    on the feasible side of the bracket.
    """
    tol = options.multiplier_tolerance
    lo = 0.0
    s[i] = 0.0
    p, info, gap, ok = solve_at(s.copy())
    if p @ costs[:, i] <= target * (1 + tol):
        return p, info, gap, ok
    hi = 1.0 / max(costs[:, i].max(), 1e-300)
    for _ in range(200):
        s[i] = hi
        p, info, gap, ok = solve_at(s.copy())
        if p @ costs[:, i] <= target:
            break
        lo, hi = hi, 2.0 * hi
    best = (hi, p, info, gap, ok)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        s[i] = mid
        p, info, gap, ok = solve_at(s.copy())
        mean = p @ costs[:, i]
        if mean <= target:
            hi = mid
            best = (mid, p, info, gap, ok)
            if (target - mean) / target <= tol:
                break
        else:
            lo = mid
            if (mean - target) / target <= tol:
                best = (mid, p, info, gap, ok)
                break
    s[i], p, info, gap, ok = best
    return p, info, gap, ok
