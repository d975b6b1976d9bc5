"""Reference computations that share no code with the package."""
import math
from fractions import Fraction

import cvxpy as cp
import numpy as np
from scipy.special import xlogy


def h2(p):
    return -xlogy(p, p) - xlogy(1 - p, 1 - p)


def bsc(eps):
    return math.log(2) - h2(eps)


def z_channel(eps):
    """Input 1 is read as 0 with probability eps."""
    return math.log(1 + (1 - eps) * eps ** (eps / (1 - eps)))


def convex_capacity(W, costs=None, budget=None):
    """Capacity (and optimal law) by a conic solver; ``costs`` is (K,) or (K, d)."""
    W = np.asarray(W, dtype=float)
    K = W.shape[0]
    p = cp.Variable(K, nonneg=True)
    neg_cond = np.sum(xlogy(W, W), axis=1)
    cons = [cp.sum(p) == 1]
    if budget is not None:
        C = np.asarray(costs, dtype=float).reshape(K, -1)
        cons.append(C.T @ p <= np.atleast_1d(budget))
    prob = cp.Problem(cp.Maximize(neg_cond @ p + cp.sum(cp.entr(W.T @ p))), cons)
    prob.solve(solver="CLARABEL")
    return prob.value, np.clip(p.value, 0, None)


def naive_ba(W, iterations=20000):
    """Textbook Blahut-Arimoto from the uniform law, no acceleration."""
    W = np.asarray(W, dtype=float)
    p = np.full(W.shape[0], 1.0 / W.shape[0])

    def divergences(p):
        q = np.broadcast_to(p @ W, W.shape)
        return np.sum(xlogy(W, W) - xlogy(W, q), axis=1)

    for _ in range(iterations):
        D = divergences(p)
        p = p * np.exp(D - D.max())
        p /= p.sum()
    return float(p @ divergences(p))


def binomial_pmf(p, n):
    return np.array([math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)])


def exact_balance(q_full_empty, q_block_empty, q_empty_full, q_empty_block):
    """Stationary (full, block, empty) of the three-state chain in exact rational arithmetic.

    Arguments are the transition rates; floats are converted exactly.
    """
    kf, kb, bf, bb = (Fraction(v) for v in (q_full_empty, q_block_empty, q_empty_full, q_empty_block))
    # balance: pi_full * kf = pi_empty * bf, pi_block * kb = pi_empty * bb, sum = 1
    # solved by elimination on the augmented system
    rows = [
        [kf, Fraction(0), -bf, Fraction(0)],
        [Fraction(0), kb, -bb, Fraction(0)],
        [Fraction(1), Fraction(1), Fraction(1), Fraction(1)],
    ]
    for c in range(3):
        piv = next(r for r in range(c, 3) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        for r in range(3):
            if r != c and rows[r][c] != 0:
                f = rows[r][c] / rows[c][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    return tuple(float(rows[i][3] / rows[i][i]) for i in range(3))
