"""Acceptance criteria 1 to 11, one test each.

Every test prints a ``criterion N PASS|FAIL`` line (collected again in the
terminal summary) before asserting, so a failing criterion still reports
what it measured.
"""
import math
import time

import numpy as np
import pytest
from oracles import bsc, exact_balance, z_channel

from ligandcap import (
    BlockingParams,
    BoundInputs,
    DiscreteChannel,
    LigandParams,
    ScenarioConfig,
    SolverOptions,
    asymptotic_capacity,
    binding_prob,
    binomial_rows,
    blahut_arimoto,
    blahut_arimoto_constrained,
    blocking_probs,
    build_channel,
    format_csv,
    kl_upper_bound,
    ls_capacity,
    lower_bound,
    mutual_information,
    run_sweep,
    symmetrized_kl,
    ts_blocking_capacity,
    ts_capacity,
)
from ligandcap.tables import PRESETS, preset

P = LigandParams(0.0004, 0.1)
BLOCK = BlockingParams(0.0004, 0.1, 0.0005, 0.01)


def test_criterion_01_closed_form_channels(criterion):
    rows = []
    ok = True
    for name, W, want in (
        ("BSC(0.1)", [[0.9, 0.1], [0.1, 0.9]], 0.368064),
        ("Z(0.3)", [[1.0, 0.0], [0.3, 0.7]], z_channel(0.3)),
    ):
        t = time.perf_counter()
        got = blahut_arimoto(DiscreteChannel.from_matrix(W)).capacity
        dt = time.perf_counter() - t
        err = abs(got - want)
        ok &= err <= 1e-6 and dt < 1.0
        rows.append(f"{name} err {err:.1e} in {dt:.3f}s")
    assert bsc(0.1) == pytest.approx(0.368064, abs=5e-7)
    assert criterion(1, "solver against closed forms", ok, "; ".join(rows))


def test_criterion_02_on_off_bound_is_two_point_capacity(criterion):
    t = time.perf_counter()
    worst = 0.0
    for n, N in ((4, 5), (16, 5)):
        for A_s in (5.0, 10.0, 20.0, 40.0, 80.0):
            x = np.array([0.0, A_s])
            ch = DiscreteChannel(x, x.copy(), binomial_rows(binding_prob(x, 0.0, P), n * N))
            got = blahut_arimoto_constrained(ch, A_s).capacity
            worst = max(worst, abs(got - lower_bound(A_s, n * N, P)[0]))
    dt = time.perf_counter() - t
    ok = worst <= 1e-6 and dt < 5.0
    assert criterion(2, "two-point BA equals the on-off lower bound", ok, f"max err {worst:.1e}, {dt:.2f}s")


def test_criterion_03_kl_sandwich(criterion):
    t = time.perf_counter()
    noises = (1.0, 2.0, 5.0, 10.0, 20.0)
    below, rising = [], []
    for A_s in range(20, 161, 20):
        gaps = []
        for A_ne in noises:
            cfg = ScenarioConfig(n=16, N=5, A_s=A_s, alpha=A_s / 2, A_ne=A_ne)
            cap = ls_capacity(cfg, P).capacity
            ub = kl_upper_bound(BoundInputs(80, A_s, A_s / 2, A_ne, P))
            if ub < cap:
                below.append((A_s, A_ne))
            gaps.append(ub - cap)
        if np.any(np.diff(gaps) > 0):
            rising.append(A_s)
    dt = time.perf_counter() - t
    ok = not below and not rising and dt < 60
    detail = f"bound below capacity at {below or 'no point'}, gap rising in A_ne at {rising or 'no A_s'}, {dt:.1f}s"
    assert criterion(3, "symmetrized-KL bound sandwich", ok, detail)


def test_criterion_04_lower_bound_tight_at_small_peak(criterion):
    peaks = (2.5, 5.0, 10.0, 20.0, 40.0, 80.0, 120.0, 160.0)
    opts = SolverOptions(tolerance=1e-10)
    gaps, rel = [], []
    for A_s in peaks:
        ch = build_channel(ScenarioConfig(n=4, N=5, A_s=A_s, alpha=A_s), P, 401)
        cap = blahut_arimoto(ch, opts).capacity
        lb = lower_bound(A_s, 20, P)[0]
        gaps.append(cap - lb)
        rel.append((cap - lb) / cap)
    small = max(r for A_s, r in zip(peaks, rel) if A_s <= 10)
    monotone = bool(np.all(np.diff(gaps) >= -1e-9))
    ok = small <= 0.02 and monotone
    detail = f"max relative gap for A_s <= 10: {small:.1e}; gaps {', '.join(f'{g:.2g}' for g in gaps)}"
    assert criterion(4, "lower bound tight at small peak", ok, detail)


def test_criterion_05_ls_ts_ordering(criterion):
    t = time.perf_counter()
    parts, ok = [], True
    for A_ne in (0.0, 5.0):
        caps = {
            m: ts_capacity(ScenarioConfig(n=16, N=5, m=m, A_s=80, alpha=40, A_ne=A_ne), P).capacity
            for m in (1, 2, 4, 8, 16)
        }
        seq = list(caps.values())
        peak = int(np.argmax(seq))
        unimodal = all(a <= b for a, b in zip(seq[: peak + 1], seq[1 : peak + 1])) and all(
            a >= b for a, b in zip(seq[peak:], seq[peak + 1 :])
        )
        interior = 0 < peak < len(seq) - 1
        good = caps[2] > caps[1] and caps[16] < caps[1] and unimodal and interior
        ok &= good
        parts.append(f"A_ne={A_ne:g}: " + " ".join(f"m{m}={c:.4f}" for m, c in caps.items()))
    dt = time.perf_counter() - t
    ok &= dt < 120
    assert criterion(5, "LS/TS ordering and interior optimal m", ok, "; ".join(parts) + f"; {dt:.1f}s")


def test_criterion_06_blocking_degradation(criterion):
    t = time.perf_counter()
    above_ts, not_below_ls, rows = [], [], []
    for A_s in (10.0, 20.0, 40.0, 80.0, 120.0, 160.0):
        ls = ls_capacity(ScenarioConfig(n=16, N=5, A_s=A_s, alpha=A_s / 2), P).capacity
        cfg = ScenarioConfig(n=16, N=5, m=2, A_s=A_s, alpha=A_s / 2)
        ts = ts_capacity(cfg, P).capacity
        blk = ts_blocking_capacity(cfg, BLOCK, grid_per_dim=41)
        assert blk.converged
        if blk.capacity > ts + 1e-9:
            above_ts.append(A_s)
        if ts > ls and not blk.capacity < ls:
            not_below_ls.append(A_s)
        rows.append(f"A_s={A_s:g} LS {ls:.4f} TS {ts:.4f} blocked {blk.capacity:.4f}")
    dt = time.perf_counter() - t
    ok = not above_ts and not not_below_ls and dt < 600
    detail = (
        f"blocking above TS at {above_ts or 'no point'}; TS > LS but blocked TS >= LS at "
        f"{not_below_ls or 'no point'}; {dt:.0f}s [" + "; ".join(rows) + "]"
    )
    assert criterion(6, "blocking degrades TS below LS", ok, detail)


def test_criterion_07_blocking_decouples(criterion):
    worst = 0.0
    for A_s in (20.0, 80.0, 160.0):
        cfg = ScenarioConfig(n=16, N=5, m=2, A_s=A_s, alpha=A_s / 2)
        blk = ts_blocking_capacity(cfg, BlockingParams(0.0004, 0.1, 0.0, 0.01), grid_per_dim=41).capacity
        worst = max(worst, abs(blk - ts_capacity(cfg, P).capacity))
    assert criterion(7, "no blocking rate gives the TS capacity", worst <= 2e-3, f"max difference {worst:.1e} nats")


def test_criterion_08_markov_steady_state(criterion):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        g, k, gb, kb = 10.0 ** rng.uniform(-5, 0, size=4)
        params = BlockingParams(g, k, gb, kb)
        others = rng.uniform(0, 200, size=int(rng.integers(1, 4)))
        x = rng.uniform(0, 200)
        a_ne = rng.uniform(0, 20) if rng.random() < 0.5 else 0.0
        got = blocking_probs(x, others, params, a_ne)
        bind = g * (x + a_ne)
        block = gb * (others.sum() + others.size * a_ne)
        want = exact_balance(k, kb, bind, block)
        worst = max(worst, max(abs(a - b) for a, b in zip(got, want)))
    assert criterion(8, "blocking probabilities solve the balance equations", worst <= 1e-10, f"max err {worst:.1e}")


def test_criterion_09_asymptotic_formula(criterion):
    t = time.perf_counter()
    x = np.linspace(0.0, 1.0, 401)
    r = blahut_arimoto(DiscreteChannel(x, x.copy(), binomial_rows(x, 100)))
    dt = time.perf_counter() - t
    want = 0.5 * math.log(100 / (2 * math.pi * math.e)) + math.log(math.pi)
    assert asymptotic_capacity(100) == pytest.approx(want)
    rel = abs(r.capacity - want) / want
    ok = rel <= 0.03 and dt < 30 and r.converged
    detail = f"BA {r.capacity:.6f} (gap {r.gap:.0e}) vs formula {want:.6f}: relative difference {rel:.2%}, {dt:.2f}s"
    assert criterion(9, "binomial capacity near the large-n formula", ok, detail)


def test_criterion_10_symmetrized_kl_dominates(criterion):
    rng = np.random.default_rng(7)
    ch = build_channel(ScenarioConfig(n=16, N=5, A_s=80, alpha=40, A_ne=5.0), P, 201)
    f = binding_prob(ch.inputs, 5.0, P)
    worst = math.inf
    for i in range(100):
        conc = (0.05, 0.5, 5.0)[i % 3]
        p = rng.dirichlet(np.full(ch.size, conc))
        worst = min(worst, symmetrized_kl(p, f, 80) - mutual_information(p, ch))
    assert criterion(10, "symmetrized KL above mutual information", worst >= 0, f"min margin {worst:.3g} nats")


def test_criterion_11_determinism(criterion):
    differ = []
    for name in sorted(PRESETS):
        a = format_csv(run_sweep(preset(name)))
        b = format_csv(run_sweep(preset(name)))
        c = format_csv(run_sweep(preset(name, workers=2)))
        if not a == b == c:
            differ.append(name)
    detail = f"presets {', '.join(sorted(PRESETS))} rerun serially and with 2 workers; differing: {differ or 'none'}"
    assert criterion(11, "byte-identical preset CSV", not differ, detail)
