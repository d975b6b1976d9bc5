"""Receptors that bind the wrong molecule.

With two molecule types, a receptor of one colony can be occupied by the
other type, which it cannot report. The joint channel of both colonies no
longer factorises, so its capacity is computed over the full product grid.

The blocking ligand here binds twelve times more strongly than the own
ligand. Blocking costs a large part of the gain from using two types, but
the optimal joint input partly avoids it by not releasing both types at
high concentration together.
"""
import numpy as np

from ligandcap import (
    BlockingParams,
    LigandParams,
    ScenarioConfig,
    ls_capacity,
    ts_blocking_capacity,
    ts_capacity,
)

own = LigandParams(0.0004, 0.1)
blocking = BlockingParams.from_ligand(own, gamma_block=0.0005, kappa_block=0.01)

print(f"{'A_s':>5} {'LS':>7} {'TS':>7} {'TS+block':>9}")
for A_s in (20.0, 80.0, 160.0):
    ls = ls_capacity(ScenarioConfig(A_s=A_s, alpha=A_s / 2), own).capacity
    cfg = ScenarioConfig(m=2, A_s=A_s, alpha=A_s / 2)
    ts = ts_capacity(cfg, own).capacity
    blk = ts_blocking_capacity(cfg, blocking, grid_per_dim=41)
    print(f"{A_s:5g} {ls:7.4f} {ts:7.4f} {blk.capacity:9.4f}")

# where does the optimal joint law put its mass at A_s = 80?
cfg = ScenarioConfig(m=2, A_s=80.0, alpha=40.0)
r = ts_blocking_capacity(cfg, blocking, grid_per_dim=41)
axis = np.linspace(0, 40, 41)
p = r.input_distribution.reshape(41, 41)
print("\nmass points of the joint law at A_s=80 (x1, x2, probability):")
for i, j in zip(*np.nonzero(p > 1e-3)):
    print(f"  ({axis[i]:4g}, {axis[j]:4g})  {p[i, j]:.3f}")
