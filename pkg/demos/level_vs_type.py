"""How many molecule types should a transmitter use?

One colony of 80 receptors can be read as a single channel on concentration
levels, or split into m colonies, each listening to its own molecule type.
Splitting multiplies the number of parallel channels but leaves each with
fewer receptors and a smaller share of the peak and average budget.
"""
from ligandcap import LigandParams, ScenarioConfig, ts_capacity

params = LigandParams(gamma=0.0004, kappa=0.1)

for A_ne in (0.0, 5.0):
    print(f"background concentration {A_ne:g}")
    best = None
    for m in (1, 2, 4, 8, 16):
        cfg = ScenarioConfig(n=16, N=5, m=m, A_s=80.0, alpha=40.0, A_ne=A_ne)
        r = ts_capacity(cfg, params)
        print(f"  m={m:<2}  {r.capacity:.4f} nats  (certified within {r.gap:.0e})")
        if best is None or r.capacity > best[1]:
            best = (m, r.capacity)
    print(f"  best split: m={best[0]}\n")

# Noise favours fewer types: each colony's small peak A_s/m is easier to
# drown in a fixed background.
