"""A closed-form ceiling on capacity, and how loose it is.

Without background molecules the ceiling is infinite, because the empty
channel state becomes perfectly informative. As the background grows the
ceiling comes down quickly, while the true capacity declines slowly.
"""
import warnings

from ligandcap import BoundInputs, LigandParams, ScenarioConfig, kl_bound_case, kl_upper_bound, ls_capacity

params = LigandParams()
print(f"{'A_ne':>6} {'capacity':>9} {'bound':>8}  branch")
for A_ne in (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0):
    cap = ls_capacity(ScenarioConfig(A_s=80.0, alpha=40.0, A_ne=A_ne), params).capacity
    b = BoundInputs(R=80, A=80.0, alpha=40.0, A_ne=A_ne, params=params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ub = kl_upper_bound(b)
    print(f"{A_ne:6g} {cap:9.4f} {ub:8.3f}  {kl_bound_case(b)}")
