"""When is switching the transmitter on and off good enough?

With a weak peak concentration almost every receptor stays empty, so only
"some binding" versus "no binding" is informative. The best on-off input
then reaches the full capacity. Larger peaks make the number of bound
receptors informative and intermediate levels start to pay off.
"""
from ligandcap import LigandParams, ScenarioConfig, blahut_arimoto, build_channel, lower_bound

params = LigandParams()
R = 4 * 5
print(f"{'A_s':>6} {'on-off':>8} {'capacity':>9} {'P(off)':>7} {'loss':>6}")
for A_s in (2.5, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0):
    on_off, p_off = lower_bound(A_s, R, params)
    cap = blahut_arimoto(build_channel(ScenarioConfig(n=4, N=5, A_s=A_s, alpha=A_s), params, 401)).capacity
    print(f"{A_s:6g} {on_off:8.4f} {cap:9.4f} {p_off:7.3f} {max(cap - on_off, 0.0) / cap:6.1%}")
