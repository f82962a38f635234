"""One simulation on a 200-node preferential-attachment graph.

Originators hold perceived opinions and never change. Everyone else starts
near-vacuous, listens to active neighbours and slowly forgets.
"""

from slsim import SimConfig, run
from slsim.network import compute_stats, parse_graph_source

g = parse_graph_source("synthetic:ba,n=200,m=5,seed=0")
print(compute_stats(g).to_json())

result = run(g, SimConfig(seed=1, steps=30, n_cv=4000))
print(f"originators: {sorted(result.originators)}")
print(f"everyone active from step {result.first_full_activation}")
print("  t  mean_b  mean_d  mean_u     S     I     R")
for m in [result.initial, *result.metrics][::5]:
    print(f"{m.t:3d}  {m.mean_b:.4f}  {m.mean_d:.4f}  {m.mean_u:.4f}  {m.frac_S:.2f}  {m.frac_I:.2f}  {m.frac_R:.2f}")
