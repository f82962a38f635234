"""A small two-axis sweep: competence against the amount of con evidence.

Uses 5 replications per cell to stay quick; the CLI presets use 30 or 100.
"""

import numpy as np

from slsim.experiments import Axis, SweepSpec, run_sweep
from slsim.network import parse_graph_source
from slsim.simulation import SimConfig

g = parse_graph_source("synthetic:ba,n=200,m=5,seed=0")
spec = SweepSpec(
    SimConfig(seed=3, steps=30, tc_std=0.0),
    Axis("tc_mu", (0.0, 0.5, 1.0)),
    Axis("n_cv", (1000, 4000)),
    replications=5,
)
result = run_sweep(spec, g)

np.set_printoptions(precision=3, suppress=True)
print("rows: tc_mu", spec.axis1.values, " columns: n_cv", spec.axis2.values)
print("mean_d\n", result.grid("mean_d"))
print("frac_R\n", result.grid("frac_R"))
