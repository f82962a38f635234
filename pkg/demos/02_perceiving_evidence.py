"""How topic competence shapes what an agent perceives.

Each evidence item is read correctly with probability tc; a misread item
becomes uncertain evidence. Low competence therefore inflates uncertainty.
"""

import numpy as np

from slsim import build_matrix, map_evidence, perceived_opinion

rng = np.random.default_rng(0)
ev = build_matrix(n_pv=4000, n_pn=1000, n_cv=1000, n_cn=1000, rng=rng)

print(" tc    n_b    n_d    n_u      b      d      u")
for tc in (0.0, 0.25, 0.5, 0.75, 1.0):
    pc = map_evidence(tc, ev, rng)
    op = perceived_opinion(pc, 0.5)
    print(f"{tc:4.2f} {pc.n_b:6d} {pc.n_d:6d} {pc.n_u:6d}  {op.b:.3f}  {op.d:.3f}  {op.u:.3f}")
