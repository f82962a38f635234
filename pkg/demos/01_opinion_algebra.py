"""A tour of the opinion algebra.

Run with ``python3 demos/01_opinion_algebra.py``.
"""

from slsim import EvidenceCounts, Opinion, consensus, decay, discount, expectation, from_evidence, similarity

# An opinion splits unit mass into belief, disbelief and uncertainty.
w = Opinion(0.5, 0.3, 0.2, a=0.5)
print("opinion          ", w.as_tuple(), "expectation", expectation(w))

# Evidence counts become an opinion; the non-informative weight W keeps u > 0.
print("8 pro, 2 con, W=2", from_evidence(EvidenceCounts(8, 2, 2), 0.5).as_tuple())

# A receiver trusts a sender in proportion to how alike their (b, d) are.
receiver = Opinion(0.3, 0.3, 0.4)
sender = Opinion(0.6, 0.2, 0.2)
s = similarity(receiver, sender)
print(f"similarity        {s:.4f}")

# Discount by that trust, then fuse.
heard = discount(sender, s)
print("discounted        ", tuple(round(x, 4) for x in heard.as_tuple()))
fused = consensus(receiver, heard)
print("fused             ", tuple(round(x, 4) for x in fused.as_tuple()))

# Without new input, belief and disbelief leak into uncertainty.
x = fused
for _ in range(20):
    x = decay(x, 0.05)
print("after 20 decays   ", tuple(round(v, 4) for v in x.as_tuple()))
