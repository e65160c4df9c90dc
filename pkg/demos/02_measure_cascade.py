"""The recursive block measures.

One level step: draw L independent lower-level blocks, sign-normalize
each, resign them with a parity-constrained sign vector, concatenate.
The step preserves uniform marginals, (L-1)-wise independence and
independent magnitudes, but pushes the L-th moment of the block sum
strictly below the iid value - measured here against the exact oracles.
"""

import numpy as np

from cltlab import (
    RandomSource,
    estimate_moment,
    iid_uniform_sum_moment,
    mu1_sum_moment,
    sample_mu,
    sample_mu_via_flip,
)

rng = RandomSource(11, "demo-measures")
n = 400_000

Y = sample_mu(1, rng, size=n)
S = Y.sum(axis=1)
print(f"{n} level-1 samples (width 6), sum moments vs exact values:")
for p in (2, 4, 6):
    est = estimate_moment(S, p)
    exact = mu1_sum_moment(p)
    iid = iid_uniform_sum_moment(6, p)
    print(
        f"  order {p}: estimate {est.value:10.3f} +- {est.std_error:.3f}"
        f"   exact {exact:10.3f}   iid {iid:10.3f}"
    )
print("orders 2 and 4 match the iid process exactly; order 6 sits lower by")
print(f"  {iid_uniform_sum_moment(6, 6) - mu1_sum_moment(6):.2f} = 6! * (sqrt(3)/2)**6,")
print("the signature of the hidden sign parity.\n")

P = Y.prod(axis=1)
print(f"full-block product moment: {P.mean():+.5f} (exact -27/64 = {-27 / 64:+.5f})")

T = sample_mu_via_flip(1, 0, rng, size=n)
St = T.sum(axis=1)
print("\nalternate route (concatenate raw blocks, then conditionally flip piece 0):")
for p in (2, 4, 6):
    a = estimate_moment(St, p)
    b = estimate_moment(S, p)
    z = abs(a.value - b.value) / np.hypot(a.std_error, b.std_error)
    print(f"  order {p}: flip route {a.value:10.3f}  direct {b.value:10.3f}  |z| = {z:.2f}")
print("the two constructions produce the same law.")
