"""Move-ahead-1 versus move-to-front: search cost and slow starts."""

import numpy as np

from gapforge import WeightVector, esc_report, front_probability, geometric_weights, tv_curve
from gapforge.chain import build_ma1_transition, build_transition, ma1_stationary, params_from_weights, stationary
from gapforge.mixing import slow_start

# %% Stationary expected search cost
for w in [(1, 1, 1, 1), (8, 4, 2, 1), (5, 4, 1, 1, 0.5)]:
    rep = esc_report(WeightVector(w))
    print(w, f"MA1 {rep.esc_ma1:.4f}  MTF {rep.esc_mtf:.4f}")

# %% Geometric weights: n - 1 usually sits ahead of n in stationarity ...
for n in range(3, 7):
    print(n, front_probability(geometric_weights(n), n - 1, n))

# %% ... but from a start with n ahead of n - 1, move-ahead-1 waits for a rare request.
# The uniform-position chain with p_ij = w_i / (w_i + w_j) has the same stationary law.
n = 6
w = geometric_weights(n)
start = slow_start(n)
ma1 = tv_curve(build_ma1_transition(w), ma1_stationary(w), start, 400)
P = params_from_weights(w)
uni = tv_curve(build_transition(P), stationary(P), start, 400)
for t in (0, 50, 100, 200, 400):
    print(f"t={t:3d}  MA1 {ma1.d[t]:.4f}  uniform-position {uni.d[t]:.4f}")
