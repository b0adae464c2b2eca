"""Build the weighted adjacent-transposition chain for n = 3 and look at it.

Run with ``python demos/01_transition_matrix_and_stationary_law.py``.
"""

import numpy as np

from gapforge import ParamVector, build_table, build_transition, is_regular, stationary
from gapforge.chain import detailed_balance_residual, stationarity_residual

np.set_printoptions(precision=4, suppress=True)

# %% Parameters: p_ij is the chance that j, sitting just behind i, hops ahead
# when picked. p_ji = 1 - p_ij is implied.
P = ParamVector(3, {(1, 2): 0.6, (1, 3): 0.8, (2, 3): 0.7})
print("regular:", is_regular(P))

# %% Lexicographic state order
table = build_table(3)
for k, x in enumerate(table.perms):
    print(k, x, "sign", table.signs[k], "reverse ->", table.perms[table.reverse_rank[k]])

# %% Transition matrix: each row has n - 1 = 2 possible moves plus a hold
K = build_transition(P, table)
print(K.entries)

# %% Product-form stationary law and its checks
pi = stationary(P, table)
print("pi =", pi.probs, " z =", pi.z)
print("detailed balance residual:", detailed_balance_residual(K, pi))
print("||pi K - pi||_1:", stationarity_residual(K, pi))
