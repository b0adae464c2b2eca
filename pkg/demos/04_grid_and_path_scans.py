"""Sweep the regular grid for n = 4 and follow straight paths to the
unweighted point. Takes a few seconds."""

import numpy as np

from gapforge import GridSpec, ParamVector, PathSpec, multiplicity_census, scan_grid_min, scan_path, unweighted_gap
from gapforge.explorer import random_regular

# %% Grid minimization
res = scan_grid_min(GridSpec(4, 0.05), parallelism=2)
print(f"{res.total} regular grid points, min gap {res.min_lambda:.12f} vs {unweighted_gap(4):.12f}")
print(f"{len(res.argmin)} minimizers, e.g.")
for r in res.argmin[:5]:
    print("  ", r.values, "multiplicity", r.beta_multiplicity)

# %% Multiplicity of the top nontrivial eigenvalue at some minimizers
for r in res.argmin[:: max(1, len(res.argmin) // 6)]:
    c = multiplicity_census(ParamVector.from_values(4, r.values))
    print(f"half-indices {c.half_indices}: mu={c.mu}, predicted {c.predicted_mu}")

# %% Gap along p(t) = (1 - t) p + t p_star
rng = np.random.default_rng(1)
for _ in range(3):
    prof = scan_path(PathSpec(random_regular(4, rng), 11))
    print(np.round(prof.lam, 5), "nonincreasing:", prof.nonincreasing, "convex:", prof.convex)
