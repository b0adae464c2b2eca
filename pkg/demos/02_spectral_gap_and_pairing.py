"""Spectral gap, closed forms and the eigenvalue pairing lambda <-> 1 - lambda."""

import numpy as np

from gapforge import (
    ParamVector,
    gap_report,
    n3_gap_closed,
    pairing_defect,
    similarity_certificate,
    spectrum_of,
    unweighted_gap,
)

# %% Unweighted chain: eigensolver vs closed form
for n in range(2, 7):
    rep = gap_report(ParamVector.uniform(n))
    print(f"n={n}: gap {rep.lam:.12f}  closed form {unweighted_gap(n):.12f}  multiplicity {rep.beta_multiplicity}")

# %% n = 3 closed form for a non-regular vector
P = ParamVector(3, {(1, 2): 0.2, (1, 3): 0.9, (2, 3): 0.35})
print("eigensolver", gap_report(P).lam, "closed form", n3_gap_closed(P))

# %% Eigenvalues come in pairs summing to one, for any parameters
rng = np.random.default_rng(0)
P = ParamVector.from_values(4, rng.uniform(0.05, 0.95, size=6))
spec = spectrum_of(P)
print(np.round(spec.eigenvalues, 4))
print("pairing defect:", pairing_defect(spec))
cert = similarity_certificate(P)
print("(I - K) C = C K residual:", cert.residual, "passed:", cert.passed)
