"""Two n = 4 examples where natural strengthenings of the gap conjecture fail."""

from gapforge import ParamVector, gap_report, kth_largest, spectrum_of

# %% Raising p12 can lower the gap
P = ParamVector(4, {(1, 2): 0.5, (2, 3): 0.7, (3, 4): 0.5, (1, 3): 0.7, (2, 4): 0.8, (1, 4): 0.9})
print("gap:", round(gap_report(P).lam, 4))
print("gap with p12 = 0.6:", round(gap_report(P.replace(p12=0.6)).lam, 4))

# %% The fifth-largest eigenvalue is not maximized at the unweighted point
print("5th eigenvalue, unweighted:", round(kth_largest(spectrum_of(ParamVector.uniform(4)), 5), 4))
Q = ParamVector.uniform(4).replace(p24=0.95, p14=0.95)
print("5th eigenvalue, p24 = p14 = 0.95:", round(kth_largest(spectrum_of(Q), 5), 4))
