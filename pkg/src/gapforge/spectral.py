"""Spectra, gaps, closed forms and the K ~ I - K similarity certificate."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .chain import (
    ParamVector,
    TransitionMatrix,
    build_transition,
    stationary,
    symmetrized,
)
from .errors import NumericalError, ValidationError
from .perm import PermTable, build_table

CLUSTER_TOL = 1e-8
SYMMETRY_TOL = 1e-10
SIMILARITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted descending, grouped into multiplicity clusters.

    ``clusters[c]`` lists the indices of ``eigenvalues`` in cluster ``c``.
    """

    eigenvalues: np.ndarray = field(repr=False)
    clusters: list = field(repr=False)
    cluster_tol: float = CLUSTER_TOL

    def __len__(self):
        return len(self.eigenvalues)

    def cluster_ids(self) -> np.ndarray:
        ids = np.empty(len(self.eigenvalues), dtype=int)
        for c, members in enumerate(self.clusters):
            ids[members] = c
        return ids

    def multiplicity(self, index: int) -> int:
        return len(self.clusters[self.cluster_ids()[index]])

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["index", "eigenvalue", "cluster_id"])
        for i, (v, c) in enumerate(zip(self.eigenvalues, self.cluster_ids())):
            out.writerow([i + 1, format(float(v), ".17g"), int(c)])
        return buf.getvalue()


def cluster(values: np.ndarray, tol: float = CLUSTER_TOL) -> list:
    """Greedy grouping of sorted values whose successive gaps are below ``tol``."""
    groups = []
    for i, v in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - v) < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def eigen_sym(S: np.ndarray, cluster_tol: float = CLUSTER_TOL) -> Spectrum:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {S.shape}")
    asym = float(np.max(np.abs(S - S.T))) if S.size else 0.0
    if asym > SYMMETRY_TOL:
        raise ValidationError(f"matrix is not symmetric (max |S - S^T| = {asym:.3e})")
    try:
        vals = np.linalg.eigvalsh(S)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge for {S.shape[0]}x{S.shape[0]}: {exc}")
    vals = vals[::-1].copy()
    vals.setflags(write=False)
    return Spectrum(vals, cluster(vals, cluster_tol), cluster_tol)


def spectrum_of(P: ParamVector, table: PermTable | None = None, cluster_tol: float = CLUSTER_TOL) -> Spectrum:
    table = table or build_table(P.n)
    K = build_transition(P, table)
    return eigen_sym(symmetrized(K, stationary(P, table)), cluster_tol)


@dataclass(frozen=True)
class GapReport:
    """Spectral gap ``lambda = 1 - beta`` and the multiplicity of ``beta``."""

    n: int
    lam: float
    beta: float
    beta_multiplicity: int
    inverse_gap: float

    def to_json(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def gap_from_spectrum(spec: Spectrum, n: int) -> GapReport:
    vals = spec.eigenvalues
    if len(vals) < 2:
        raise NumericalError("spectrum has fewer than two eigenvalues")
    ids = spec.cluster_ids()
    if ids[0] == ids[1]:
        raise NumericalError(
            f"second eigenvalue {vals[1]!r} clusters with the top eigenvalue; chain looks reducible"
        )
    beta = float(vals[1])
    lam = 1.0 - beta
    return GapReport(n, lam, beta, len(spec.clusters[ids[1]]), 1.0 / lam)


def gap_report(P: ParamVector, table: PermTable | None = None, cluster_tol: float = CLUSTER_TOL) -> GapReport:
    return gap_from_spectrum(spectrum_of(P, table, cluster_tol), P.n)


def unweighted_gap(n: int) -> float:
    """Gap of the unweighted chain, ``(1 - cos(pi/n)) / (n - 1)``."""
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    return (1.0 - math.cos(math.pi / n)) / (n - 1)


def n3_gap_closed(P: ParamVector) -> float:
    """Closed-form gap for ``n = 3``."""
    if P.n != 3:
        raise ValidationError(f"closed form applies to n=3 only, got n={P.n}")
    cyc = P(1, 2) * P(2, 3) * P(3, 1) + P(3, 2) * P(2, 1) * P(1, 3)
    return 0.5 * (1.0 - math.sqrt(cyc))


def kth_largest(spec: Spectrum, k: int) -> float:
    if not 1 <= k <= len(spec):
        raise ValidationError(f"k must lie in 1..{len(spec)}, got {k}")
    return float(spec.eigenvalues[k - 1])


def pairing_defect(spec: Spectrum) -> float:
    """``max_i |e_i + e_{N+1-i} - 1|`` over the descending spectrum."""
    e = spec.eigenvalues
    return float(np.max(np.abs(e + e[::-1] - 1.0)))


@dataclass(frozen=True, eq=False)
class SimilarityCertificate:
    """Evidence that ``(I - K) C = C K`` for ``C[x, rev x] = sign(x) pi(rev x)``.

    ``c_values[k]`` is the single nonzero of row ``k``, located in column
    ``c_columns[k]``.
    """

    residual: float
    c_values: np.ndarray = field(repr=False)
    c_columns: np.ndarray = field(repr=False)
    trace_defect: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "trace_defect": self.trace_defect,
            "passed": self.passed,
            "threshold": SIMILARITY_TOL,
            "c_description": "C[x, reverse(x)] = sign(x) * pi(reverse(x)), zero elsewhere",
        }


def conjugator(P: ParamVector, table: PermTable | None = None):
    """Nonzero values and their columns for the conjugating matrix ``C``."""
    table = table or build_table(P.n)
    pi = stationary(P, table).probs
    cols = np.asarray(table.reverse_rank)
    return table.signs * pi[cols], cols


def similarity_certificate(P: ParamVector, table: PermTable | None = None,
                           K: TransitionMatrix | None = None) -> SimilarityCertificate:
    table = table or build_table(P.n)
    if K is None:
        K = build_transition(P, table)
    c, cols = conjugator(P, table)
    A = K.entries
    N = K.N
    # C K: row x is c_x * K[rev x, :]
    CK = c[:, None] * A[cols, :]
    # (I - K) C: column y is (I - K)[:, rev y] * c_{rev y}; rev is an involution
    IK = np.eye(N) - A
    IKC = IK[:, cols] * c[cols][None, :]
    residual = float(np.linalg.norm(IKC - CK) / np.linalg.norm(c))
    trace_defect = float(np.trace(A) - N / 2)
    return SimilarityCertificate(residual, c, cols, trace_defect, residual <= SIMILARITY_TOL)
