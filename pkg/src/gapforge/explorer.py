"""Parameter sweeps over regular vectors: grid minimization, interpolation
paths towards the unweighted point, and the multiplicity census."""

from __future__ import annotations

import csv
import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chain import ParamVector, build_transition, interpolate, is_regular, pairs, stationary, symmetrized
from .errors import SizeLimitError, ValidationError
from .perm import build_table
from .spectral import CLUSTER_TOL, cluster, gap_report, unweighted_gap

DEFAULT_SCAN_MAX_N = 5
ARG_TOL = 1e-9
MONO_TOL = 1e-8
CONV_TOL = 1e-8
HALF_TOL = 1e-12
# fixed so that batching never depends on the number of workers
CHUNK = 512


@dataclass(frozen=True)
class GridSpec:
    """Every ``p_ij`` on the grid ``{step, 2 step, ..., 1 - step}``."""

    n: int
    step: float

    def __post_init__(self):
        if not 0 < self.step <= 0.5:
            raise ValidationError(f"grid step must lie in (0, 0.5], got {self.step}")
        half = 0.5 / self.step
        if abs(half - round(half)) > 1e-12 * max(1.0, half):
            raise ValidationError(f"grid step {self.step} does not divide 0.5")

    @property
    def denominator(self) -> int:
        """Grid values are ``k / denominator`` for ``0 < k < denominator``."""
        return int(round(1.0 / self.step))


def _grid_integer_points(n: int, M: int):
    """Integer assignments ``k_ij`` (value ``k_ij / M``) of regular grid points.

    Fills pairs by increasing distance ``j - i``: adjacent pairs need
    ``k >= M/2``, every other pair needs ``k >= max(k_{i+1,j}, k_{i,j-1})``.
    These are exactly the three regularity conditions, so no filtering step
    is needed and comparisons stay in exact integer arithmetic.
    """
    order = [(i, i + d) for d in range(1, n) for i in range(1, n - d + 1)]
    half = M // 2
    k = {}

    def rec(pos):
        if pos == len(order):
            yield dict(k)
            return
        i, j = order[pos]
        lo = half if j == i + 1 else max(k[(i + 1, j)], k[(i, j - 1)])
        for v in range(lo, M):
            k[(i, j)] = v
            yield from rec(pos + 1)
        k.pop((i, j), None)

    canon = pairs(n)
    pts = [tuple(a[key] for key in canon) for a in rec(0)]
    pts.sort()
    return pts


def regular_grid(spec: GridSpec):
    """Yield each regular grid point once, in lexicographic order of the
    values listed in canonical pair order."""
    M = spec.denominator
    for ks in _grid_integer_points(spec.n, M):
        yield ParamVector.from_values(spec.n, [Fraction(k, M) for k in ks])


@dataclass(frozen=True)
class ScanRecord:
    values: tuple
    lam: float
    beta_multiplicity: int


@dataclass
class ScanResult:
    n: int
    records: list = field(repr=False)
    min_lambda: float
    argmin: list
    total: int
    wall_time: float
    arg_tol: float = ARG_TOL
    label: str = "grid"

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow([f"p{i}{j}" for i, j in pairs(self.n)] + ["lambda", "multiplicity"])
        for rec in self.records:
            out.writerow([format(v, ".17g") for v in rec.values]
                         + [format(rec.lam, ".17g"), rec.beta_multiplicity])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "n": self.n,
            "min_lambda": self.min_lambda,
            "argmin": [dict(zip((f"{i},{j}" for i, j in pairs(self.n)), r.values)) for r in self.argmin],
            "argmin_count": len(self.argmin),
            "total_points": self.total,
            "arg_tol": self.arg_tol,
            "wall_time": self.wall_time,
        }


def _gap_batch(n: int, value_rows: list, cluster_tol: float = CLUSTER_TOL):
    """``(lambda, multiplicity)`` for a batch of parameter vectors.

    Each matrix is symmetrized and decomposed on its own; stacking only
    amortizes the Python overhead.
    """
    table = build_table(n, max_n_override=max(n, 2))
    mats = []
    for values in value_rows:
        P = ParamVector.from_values(n, values)
        mats.append(symmetrized(build_transition(P, table), stationary(P, table)))
    vals = np.linalg.eigvalsh(np.stack(mats))[:, ::-1]
    out = []
    for row in vals:
        groups = cluster(row, cluster_tol)
        if len(groups[0]) > 1:
            from .errors import NumericalError
            raise NumericalError("second eigenvalue clusters with 1; chain looks reducible")
        out.append((float(1.0 - row[1]), len(groups[1])))
    return out


def _evaluate(n: int, value_rows: list, parallelism: int, progress: bool = False):
    chunks = [value_rows[a:a + CHUNK] for a in range(0, len(value_rows), CHUNK)]
    results = []
    if parallelism <= 1 or len(chunks) <= 1:
        for c, chunk in enumerate(chunks):
            results.extend(_gap_batch(n, chunk))
            if progress:
                print(f"[scan] {min((c + 1) * CHUNK, len(value_rows))}/{len(value_rows)}", file=sys.stderr)
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for c, part in enumerate(pool.map(_gap_batch, [n] * len(chunks), chunks)):
                results.extend(part)
                if progress:
                    print(f"[scan] {min((c + 1) * CHUNK, len(value_rows))}/{len(value_rows)}", file=sys.stderr)
    return results


def scan_points(n: int, points, parallelism: int = 1, arg_tol: float = ARG_TOL,
                progress: bool = False, label: str = "grid") -> ScanResult:
    if parallelism < 1:
        raise ValidationError(f"parallelism must be positive, got {parallelism}")
    start = time.perf_counter()
    value_rows = [tuple(float(v) for v in P.values()) for P in points]
    if not value_rows:
        raise ValidationError("no parameter points to scan")
    value_rows.sort()
    gaps = _evaluate(n, value_rows, parallelism, progress)
    records = [ScanRecord(v, lam, mu) for v, (lam, mu) in zip(value_rows, gaps)]
    lo = min(r.lam for r in records)
    argmin = [r for r in records if r.lam <= lo + arg_tol]
    return ScanResult(n, records, lo, argmin, len(records), time.perf_counter() - start, arg_tol, label)


def scan_grid_min(spec: GridSpec, parallelism: int = 1, max_n: int = DEFAULT_SCAN_MAX_N,
                  arg_tol: float = ARG_TOL, progress: bool = False) -> ScanResult:
    """Gap at every regular grid point plus the set of near-minimizers."""
    if spec.n > max_n:
        raise SizeLimitError(f"grid scans are capped at n={max_n}; got n={spec.n}")
    return scan_points(spec.n, regular_grid(spec), parallelism, arg_tol, progress)


@dataclass(frozen=True)
class PathSpec:
    """Straight path ``p(t) = (1 - t) P + t P_star`` sampled at ``steps`` points."""

    endpoint: ParamVector
    steps: int = 11
    t_max: float = 1.0

    def __post_init__(self):
        if self.steps < 2:
            raise ValidationError(f"path needs at least 2 steps, got {self.steps}")
        if not 0 < self.t_max <= 1:
            raise ValidationError(f"t_max must lie in (0, 1], got {self.t_max}")
        ok, where = is_regular(self.endpoint)
        if not ok:
            raise ValidationError(f"path endpoint is not regular (condition {where[0]} at i={where[1]}, j={where[2]})")

    def times(self) -> np.ndarray:
        return self.t_max * np.arange(self.steps) / (self.steps - 1)

    def point(self, t: float) -> ParamVector:
        return interpolate(self.endpoint, ParamVector.uniform(self.endpoint.n), t)


@dataclass
class PathProfile:
    """Gap along a path. Verdicts are discrete-grid evidence only."""

    t: np.ndarray
    lam: np.ndarray
    second_differences: np.ndarray
    nonincreasing: bool
    convex: bool
    mono_tol: float
    conv_tol: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["t", "lambda", "second_difference"])
        for k, (t, lam) in enumerate(zip(self.t, self.lam)):
            d2 = "" if k == 0 or k == len(self.t) - 1 else format(float(self.second_differences[k - 1]), ".17g")
            out.writerow([format(float(t), ".17g"), format(float(lam), ".17g"), d2])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "t": self.t.tolist(),
            "lambda": self.lam.tolist(),
            "second_differences": self.second_differences.tolist(),
            "nonincreasing": self.nonincreasing,
            "convex": self.convex,
            "evidence": "discrete-grid",
        }


def scan_path(spec: PathSpec, mono_tol: float = MONO_TOL, conv_tol: float = CONV_TOL) -> PathProfile:
    n = spec.endpoint.n
    ts = spec.times()
    rows = [tuple(spec.point(float(t)).values()) for t in ts]
    lam = np.array([g for g, _ in _gap_batch(n, rows)])
    d2 = lam[2:] - 2 * lam[1:-1] + lam[:-2]
    nonincreasing = bool(np.all(np.diff(lam) <= mono_tol))
    convex = bool(np.all(d2 >= -conv_tol))
    return PathProfile(ts, lam, d2, nonincreasing, convex, mono_tol, conv_tol)


@dataclass(frozen=True)
class MultiplicityCensus:
    n: int
    nu: int
    half_indices: tuple
    mu: int
    predicted_mu: int
    lam: float
    matches_unweighted_gap: bool

    @property
    def agrees(self) -> bool:
        return self.mu == self.predicted_mu

    def to_json(self) -> dict:
        return {
            "n": self.n, "nu": self.nu, "half_indices": list(self.half_indices),
            "mu": self.mu, "predicted_mu": self.predicted_mu, "lambda": self.lam,
            "matches_unweighted_gap": self.matches_unweighted_gap, "agrees": self.agrees,
        }


def half_indices(P: ParamVector, tol: float = HALF_TOL) -> tuple:
    """Indices ``i`` with ``p_ij = 1/2`` for every ``j != i``."""
    return tuple(i for i in range(1, P.n + 1)
                 if all(abs(P(i, j) - 0.5) <= tol for j in range(1, P.n + 1) if j != i))


def predicted_multiplicity(n: int, nu: int) -> int:
    if nu == n or nu == n - 2:
        return n - 1
    return nu


def multiplicity_census(P: ParamVector, gap_tol: float = 1e-9) -> MultiplicityCensus:
    idx = half_indices(P)
    nu = len(idx)
    rep = gap_report(P)
    return MultiplicityCensus(
        P.n, nu, idx, rep.beta_multiplicity, predicted_multiplicity(P.n, nu), rep.lam,
        abs(rep.lam - unweighted_gap(P.n)) <= gap_tol,
    )


def random_regular(n: int, rng: np.random.Generator, upper: float = 0.99) -> ParamVector:
    """A random regular vector: adjacent pairs uniform on ``[1/2, upper)``, each
    wider pair uniform above the larger of its two nested neighbours."""
    k = {}
    for d in range(1, n):
        for i in range(1, n - d + 1):
            j = i + d
            lo = 0.5 if d == 1 else max(k[(i + 1, j)], k[(i, j - 1)])
            k[(i, j)] = lo + (upper - lo) * rng.random()
    return ParamVector(n, k)


def random_half_pattern(n: int, index: int, rng: np.random.Generator, upper: float = 0.99,
                        max_tries: int = 10_000) -> ParamVector:
    """Random regular vector with ``p_{index, j} = 1/2`` for every ``j``.

    Free pairs sit at their lower bound half the time so that the tight
    patterns the constraints force are actually reached; non-regular draws
    are rejected.
    """
    if not 1 <= index <= n:
        raise ValidationError(f"index must lie in 1..{n}, got {index}")
    for _ in range(max_tries):
        k = {}
        for d in range(1, n):
            for i in range(1, n - d + 1):
                j = i + d
                lo = 0.5 if d == 1 else max(k[(i + 1, j)], k[(i, j - 1)])
                if index in (i, j):
                    k[(i, j)] = 0.5
                elif rng.random() < 0.5:
                    k[(i, j)] = lo
                else:
                    k[(i, j)] = lo + (upper - lo) * rng.random()
        P = ParamVector(n, k)
        if is_regular(P)[0]:
            return P
    raise ValidationError(f"no regular vector with half-index {index} found in {max_tries} draws")
