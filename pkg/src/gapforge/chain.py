"""Parameter vectors, transition matrices and stationary laws.

The weighted adjacent-transposition chain picks a position ``r`` in
``2..n`` uniformly and, with probability ``p(x_r, x_{r-1})``, swaps the
records in positions ``r - 1`` and ``r``. It is reversible with respect to

    pi(x) ∝ prod_{r < s} p(x_r, x_s).

Two self-organizing-list chains driven by request weights are also built
here: move-ahead-1 (the requested record swaps with its predecessor) and
move-to-front.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import NotReversibleError, NumericalError, ParseError, ValidationError
from .perm import PermTable, build_table

BOUNDARY_TOL = 1e-12
LOG_DOMAIN_MIN_N = 6
LOG_DOMAIN_MIN_P = 0.01

KIND_ADJACENT = "weighted-adjacent"
KIND_MA1 = "ma1-classic"
KIND_MTF = "move-to-front"


def pairs(n: int) -> list[tuple[int, int]]:
    """Canonical pair order ``(1,2), (1,3), ..., (n-1,n)``."""
    return list(itertools.combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class ParamVector:
    """Swap parameters ``p_ij`` for ``i < j``; ``p_ji`` is ``1 - p_ij``."""

    n: int
    p: dict = field(compare=True)

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"n must be >= 2, got {self.n}")
        expected = set(pairs(self.n))
        got = set(self.p)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            msg = []
            if missing:
                msg.append("missing pairs " + ", ".join(f"({i},{j})" for i, j in missing))
            if extra:
                msg.append("unexpected pairs " + ", ".join(f"({i},{j})" for i, j in extra))
            raise ValidationError("; ".join(msg))
        clean = {}
        for key in pairs(self.n):
            v = float(self.p[key])
            if not np.isfinite(v) or v <= BOUNDARY_TOL or v >= 1.0 - BOUNDARY_TOL:
                raise ValidationError(
                    f"p{key[0]}{key[1]}={v!r} must lie strictly inside (0, 1)"
                )
            clean[key] = v
        object.__setattr__(self, "p", clean)

    def __call__(self, i: int, j: int) -> float:
        if i == j:
            raise ValidationError("p(i, i) is undefined")
        if i < j:
            return self.p[(i, j)]
        return 1.0 - self.p[(j, i)]

    def __hash__(self):
        return hash((self.n, tuple(self.values())))

    def values(self) -> np.ndarray:
        """Values in canonical pair order."""
        return np.array([self.p[k] for k in pairs(self.n)])

    def matrix(self) -> np.ndarray:
        """Dense ``n x n`` array ``M[i-1, j-1] = p(i, j)``; diagonal is zero."""
        M = np.zeros((self.n, self.n))
        for (i, j), v in self.p.items():
            M[i - 1, j - 1] = v
            M[j - 1, i - 1] = 1.0 - v
        return M

    @classmethod
    def uniform(cls, n: int, value: float = 0.5) -> "ParamVector":
        return cls(n, {k: value for k in pairs(n)})

    @classmethod
    def from_values(cls, n: int, values) -> "ParamVector":
        values = list(values)
        keys = pairs(n)
        if len(values) != len(keys):
            raise ValidationError(f"expected {len(keys)} values for n={n}, got {len(values)}")
        return cls(n, dict(zip(keys, values)))

    def replace(self, **assignments) -> "ParamVector":
        """Copy with some entries changed, e.g. ``P.replace(p12=0.6)``."""
        p = dict(self.p)
        for name, v in assignments.items():
            key = (int(name[1]), int(name[2])) if len(name) == 3 else None
            if key not in p:
                raise ValidationError(f"unknown parameter {name!r}")
            p[key] = v
        return ParamVector(self.n, p)

    def to_text(self) -> str:
        return ";".join(f"{i},{j}={v!r}" for (i, j), v in self.p.items())

    def to_json(self) -> dict:
        return {"n": self.n, "p": {f"{i},{j}": v for (i, j), v in self.p.items()}}


def interpolate(P: ParamVector, Q: ParamVector, t: float) -> ParamVector:
    """``(1 - t) P + t Q``."""
    if P.n != Q.n:
        raise ValidationError("parameter vectors of different size")
    return ParamVector(P.n, {k: (1.0 - t) * P.p[k] + t * Q.p[k] for k in P.p})


def _parse_pair(key: str, fragment: str) -> tuple[int, int]:
    try:
        i, j = (int(tok) for tok in key.split(","))
    except ValueError:
        raise ParseError(f"bad pair in {fragment!r}; expected 'i,j=v'")
    if not i < j:
        raise ParseError(f"pair ({i},{j}) must have i < j in {fragment!r}")
    return i, j


def _assemble(n: int, items, source: str) -> ParamVector:
    p = {}
    for key, v, fragment in items:
        if key in p:
            raise ParseError(f"duplicate pair ({key[0]},{key[1]}) in {fragment!r}")
        if not 1 <= key[0] < key[1] <= n:
            raise ParseError(f"pair ({key[0]},{key[1]}) out of range for n={n}")
        p[key] = v
    missing = [k for k in pairs(n) if k not in p]
    if missing:
        raise ParseError(
            f"missing pairs in {source}: " + ", ".join(f"({i},{j})" for i, j in missing)
        )
    return ParamVector(n, p)


def parse_params(text: str, n: int | None = None) -> ParamVector:
    """Parse ``"1,2=0.5;1,3=0.7;2,3=0.7"`` or the JSON form ``{"n":..,"p":{..}}``."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
            n_json = int(obj["n"])
            raw = obj["p"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"bad JSON parameter vector: {exc}")
        if n is not None and n != n_json:
            raise ParseError(f"JSON says n={n_json} but n={n} was requested")
        items = []
        for key, v in raw.items():
            if not isinstance(v, (int, float)):
                raise ParseError(f"value for {key!r} is not a number")
            items.append((_parse_pair(key, key), float(v), key))
        return _assemble(n_json, items, "JSON input")
    if n is None:
        raise ParseError("n is required for the text parameter format")
    items = []
    for fragment in filter(None, (f.strip() for f in text.split(";"))):
        if "=" not in fragment:
            raise ParseError(f"missing '=' in {fragment!r}")
        key, val = fragment.split("=", 1)
        try:
            v = float(val)
        except ValueError:
            raise ParseError(f"bad value in {fragment!r}")
        items.append((_parse_pair(key.strip(), fragment), v, fragment))
    return _assemble(n, items, repr(text))


@dataclass(frozen=True)
class WeightVector:
    """Request weights ``w_1 >= ... >= w_n > 0`` (not necessarily normalized)."""

    w: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.w)
        if len(w) < 2:
            raise ValidationError("need at least two weights")
        if not all(np.isfinite(v) and v > 0 for v in w):
            raise ValidationError(f"weights must be strictly positive, got {w}")
        if any(a < b for a, b in zip(w, w[1:])):
            raise ValidationError(f"weights must be nonincreasing, got {w}")
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return len(self.w)

    def normalized(self) -> np.ndarray:
        w = np.asarray(self.w)
        total = w.sum()
        if not np.isfinite(total) or total <= 0:
            raise ValidationError("weights cannot be normalized")
        return w / total


def parse_weights(text: str) -> WeightVector:
    try:
        return WeightVector(tuple(float(tok) for tok in text.split(",")))
    except ValueError:
        raise ParseError(f"cannot parse weights {text!r}; expected e.g. '4,2,1'")


def is_regular(P: ParamVector, tol: float = 0.0):
    """Check the three regularity conditions.

    Returns ``(True, None)`` or ``(False, (condition, i, j))`` naming the first
    violation, where condition 1 is ``p_{i-1,i} >= 1/2``, condition 2 is
    ``p_{i-1,j} >= p_{ij}`` and condition 3 is ``p_{i,j+1} >= p_{ij}``.
    """
    n = P.n
    for i in range(2, n + 1):
        if P(i - 1, i) < 0.5 - tol:
            return False, (1, i, i)
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            if P(i - 1, j) < P(i, j) - tol:
                return False, (2, i, j)
    for i in range(1, n):
        for j in range(i + 1, n):
            if P(i, j + 1) < P(i, j) - tol:
                return False, (3, i, j)
    return True, None


def params_from_weights(w: WeightVector) -> ParamVector:
    """``p_ij = w_i / (w_i + w_j)``."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    ws = w.w
    return ParamVector(w.n, {(i, j): ws[i - 1] / (ws[i - 1] + ws[j - 1]) for i, j in pairs(w.n)})


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    n: int
    entries: np.ndarray = field(repr=False)
    kind: str = KIND_ADJACENT

    @property
    def N(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    """``probs`` sums to one; ``z`` is the total unnormalized mass."""

    probs: np.ndarray = field(repr=False)
    z: float
    log_domain: bool = False
    log_z: float = 0.0


def _table_for(n: int, table: PermTable | None) -> PermTable:
    if table is None:
        return build_table(n)
    if table.n != n:
        raise ValidationError(f"dimension mismatch: parameters for n={n}, table for n={table.n}")
    return table


def build_transition(P: ParamVector, table: PermTable | None = None) -> TransitionMatrix:
    n = P.n
    table = _table_for(n, table)
    M = P.matrix()
    arr = table.array - 1
    N = table.size
    K = np.zeros((N, N))
    rows = np.arange(N)
    for r in range(1, n):
        left, right = arr[:, r - 1], arr[:, r]
        # the record at position r+1 (1-based) moves ahead of its predecessor
        K[rows, table.neighbors[:, r - 1]] = M[right, left] / (n - 1)
    K[rows, rows] = 0.0
    K[rows, rows] = 1.0 - K.sum(axis=1)
    K.setflags(write=False)
    return TransitionMatrix(n, K, KIND_ADJACENT)


def log_weights(P: ParamVector, table: PermTable) -> np.ndarray:
    """``sum_{r<s} log p(x_r, x_s)`` for every permutation."""
    logM = np.zeros((P.n, P.n))
    off = ~np.eye(P.n, dtype=bool)
    logM[off] = np.log(P.matrix()[off])
    arr = table.array - 1
    out = np.zeros(table.size)
    for r, s in itertools.combinations(range(P.n), 2):
        out += logM[arr[:, r], arr[:, s]]
    return out


def stationary(P: ParamVector, table: PermTable | None = None) -> StationaryDistribution:
    """Product-form stationary law, in log space for ``n >= 6`` or tiny ``p``."""
    table = _table_for(P.n, table)
    vals = P.values()
    use_log = P.n >= LOG_DOMAIN_MIN_N or bool(np.any(np.minimum(vals, 1 - vals) < LOG_DOMAIN_MIN_P))
    if use_log:
        lw = log_weights(P, table)
        log_z = float(logsumexp(lw))
        probs = np.exp(lw - log_z)
        probs /= probs.sum()
        return StationaryDistribution(probs, float(np.exp(log_z)), True, log_z)
    M = P.matrix()
    arr = table.array - 1
    w = np.ones(table.size)
    for r, s in itertools.combinations(range(P.n), 2):
        w *= M[arr[:, r], arr[:, s]]
    z = float(w.sum())
    return StationaryDistribution(w / z, z, False, float(np.log(z)))


def ma1_stationary(w: WeightVector, table: PermTable | None = None) -> StationaryDistribution:
    """Move-ahead-1 stationary law ``pi(x) ∝ prod_i w_{x_i}^{n-i}``."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    table = _table_for(w.n, table)
    n = w.n
    logw = np.log(np.asarray(w.w))
    powers = np.arange(n - 1, -1, -1)
    lw = (logw[table.array - 1] * powers).sum(axis=1)
    log_z = float(logsumexp(lw))
    probs = np.exp(lw - log_z)
    probs /= probs.sum()
    return StationaryDistribution(probs, float(np.exp(log_z)), True, log_z)


def detailed_balance_residual(K: TransitionMatrix, pi: StationaryDistribution) -> float:
    """Max relative violation of ``pi_x K_xy = pi_y K_yx`` over nonzero pairs."""
    F = pi.probs[:, None] * K.entries
    scale = np.maximum(F, F.T)
    mask = scale > 0
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(F - F.T)[mask] / scale[mask]))


def stationarity_residual(K: TransitionMatrix, pi: StationaryDistribution) -> float:
    """``||pi K - pi||_1``."""
    return float(np.abs(pi.probs @ K.entries - pi.probs).sum())


def symmetrized(K: TransitionMatrix, pi: StationaryDistribution, tol: float = 1e-10) -> np.ndarray:
    """``S = D^{1/2} K D^{-1/2}`` with ``D = diag(pi)``; same spectrum as ``K``."""
    if pi.probs.shape[0] != K.N:
        raise ValidationError("stationary vector and matrix sizes differ")
    resid = detailed_balance_residual(K, pi)
    if resid > tol:
        raise NotReversibleError(f"detailed-balance residual {resid:.3e} exceeds {tol:.0e}")
    root = np.sqrt(pi.probs)
    S = root[:, None] * K.entries / root[None, :]
    return 0.5 * (S + S.T)


def build_ma1_transition(w: WeightVector, table: PermTable | None = None) -> TransitionMatrix:
    """Move-ahead-1: the record in position i is requested with prob. ``w_{x_i}``
    (normalized) and swaps with the record in position ``i - 1``."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    table = _table_for(w.n, table)
    wn = w.normalized()
    arr = table.array - 1
    N = table.size
    rows = np.arange(N)
    K = np.zeros((N, N))
    for r in range(1, w.n):
        K[rows, table.neighbors[:, r - 1]] = wn[arr[:, r]]
    K[rows, rows] = 1.0 - K.sum(axis=1)
    K.setflags(write=False)
    return TransitionMatrix(w.n, K, KIND_MA1)


def _left_fixed_vector(T: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Stationary vector from the null space of ``T^T - I`` with one refinement."""
    N = T.shape[0]
    A = T.T - np.eye(N)
    # replace one balance equation by the normalization constraint
    A[-1, :] = 1.0
    b = np.zeros(N)
    b[-1] = 1.0
    try:
        v = np.linalg.solve(A, b)
        v += np.linalg.solve(A, b - A @ v)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"stationary solve failed for {N}x{N} matrix: {exc}")
    v = np.clip(v, 0.0, None)
    v /= v.sum()
    resid = np.abs(v @ T - v).sum()
    if resid > tol:
        raise NumericalError(f"stationary residual {resid:.3e} above {tol:.0e} ({N}x{N})")
    return v


def build_mtf_transition(w: WeightVector, table: PermTable | None = None):
    """Move-to-front chain and its numerically computed stationary law.

    Returns
    -------
    (TransitionMatrix, StationaryDistribution)
    """
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    table = _table_for(w.n, table)
    wn = w.normalized()
    n, N = w.n, table.size
    K = np.zeros((N, N))
    for k, x in enumerate(table.perms):
        for i in range(n):
            y = (x[i],) + x[:i] + x[i + 1:]
            K[k, table.rank_of(y)] += wn[x[i] - 1]
    K.setflags(write=False)
    probs = _left_fixed_vector(K)
    return TransitionMatrix(n, K, KIND_MTF), StationaryDistribution(probs, 1.0, False, 0.0)
