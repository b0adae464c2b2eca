"""Total-variation decay, stationary search costs, and the geometric-weights
slow-start example for self-organizing lists."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .chain import (
    StationaryDistribution,
    TransitionMatrix,
    WeightVector,
    build_mtf_transition,
    ma1_stationary,
)
from .errors import ResourceError, ValidationError
from .perm import PermTable, build_table, format_perm, validate_perm

# horizon * N; one step is a dense vector-matrix product
TV_BUDGET = 5 * 10**7


@dataclass(frozen=True, eq=False)
class TVCurve:
    start: tuple
    d: np.ndarray = field(repr=False)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.d))

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["t", "d"])
        for t, v in enumerate(self.d):
            out.writerow([t, format(float(v), ".17g")])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"start": format_perm(self.start), "d": self.d.tolist()}


def tv_curve(chain: TransitionMatrix, pi: StationaryDistribution, start, horizon: int,
             table: PermTable | None = None, budget: int = TV_BUDGET) -> TVCurve:
    """``d(t) = 1/2 sum_x |P^t(start, x) - pi(x)|`` for ``t = 0..horizon``."""
    table = table or build_table(chain.n)
    start = validate_perm(start, chain.n)
    if horizon < 0:
        raise ValidationError(f"horizon must be >= 0, got {horizon}")
    if horizon * chain.N > budget:
        raise ResourceError(f"horizon {horizon} x {chain.N} states exceeds the budget {budget}")
    row = np.zeros(chain.N)
    row[table.rank_of(start)] = 1.0
    d = np.empty(horizon + 1)
    for t in range(horizon + 1):
        d[t] = 0.5 * np.abs(row - pi.probs).sum()
        row = row @ chain.entries
    return TVCurve(start, d)


def geometric_weights(n: int) -> WeightVector:
    """``w_i = 2^-i / (1 - 2^-n)``, which sum to one."""
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    norm = 1.0 - 2.0 ** -n
    return WeightVector(tuple(2.0 ** -i / norm for i in range(1, n + 1)))


def front_probability(w: WeightVector, i: int, j: int, table: PermTable | None = None) -> float:
    """Stationary move-ahead-1 probability that label ``i`` precedes label ``j``."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    n = w.n
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValidationError(f"need distinct labels in 1..{n}, got {i}, {j}")
    table = table or build_table(n)
    pi = ma1_stationary(w, table).probs
    pos = np.argsort(table.array, axis=1)
    return float(pi[pos[:, i - 1] < pos[:, j - 1]].sum())


def search_cost(pi: np.ndarray, table: PermTable, wn: np.ndarray) -> float:
    """``sum_x pi(x) sum_i i * wn[x_i]``."""
    positions = np.arange(1, table.n + 1)
    per_state = (wn[table.array - 1] * positions).sum(axis=1)
    return float(pi @ per_state)


@dataclass(frozen=True)
class ESCReport:
    weights: tuple
    esc_ma1: float
    esc_mtf: float

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "esc_ma1": self.esc_ma1, "esc_mtf": self.esc_mtf,
                "ma1_not_worse": self.esc_ma1 <= self.esc_mtf + 1e-10}


def esc_report(w: WeightVector, table: PermTable | None = None) -> ESCReport:
    """Stationary expected search cost under move-ahead-1 and move-to-front."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    table = table or build_table(w.n)
    wn = w.normalized()
    ma1 = ma1_stationary(w, table).probs
    _, mtf = build_mtf_transition(w, table)
    return ESCReport(w.w, search_cost(ma1, table, wn), search_cost(mtf.probs, table, wn))


def slow_start(n: int) -> tuple:
    """Sorted order except that label ``n`` sits directly in front of ``n - 1``."""
    return tuple(range(1, n - 1)) + (n, n - 1)


def random_weights(n: int, rng: np.random.Generator) -> WeightVector:
    return WeightVector(tuple(np.sort(rng.uniform(0.01, 1.0, size=n))[::-1]))
