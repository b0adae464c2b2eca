"""Enumeration and primitives for permutations of ``{1, ..., n}``.

Permutations are tuples of labels, ``x[r - 1]`` being the key in position
``r`` (position 1 is the front). The table enumerates S_n in lexicographic
order; every matrix in the package is indexed by that order.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ParseError, SizeLimitError, ValidationError

DEFAULT_MAX_N = 7
# n = 8 is allowed only through an explicit override; larger n never.
HARD_MAX_N = 8

Permutation = tuple


def max_n(override: int | None = None) -> int:
    """Effective size cap: explicit override, then ``GAPFORGE_MAX_N``, then 7."""
    if override is not None:
        return int(override)
    env = os.environ.get("GAPFORGE_MAX_N")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"GAPFORGE_MAX_N must be an integer, got {env!r}")
    return DEFAULT_MAX_N


def check_n(n: int, cap: int | None = None) -> int:
    cap = max_n(cap)
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise SizeLimitError(f"n must be an integer >= 2, got {n!r}")
    if n > min(cap, HARD_MAX_N):
        raise SizeLimitError(
            f"n={n} exceeds the size cap {min(cap, HARD_MAX_N)} "
            f"(raise it with --max-n-override or GAPFORGE_MAX_N; absolute limit {HARD_MAX_N})"
        )
    if n == 8:
        warnings.warn("n=8 builds dense 40320x40320 matrices (~13 GB each)", ResourceWarning)
    return int(n)


def validate_perm(x, n: int | None = None) -> Permutation:
    x = tuple(int(v) for v in x)
    m = len(x) if n is None else n
    if len(x) != m or sorted(x) != list(range(1, m + 1)):
        raise ValidationError(f"{x} is not a permutation of 1..{m}")
    return x


def adjacent_swap(x: Permutation, r: int) -> Permutation:
    """Exchange positions ``r - 1`` and ``r`` (1-based, ``2 <= r <= n``)."""
    n = len(x)
    if not 2 <= r <= n:
        raise ValidationError(f"swap position r must lie in 2..{n}, got {r}")
    y = list(x)
    y[r - 2], y[r - 1] = y[r - 1], y[r - 2]
    return tuple(y)


def inversions(x: Permutation) -> int:
    return sum(1 for a, b in itertools.combinations(x, 2) if a > b)


def sign_of(x: Permutation) -> int:
    """Sign of ``x``: ``(-1) ** inversions(x)``."""
    return -1 if inversions(x) % 2 else 1


def reverse_of(x: Permutation) -> Permutation:
    return tuple(reversed(x))


def format_perm(x: Permutation) -> str:
    return ",".join(str(v) for v in x)


def parse_perm(text: str, n: int | None = None) -> Permutation:
    try:
        x = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ParseError(f"cannot parse permutation {text!r}; expected e.g. '2,1,3'")
    return validate_perm(x, n)


@dataclass(frozen=True, eq=False)
class PermTable:
    """All ``n!`` permutations in lexicographic order with derived index maps.

    Attributes
    ----------
    n : int
    perms : list of tuple
        ``perms[k]`` is the k-th permutation in lexicographic order.
    array : ndarray, shape (n!, n)
        Same permutations as 1-based labels.
    reverse_rank : ndarray of int
        ``reverse_rank[k]`` is the index of ``reverse_of(perms[k])``.
    signs : ndarray of int
        ``signs[k] = sign_of(perms[k])``.
    neighbors : ndarray, shape (n!, n - 1)
        ``neighbors[k, r - 2]`` is the index of ``adjacent_swap(perms[k], r)``.
    """

    n: int
    perms: list
    array: np.ndarray = field(repr=False)
    reverse_rank: np.ndarray = field(repr=False)
    signs: np.ndarray = field(repr=False)
    neighbors: np.ndarray = field(repr=False)
    _index: dict = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.perms)

    def rank_of(self, x) -> int:
        try:
            return self._index[tuple(x)]
        except KeyError:
            raise ValidationError(f"{tuple(x)} is not a permutation of 1..{self.n}")

    def sign(self, k: int) -> int:
        return int(self.signs[k])

    def __len__(self) -> int:
        return len(self.perms)


def _rank_lex(arr: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row of a 1-based permutation array."""
    N, n = arr.shape
    ranks = np.zeros(N, dtype=np.int64)
    for r in range(n):
        smaller_later = (arr[:, r + 1:] < arr[:, r:r + 1]).sum(axis=1)
        ranks += smaller_later * math.factorial(n - 1 - r)
    return ranks


@lru_cache(maxsize=None)
def _cached_table(n: int) -> PermTable:
    perms = list(itertools.permutations(range(1, n + 1)))
    arr = np.array(perms, dtype=np.int64)
    arr.setflags(write=False)
    index = {p: k for k, p in enumerate(perms)}
    reverse_rank = _rank_lex(arr[:, ::-1])
    # parity via inversion counts, vectorized over rows
    inv = np.zeros(len(perms), dtype=np.int64)
    for a in range(n):
        inv += (arr[:, a + 1:] < arr[:, a:a + 1]).sum(axis=1)
    signs = np.where(inv % 2 == 0, 1, -1)
    neighbors = np.empty((len(perms), n - 1), dtype=np.int64)
    for r in range(2, n + 1):
        swapped = arr.copy()
        swapped[:, [r - 2, r - 1]] = swapped[:, [r - 1, r - 2]]
        neighbors[:, r - 2] = _rank_lex(swapped)
    for a in (reverse_rank, signs, neighbors):
        a.setflags(write=False)
    return PermTable(n, perms, arr, reverse_rank, signs, neighbors, index)


def build_table(n: int, max_n_override: int | None = None) -> PermTable:
    """Lexicographic table of S_n. Cached; tables are immutable."""
    n = check_n(n, max_n_override)
    return _cached_table(n)
