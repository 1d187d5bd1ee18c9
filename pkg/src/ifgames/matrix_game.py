"""Win-loss zero-sum matrix games: tallies, balance, expected utility, dominance.

Entries are restricted to {0, 1}.  All probabilities and utilities are exact
`Fraction`s; the numpy array behind a `GameMatrix` only ever holds integers
and integer arithmetic on it is exact, so no floating point enters the value
path.  Matrices built from strategic games can be wide (hundreds of thousands
of columns), so the bulk operations below work with integer numerators over a
common denominator instead of elementwise Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import IfGamesError

_INT64_SAFE = 2**62


class GameMatrix:
    """An m x n payoff matrix for the row player, entries in {0, 1}."""

    def __init__(self, rows):
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("a game matrix needs at least one row and one column")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("game matrix entries must be 0 or 1")
        self._a = arr.astype(np.uint8)
        self._a.setflags(write=False)
        self.m, self.n = self._a.shape
        self._row_sums: list[int] | None = None
        self._col_sums: list[int] | None = None

    @classmethod
    def _from_array(cls, arr: np.ndarray) -> "GameMatrix":
        self = object.__new__(cls)
        self._a = arr.astype(np.uint8)
        self._a.setflags(write=False)
        self.m, self.n = arr.shape
        self._row_sums = None
        self._col_sums = None
        return self

    @property
    def array(self) -> np.ndarray:
        """Read-only uint8 view of the entries."""
        return self._a

    def entry(self, i: int, j: int) -> int:
        return int(self._a[i, j])

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a[i])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a[:, j])

    def rows(self) -> list[tuple[int, ...]]:
        return [self.row(i) for i in range(self.m)]

    def row_sums(self) -> list[int]:
        if self._row_sums is None:
            self._row_sums = [int(x) for x in self._a.sum(axis=1, dtype=np.int64)]
        return self._row_sums

    def col_sums(self) -> list[int]:
        if self._col_sums is None:
            self._col_sums = [int(x) for x in self._a.sum(axis=0, dtype=np.int64)]
        return self._col_sums

    def complement(self) -> "GameMatrix":
        """The opponent's payoff matrix, 1 - entries."""
        return GameMatrix._from_array((1 - self._a).astype(np.uint8))

    def transpose(self) -> "GameMatrix":
        return GameMatrix._from_array(self._a.T.copy())

    def __eq__(self, other) -> bool:
        return isinstance(other, GameMatrix) and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.m, self.n, self._a.tobytes()))

    def __repr__(self) -> str:
        if self.m * self.n <= 64:
            body = "; ".join(" ".join(str(x) for x in row) for row in self.rows())
            return f"GameMatrix({self.m}x{self.n}: {body})"
        return f"GameMatrix({self.m}x{self.n})"


@dataclass(frozen=True)
class MixedStrategy:
    """Exact probability vector over one player's pure strategies."""

    probs: tuple[Fraction, ...]
    side: str  # "row" | "column"

    def __post_init__(self):
        if self.side not in ("row", "column"):
            raise ValueError(f"bad side {self.side!r}")
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be nonnegative")
        if sum(probs) != 1:
            raise ValueError("probabilities must sum to exactly 1")

    def __len__(self) -> int:
        return len(self.probs)

    def support(self) -> list[int]:
        return [i for i, p in enumerate(self.probs) if p]

    @staticmethod
    def uniform(k: int, side: str) -> "MixedStrategy":
        return MixedStrategy(tuple(Fraction(1, k) for _ in range(k)), side)

    @staticmethod
    def point_mass(k: int, index: int, side: str) -> "MixedStrategy":
        probs = [Fraction(0)] * k
        probs[index] = Fraction(1)
        return MixedStrategy(tuple(probs), side)

    @staticmethod
    def uniform_on(indices: Iterable[int], k: int, side: str) -> "MixedStrategy":
        chosen = sorted(set(indices))
        if not chosen:
            raise ValueError("support must be nonempty")
        probs = [Fraction(0)] * k
        for i in chosen:
            probs[i] = Fraction(1, len(chosen))
        return MixedStrategy(tuple(probs), side)


@dataclass(frozen=True)
class Bounds:
    """Row/column tallies and the uniform-strategy bounds they induce."""

    floor: Fraction
    ceil: Fraction
    colmin: int
    rowmax: int
    colargmin: frozenset[int]
    rowargmax: frozenset[int]


def tallies(u: GameMatrix) -> Bounds:
    col = u.col_sums()
    row = u.row_sums()
    colmin = min(col)
    rowmax = max(row)
    return Bounds(
        floor=Fraction(colmin, u.m),
        ceil=Fraction(rowmax, u.n),
        colmin=colmin,
        rowmax=rowmax,
        colargmin=frozenset(j for j, s in enumerate(col) if s == colmin),
        rowargmax=frozenset(i for i, s in enumerate(row) if s == rowmax),
    )


def is_row_balanced(u: GameMatrix) -> bool:
    sums = u.row_sums()
    return len(set(sums)) == 1


def is_col_balanced(u: GameMatrix) -> bool:
    sums = u.col_sums()
    return len(set(sums)) == 1


def is_balanced(u: GameMatrix) -> bool:
    return is_row_balanced(u) and is_col_balanced(u)


# ---------------------------------------------------------------------------
# Exact weighted sums.  Strategies are carried as integer numerators over a
# common denominator so wide matrices can be handled without per-cell
# Fractions; the int64 fast path is guarded against overflow.


def scaled_numerators(probs: Sequence[Fraction]) -> tuple[list[int], int]:
    """(numerators, common denominator) with numerators summing to the denominator."""
    denom = math.lcm(*(p.denominator for p in probs)) if probs else 1
    return [int(p.numerator * (denom // p.denominator)) for p in probs], denom


def weighted_col_sums(u: GameMatrix, weights: Sequence[int]) -> list[int]:
    """For each column j, the integer sum over rows i of weights[i] * u[i][j]."""
    if len(weights) != u.m:
        raise ValueError("weight vector does not match the row count")
    top = max((abs(w) for w in weights), default=0)
    if top * u.m < _INT64_SAFE:
        w = np.asarray(weights, dtype=np.int64)
        return [int(x) for x in w @ u.array.astype(np.int64, copy=False)]
    totals = [0] * u.n
    for i, w in enumerate(weights):
        if w:
            row = u.array[i]
            totals = [t + w if e else t for t, e in zip(totals, row)]
    return totals


def weighted_row_sums(u: GameMatrix, weights: Sequence[int]) -> list[int]:
    """For each row i, the integer sum over columns j of weights[j] * u[i][j]."""
    if len(weights) != u.n:
        raise ValueError("weight vector does not match the column count")
    top = max((abs(w) for w in weights), default=0)
    if top * u.n < _INT64_SAFE:
        w = np.asarray(weights, dtype=np.int64)
        return [int(x) for x in u.array.astype(np.int64, copy=False) @ w]
    from itertools import compress

    return [sum(compress(weights, u.array[i])) for i in range(u.m)]


def _check_sides(u: GameMatrix, mu: MixedStrategy | None, nu: MixedStrategy | None) -> None:
    if mu is not None:
        if mu.side != "row":
            raise ValueError("first strategy must be the row player's")
        if len(mu) != u.m:
            raise ValueError(f"row strategy has {len(mu)} entries for {u.m} rows")
    if nu is not None:
        if nu.side != "column":
            raise ValueError("second strategy must be the column player's")
        if len(nu) != u.n:
            raise ValueError(f"column strategy has {len(nu)} entries for {u.n} columns")


def expected_utility(u: GameMatrix, mu: MixedStrategy, nu: MixedStrategy) -> Fraction:
    """Row player's expected payoff sum_i sum_j mu_i nu_j u[i][j], exactly."""
    _check_sides(u, mu, nu)
    mu_num, mu_den = scaled_numerators(mu.probs)
    nu_num, nu_den = scaled_numerators(nu.probs)
    col_totals = weighted_col_sums(u, mu_num)
    total = sum(q * c for q, c in zip(nu_num, col_totals) if q)
    return Fraction(total, mu_den * nu_den)


def pure_response_values(u: GameMatrix, mu: MixedStrategy) -> list[Fraction]:
    """mu . col(j) for every column j."""
    _check_sides(u, mu, None)
    mu_num, mu_den = scaled_numerators(mu.probs)
    return [Fraction(c, mu_den) for c in weighted_col_sums(u, mu_num)]


def best_pure_response_value(u: GameMatrix, mu: MixedStrategy) -> tuple[Fraction, int]:
    """The column player's best reply to `mu`: (min_j mu . col(j), smallest such j)."""
    _check_sides(u, mu, None)
    mu_num, mu_den = scaled_numerators(mu.probs)
    totals = weighted_col_sums(u, mu_num)
    best = min(totals)
    return Fraction(best, mu_den), totals.index(best)


# ---------------------------------------------------------------------------
# Dominance reduction


def row_submatrix(u: GameMatrix, rows: Iterable[int]) -> GameMatrix:
    """The selected rows in original order, all columns retained."""
    chosen = sorted(set(rows))
    if not chosen:
        raise IfGamesError("row submatrix needs a nonempty row selection")
    if chosen[0] < 0 or chosen[-1] >= u.m:
        raise IfGamesError(f"row selection {chosen} out of range for {u.m} rows")
    return GameMatrix._from_array(u.array[chosen, :].copy())


def reduce(u: GameMatrix) -> tuple[GameMatrix, tuple[int, ...], tuple[int, ...]]:
    """Iterated removal of duplicate and weakly dominated rows and columns.

    Rows are weakly dominated when pointwise <= a surviving row, columns when
    pointwise >= a surviving column (the column player minimizes).  Passes run
    rows first, then columns, to a fixpoint; on ties the smallest original
    index survives.  Returns the reduced matrix plus the kept original row and
    column indices, in order.
    """
    arr = u.array
    rows = list(range(u.m))
    cols = list(range(u.n))
    changed = True
    while changed:
        changed = False
        sub = arr[np.ix_(rows, cols)]
        keep = _dominance_keep(sub, larger_survives=True)
        if len(keep) < len(rows):
            rows = [rows[i] for i in keep]
            changed = True
        sub = arr[np.ix_(rows, cols)].T
        keep = _dominance_keep(sub, larger_survives=False)
        if len(keep) < len(cols):
            cols = [cols[j] for j in keep]
            changed = True
    reduced = GameMatrix._from_array(arr[np.ix_(rows, cols)].copy())
    return reduced, tuple(rows), tuple(cols)


def _dominance_keep(vectors: np.ndarray, larger_survives: bool) -> list[int]:
    """Indices (ascending) of vectors not weakly dominated by another live vector."""
    k = vectors.shape[0]
    # Deduplicate first so wide strategic games stay tractable; the smallest
    # index is the canonical representative either way.
    _, first, inverse = np.unique(vectors, axis=0, return_index=True, return_inverse=True)
    rep_of = first[inverse]
    alive = [i for i in range(k) if rep_of[i] == i]
    removed = set(i for i in range(k) if rep_of[i] != i)
    for i in alive:
        vi = vectors[i]
        for j in alive:
            if i == j or j in removed:
                continue
            vj = vectors[j]
            if larger_survives:
                dominated = bool((vi <= vj).all())
            else:
                dominated = bool((vi >= vj).all())
            if dominated and (not (vi == vj).all() or j < i):
                removed.add(i)
                break
    return [i for i in range(k) if i not in removed]


# ---------------------------------------------------------------------------
# Text format: first line "m n", then m rows of space-separated 0/1 digits.


def parse_matrix(text: str) -> GameMatrix:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise IfGamesError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2 or not all(w.isdigit() for w in head):
        raise IfGamesError(f"matrix header must be 'm n', got {lines[0]!r}")
    m, n = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise IfGamesError(f"expected {m} matrix rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        entries = line.split()
        if len(entries) != n or any(e not in ("0", "1") for e in entries):
            raise IfGamesError(f"bad matrix row {line!r}")
        rows.append([int(e) for e in entries])
    return GameMatrix(rows)


def format_matrix(u: GameMatrix) -> str:
    lines = [f"{u.m} {u.n}"]
    for i in range(u.m):
        lines.append(" ".join(str(x) for x in u.row(i)))
    return "\n".join(lines) + "\n"
