"""Exact rational linear algebra: Gaussian elimination and a tableau simplex.

The simplex is specialized to the security-level program of a nonnegative
payoff matrix: maximize v subject to mu . col(j) >= v for every column, the
mu_i forming a probability vector.  Everything runs over `Fraction`, with the
smallest-index (Bland) pivot rule, so the solver terminates and both the
optimum and the dual certificate come out exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def solve_linear_system(
    rows: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int]
) -> tuple[list[Fraction], bool] | None:
    """Solve rows . x = rhs exactly.

    Returns None when the system is inconsistent; otherwise (solution, unique)
    where free variables, if any, are set to 0 and `unique` says whether the
    solution is the only one.
    """
    if len(rows) != len(rhs):
        raise ValueError("matrix and right-hand side sizes differ")
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    if not aug:
        return [], True
    ncols = len(aug[0]) - 1
    if any(len(row) != ncols + 1 for row in aug):
        raise ValueError("ragged coefficient matrix")

    pivot_cols: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        factor = aug[r][c]
        aug[r] = [x / factor for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for i, c in enumerate(pivot_cols):
        solution[c] = aug[i][ncols]
    return solution, len(pivot_cols) == ncols


def security_level_lp(
    matrix: Sequence[Sequence[int]],
) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact optimum of: maximize v s.t. mu.col(j) >= v for all j, sum mu = 1, mu >= 0.

    `matrix` is the m x n payoff array with nonnegative rational entries
    (which makes the optimal v nonnegative, so v needs no sign split).
    Returns (v, mu, nu) where mu attains the maximum and nu is the normalized
    dual vector read off the optimal tableau: a column mixture with
    max_i row(i).nu == v.
    """
    m = len(matrix)
    n = len(matrix[0])
    if any(len(row) != n for row in matrix):
        raise ValueError("ragged payoff matrix")
    u = [[Fraction(x) for x in row] for row in matrix]
    if any(x < 0 for row in u for x in row):
        raise ValueError("this LP form requires nonnegative entries")

    # Variable order (also the Bland order): mu_0..mu_{m-1}, v, s_0..s_{n-1}.
    v_idx = m
    nvars = m + 1 + n

    # Row j encodes -mu.col(j) + v + s_j = 0; the last row encodes sum mu = 1.
    # Pivoting mu_0 into the sum row and adding u[0][j] times it to row j
    # yields a feasible starting basis {s_0..s_{n-1}, mu_0} outright.
    tableau: list[list[Fraction]] = []
    for j in range(n):
        row = [Fraction(0)] * (nvars + 1)
        for i in range(m):
            row[i] = -u[i][j]
        row[v_idx] = Fraction(1)
        row[v_idx + 1 + j] = Fraction(1)
        for i in range(m):
            row[i] += u[0][j]
        row[nvars] = u[0][j]
        tableau.append(row)
    sum_row = [Fraction(0)] * (nvars + 1)
    for i in range(m):
        sum_row[i] = Fraction(1)
    sum_row[nvars] = Fraction(1)
    tableau.append(sum_row)
    basis = [v_idx + 1 + j for j in range(n)] + [0]

    # Reduced costs for maximizing v; all initial basic variables cost 0.
    reduced = [Fraction(0)] * (nvars + 1)
    reduced[v_idx] = Fraction(1)

    while True:
        entering = next((j for j in range(nvars) if reduced[j] > 0), None)
        if entering is None:
            break
        pivot_row = None
        best_ratio = None
        for r in range(len(tableau)):
            coef = tableau[r][entering]
            if coef > 0:
                ratio = tableau[r][nvars] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[pivot_row])
                ):
                    best_ratio = ratio
                    pivot_row = r
        if pivot_row is None:
            raise RuntimeError("security-level LP cannot be unbounded")
        piv = tableau[pivot_row][entering]
        tableau[pivot_row] = [x / piv for x in tableau[pivot_row]]
        for r in range(len(tableau)):
            if r != pivot_row and tableau[r][entering] != 0:
                f = tableau[r][entering]
                prow = tableau[pivot_row]
                tableau[r] = [a - f * b for a, b in zip(tableau[r], prow)]
        if reduced[entering] != 0:
            f = reduced[entering]
            prow = tableau[pivot_row]
            reduced = [a - f * b for a, b in zip(reduced, prow)]
        basis[pivot_row] = entering

    assignment = [Fraction(0)] * nvars
    for r, b in enumerate(basis):
        assignment[b] = tableau[r][nvars]
    value = assignment[v_idx]
    mu = assignment[:m]

    # Duals of the column constraints sit in the slack reduced costs; they
    # form an unnormalized column mixture whose normalization caps the value.
    raw = [-reduced[v_idx + 1 + j] for j in range(n)]
    total = sum(raw)
    if total <= 0:
        raise RuntimeError("optimal tableau yielded no dual mixture")
    nu = [x / total for x in raw]
    return value, mu, nu
