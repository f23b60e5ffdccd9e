"""Dense linear assignment: Hungarian method plus zero-structure analysis.

The solver is the shortest-augmenting-path formulation of the Hungarian
method with row/column potentials, O(n^3) overall, exact for the given
floating-point costs (no approximation step).  Ties between equally cheap
columns resolve toward the lowest column index, which keeps runs
reproducible; on an all-zero matrix the result is the identity.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .graph import Permutation


class LapSolution(NamedTuple):
    """Optimal assignment, its cost (summed in row order), and uniqueness.

    ``unique`` is True only when the solution was verified to be the sole
    perfect matching among entries below the tolerance passed to
    :func:`solve_lap`; it stays False when no tolerance was given.
    """

    assignment: Permutation
    cost: float
    unique: bool


def solve_lap(c: np.ndarray, eps: float | None = None) -> LapSolution:
    """Solve the dense linear assignment problem min over P of tr(C^T P).

    Parameters
    ----------
    c : ndarray
        Square nonnegative cost matrix; entry (i, j) is the cost of
        assigning row object i to column object j.
    eps : float, optional
        When given and the optimal cost lands below it, the zero structure
        of ``c`` at tolerance ``eps`` is additionally checked for having a
        unique perfect matching (see :func:`is_unique_zero_assignment`).
    """
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    if c.ndim != 2 or c.shape != (n, n):
        raise ValueError("cost matrix must be square")
    if not np.isfinite(c).all():
        raise ValueError("cost matrix contains non-finite entries")

    # 1-based arrays with column 0 as the sentinel of the augmenting search.
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=int)  # p[j] = row matched to column j
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        way = np.zeros(n + 1, dtype=int)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            reduced = c[i0 - 1, :] - u[i0] - v[1:]
            free = ~used[1:]
            better = free & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = j0
            candidates = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(candidates)) + 1  # argmin -> lowest column index
            delta = candidates[j1 - 1]
            u[p[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    row_to_col = np.empty(n, dtype=int)
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    cost = 0.0
    for i in range(n):
        cost += c[i, row_to_col[i]]

    unique = False
    if eps is not None and cost < eps:
        unique = is_unique_zero_assignment(count_zero_structure(c, eps))
    return LapSolution(Permutation(row_to_col), float(cost), unique)


def count_zero_structure(c: np.ndarray, eps: float) -> np.ndarray:
    """Boolean mask of assignable entries: mask[i][j] = (c[i][j] < eps)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return np.asarray(c) < eps


def is_unique_zero_assignment(mask: np.ndarray) -> bool:
    """Decide whether a feasibility mask admits exactly one perfect matching.

    Works by repeatedly eliminating a row or column that has a single
    candidate left (such a pair lies in every perfect matching).  If
    elimination consumes the whole mask the matching is provably unique;
    if it stalls with every remaining line offering two or more candidates
    the answer is False.  Assumes the mask has at least one perfect
    matching; without one the stall answer False is returned as well.
    """
    m = np.array(mask, dtype=bool)
    n = m.shape[0]
    if m.ndim != 2 or m.shape != (n, n):
        raise ValueError("mask must be square")
    live_rows = np.ones(n, dtype=bool)
    live_cols = np.ones(n, dtype=bool)
    for _ in range(n):
        if not live_rows.any():
            break
        row_counts = m.sum(axis=1)
        col_counts = m.sum(axis=0)
        forced_rows = np.flatnonzero(live_rows & (row_counts == 1))
        forced_cols = np.flatnonzero(live_cols & (col_counts == 1))
        if forced_rows.size:
            i = int(forced_rows[0])
            j = int(np.argmax(m[i]))
        elif forced_cols.size:
            j = int(forced_cols[0])
            i = int(np.argmax(m[:, j]))
        else:
            return False
        m[i, :] = False
        m[:, j] = False
        live_rows[i] = False
        live_cols[j] = False
    return not live_rows.any()
