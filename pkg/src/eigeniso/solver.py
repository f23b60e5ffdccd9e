"""Isomorphism search: projector cost matrices, perturbation rounds, backtracking.

The test for a candidate pair works on eigenspace geometry: for every
matched eigenvalue group the rows of the two orthogonal projectors are
sorted and compared pairwise, giving a nonnegative cost matrix whose
linear-assignment optimum is (near) zero whenever the graphs are
isomorphic.  Because repeated eigenvalues leave the assignment ambiguous,
the driver breaks symmetry iteratively: round i pins vertex i of A by a
self-loop of weight i and scans vertices of B for a partner whose equally
perturbed graph keeps the assignment cost below tolerance.  Accepted
assignments are pushed on a stack; rounds that run out of candidates pop
it (backtracking).  Once every vertex carries a distinct loop weight, the
diagonals of the two perturbed matrices spell out the permutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import LapSolution, count_zero_structure, solve_lap
from .graph import Graph, Permutation, is_exact_isomorphism, perturb
from .spectral import (
    DEFAULT_EPS,
    SpectralDecomposition,
    eigendecompose,
    projection,
    spectral_distance,
)

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"
INCONCLUSIVE = "inconclusive"


class GroupStructureMismatch(ValueError):
    """Eigenvalue multiplicity sequences disagree; treated as not isospectral."""


@dataclass
class SolverOptions:
    """Tunables of the search.

    eps: tolerance below which eigenvalues coincide and costs count as zero.
    max_backtrack_steps: deleted assignments allowed before giving up
        (outcome inconclusive, never a wrong answer).
    skip_assigned: skip B-vertices that already carry a loop when scanning
        candidates, halving the assignment work.
    unique_early_exit: finish as soon as the sub-eps mask pins a unique
        assignment that validates exactly.
    weight_offset: added to every loop weight (0 keeps weights 1..n; n
        avoids colliding with unit edge weights, for experiments).
    seed: reserved for randomized tie-breaking; the default policies are
        fully deterministic and ignore it.
    """

    eps: float = DEFAULT_EPS
    max_backtrack_steps: int = 10**6
    skip_assigned: bool = True
    unique_early_exit: bool = True
    weight_offset: int = 0
    seed: int | None = None


@dataclass(frozen=True)
class RoundRecord:
    """One accepted perturbation round: loop at vertex i of A, j of B."""

    i: int
    j: int
    cost: float
    zero_count: int
    zero_density: float


@dataclass
class SolveReport:
    """Outcome of a solve plus search statistics.

    outcome is one of ISOMORPHIC / NOT_ISOMORPHIC / INCONCLUSIVE; the
    permutation is present exactly when isomorphic, already validated
    against the unperturbed inputs.  spectral_rejection marks rejections
    certified before any assignment was solved (eigenvalue mismatch);
    heuristic_rejection marks rejection by search exhaustion, which the
    method cannot certify.
    """

    outcome: str
    permutation: Permutation | None
    backtrack_steps: int = 0
    decompositions: int = 0
    lap_solves: int = 0
    rounds: list[RoundRecord] = field(default_factory=list)
    root_cost: float = 0.0
    spectral_rejection: bool = False
    heuristic_rejection: bool = False


@dataclass
class SearchState:
    """Mutable state of the depth-first search.

    assigned holds (i, j, weight) triples in assignment order; weights
    increase strictly down the stack.  next_candidate[k] is where the scan
    at level k resumes after a backtrack.  a and b are the currently
    perturbed graphs; their diagonals mirror `assigned` at all times.
    """

    a: Graph
    b: Graph
    assigned: list[tuple[int, int, float]] = field(default_factory=list)
    next_candidate: list[int] = field(default_factory=list)


def sorted_row_distance(u_a: np.ndarray, u_b: np.ndarray) -> float:
    """Euclidean distance between ascending-sorted copies of two vectors.

    Zero exactly when one vector is a permutation of the other, which makes
    it a relabeling-invariant comparison of projector rows.
    """
    u_a = np.asarray(u_a, dtype=float)
    u_b = np.asarray(u_b, dtype=float)
    if u_a.shape != u_b.shape:
        raise ValueError("length mismatch")
    return float(np.linalg.norm(np.sort(u_a) - np.sort(u_b)))


def build_cost_matrix(
    da: SpectralDecomposition, db: SpectralDecomposition
) -> np.ndarray:
    """Assignment costs c[i][j] summed over matched eigenvalue groups.

    For each group (matched in ascending eigenvalue order) the cost of
    pairing vertex i of A with vertex j of B is the sorted-row distance
    between row i of A's projector and row j of B's.  Group multiplicity
    sequences must agree; a mismatch raises :class:`GroupStructureMismatch`
    and is treated by callers as a failed (not isospectral) check.
    """
    if da.multiplicities() != db.multiplicities():
        raise GroupStructureMismatch(
            f"eigenvalue multiplicities differ: {da.multiplicities()} "
            f"vs {db.multiplicities()}"
        )
    n = da.n
    c = np.zeros((n, n))
    for k in range(len(da.groups)):
        rows_a = np.sort(projection(da, k), axis=1)
        rows_b = np.sort(projection(db, k), axis=1)
        # Row-wise distances computed directly; the usual Gram expansion
        # cancels catastrophically near zero, exactly where eps decides.
        for i in range(n):
            diff = rows_a[i] - rows_b
            c[i] += np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return c


def _evaluate(
    da: SpectralDecomposition, db: SpectralDecomposition, eps: float
) -> tuple[float, LapSolution | None, np.ndarray | None]:
    """Spectral check, then cost matrix and LAP.  (e, lap, cost matrix)."""
    dist = spectral_distance(da, db)
    if dist > eps:
        return dist, None, None
    try:
        c = build_cost_matrix(da, db)
    except GroupStructureMismatch:
        return float("inf"), None, None
    lap = solve_lap(c, eps)
    return lap.cost, lap, c


def find_permutation(
    a: Graph, b: Graph, eps: float = DEFAULT_EPS
) -> tuple[float, LapSolution | None]:
    """Single feasibility check for a graph pair.

    Returns the eigenvalue distance if it exceeds ``eps`` (quick reject,
    no assignment solved), otherwise the optimal assignment cost together
    with the LAP solution.  A cost below ``eps`` means the pair passes;
    it does not by itself certify an isomorphism.
    """
    if a.n != b.n:
        raise ValueError("size mismatch")
    e, lap, _ = _evaluate(eigendecompose(a, eps), eigendecompose(b, eps), eps)
    return e, lap


def extract_permutation(state: SearchState) -> Permutation:
    """Read the permutation off the diagonals of the perturbed matrices.

    Requires a fully assigned state: each diagonal must carry every loop
    weight exactly once; vertex i of A maps to the vertex of B holding the
    same weight.
    """
    wa = np.diag(state.a.adj)
    wb = np.diag(state.b.adj)
    order_a = np.argsort(wa, kind="stable")
    order_b = np.argsort(wb, kind="stable")
    sa, sb = wa[order_a], wb[order_b]
    if not np.array_equal(sa, sb) or np.unique(sa).shape[0] != sa.shape[0]:
        raise RuntimeError("diagonal weights corrupted; search invariant breached")
    mapping = np.empty(state.a.n, dtype=int)
    mapping[order_a] = order_b
    return Permutation(mapping)


def _report_round(c: np.ndarray, eps: float, i: int, j: int, cost: float) -> RoundRecord:
    mask = count_zero_structure(c, eps)
    zeros = int(mask.sum())
    return RoundRecord(i, j, cost, zeros, zeros / mask.size)


def is_isomorphic(a: Graph, b: Graph, opts: SolverOptions | None = None) -> SolveReport:
    """Full isomorphism test of two plain graphs.

    Runs the unperturbed feasibility check first (its failure certifies
    non-isomorphism), then the perturbation rounds with backtracking.  The
    returned permutation, when present, has been validated entry-for-entry
    against the inputs, so an ``isomorphic`` outcome is unconditionally
    sound.  ``not_isomorphic`` after search exhaustion carries
    ``heuristic_rejection=True`` because exhaustion is not a certificate.
    """
    opts = opts or SolverOptions()
    eps = opts.eps
    if a.n != b.n:
        return SolveReport(
            NOT_ISOMORPHIC, None, root_cost=float("inf"), spectral_rejection=True
        )

    n = a.n
    counters = {"dec": 0, "lap": 0, "bt": 0}
    rounds: list[RoundRecord] = []

    def decomp(g: Graph) -> SpectralDecomposition:
        counters["dec"] += 1
        return eigendecompose(g, eps)

    def finish(outcome: str, perm: Permutation | None, **kw) -> SolveReport:
        return SolveReport(
            outcome,
            perm,
            backtrack_steps=counters["bt"],
            decompositions=counters["dec"],
            lap_solves=counters["lap"],
            rounds=rounds,
            **kw,
        )

    da = decomp(a)
    db = decomp(b)
    e0, lap0, c0 = _evaluate(da, db, eps)
    if lap0 is not None:
        counters["lap"] += 1
    if e0 > eps:
        return finish(
            NOT_ISOMORPHIC, None, root_cost=e0, spectral_rejection=lap0 is None
        )
    if opts.unique_early_exit and lap0 is not None and lap0.unique:
        if is_exact_isomorphism(a, b, lap0.assignment):
            return finish(ISOMORPHIC, lap0.assignment, root_cost=e0)
        # The mask lied; fall through to the perturbation search.

    state = SearchState(a=a, b=b)
    a_decomps: list[SpectralDecomposition] = []
    b_used = np.zeros(n, dtype=bool)

    def weight(level: int) -> float:
        return float(opts.weight_offset + level + 1)

    def descend(level: int) -> None:
        state.a = perturb(state.a, level, weight(level))
        a_decomps.append(decomp(state.a))
        state.next_candidate.append(0)

    def backtracked() -> bool:
        """Count one deleted assignment; True when the cap is blown."""
        counters["bt"] += 1
        return counters["bt"] > opts.max_backtrack_steps

    descend(0)
    while True:
        level = len(state.assigned)
        w = weight(level)
        da_level = a_decomps[-1]
        advanced = False
        j = state.next_candidate[-1]
        while j < n:
            state.next_candidate[-1] = j + 1
            if opts.skip_assigned and b_used[j]:
                j += 1
                continue
            b_try = perturb(state.b, j, w)
            db_try = decomp(b_try)
            e, lap, c = _evaluate(da_level, db_try, eps)
            if lap is not None:
                counters["lap"] += 1
            if e < eps:
                state.b = b_try
                state.assigned.append((level, j, w))
                b_used[j] = True
                rounds.append(_report_round(c, eps, level, j, e))
                if opts.unique_early_exit and lap.unique:
                    if is_exact_isomorphism(a, b, lap.assignment):
                        return finish(ISOMORPHIC, lap.assignment, root_cost=e0)
                if len(state.assigned) == n:
                    candidate = extract_permutation(state)
                    if is_exact_isomorphism(a, b, candidate):
                        return finish(ISOMORPHIC, candidate, root_cost=e0)
                    # Complete but invalid: drop it and keep scanning here.
                    if backtracked():
                        return finish(INCONCLUSIVE, None, root_cost=e0)
                    state.assigned.pop()
                    rounds.pop()
                    b_used[j] = False
                    state.b = perturb(state.b, j, -w)
                    j = state.next_candidate[-1]
                    continue
                descend(level + 1)
                advanced = True
                break
            j += 1
        if advanced:
            continue
        # Level exhausted: remove this round's loop on A and step up.
        state.a = perturb(state.a, level, -w)
        a_decomps.pop()
        state.next_candidate.pop()
        if level == 0:
            return finish(
                NOT_ISOMORPHIC, None, root_cost=e0, heuristic_rejection=True
            )
        if backtracked():
            return finish(INCONCLUSIVE, None, root_cost=e0)
        prev_level, prev_j, prev_w = state.assigned.pop()
        rounds.pop()
        b_used[prev_j] = False
        state.b = perturb(state.b, prev_j, -prev_w)
