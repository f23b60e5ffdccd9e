"""The perturbation search: cost matrices, rounds, backtracking, reports."""

import numpy as np
import pytest

from eigeniso import (
    INCONCLUSIVE,
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    Graph,
    GroupStructureMismatch,
    Permutation,
    SearchState,
    SolverOptions,
    apply_permutation,
    build_cost_matrix,
    cospectral_fixture,
    eigendecompose,
    extract_permutation,
    find_permutation,
    group_eigenvalues,
    is_exact_isomorphism,
    is_isomorphic,
    projection,
    random_permutation,
    sorted_row_distance,
    spectral_distance,
    srg_fixture,
)
from eigeniso.generators import complete, cycle, paley, path, random_gnp, triangular
from eigeniso.solver import _evaluate
from eigeniso.spectral import SpectralDecomposition
from helpers import lap_brute_force


def rotated(g, shift=1, n=None):
    n = n or g.n
    return apply_permutation(g, Permutation([(i + shift) % n for i in range(n)]))


class TestSortedRowDistance:
    def test_permuted_vector_has_zero_distance(self):
        assert sorted_row_distance([1.0, 2, 3], [3.0, 1, 2]) == 0.0

    def test_unit_difference(self):
        assert sorted_row_distance([1.0, 2, 3], [1.0, 2, 4]) == 1.0

    def test_cycle_top_projector_rows(self):
        d = eigendecompose(cycle(6))
        e = projection(d, len(d.groups) - 1)
        assert sorted_row_distance(e[0], e[3]) < 1e-14

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            sorted_row_distance([1.0, 2], [1.0, 2, 3])


class TestBuildCostMatrix:
    def test_self_pair_diagonal_near_zero(self):
        for g in (cycle(6), path(5), random_gnp(8, 1)):
            c = build_cost_matrix(eigendecompose(g), eigendecompose(g))
            assert np.max(np.diag(c)) < 1e-6
            assert np.min(c) >= 0.0

    def test_unperturbed_cycle_pair_all_zero(self):
        g = cycle(6)
        c = build_cost_matrix(eigendecompose(g), eigendecompose(rotated(g)))
        assert np.max(c) < 1e-6

    def test_cospectral_pair_has_no_cheap_assignment(self):
        a, b = cospectral_fixture()
        c = build_cost_matrix(eigendecompose(a), eigendecompose(b))
        best = lap_brute_force(c)  # exhaustive over all 120 assignments
        assert best > 1e-6
        assert abs(best - 6.42917749433882) < 1e-9

    def test_group_structure_mismatch_raises(self):
        da = SpectralDecomposition(
            np.array([0.0, 0.0, 1.0]), np.eye(3), group_eigenvalues([0.0, 0.0, 1.0])
        )
        db = SpectralDecomposition(
            np.array([0.0, 1.0, 1.0]), np.eye(3), group_eigenvalues([0.0, 1.0, 1.0])
        )
        with pytest.raises(GroupStructureMismatch):
            build_cost_matrix(da, db)

    def test_mismatch_is_failed_check_upstream(self):
        # eigenvalues agree within eps overall, yet single-linkage chaining
        # merges one side into a single group: the pair must fail the check
        da = SpectralDecomposition(
            np.array([0.0, 0.5e-6, 1.0e-6]),
            np.eye(3),
            group_eigenvalues([0.0, 0.5e-6, 1.0e-6]),
        )
        db = SpectralDecomposition(
            np.array([0.0, 0.0, 1.0e-6]), np.eye(3), group_eigenvalues([0.0, 0.0, 1.0e-6])
        )
        assert da.multiplicities() == (3,)
        assert db.multiplicities() == (2, 1)
        e, lap, c = _evaluate(da, db, 1e-6)
        assert e == float("inf") and lap is None and c is None


class TestFindPermutation:
    def test_spectral_quick_reject(self):
        e, lap = find_permutation(complete(3), path(3))
        assert e > 1e-6
        assert lap is None

    def test_isomorphic_pair_passes(self):
        e, lap = find_permutation(cycle(6), rotated(cycle(6)))
        assert e < 1e-6
        assert lap is not None

    def test_paley_root_cost_matrix_all_zero(self):
        g = paley(17)
        b = apply_permutation(g, random_permutation(17, 5))
        c = build_cost_matrix(eigendecompose(g), eigendecompose(b))
        assert np.max(c) < 1e-6
        e, lap = find_permutation(g, b)
        assert e < 1e-6 and lap is not None

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            find_permutation(cycle(5), cycle(6))


class TestExtractPermutation:
    def test_identity_weights(self):
        diag = np.diag(np.arange(1.0, 5.0))
        state = SearchState(a=Graph(diag), b=Graph(diag))
        assert list(extract_permutation(state).map) == [0, 1, 2, 3]

    def test_weight_placement_spells_mapping(self):
        # weight 2 sits at vertex 1 of A and vertex 4 of B: 1 -> 4
        a = Graph(np.diag([1.0, 2, 3, 4, 5, 6]))
        b = Graph(np.diag([1.0, 6, 3, 4, 2, 5]))
        perm = extract_permutation(SearchState(a=a, b=b))
        assert perm[1] == 4
        assert list(perm.map) == [0, 4, 2, 3, 5, 1]

    def test_corrupted_diagonals_rejected(self):
        a = Graph(np.diag([1.0, 1, 3]))
        b = Graph(np.diag([1.0, 2, 3]))
        with pytest.raises(RuntimeError):
            extract_permutation(SearchState(a=a, b=b))
        with pytest.raises(RuntimeError):
            extract_permutation(SearchState(a=b, b=Graph(np.diag([1.0, 2, 4]))))


class TestIsIsomorphicAccepts:
    def test_cycle_rotation_two_rounds(self):
        g = cycle(6)
        b = rotated(g)
        report = is_isomorphic(g, b)
        assert report.outcome == ISOMORPHIC
        assert is_exact_isomorphism(g, b, report.permutation)
        assert [r.i for r in report.rounds] == [0, 1]
        assert report.rounds[-1].zero_count == 6  # single permutation pattern
        assert report.backtrack_steps == 0

    def test_paley17_valid_permutation(self):
        g = paley(17)
        b = apply_permutation(g, random_permutation(17, 42))
        report = is_isomorphic(g, b)
        assert report.outcome == ISOMORPHIC
        assert len(report.permutation) == 17
        assert is_exact_isomorphism(g, b, report.permutation)
        assert report.backtrack_steps == 0

    def test_identity_pair(self):
        g = random_gnp(10, 2)
        report = is_isomorphic(g, g)
        assert report.outcome == ISOMORPHIC
        assert is_exact_isomorphism(g, g, report.permutation)

    def test_single_vertex_and_empty_graphs(self):
        one = Graph(np.zeros((1, 1)))
        assert is_isomorphic(one, one).outcome == ISOMORPHIC
        empty = Graph(np.zeros((4, 4)))
        report = is_isomorphic(empty, empty)
        assert report.outcome == ISOMORPHIC
        assert is_exact_isomorphism(empty, empty, report.permutation)

    def test_complete_graphs(self):
        report = is_isomorphic(complete(5), complete(5))
        assert report.outcome == ISOMORPHIC

    def test_rigid_pair_exits_at_root(self):
        # an asymmetric graph pins a unique mask with no perturbation rounds
        g = random_gnp(12, 2)
        b = apply_permutation(g, random_permutation(12, 77))
        report = is_isomorphic(g, b)
        assert report.outcome == ISOMORPHIC
        assert report.rounds == []
        assert report.decompositions == 2
        assert report.lap_solves == 1

    def test_equivariance_sample(self):
        for n, seed in [(8, 0), (12, 1), (16, 2), (20, 3)]:
            g = random_gnp(n, seed)
            p = random_permutation(n, 500 + seed)
            b = apply_permutation(g, p)
            report = is_isomorphic(g, b)
            assert report.outcome == ISOMORPHIC
            assert is_exact_isomorphism(g, b, report.permutation)


class TestIsIsomorphicRejects:
    def test_vertex_count_mismatch(self):
        report = is_isomorphic(cycle(5), cycle(6))
        assert report.outcome == NOT_ISOMORPHIC
        assert report.spectral_rejection

    def test_spectral_certificate(self):
        report = is_isomorphic(complete(3), path(3))
        assert report.outcome == NOT_ISOMORPHIC
        assert report.spectral_rejection
        assert not report.heuristic_rejection
        assert report.lap_solves == 0
        assert abs(report.root_cost - 1.2307390567303165) < 1e-9

    def test_cospectral_pair_rejected_by_assignment_cost(self):
        a, b = cospectral_fixture()
        report = is_isomorphic(a, b)
        assert report.outcome == NOT_ISOMORPHIC
        assert not report.spectral_rejection
        assert not report.heuristic_rejection
        assert report.lap_solves == 1
        assert report.root_cost > 1e-6
        assert report.rounds == []

    def test_srg_pair_rejected_by_search_with_backtracking(self):
        a, b = srg_fixture()
        # indistinguishable spectrally, root assignment cost is zero
        assert spectral_distance(eigendecompose(a), eigendecompose(b)) < 1e-6
        assert np.max(build_cost_matrix(eigendecompose(a), eigendecompose(b))) < 1e-6
        report = is_isomorphic(a, b)
        assert report.outcome == NOT_ISOMORPHIC
        assert report.heuristic_rejection
        assert not report.spectral_rejection
        assert report.backtrack_steps > 0
        assert report.rounds == []


class TestInconclusive:
    def test_backtrack_cap_yields_inconclusive(self):
        a, b = srg_fixture()
        report = is_isomorphic(a, b, SolverOptions(max_backtrack_steps=3))
        assert report.outcome == INCONCLUSIVE
        assert report.permutation is None
        assert report.backtrack_steps == 4  # the step that crossed the cap

    def test_cap_zero_still_solves_easy_pairs(self):
        g = cycle(6)
        report = is_isomorphic(g, rotated(g), SolverOptions(max_backtrack_steps=0))
        assert report.outcome == ISOMORPHIC


class TestOptions:
    def test_early_exit_off_runs_all_rounds(self):
        g = cycle(6)
        b = rotated(g)
        report = is_isomorphic(g, b, SolverOptions(unique_early_exit=False))
        assert report.outcome == ISOMORPHIC
        assert [r.i for r in report.rounds] == list(range(6))
        assert is_exact_isomorphism(g, b, report.permutation)

    def test_skip_assigned_off_same_answer_more_work(self):
        g = cycle(6)
        b = rotated(g)
        on = is_isomorphic(g, b)
        off = is_isomorphic(g, b, SolverOptions(skip_assigned=False))
        assert on.outcome == off.outcome == ISOMORPHIC
        assert off.decompositions >= on.decompositions

    def test_weight_offset(self):
        g = cycle(6)
        b = rotated(g)
        report = is_isomorphic(g, b, SolverOptions(weight_offset=6))
        assert report.outcome == ISOMORPHIC
        assert is_exact_isomorphism(g, b, report.permutation)

    def test_loose_eps_still_sound_on_isomorphic_pair(self):
        g = paley(13)
        b = apply_permutation(g, random_permutation(13, 6))
        report = is_isomorphic(g, b, SolverOptions(eps=1e-4))
        assert report.outcome == ISOMORPHIC
        assert is_exact_isomorphism(g, b, report.permutation)


class TestCounters:
    def test_round_indices_are_consecutive(self):
        g = triangular(6)
        b = apply_permutation(g, random_permutation(g.n, 9))
        report = is_isomorphic(g, b, SolverOptions(unique_early_exit=False))
        assert report.outcome == ISOMORPHIC
        assert [r.i for r in report.rounds] == list(range(g.n))

    def test_budgets_on_backtrack_free_runs(self):
        cases = [
            (cycle(6), rotated(cycle(6))),
            (paley(13), apply_permutation(paley(13), random_permutation(13, 1))),
            (random_gnp(10, 4), apply_permutation(random_gnp(10, 4), random_permutation(10, 5))),
        ]
        for skip in (True, False):
            for g, b in cases:
                n = g.n
                report = is_isomorphic(g, b, SolverOptions(skip_assigned=skip))
                assert report.outcome == ISOMORPHIC
                assert report.backtrack_steps == 0
                assert report.decompositions <= 2 * n * n + 2
                assert report.lap_solves <= n * n
                if skip:
                    assert report.lap_solves <= n * (n + 1) // 2 + 1

    def test_soundness_asserted_before_return(self):
        # any isomorphic outcome must ship a working permutation
        for seed in range(6):
            g = random_gnp(9, seed)
            b = apply_permutation(g, random_permutation(9, 60 + seed))
            report = is_isomorphic(g, b)
            assert report.outcome == ISOMORPHIC
            assert is_exact_isomorphism(g, b, report.permutation)
