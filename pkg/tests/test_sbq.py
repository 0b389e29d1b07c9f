# 說明：本測試驗證 SBQ 候選點產生、貪婪選點與遞增 Cholesky 更新的一致性。
from __future__ import annotations

import numpy as np
import pytest

from kq_pwgd.config import CandidateKind
from kq_pwgd.domain import DomainBox, NodeSet
from kq_pwgd.errors import InvalidArgumentError, SbqError
from kq_pwgd.generator import default_candidate_count, greedy_select, make_candidates, run_sbq
from kq_pwgd.kernel import GaussianKernel
from kq_pwgd.wce import optimal_weights, squared_wce_optimal


def test_tensor_grid_is_half_offset(square: DomainBox) -> None:
    candidates = make_candidates(square, CandidateKind.TENSOR_GRID, 4)
    expected = np.array([[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]])
    np.testing.assert_allclose(candidates.points, expected)
    assert candidates.count == 4
    with pytest.raises(InvalidArgumentError):
        make_candidates(square, CandidateKind.TENSOR_GRID, 3)


def test_halton_starts_at_standard_first_point(square: DomainBox, cube: DomainBox) -> None:
    np.testing.assert_allclose(make_candidates(square, CandidateKind.HALTON, 5).points[0], [0.5, 1.0 / 3.0])
    np.testing.assert_allclose(make_candidates(cube, CandidateKind.HALTON, 5).points[1], [0.25, 2.0 / 3.0, 0.4])


def test_uniform_candidates_are_seed_deterministic(square: DomainBox) -> None:
    first = make_candidates(square, CandidateKind.UNIFORM, 30, seed=4)
    second = make_candidates(square, CandidateKind.UNIFORM, 30, seed=4)
    np.testing.assert_array_equal(first.points, second.points)
    assert not np.array_equal(first.points, make_candidates(square, CandidateKind.UNIFORM, 30, seed=5).points)


def test_default_candidate_count() -> None:
    assert default_candidate_count(1, 2) == 4
    assert default_candidate_count(10, 2) == 49
    assert default_candidate_count(2, 3) == 8
    assert default_candidate_count(50, 2) >= 200


def test_first_node_is_grid_point_nearest_center(square: DomainBox, kernel: GaussianKernel) -> None:
    candidates = make_candidates(square, CandidateKind.TENSOR_GRID, 25)
    selection = greedy_select(1, candidates, kernel)
    np.testing.assert_allclose(candidates.points[selection.indices[0]], [0.5, 0.5])


def test_incremental_errors_match_from_scratch(square: DomainBox, kernel: GaussianKernel) -> None:
    candidates = make_candidates(square, CandidateKind.HALTON, 150)
    selection = greedy_select(20, candidates, kernel)
    for k in range(1, 21):
        prefix = NodeSet(candidates.points[selection.indices[:k]])
        assert selection.squared_errors[k - 1] == pytest.approx(squared_wce_optimal(prefix, kernel), abs=1e-9)


def test_greedy_choice_is_the_brute_force_minimum(square: DomainBox, kernel: GaussianKernel) -> None:
    candidates = make_candidates(square, CandidateKind.TENSOR_GRID, 25)
    selection = greedy_select(3, candidates, kernel)
    chosen: list[int] = []
    for step, index in enumerate(selection.indices):
        values = [
            squared_wce_optimal(NodeSet(candidates.points[chosen + [c]]), kernel)
            for c in range(candidates.count)
            if c not in chosen
        ]
        assert selection.squared_errors[step] == pytest.approx(min(values), abs=1e-10)
        chosen.append(index)


def test_selection_is_monotone_and_without_repeats(square: DomainBox, kernel: GaussianKernel) -> None:
    candidates = make_candidates(square, CandidateKind.UNIFORM, 80, seed=2)
    selection = greedy_select(15, candidates, kernel)
    assert len(set(selection.indices)) == 15
    errors = selection.squared_errors
    assert all(later <= earlier + 1e-10 for earlier, later in zip(errors, errors[1:]))


def test_run_sbq_returns_optimal_weights(square: DomainBox, kernel: GaussianKernel) -> None:
    candidates = make_candidates(square, CandidateKind.TENSOR_GRID, 49)
    rule = run_sbq(6, candidates, kernel)
    assert rule.nodes.size == 6
    for point in rule.nodes.points:
        assert np.any(np.all(candidates.points == point, axis=1))
    np.testing.assert_allclose(rule.weights, optimal_weights(rule.nodes, kernel).weights)


def test_exhausting_candidates_names_the_step(square: DomainBox, kernel: GaussianKernel) -> None:
    candidates = make_candidates(square, CandidateKind.TENSOR_GRID, 4)
    with pytest.raises(SbqError) as excinfo:
        greedy_select(5, candidates, kernel)
    assert excinfo.value.step == 5
    with pytest.raises(InvalidArgumentError):
        greedy_select(0, candidates, kernel)
