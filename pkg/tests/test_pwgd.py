# 說明：本測試驗證逐點梯度下降的步長規則、終止條件、可行性、可重現性與最後的最佳權重步驟。
from __future__ import annotations

import numpy as np
import pytest

from kq_pwgd.config import BarrierMode, CandidateKind, ObjectiveKind, ObjectiveSpec, PwgdConfig, StepRule
from kq_pwgd.domain import DomainBox, NodeSet, SeededRng, min_pairwise_distance, sample_uniform
from kq_pwgd.energy import full_gradient
from kq_pwgd.errors import InvalidArgumentError, PwgdAbortError
from kq_pwgd.generator import (
    PointwiseGradientDescent,
    TerminationReason,
    default_candidate_count,
    make_candidates,
    make_quadrature,
    run_pwgd,
    run_sbq,
)
from kq_pwgd.generator.pwgd import _feasible_step, _next_step
from kq_pwgd.kernel import GaussianKernel
from kq_pwgd.wce import squared_wce_optimal


def test_feasible_step_ratio_test() -> None:
    x = np.array([0.2, 0.5])
    assert _feasible_step(x, np.array([1.0, 0.0]), 0.0, 1.0) == pytest.approx(0.2)
    assert _feasible_step(x, np.array([-1.0, -2.0]), 0.0, 1.0) == pytest.approx(0.25)
    assert _feasible_step(x, np.zeros(2), 0.0, 1.0) == np.inf


def test_step_rules() -> None:
    clamped = PwgdConfig(gamma=1.0)
    assert _next_step(clamped, 1.0, 0.5) == (pytest.approx(0.45), 1.0)
    assert _next_step(clamped, 1.0, 10.0) == (1.0, 1.0)
    literal = PwgdConfig(gamma=1.0, step_rule=StepRule.LITERAL_MAX)
    assert _next_step(literal, 1.0, 3.0) == (3.0, 3.0)
    assert _next_step(literal, 3.0, 0.5) == (3.0, 3.0)


def test_two_point_gaussian_objective_converges(square: DomainBox) -> None:
    spec = ObjectiveSpec(kind=ObjectiveKind.GAUSSIAN_WCE, dim=2)
    cfg = PwgdConfig(gamma=0.1, eps=1e-5, k_max=20000, seed=3)
    nodes, trace = run_pwgd(spec, 2, cfg, square)
    assert trace.reason is TerminationReason.CONVERGED
    assert trace.records[-1].max_gradient_norm < cfg.eps
    assert trace.final_objective <= trace.initial_objective
    assert float(np.abs(full_gradient(spec, nodes)).max()) < 1e-4


def test_stationary_start_converges_in_one_sweep(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    nodes, _ = run_pwgd(spec, 6, PwgdConfig(gamma=0.01, k_max=50, seed=2), square)
    norm = float(np.linalg.norm(full_gradient(spec, nodes), axis=1).max())
    cfg = PwgdConfig(gamma=0.01, eps=10.0 * norm + 1e-12, seed=2)
    restarted, trace = run_pwgd(spec, 6, cfg, square, initial=nodes)
    assert trace.reason is TerminationReason.CONVERGED
    assert trace.sweeps == 1
    assert trace.records[0].max_gradient_norm < cfg.eps
    assert restarted.size == 6


def test_small_steps_decrease_objective(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    for seed in range(10):
        _, trace = run_pwgd(spec, 5, PwgdConfig(gamma=1e-4, k_max=10, seed=seed), square)
        values = [trace.initial_objective] + [record.objective for record in trace.records]
        for earlier, later in zip(values, values[1:]):
            assert later <= earlier + 1e-12 * abs(earlier)


def test_max_sweeps_termination_and_trace_length(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    _, trace = run_pwgd(spec, 8, PwgdConfig(gamma=1.0, eps=1e-12, k_max=3, seed=1), square)
    assert trace.reason is TerminationReason.MAX_SWEEPS
    assert trace.sweeps == 3
    assert [record.sweep for record in trace.records] == [1, 2, 3]
    assert all(record.min_distance > 0 for record in trace.records)


def test_iterates_stay_inside_feasible_region(square: DomainBox, cube: DomainBox) -> None:
    cases = [
        (ObjectiveSpec(dim=2, P=0.6, M=0.35), square),
        (ObjectiveSpec(dim=3, P=1.25, M=0.12), cube),
        (ObjectiveSpec(dim=2, P=0.5, M=0.2, barrier=BarrierMode.LITERAL), square),
    ]
    for spec, domain in cases:
        nodes, _ = run_pwgd(spec, 10, PwgdConfig(gamma=1.0, k_max=20, seed=4), domain)
        lo, hi = spec.feasible_bounds()
        assert np.all(nodes.points >= lo)
        assert np.all(nodes.points <= hi)
        nodes.validate(domain)


def test_literal_barrier_initial_points_are_mapped(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2, M=0.4, barrier=BarrierMode.LITERAL)
    points = PointwiseGradientDescent(spec, PwgdConfig(seed=0), square).initial_points(20)
    assert points.min() >= 0.4
    assert points.max() <= 1.0


def test_run_is_deterministic(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    cfg = PwgdConfig(gamma=1.0, k_max=5, seed=7)
    first, first_trace = run_pwgd(spec, 6, cfg, square)
    second, second_trace = run_pwgd(spec, 6, cfg, square)
    np.testing.assert_array_equal(first.points, second.points)
    assert first_trace.records == second_trace.records


def test_literal_max_aborts_on_nearly_coincident_start(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    cfg = PwgdConfig(gamma=1.0, step_rule=StepRule.LITERAL_MAX)
    start = NodeSet(np.array([[0.5, 0.5], [0.5, 0.5001]]))
    with pytest.raises(PwgdAbortError) as excinfo:
        run_pwgd(spec, 2, cfg, square, initial=start)
    assert excinfo.value.sweep == 1
    assert excinfo.value.index == 0


def test_literal_max_aborts_in_first_sweep_from_random_starts(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2)
    for seed in range(10):
        cfg = PwgdConfig(step_rule=StepRule.LITERAL_MAX, seed=seed, k_max=50)
        with pytest.raises(PwgdAbortError) as excinfo:
            run_pwgd(spec, 10, cfg, square)
        assert excinfo.value.sweep == 1


def test_coincident_start_aborts(square: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2)
    start = NodeSet(np.array([[0.5, 0.5], [0.5, 0.5]]))
    with pytest.raises(PwgdAbortError) as excinfo:
        run_pwgd(spec, 2, PwgdConfig(), square, initial=start)
    assert excinfo.value.sweep == 0


def test_rejects_bad_arguments(square: DomainBox, cube: DomainBox) -> None:
    spec = ObjectiveSpec(dim=2)
    with pytest.raises(InvalidArgumentError):
        run_pwgd(spec, 1, PwgdConfig(), square)
    with pytest.raises(InvalidArgumentError):
        run_pwgd(spec, 3, PwgdConfig(), cube)
    with pytest.raises(InvalidArgumentError):
        run_pwgd(spec, 3, PwgdConfig(), square, initial=NodeSet(np.array([[0.1, 0.1], [0.9, 0.9]])))


def test_make_quadrature_single_node_and_symmetric_set(kernel: GaussianKernel) -> None:
    single = make_quadrature(NodeSet(np.array([[0.3, 0.6]])), kernel)
    np.testing.assert_allclose(single.weights, kernel.mean_embedding(np.array([[0.3, 0.6]])), rtol=1e-14)

    symmetric = NodeSet(np.array([[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]]))
    weights = make_quadrature(symmetric, kernel).weights
    np.testing.assert_allclose(weights, np.full(4, weights[0]), rtol=1e-10)


@pytest.mark.slow
def test_fundamental_solution_run_improves_random_start(square: DomainBox, kernel: GaussianKernel) -> None:
    spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    cfg = PwgdConfig(gamma=1.0, eps=1e-5, k_max=1000, seed=1)
    start = sample_uniform(square, 50, SeededRng(cfg.seed))
    nodes, _ = run_pwgd(spec, 50, cfg, square)
    assert squared_wce_optimal(nodes, kernel) < squared_wce_optimal(start, kernel)
    assert min_pairwise_distance(nodes) > 0.05


@pytest.mark.slow
def test_fundamental_solution_beats_gaussian_objective_and_spreads_wider_than_sbq(
    square: DomainBox, kernel: GaussianKernel
) -> None:
    fs_spec = ObjectiveSpec(dim=2, P=0.6, M=0.35)
    gauss_spec = ObjectiveSpec(kind=ObjectiveKind.GAUSSIAN_WCE, dim=2)
    fs_errors, gauss_errors, fs_spacing = [], [], []
    for seed in range(5):
        fs_nodes, _ = run_pwgd(fs_spec, 50, PwgdConfig(gamma=1.0, eps=1e-5, seed=seed), square)
        gauss_nodes, _ = run_pwgd(gauss_spec, 50, PwgdConfig(gamma=0.1, eps=1e-5, seed=seed), square)
        fs_errors.append(squared_wce_optimal(fs_nodes, kernel))
        gauss_errors.append(squared_wce_optimal(gauss_nodes, kernel))
        fs_spacing.append(min_pairwise_distance(fs_nodes))
    assert float(np.median(fs_errors)) < float(np.median(gauss_errors))

    candidates = make_candidates(square, CandidateKind.TENSOR_GRID, default_candidate_count(50, 2))
    sbq_nodes = run_sbq(50, candidates, kernel).nodes
    assert float(np.median(fs_spacing)) > min_pairwise_distance(sbq_nodes)
