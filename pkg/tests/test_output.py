# 說明：本測試驗證節點、權重、報告與掃描結果的檔案格式，以及 SVG 圖檔的可重現輸出。
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from pydantic import BaseModel

from kq_pwgd.domain import NodeSet
from kq_pwgd.errors import InvalidArgumentError
from kq_pwgd.output import (
    plot_points_svg,
    plot_sweep_svg,
    read_points_csv,
    read_report_json,
    read_weights_csv,
    sweep_medians,
    write_points_csv,
    write_report_json,
    write_sweep_csv,
    write_weights_csv,
)


class _Row(BaseModel):
    method: str
    n: int
    seed: int
    squared_wce_optimal: float
    min_distance: float | None = None


def test_points_csv_keeps_full_precision(out_dir: Path) -> None:
    nodes = NodeSet(np.array([[0.1, 1.0 / 3.0, 0.7], [2.0 / 7.0, 0.5, 1e-17]]))
    path = out_dir / "points.csv"
    write_points_csv(path, nodes)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x1,x2,x3"
    assert lines[1].split(",")[1] == "0.33333333333333331"
    np.testing.assert_array_equal(read_points_csv(path).points, nodes.points)


def test_points_csv_header_is_checked(out_dir: Path) -> None:
    path = out_dir / "bad.csv"
    path.write_text("a,b\n0.1,0.2\n", encoding="utf-8")
    with pytest.raises(InvalidArgumentError):
        read_points_csv(path)


def test_weights_csv(out_dir: Path) -> None:
    path = out_dir / "weights.csv"
    weights = np.array([0.25, -1.5e-3, 2.0 / 3.0])
    write_weights_csv(path, weights)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "w"
    np.testing.assert_array_equal(read_weights_csv(path), weights)


def test_report_json_round_trip(out_dir: Path) -> None:
    path = out_dir / "report.json"
    row = _Row(method="sbq", n=4, seed=0, squared_wce_optimal=0.1)
    write_report_json(path, row)
    assert read_report_json(path) == {
        "method": "sbq",
        "n": 4,
        "seed": 0,
        "squared_wce_optimal": 0.1,
        "min_distance": None,
    }
    assert not list(out_dir.glob(".*.tmp"))


def test_sweep_csv_writes_empty_cells_for_missing_values(out_dir: Path) -> None:
    path = out_dir / "sweep.csv"
    rows = [
        _Row(method="sbq", n=2, seed=0, squared_wce_optimal=0.5),
        _Row(method="sbq", n=4, seed=0, squared_wce_optimal=0.25, min_distance=0.5),
    ]
    write_sweep_csv(path, rows)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == [
        "method,n,seed,squared_wce_optimal,min_distance",
        "sbq,2,0,0.5,",
        "sbq,4,0,0.25,0.5",
    ]
    with pytest.raises(InvalidArgumentError):
        write_sweep_csv(out_dir / "empty.csv", [])


def test_sweep_medians_group_by_method_and_n() -> None:
    rows = [
        {"method": "b", "n": 10, "squared_wce_optimal": 3.0},
        {"method": "b", "n": 10, "squared_wce_optimal": 1.0},
        {"method": "b", "n": 10, "squared_wce_optimal": 2.0},
        {"method": "a", "n": 20, "squared_wce_optimal": 0.5},
        {"method": "a", "n": 10, "squared_wce_optimal": 0.7},
    ]
    assert sweep_medians(rows) == {"a": [(10, 0.7), (20, 0.5)], "b": [(10, 2.0)]}


def test_point_plots_are_byte_reproducible(out_dir: Path) -> None:
    nodes = NodeSet(np.random.default_rng(0).random((12, 3)))
    first = out_dir / "first.svg"
    second = out_dir / "second.svg"
    plot_points_svg(first, nodes, "demo")
    plot_points_svg(second, nodes, "demo")
    text = first.read_text(encoding="utf-8")
    assert text.startswith("<?xml")
    assert "x3" in text
    assert text == second.read_text(encoding="utf-8")
    with pytest.raises(InvalidArgumentError):
        plot_points_svg(out_dir / "bad.svg", NodeSet(np.random.default_rng(0).random((3, 4))), "bad")


def test_sweep_plot_is_written(out_dir: Path) -> None:
    rows = [
        _Row(method="sbq", n=n, seed=seed, squared_wce_optimal=1.0 / n**2 + seed * 1e-4)
        for n in (2, 4, 8)
        for seed in (0, 1)
    ]
    path = out_dir / "sweep.svg"
    plot_sweep_svg(path, rows)
    assert "sbq" in path.read_text(encoding="utf-8")
