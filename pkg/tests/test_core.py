# 說明：本測試驗證核心流程：執行計畫、報告欄位檢查、generate 輸出檔案、平行掃描與理論驗證入口。
from __future__ import annotations

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from kq_pwgd.config import (
    GenerateSettings,
    MethodEntry,
    MethodKind,
    RuntimeSettings,
    SweepSettings,
    build_run_plan,
)
from kq_pwgd.core import REPORT_SCHEMA_VERSION, RunReport, execute_plan, generate, run_sweep, run_verification
from kq_pwgd.output import read_points_csv, read_weights_csv, sweep_medians
from kq_pwgd.theory import Suite


def test_execute_plan_for_sbq() -> None:
    plan = build_run_plan(GenerateSettings(n=5, method=MethodKind.SBQ))
    result = execute_plan(plan, record_timing=False)
    report = result.report
    assert result.trace is None
    assert report.method == "sbq"
    assert report.sweeps == 0
    assert report.termination is None
    assert report.P is None and report.gamma is None
    assert report.wall_time_seconds is None
    assert 0.0 <= report.squared_wce_optimal <= report.squared_wce_equal + 1e-10
    assert result.rule.nodes.size == 5


def test_execute_plan_for_pwgd() -> None:
    plan = build_run_plan(GenerateSettings(n=4, method=MethodKind.PWGD_FS, P=0.6, M=0.35, k_max=20, seed=2))
    result = execute_plan(plan)
    report = result.report
    assert report.method == "pwgd-fs(P=0.6,M=0.35)"
    assert report.gamma == 1.0
    assert report.eps == 1e-5
    assert 1 <= report.sweeps <= 20
    assert report.termination in {"converged", "max-sweeps"}
    assert report.min_distance is not None and report.min_distance > 0
    assert report.wall_time_seconds is not None and report.wall_time_seconds >= 0


def test_run_report_rejects_inconsistent_errors() -> None:
    with pytest.raises(ValidationError):
        RunReport(method="sbq", dim=2, n=2, seed=0, squared_wce_equal=0.1, squared_wce_optimal=0.2)
    with pytest.raises(ValidationError):
        RunReport(method="sbq", dim=2, n=2, seed=0, squared_wce_equal=-1.0, squared_wce_optimal=-1.0)


@pytest.mark.asyncio
async def test_generate_writes_reproducible_files(tmp_path: Path) -> None:
    outputs = []
    for name in ("first", "second"):
        settings = GenerateSettings(
            n=6,
            method=MethodKind.PWGD_GAUSS,
            k_max=15,
            seed=5,
            out_dir=tmp_path / name,
            record_timing=False,
        )
        result = await generate(settings)
        assert set(result.files) == {"points", "weights", "report", "plot"}
        outputs.append(result.files)

    for key in ("points", "weights", "report", "plot"):
        assert outputs[0][key].read_bytes() == outputs[1][key].read_bytes()

    report = json.loads(outputs[0]["report"].read_text(encoding="utf-8"))
    assert report["schema_version"] == REPORT_SCHEMA_VERSION
    assert report["method"] == "pwgd-gauss"
    assert report["wall_time_seconds"] is None
    assert read_points_csv(outputs[0]["points"]).size == 6
    assert read_weights_csv(outputs[0]["weights"]).shape == (6,)


@pytest.mark.asyncio
async def test_run_sweep_sorts_rows_and_writes_files(tmp_path: Path) -> None:
    settings = SweepSettings(
        n_list=[5, 3],
        methods=[MethodEntry.parse("sbq"), MethodEntry.parse("pwgd-gauss")],
        seeds=[1, 0],
        k_max=10,
        out_dir=tmp_path,
        workers=2,
    )
    result = await run_sweep(settings, RuntimeSettings(threads=1))
    keys = [(row.method, row.n, row.seed) for row in result.rows]
    assert keys == sorted(keys)
    assert len(keys) == 8
    lines = result.csv_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 9
    assert lines[0].startswith("schema_version,method,dim,n")
    assert result.svg_path.exists()


@pytest.mark.asyncio
async def test_run_verification_for_fekete_suite() -> None:
    report = await run_verification(Suite.FEKETE)
    assert report.suite is Suite.FEKETE
    assert report.passed


@pytest.mark.slow
@pytest.mark.asyncio
async def test_fundamental_solution_sweep_error_decreases_with_n(tmp_path: Path) -> None:
    settings = SweepSettings(
        n_list=list(range(10, 101, 10)),
        methods=[MethodEntry.parse("pwgd-fs:0.5:0.5")],
        seeds=[0, 1, 2],
        out_dir=tmp_path,
    )
    result = await run_sweep(settings, RuntimeSettings.from_env())
    assert len(result.rows) == 30

    medians = sweep_medians([row.model_dump() for row in result.rows])
    series = [value for _, value in medians["pwgd-fs(P=0.5,M=0.5)"]]
    assert len(series) == 10
    increases = sum(1 for earlier, later in zip(series, series[1:]) if later > earlier)
    # 隨機初始點造成的雜訊最多允許一次局部上升
    assert increases <= 1, series
