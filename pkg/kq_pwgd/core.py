# 說明：本模組實作 kq-pwgd 的核心流程：單次產生節點與權重、多方法多 N 的掃描、理論驗證，並把結果整理成報告與輸出檔案。
from __future__ import annotations

import asyncio
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import (
    GenerateSettings,
    MethodKind,
    RunPlan,
    RuntimeSettings,
    SweepSettings,
    build_run_plan,
)
from .domain import QuadratureRule, min_pairwise_distance
from .errors import ConditioningError, InvalidArgumentError
from .generator.pwgd import PwgdTrace, make_quadrature, run_pwgd
from .generator.sbq import default_candidate_count, make_candidates, run_sbq
from .output import (
    plot_points_svg,
    plot_sweep_svg,
    write_points_csv,
    write_report_json,
    write_sweep_csv,
    write_weights_csv,
)
from .theory.checks import Suite, TheoryVerifier, VerificationReport
from .wce import squared_wce, squared_wce_optimal

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
OPTIMALITY_SLACK = 1e-10


class RunReport(BaseModel):
    """單次執行的指標，寫入 report.json 與 sweep.csv 的每一列。"""

    model_config = ConfigDict(frozen=True)

    schema_version: int = REPORT_SCHEMA_VERSION
    method: str
    dim: int
    n: int
    P: Optional[float] = None
    M: Optional[float] = None
    gamma: Optional[float] = None
    eps: Optional[float] = None
    seed: int
    squared_wce_equal: float = Field(..., ge=0)
    squared_wce_optimal: float = Field(..., ge=0)
    min_distance: Optional[float] = None
    sweeps: int = 0
    termination: Optional[str] = None
    wall_time_seconds: Optional[float] = None

    @model_validator(mode="after")
    def _check_optimality(self) -> "RunReport":
        if self.squared_wce_optimal > self.squared_wce_equal + OPTIMALITY_SLACK:
            raise ValueError("最佳權重的平方最壞誤差不可大於等權重的平方最壞誤差")
        return self


@dataclass(slots=True)
class GenerateResult:
    """彙整一次 generate 的求積公式、報告與輸出檔案。"""

    plan: RunPlan
    rule: QuadratureRule
    report: RunReport
    trace: Optional[PwgdTrace] = None
    files: Dict[str, Path] = field(default_factory=dict)


@dataclass(slots=True)
class SweepResult:
    rows: List[RunReport]
    csv_path: Path
    svg_path: Path


def execute_plan(plan: RunPlan, record_timing: bool = True) -> GenerateResult:
    """依執行計畫產生節點與最佳權重，不寫入任何檔案。"""

    started = time.perf_counter()
    trace: Optional[PwgdTrace] = None
    if plan.method is MethodKind.SBQ:
        count = plan.candidate_count or default_candidate_count(plan.n, plan.domain.dim)
        candidates = make_candidates(plan.domain, plan.candidate_kind, count, plan.seed)
        rule = run_sbq(plan.n, candidates, plan.kernel)
        nodes = rule.nodes
    else:
        if plan.objective is None or plan.pwgd is None:
            raise InvalidArgumentError(f"方法 {plan.method.value} 缺少目標函數或 PWGD 設定")
        nodes, trace = run_pwgd(plan.objective, plan.n, plan.pwgd, plan.domain)
        rule = make_quadrature(nodes, plan.kernel)
    elapsed = time.perf_counter() - started

    equal = squared_wce(QuadratureRule.equal_weights(nodes), plan.kernel)
    optimal = squared_wce_optimal(nodes, plan.kernel)
    if optimal > equal + OPTIMALITY_SLACK:
        raise ConditioningError(equal - optimal, -OPTIMALITY_SLACK, "最佳權重誤差大於等權重誤差")

    report = RunReport(
        method=plan.label,
        dim=plan.domain.dim,
        n=plan.n,
        P=plan.objective.P if plan.objective is not None and plan.objective.regularized else None,
        M=plan.objective.M if plan.objective is not None and plan.objective.regularized else None,
        gamma=plan.pwgd.gamma if plan.pwgd is not None else None,
        eps=plan.pwgd.eps if plan.pwgd is not None else None,
        seed=plan.seed,
        squared_wce_equal=equal,
        squared_wce_optimal=optimal,
        min_distance=min_pairwise_distance(nodes) if nodes.size > 1 else None,
        sweeps=trace.sweeps if trace is not None else 0,
        termination=trace.reason.value if trace is not None and trace.reason is not None else None,
        wall_time_seconds=elapsed if record_timing else None,
    )
    logger.info(
        "%s N=%d seed=%d：等權重 %.4e，最佳權重 %.4e",
        plan.label,
        plan.n,
        plan.seed,
        equal,
        optimal,
    )
    return GenerateResult(plan=plan, rule=rule, report=report, trace=trace)


def write_outputs(result: GenerateResult, out_dir: Path) -> Dict[str, Path]:
    files = {
        "points": out_dir / "points.csv",
        "weights": out_dir / "weights.csv",
        "report": out_dir / "report.json",
        "plot": out_dir / "points.svg",
    }
    write_points_csv(files["points"], result.rule.nodes)
    write_weights_csv(files["weights"], result.rule.weights)
    write_report_json(files["report"], result.report)
    plot_points_svg(files["plot"], result.rule.nodes, f"{result.report.method}, N={result.report.n}")
    result.files = files
    return files


def _generate_sync(settings: GenerateSettings) -> GenerateResult:
    result = execute_plan(build_run_plan(settings), record_timing=settings.record_timing)
    write_outputs(result, settings.out_dir)
    return result


async def generate(settings: GenerateSettings) -> GenerateResult:
    """`generate` 子命令的入口：執行一次並寫出四個檔案。"""

    return await asyncio.to_thread(_generate_sync, settings)


async def run_sweep(settings: SweepSettings, runtime: Optional[RuntimeSettings] = None) -> SweepResult:
    """平行執行所有 (方法, N, seed) 組合，排序後寫出 sweep.csv 與 sweep.svg。"""

    runtime = runtime or RuntimeSettings.from_env()
    workers = settings.workers or runtime.threads
    semaphore = asyncio.Semaphore(workers)
    total = len(settings.methods) * len(settings.n_list) * len(settings.seeds)
    logger.info("掃描 %d 個組合，使用 %d 個工作執行緒", total, workers)

    async def _one(plan: RunPlan) -> RunReport:
        async with semaphore:
            result = await asyncio.to_thread(execute_plan, plan)
        return result.report

    plans = [
        build_run_plan(settings.generate_settings(entry, n, seed))
        for entry in settings.methods
        for n in settings.n_list
        for seed in settings.seeds
    ]
    reports = await asyncio.gather(*(_one(plan) for plan in plans))
    rows = sorted(reports, key=lambda row: (row.method, row.n, row.seed))

    csv_path = settings.out_dir / "sweep.csv"
    svg_path = settings.out_dir / "sweep.svg"
    await asyncio.to_thread(write_sweep_csv, csv_path, rows)
    await asyncio.to_thread(plot_sweep_svg, svg_path, rows)
    return SweepResult(rows=rows, csv_path=csv_path, svg_path=svg_path)


async def run_verification(suite: Suite, tol: Optional[float] = None) -> VerificationReport:
    return await asyncio.to_thread(TheoryVerifier(tol).run, suite)