# 說明：本模組提供命令列介面，透過 generate、sweep、verify 子命令產生求積節點、執行 N 掃描與理論驗證。
from __future__ import annotations

import asyncio
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .config import (
    BarrierMode,
    CandidateKind,
    GenerateSettings,
    MethodEntry,
    MethodKind,
    StepRule,
    SweepSettings,
)
from .core import GenerateResult, SweepResult, generate, run_sweep, run_verification
from .errors import InvalidArgumentError, KernelQuadratureError
from .theory.checks import Suite, VerificationReport

EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3

STEP_RULE_HELP = "步長規則；literal 依演算法字面取 max，通常在第一輪掃描就因離開可行區域而中止"

app = typer.Typer(help="kq-pwgd：單位立方體上高斯核求積的節點產生與理論驗證工具")
console = Console()


@app.callback()
def _configure(
    log_level: str = typer.Option("WARNING", "--log-level", help="日誌等級（DEBUG、INFO、WARNING、ERROR）"),
) -> None:
    logging.basicConfig(
        level=log_level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@contextmanager
def _handled_errors() -> Iterator[None]:
    """把套件例外轉成對應的結束代碼。"""

    try:
        yield
    except (ValidationError, InvalidArgumentError) as exc:
        console.print(f"[red]參數錯誤：{exc}[/]")
        raise typer.Exit(code=EXIT_USAGE) from exc
    except KernelQuadratureError as exc:
        console.print(f"[red]數值計算失敗：{exc}[/]")
        raise typer.Exit(code=EXIT_NUMERICAL) from exc


def _parse_int_list(text: str, option: str) -> List[int]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise InvalidArgumentError(f"{option} 不可為空")
    try:
        return [int(item) for item in items]
    except ValueError as exc:
        raise InvalidArgumentError(f"{option} 需為以逗號分隔的整數，收到 {text!r}") from exc


def _parse_methods(values: List[str]) -> List[MethodEntry]:
    entries: List[MethodEntry] = []
    for value in values:
        for item in value.split(","):
            if not item.strip():
                continue
            try:
                entries.append(MethodEntry.parse(item))
            except ValueError as exc:
                raise InvalidArgumentError(f"無法解析方法 {item!r}：{exc}") from exc
    if not entries:
        raise InvalidArgumentError("至少需要指定一個 --method")
    return entries


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6g}"


def _render_generate(result: GenerateResult) -> None:
    report = result.report
    table = Table(title=f"kq-pwgd 產生結果：{report.method}")
    table.add_column("項目")
    table.add_column("數值")
    table.add_row("維度 / 節點數", f"d={report.dim}, N={report.n}")
    table.add_row("平方最壞誤差（等權重）", _fmt(report.squared_wce_equal))
    table.add_row("平方最壞誤差（最佳權重）", _fmt(report.squared_wce_optimal))
    table.add_row("最小兩兩距離", _fmt(report.min_distance))
    if result.trace is not None:
        table.add_row("掃描次數", f"{report.sweeps}（{report.termination}）")
    table.add_row("耗時（秒）", _fmt(report.wall_time_seconds))
    console.print(table)
    for name, path in result.files.items():
        console.print(f"[green]已寫出 {name}：{path}[/]")


def _render_sweep(result: SweepResult) -> None:
    table = Table(title="kq-pwgd 掃描摘要")
    for column in ("方法", "N", "seed", "等權重", "最佳權重", "最小距離"):
        table.add_column(column)
    for row in result.rows:
        table.add_row(
            row.method,
            str(row.n),
            str(row.seed),
            _fmt(row.squared_wce_equal),
            _fmt(row.squared_wce_optimal),
            _fmt(row.min_distance),
        )
    console.print(table)
    console.print(f"[green]已寫出 {result.csv_path} 與 {result.svg_path}[/]")


def _render_verification(report: VerificationReport) -> None:
    table = Table(title=f"kq-pwgd 理論驗證：{report.suite.value}")
    table.add_column("檢查項目")
    table.add_column("殘差")
    table.add_column("門檻")
    table.add_column("結果")
    for result in report.results:
        verdict = "[green]PASS[/]" if result.passed else "[red]FAIL[/]"
        table.add_row(result.name, f"{result.residual:.3e}", f"{result.threshold:.1e}", verdict)
    console.print(table)


@app.command("generate")
def generate_command(
    dim: int = typer.Option(2, "--dim", help="空間維度（2 或 3）"),
    n: int = typer.Option(..., "--n", help="節點數 N"),
    method: MethodKind = typer.Option(MethodKind.PWGD_FS, "--method", help="節點產生方法"),
    p: float = typer.Option(0.5, "--P", help="正則項強度指數 P"),
    m: float = typer.Option(0.5, "--M", help="障礙邊界的邊距 M"),
    gamma: Optional[float] = typer.Option(None, "--gamma", help="預設步長 γ（pwgd-fs 預設 1，pwgd-gauss 預設 0.1）"),
    k_max: int = typer.Option(1000, "--kmax", help="最大外層掃描次數"),
    eps: Optional[float] = typer.Option(None, "--eps", help="梯度範數停止門檻（d=2 預設 1e-5，d=3 預設 1e-4）"),
    seed: int = typer.Option(0, "--seed", help="初始節點的亂數種子"),
    out: Path = typer.Option(Path("out"), "--out", help="輸出目錄"),
    barrier: BarrierMode = typer.Option(BarrierMode.OUTSIDE_MARGIN, "--barrier", help="障礙函數解讀方式"),
    step_rule: StepRule = typer.Option(StepRule.CLAMPED_MIN, "--step-rule", help=STEP_RULE_HELP),
    candidates: CandidateKind = typer.Option(CandidateKind.TENSOR_GRID, "--candidates", help="SBQ 候選點類型"),
    candidate_count: Optional[int] = typer.Option(None, "--candidate-count", help="SBQ 候選點數"),
    record_timing: bool = typer.Option(True, "--record-timing/--no-record-timing", help="是否在報告中記錄耗時"),
) -> None:
    """產生一組節點與最佳權重，寫出 points.csv、weights.csv、report.json 與 points.svg。"""

    with _handled_errors():
        settings = GenerateSettings(
            dim=dim,
            n=n,
            method=method,
            P=p,
            M=m,
            gamma=gamma,
            k_max=k_max,
            eps=eps,
            seed=seed,
            barrier=barrier,
            step_rule=step_rule,
            candidate_kind=candidates,
            candidate_count=candidate_count,
            out_dir=out,
            record_timing=record_timing,
        )
        result = asyncio.run(generate(settings))
    _render_generate(result)


@app.command("sweep")
def sweep_command(
    n_list: str = typer.Option(..., "--n-list", help="以逗號分隔的 N，例如 10,20,30"),
    method: List[str] = typer.Option(
        [], "--method", "--methods", help="方法，可重複或以逗號分隔：pwgd-fs:P:M、pwgd-gauss、sbq"
    ),
    seeds: str = typer.Option("0", "--seeds", help="以逗號分隔的亂數種子"),
    dim: int = typer.Option(2, "--dim", help="空間維度（2 或 3）"),
    gamma: Optional[float] = typer.Option(None, "--gamma", help="覆寫所有 PWGD 方法的預設步長"),
    k_max: int = typer.Option(1000, "--kmax", help="最大外層掃描次數"),
    eps: Optional[float] = typer.Option(None, "--eps", help="梯度範數停止門檻"),
    barrier: BarrierMode = typer.Option(BarrierMode.OUTSIDE_MARGIN, "--barrier", help="障礙函數解讀方式"),
    step_rule: StepRule = typer.Option(StepRule.CLAMPED_MIN, "--step-rule", help=STEP_RULE_HELP),
    candidates: CandidateKind = typer.Option(CandidateKind.TENSOR_GRID, "--candidates", help="SBQ 候選點類型"),
    out: Path = typer.Option(Path("out"), "--out", help="輸出目錄"),
    workers: Optional[int] = typer.Option(None, "--workers", help="平行工作數（預設讀取 KQ_THREADS）"),
) -> None:
    """對多個方法、N 與 seed 執行掃描，寫出 sweep.csv 與 sweep.svg。"""

    with _handled_errors():
        settings = SweepSettings(
            dim=dim,
            n_list=_parse_int_list(n_list, "--n-list"),
            methods=_parse_methods(method),
            seeds=_parse_int_list(seeds, "--seeds"),
            gamma=gamma,
            k_max=k_max,
            eps=eps,
            barrier=barrier,
            step_rule=step_rule,
            candidate_kind=candidates,
            out_dir=out,
            workers=workers,
        )
        result = asyncio.run(run_sweep(settings))
    _render_sweep(result)


@app.command("verify")
def verify_command(
    suite: Suite = typer.Option(Suite.LEMMAS, "--suite", help="驗證套件；theorem1/theorem2 需數分鐘"),
    tol: Optional[float] = typer.Option(None, "--tol", help="積分容許誤差，同時放寬積分類檢查的門檻"),
) -> None:
    """執行熱核、能量恆等式、上界與一維 Fekete 點的數值驗證，任何一項失敗即以代碼 3 結束。"""

    with _handled_errors():
        if tol is not None and tol <= 0:
            raise InvalidArgumentError(f"--tol 必須為正數，收到 {tol}")
        report = asyncio.run(run_verification(suite, tol))
    _render_verification(report)
    if not report.passed:
        raise typer.Exit(code=EXIT_VERIFICATION)


def main() -> None:
    """console script 入口；命令列用法錯誤一律以代碼 1 結束。"""

    try:
        code = app(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.Abort:
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()
