# 說明：本模組負責讀取並組態 kq_pwgd 所需的設定，包含目標函數、PWGD 參數、積分容許誤差與單次/掃描執行設定。
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .domain import DomainBox
from .errors import InvalidArgumentError
from .kernel import GaussianKernel

THREADS_ENV_VAR = "KQ_THREADS"


class ObjectiveKind(str, Enum):
    FUNDAMENTAL_SOLUTION = "fundamental-solution"
    GAUSSIAN_WCE = "gaussian-wce"


class BarrierMode(str, Enum):
    """障礙函數的解讀方式。"""

    OUTSIDE_MARGIN = "outside"
    LITERAL = "literal"


class StepRule(str, Enum):
    CLAMPED_MIN = "clamped"
    LITERAL_MAX = "literal"


class MethodKind(str, Enum):
    PWGD_FS = "pwgd-fs"
    PWGD_GAUSS = "pwgd-gauss"
    SBQ = "sbq"


class CandidateKind(str, Enum):
    TENSOR_GRID = "grid"
    HALTON = "halton"
    UNIFORM = "uniform"


class ObjectiveSpec(BaseModel):
    """PWGD 要最小化的目標函數與其超參數。"""

    model_config = ConfigDict(frozen=True)

    kind: ObjectiveKind = ObjectiveKind.FUNDAMENTAL_SOLUTION
    dim: int = Field(2, ge=1)
    P: float = Field(0.5, gt=0)
    M: float = 0.5
    barrier: BarrierMode = BarrierMode.OUTSIDE_MARGIN
    kernel_shape: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ObjectiveSpec":
        if self.kind is ObjectiveKind.FUNDAMENTAL_SOLUTION:
            if self.dim not in (2, 3):
                raise ValueError("基本解能量僅支援 dim=2 或 dim=3")
            if self.barrier is BarrierMode.OUTSIDE_MARGIN and self.M <= 0:
                raise ValueError("外側邊界模式需要 M > 0")
            if self.barrier is BarrierMode.LITERAL and not -1.0 < self.M < 1.0:
                raise ValueError("字面障礙模式需要 -1 < M < 1，否則可行區域為空")
        return self

    @property
    def regularized(self) -> bool:
        return self.kind is ObjectiveKind.FUNDAMENTAL_SOLUTION

    def feasible_bounds(self) -> Tuple[float, float]:
        """每個座標上目標函數有定義、且落在單位立方體內的區間。"""

        if not self.regularized or self.barrier is BarrierMode.OUTSIDE_MARGIN:
            return 0.0, 1.0
        return max(0.0, self.M), min(1.0, 1.0 + self.M)

    def kernel(self) -> GaussianKernel:
        return GaussianKernel(a=self.kernel_shape)


class PwgdConfig(BaseModel):
    """逐點梯度下降的輸入參數。"""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(1.0, gt=0)
    k_max: int = Field(1000, ge=1)
    eps: float = Field(1e-5, gt=0)
    step_rule: StepRule = StepRule.CLAMPED_MIN
    shrink: float = Field(0.9, gt=0, lt=1)
    seed: int = Field(0, ge=0, lt=2**64)


class QuadratureTolerances(BaseModel):
    """理論驗證用自適應積分的容許誤差與 R^d 截斷半徑。"""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(1e-10, gt=0)
    rel_tol: float = Field(1e-8, gt=0)
    radius: Optional[float] = Field(None, gt=0)
    limit: int = Field(200, ge=10)

    @classmethod
    def from_tol(cls, tol: float) -> "QuadratureTolerances":
        return cls(abs_tol=tol * 1e-2, rel_tol=tol)

    def radius_for(self, t: float) -> float:
        required = 10.0 * math.sqrt(t)
        if self.radius is None:
            return max(required, 10.0)
        if self.radius < required:
            raise InvalidArgumentError(f"截斷半徑 {self.radius} 小於 10·sqrt(t) = {required:.3g}")
        return self.radius


def default_gamma(method: MethodKind) -> float:
    return 0.1 if method is MethodKind.PWGD_GAUSS else 1.0


def default_eps(dim: int) -> float:
    return 1e-5 if dim <= 2 else 1e-4


class MethodEntry(BaseModel):
    """掃描中的一個方法，例如 `pwgd-fs:0.6:0.35`。"""

    model_config = ConfigDict(frozen=True)

    kind: MethodKind
    P: float = Field(0.5, gt=0)
    M: float = 0.5

    @classmethod
    def parse(cls, text: str) -> "MethodEntry":
        name, *params = [part.strip() for part in text.split(":")]
        kind = MethodKind(name)
        if kind is MethodKind.PWGD_FS:
            if len(params) not in (0, 2):
                raise ValueError(f"方法格式需為 pwgd-fs:P:M，收到 {text!r}")
            if params:
                return cls(kind=kind, P=float(params[0]), M=float(params[1]))
        elif params:
            raise ValueError(f"方法 {name} 不接受超參數：{text!r}")
        return cls(kind=kind)

    @property
    def label(self) -> str:
        if self.kind is MethodKind.PWGD_FS:
            return f"pwgd-fs(P={self.P:g},M={self.M:g})"
        return self.kind.value


class GenerateSettings(BaseModel):
    """單次產生節點的設定（對應 `generate` 子命令）。"""

    dim: int = Field(2, ge=2, le=3)
    n: int = Field(..., ge=1)
    method: MethodKind = MethodKind.PWGD_FS
    P: float = Field(0.5, gt=0)
    M: float = 0.5
    gamma: Optional[float] = Field(None, gt=0)
    k_max: int = Field(1000, ge=1)
    eps: Optional[float] = Field(None, gt=0)
    seed: int = Field(0, ge=0, lt=2**64)
    barrier: BarrierMode = BarrierMode.OUTSIDE_MARGIN
    step_rule: StepRule = StepRule.CLAMPED_MIN
    candidate_kind: CandidateKind = CandidateKind.TENSOR_GRID
    candidate_count: Optional[int] = Field(None, ge=1)
    out_dir: Path = Path("out")
    record_timing: bool = True

    @model_validator(mode="after")
    def _check_n(self) -> "GenerateSettings":
        if self.method is not MethodKind.SBQ and self.n < 2:
            raise ValueError("PWGD 方法至少需要 n=2 個節點")
        return self


class SweepSettings(BaseModel):
    """N 掃描的設定（對應 `sweep` 子命令）。"""

    dim: int = Field(2, ge=2, le=3)
    n_list: List[int] = Field(..., min_length=1)
    methods: List[MethodEntry] = Field(..., min_length=1)
    seeds: List[int] = Field(..., min_length=1)
    gamma: Optional[float] = Field(None, gt=0)
    k_max: int = Field(1000, ge=1)
    eps: Optional[float] = Field(None, gt=0)
    barrier: BarrierMode = BarrierMode.OUTSIDE_MARGIN
    step_rule: StepRule = StepRule.CLAMPED_MIN
    candidate_kind: CandidateKind = CandidateKind.TENSOR_GRID
    out_dir: Path = Path("out")
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _check_lists(self) -> "SweepSettings":
        if any(n < 2 for n in self.n_list):
            raise ValueError("n-list 中每個 N 需 >= 2")
        if any(seed < 0 for seed in self.seeds):
            raise ValueError("seed 必須為非負整數")
        return self

    def generate_settings(self, entry: MethodEntry, n: int, seed: int) -> GenerateSettings:
        return GenerateSettings(
            dim=self.dim,
            n=n,
            method=entry.kind,
            P=entry.P,
            M=entry.M,
            gamma=self.gamma,
            k_max=self.k_max,
            eps=self.eps,
            seed=seed,
            barrier=self.barrier,
            step_rule=self.step_rule,
            candidate_kind=self.candidate_kind,
            out_dir=self.out_dir,
        )


class RuntimeSettings(BaseModel):
    threads: int = Field(1, ge=1)

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        raw = os.environ.get(THREADS_ENV_VAR)
        if raw is None or not raw.strip():
            return cls(threads=os.cpu_count() or 1)
        try:
            threads = int(raw)
        except ValueError as exc:
            raise InvalidArgumentError(f"{THREADS_ENV_VAR} 必須為正整數，收到 {raw!r}") from exc
        return cls(threads=threads)


@dataclass(slots=True)
class RunPlan:
    """整合後可供核心流程使用的單次執行設定。"""

    method: MethodKind
    label: str
    domain: DomainBox
    kernel: GaussianKernel
    n: int
    seed: int
    objective: Optional[ObjectiveSpec] = None
    pwgd: Optional[PwgdConfig] = None
    candidate_kind: CandidateKind = CandidateKind.TENSOR_GRID
    candidate_count: Optional[int] = None


def build_run_plan(settings: GenerateSettings) -> RunPlan:
    """將 Pydantic 設定轉換為核心流程可用的結構，並補上各方法的預設值。"""

    domain = DomainBox(dim=settings.dim)
    kernel = GaussianKernel(a=1.0)
    entry = MethodEntry(kind=settings.method, P=settings.P, M=settings.M)

    if settings.method is MethodKind.SBQ:
        return RunPlan(
            method=settings.method,
            label=entry.label,
            domain=domain,
            kernel=kernel,
            n=settings.n,
            seed=settings.seed,
            candidate_kind=settings.candidate_kind,
            candidate_count=settings.candidate_count,
        )

    kind = (
        ObjectiveKind.FUNDAMENTAL_SOLUTION
        if settings.method is MethodKind.PWGD_FS
        else ObjectiveKind.GAUSSIAN_WCE
    )
    objective = ObjectiveSpec(
        kind=kind,
        dim=settings.dim,
        P=settings.P,
        M=settings.M,
        barrier=settings.barrier,
    )
    pwgd = PwgdConfig(
        gamma=settings.gamma if settings.gamma is not None else default_gamma(settings.method),
        k_max=settings.k_max,
        eps=settings.eps if settings.eps is not None else default_eps(settings.dim),
        step_rule=settings.step_rule,
        seed=settings.seed,
    )
    return RunPlan(
        method=settings.method,
        label=entry.label,
        domain=domain,
        kernel=kernel,
        n=settings.n,
        seed=settings.seed,
        objective=objective,
        pwgd=pwgd,
    )
