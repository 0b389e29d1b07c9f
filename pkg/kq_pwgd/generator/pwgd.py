# 說明：本模組實作逐點梯度下降（PWGD）：依序更新每個節點、以可行步長限制移動，並在收斂後以最佳權重組成求積公式。
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ..config import BarrierMode, ObjectiveSpec, PwgdConfig, StepRule
from ..domain import DomainBox, NodeSet, QuadratureRule, SeededRng, min_pairwise_distance, sample_uniform
from ..energy.objective import point_gradient, total_objective
from ..errors import BarrierDomainError, InvalidArgumentError, PwgdAbortError, SingularityError
from ..kernel import GaussianKernel
from ..wce import optimal_weights

logger = logging.getLogger(__name__)


class TerminationReason(str, Enum):
    CONVERGED = "converged"
    MAX_SWEEPS = "max-sweeps"


@dataclass(slots=True)
class SweepRecord:
    sweep: int
    max_gradient_norm: float
    objective: float
    min_distance: float


@dataclass(slots=True)
class PwgdTrace:
    """每次外層掃描的紀錄與終止原因。"""

    initial_objective: float
    records: List[SweepRecord] = field(default_factory=list)
    reason: Optional[TerminationReason] = None

    @property
    def sweeps(self) -> int:
        return len(self.records)

    @property
    def converged(self) -> bool:
        return self.reason is TerminationReason.CONVERGED

    @property
    def final_objective(self) -> float:
        return self.records[-1].objective if self.records else self.initial_objective


def _feasible_step(x: NDArray[np.float64], g: NDArray[np.float64], lo: float, hi: float) -> float:
    """max{β >= 0 : x - βg ∈ [lo, hi]^d}，以逐座標比值檢定求得。"""

    limits = []
    down = g > 0
    up = g < 0
    if np.any(down):
        limits.append(np.min((x[down] - lo) / g[down]))
    if np.any(up):
        limits.append(np.min((hi - x[up]) / -g[up]))
    if not limits:
        return math.inf
    return max(0.0, float(min(limits)))


def _next_step(cfg: PwgdConfig, gamma: float, feasible: float) -> Tuple[float, float]:
    """回傳 (實際步長, 下一輪的預設步長)。"""

    if cfg.step_rule is StepRule.CLAMPED_MIN:
        return min(gamma, cfg.shrink * feasible), gamma
    # 字面規則：γ ← max{γ, γ'}，步長即為新的 γ
    if math.isfinite(feasible):
        gamma = max(gamma, feasible)
    return gamma, gamma


class PointwiseGradientDescent:
    """以 Gauss–Seidel 順序最小化目標函數的節點產生器。"""

    def __init__(self, spec: ObjectiveSpec, cfg: PwgdConfig, domain: DomainBox) -> None:
        if spec.dim != domain.dim:
            raise InvalidArgumentError(f"目標函數維度 {spec.dim} 與區域維度 {domain.dim} 不符")
        self.spec = spec
        self.cfg = cfg
        self.domain = domain
        self.kernel = spec.kernel()
        self.lo, self.hi = spec.feasible_bounds()

    def initial_points(self, n: int) -> NDArray[np.float64]:
        points = np.array(sample_uniform(self.domain, n, SeededRng(self.cfg.seed)).points)
        if self.spec.regularized and self.spec.barrier is BarrierMode.LITERAL:
            points = self.lo + (self.hi - self.lo) * points
        return points

    def _gradient(self, points: NDArray[np.float64], sweep: int, i: int) -> NDArray[np.float64]:
        try:
            return point_gradient(self.spec, self.kernel, points, i)
        except (SingularityError, BarrierDomainError) as exc:
            raise PwgdAbortError(sweep, i, str(exc)) from exc

    def _objective(self, points: NDArray[np.float64], sweep: int) -> float:
        try:
            return total_objective(self.spec, NodeSet(points))
        except (SingularityError, BarrierDomainError) as exc:
            raise PwgdAbortError(sweep, -1, str(exc)) from exc

    def run(self, n: int, initial: Optional[NodeSet] = None) -> Tuple[NodeSet, PwgdTrace]:
        if n < 2:
            raise InvalidArgumentError(f"PWGD 至少需要 n=2 個節點，收到 {n}")
        if initial is None:
            points = self.initial_points(n)
        else:
            if initial.size != n or initial.dim != self.domain.dim:
                raise InvalidArgumentError(
                    f"初始節點形狀 {initial.points.shape} 與 (n={n}, d={self.domain.dim}) 不符"
                )
            points = np.array(initial.points)

        trace = PwgdTrace(initial_objective=self._objective(points, 0))
        gamma = self.cfg.gamma
        for sweep in range(1, self.cfg.k_max + 1):
            max_norm = 0.0
            for i in range(n):
                g = self._gradient(points, sweep, i)
                norm = float(np.linalg.norm(g))
                max_norm = max(max_norm, norm)
                if norm == 0.0:
                    continue
                step, gamma = _next_step(self.cfg, gamma, _feasible_step(points[i], g, self.lo, self.hi))
                candidate = points[i] - step * g
                if np.any(candidate < self.lo) or np.any(candidate > self.hi):
                    raise PwgdAbortError(sweep, i, f"步長 {step:.3e} 使節點離開可行區域")
                points[i] = candidate

            record = SweepRecord(
                sweep=sweep,
                max_gradient_norm=max_norm,
                objective=self._objective(points, sweep),
                min_distance=min_pairwise_distance(NodeSet(points)),
            )
            trace.records.append(record)
            logger.debug(
                "PWGD 第 %d 次掃描：max|g|=%.3e objective=%.6g min_dist=%.4g",
                sweep,
                record.max_gradient_norm,
                record.objective,
                record.min_distance,
            )
            if max_norm < self.cfg.eps:
                trace.reason = TerminationReason.CONVERGED
                break
        else:
            trace.reason = TerminationReason.MAX_SWEEPS

        logger.info("PWGD 結束：%s，共 %d 次掃描", trace.reason.value, trace.sweeps)
        return NodeSet(points), trace


def run_pwgd(
    spec: ObjectiveSpec,
    n: int,
    cfg: PwgdConfig,
    domain: DomainBox,
    initial: Optional[NodeSet] = None,
) -> Tuple[NodeSet, PwgdTrace]:
    return PointwiseGradientDescent(spec, cfg, domain).run(n, initial)


def make_quadrature(nodes: NodeSet, kernel: GaussianKernel) -> QuadratureRule:
    """PWGD 的最後一步：對產生的節點求最佳權重。"""

    return optimal_weights(nodes, kernel)
