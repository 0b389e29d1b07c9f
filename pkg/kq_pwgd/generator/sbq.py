# 說明：本模組實作序列貝氏求積（SBQ）基準方法：從候選點集合中貪婪地挑選使最佳權重最壞誤差最小的節點。
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from numpy.typing import NDArray
from scipy.stats import qmc

from ..config import CandidateKind
from ..domain import DomainBox, NodeSet, QuadratureRule, SeededRng, sample_uniform
from ..errors import InvalidArgumentError, SbqError
from ..kernel import GaussianKernel
from ..wce import optimal_weights

logger = logging.getLogger(__name__)

# 條件變異數低於此值的候選點視為與已選節點線性相依
PIVOT_FLOOR = 1e-14


@dataclass(frozen=True, slots=True, eq=False)
class CandidateSet:
    points: NDArray[np.float64]
    kind: CandidateKind

    @property
    def count(self) -> int:
        return int(self.points.shape[0])


@dataclass(slots=True)
class SbqSelection:
    """貪婪選點的路徑：依序選到的候選索引與每一步的平方最壞誤差。"""

    indices: List[int] = field(default_factory=list)
    squared_errors: List[float] = field(default_factory=list)


def default_candidate_count(n: int, dim: int) -> int:
    """ceil((4n)^{1/d})^d，即每軸等分數取整後的格點總數。"""

    per_axis = math.ceil((4 * n) ** (1.0 / dim) - 1e-9)
    return max(per_axis, 2) ** dim


def _tensor_grid(dim: int, count: int) -> NDArray[np.float64]:
    per_axis = int(math.floor(count ** (1.0 / dim) + 1e-9))
    if per_axis < 2:
        raise InvalidArgumentError(f"張量格點至少需要 2^d = {2**dim} 個點，收到 {count}")
    axis = (np.arange(per_axis) + 0.5) / per_axis
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def make_candidates(domain: DomainBox, kind: CandidateKind, count: int, seed: int = 0) -> CandidateSet:
    if count < 1:
        raise InvalidArgumentError(f"候選點數需 >= 1，收到 {count}")
    if kind is CandidateKind.TENSOR_GRID:
        points = _tensor_grid(domain.dim, count)
    elif kind is CandidateKind.HALTON:
        sampler = qmc.Halton(d=domain.dim, scramble=False)
        # 未打亂的 Halton 序列第 0 點是原點，跳過後首點為 (1/2, 1/3, ...)
        sampler.fast_forward(1)
        points = sampler.random(count)
    else:
        points = np.array(sample_uniform(domain, count, SeededRng(seed)).points)
    return CandidateSet(points=points, kind=kind)


def greedy_select(n: int, candidates: CandidateSet, kernel: GaussianKernel) -> SbqSelection:
    """以遞增 Cholesky 更新執行 SBQ 貪婪迴圈。

    維護 V = L⁻¹ K(X, C) 與 u = L⁻¹ z_X，其中 L 為已選節點核矩陣的 Cholesky 因子。
    對候選點 c，v = V[:, c]、s = 1 - |v|²，加入 c 後的平方誤差為
    err - (z_c - v·u)² / s；選定後把 [(K(c, C) - vᵀV) / sqrt(s)] 接到 V 的下一列。
    """

    if n < 1:
        raise InvalidArgumentError(f"n 需 >= 1，收到 {n}")
    C = candidates.points
    z = kernel.mean_embedding(C)
    dim = C.shape[1]
    V = np.empty((0, candidates.count))
    u = np.empty(0)
    used = np.zeros(candidates.count, dtype=bool)
    err = kernel.double_integral(dim)
    selection = SbqSelection()

    for step in range(1, n + 1):
        s = 1.0 - np.einsum("ij,ij->j", V, V)
        residual = z - V.T @ u
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = err - residual**2 / s
        scores[used | (s <= PIVOT_FLOOR)] = np.inf
        if not np.isfinite(scores).any():
            reason = "候選點已用盡" if used.all() else "剩餘候選點皆與已選節點線性相依"
            raise SbqError(step, reason, smallest_pivot=float(np.min(s, initial=np.inf, where=~used)))

        best = int(np.argmin(scores))
        pivot = math.sqrt(float(s[best]))
        row = (kernel.gram(C[best : best + 1], C)[0] - V[:, best] @ V) / pivot
        u = np.append(u, residual[best] / pivot)
        V = np.vstack([V, row])
        used[best] = True
        err = float(scores[best])
        selection.indices.append(best)
        selection.squared_errors.append(err)
        logger.debug("SBQ 第 %d 步選擇候選點 %d，平方誤差 %.6e", step, best, err)

    return selection


def run_sbq(n: int, candidates: CandidateSet, kernel: GaussianKernel) -> QuadratureRule:
    selection = greedy_select(n, candidates, kernel)
    nodes = NodeSet(candidates.points[selection.indices])
    return optimal_weights(nodes, kernel)
