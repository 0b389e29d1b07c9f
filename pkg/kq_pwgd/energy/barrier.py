# 說明：本模組實作把節點留在邊界內側的障礙正則項 R_d = N^{-P} Σ δ̃_M(x_i) 及其對單一節點的梯度。
from __future__ import annotations

from typing import Tuple

import numpy as np
from numpy.typing import NDArray

from ..config import BarrierMode, ObjectiveSpec
from ..errors import BarrierDomainError


def barrier_walls(spec: ObjectiveSpec) -> Tuple[float, float]:
    """障礙函數的兩道牆；外側模式為 (-M, 1+M)，字面模式為 (M, 1+M)。"""

    if spec.barrier is BarrierMode.OUTSIDE_MARGIN:
        return -spec.M, 1.0 + spec.M
    return spec.M, 1.0 + spec.M


def _distances(spec: ObjectiveSpec, x: NDArray[np.float64], index: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    low, high = barrier_walls(spec)
    left = x - low
    right = high - x
    bad = np.flatnonzero((left <= 0) | (right <= 0))
    if bad.size:
        raise BarrierDomainError(index, int(bad[0]), float(x[bad[0]]))
    return left, right


def barrier_point_value(spec: ObjectiveSpec, x: NDArray[np.float64], index: int = 0) -> float:
    """δ̃_M(x)：d=2 為對數障礙，d=3 為倒數障礙。"""

    left, right = _distances(spec, x, index)
    if spec.dim == 2:
        return float(-np.log(left).sum() - np.log(right).sum())
    return float((1.0 / left).sum() + (1.0 / right).sum())


def barrier_point_gradient(spec: ObjectiveSpec, x: NDArray[np.float64], index: int = 0) -> NDArray[np.float64]:
    left, right = _distances(spec, x, index)
    if spec.dim == 2:
        return -1.0 / left + 1.0 / right
    return -1.0 / left**2 + 1.0 / right**2


def barrier_scale(spec: ObjectiveSpec, n: int) -> float:
    return float(n) ** (-spec.P)


def regularizer_sum(spec: ObjectiveSpec, points: NDArray[np.float64]) -> float:
    if not spec.regularized:
        return 0.0
    total = sum(barrier_point_value(spec, x, i) for i, x in enumerate(points))
    return barrier_scale(spec, points.shape[0]) * total
