# 說明：本模組提供 R^d 上 Laplace 算子的基本解 G_d 及其梯度，供能量目標函數與理論驗證共用。
from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import InvalidArgumentError, SingularityError


def sphere_area(d: int) -> float:
    """(d-1) 維單位球面的面積 s_d = 2π^{d/2} / Γ(d/2)。"""

    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def fundamental_values(d: int, r: NDArray[np.float64]) -> NDArray[np.float64]:
    """對距離陣列逐點計算 G_d。"""

    if d < 2:
        raise InvalidArgumentError(f"基本解需要 d >= 2，收到 {d}")
    r = np.asarray(r, dtype=np.float64)
    if np.any(r <= 0):
        raise SingularityError("基本解在 x = y 處發散")
    if d == 2:
        return np.log(r) / (2.0 * math.pi)
    return -1.0 / (2.0 * (d - 2) * sphere_area(d) * r ** (d - 2))


def fundamental_profile(d: int, r: float) -> float:
    """G_d 作為距離 r 的函數。"""

    return float(fundamental_values(d, np.array(r)))


def fundamental_solution(d: int, x: ArrayLike, y: ArrayLike) -> float:
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    yv = np.asarray(y, dtype=np.float64).reshape(-1)
    if xv.shape != yv.shape or xv.size != d:
        raise InvalidArgumentError(f"點的維度需為 {d}，收到 {xv.shape} 與 {yv.shape}")
    return fundamental_profile(d, float(np.linalg.norm(xv - yv)))


def fundamental_gradient(d: int, diff: NDArray[np.float64]) -> NDArray[np.float64]:
    """∇_x G_d(x, y_j)，diff 的每列為 x - y_j。"""

    r = np.linalg.norm(diff, axis=-1)
    if np.any(r == 0):
        raise SingularityError("基本解的梯度在重合點上發散")
    if d == 2:
        return diff / (2.0 * math.pi * r[..., None] ** 2)
    return diff / (2.0 * sphere_area(d) * r[..., None] ** d)
