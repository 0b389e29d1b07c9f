# 說明：本模組以自適應積分計算理論驗證所需的 R^d 積分：常數 C_d(t)、熱核與基本解的摺積，以及二維的重整化能量 A_2(t, μ_N)。
from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import i0e

from ..config import QuadratureTolerances
from ..domain import NodeSet
from ..energy.fundamental import fundamental_profile, sphere_area
from ..errors import InvalidArgumentError
from .heat import heat_kernel
from .quadrature import adaptive_nquad, adaptive_quad

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MAX_BRUTEFORCE_NODES = 3


def c_constant(d: int, t: float, tol: Optional[QuadratureTolerances] = None) -> float:
    """C_d(t) = ∫ G_d(0, y) e^{tΔ}δ_0(y) dy，以徑向積分計算並在 ρ=1 處切開奇異點附近。"""

    if d not in (2, 3):
        raise InvalidArgumentError(f"c_constant 只支援 d=2 或 d=3，收到 {d}")
    tol = tol or QuadratureTolerances()
    radius = tol.radius_for(t)

    def integrand(rho: float) -> float:
        return fundamental_profile(d, rho) * heat_kernel(d, t, rho) * rho ** (d - 1)

    near = adaptive_quad(integrand, 0.0, 1.0, tol)
    far = adaptive_quad(integrand, 1.0, radius, tol)
    return sphere_area(d) * (near + far)


def _as_plane_point(point: Sequence[float], name: str) -> np.ndarray:
    vector = np.asarray(point, dtype=np.float64).reshape(-1)
    if vector.shape != (2,):
        raise InvalidArgumentError(f"{name} 需為二維座標，收到形狀 {vector.shape}")
    return vector


def c_constant_cartesian(
    t: float,
    center: Sequence[float] = (0.0, 0.0),
    tol: Optional[QuadratureTolerances] = None,
) -> float:
    """在直角座標下以任意中心 b 計算 ∫ G_2(b, y) heat(t, |y - b|) dy。

    積分區域固定為 [-R', R']²，奇異點 b 作為兩層積分的斷點，用來檢查 C_2(t) 與中心無關。
    """

    tol = tol or QuadratureTolerances()
    b = _as_plane_point(center, "center")
    half = tol.radius_for(t) + float(np.max(np.abs(b)))

    def integrand(y1: float, y2: float) -> float:
        r = math.hypot(y1 - b[0], y2 - b[1])
        if r == 0.0:
            return 0.0
        return math.log(r) / TWO_PI * heat_kernel(2, t, r)

    return adaptive_nquad(
        integrand,
        [(-half, half), (-half, half)],
        tol,
        points=[[float(b[0])], [float(b[1])]],
    )


def convolved_fundamental_solution(
    t: float,
    a: Sequence[float],
    b: Sequence[float],
    tol: Optional[QuadratureTolerances] = None,
) -> float:
    """∫ G_2(a, y) heat(t, |y - b|) dy，以 a 為中心的極座標二維積分。"""

    tol = tol or QuadratureTolerances()
    av = _as_plane_point(a, "a")
    bv = _as_plane_point(b, "b")
    shift = av - bv
    gap = float(np.linalg.norm(shift))
    outer = tol.radius_for(t) + gap

    def integrand(theta: float, rho: float) -> float:
        if rho == 0.0:
            return 0.0
        r = math.hypot(shift[0] + rho * math.cos(theta), shift[1] + rho * math.sin(theta))
        return math.log(rho) / TWO_PI * heat_kernel(2, t, r) * rho

    breaks = [p for p in (gap, 1.0) if 0.0 < p < outer]
    return adaptive_nquad(integrand, [(0.0, TWO_PI), (0.0, outer)], tol, points=[None, breaks])


def _smoothed_fundamental(c: float, s: float, radius: float, tol: QuadratureTolerances) -> float:
    """F(c) = ∫ G_2(x, y) heat(s, |y - x_j|) dy，其中 c = |x - x_j|。

    以 x 為中心取極座標；角度方向的熱核積分為 2π e^{-(c-ρ)²/4s} I_0(cρ/2s) / (4πs)。
    """

    def integrand(rho: float) -> float:
        if rho == 0.0:
            return 0.0
        angular = math.exp(-((c - rho) ** 2) / (4.0 * s)) * float(i0e(c * rho / (2.0 * s))) / (2.0 * s)
        return math.log(rho) / TWO_PI * angular * rho

    upper = radius + c
    breaks = [p for p in (c, 1.0) if 0.0 < p < upper]
    return adaptive_quad(integrand, 0.0, upper, tol, points=breaks)


def a_energy_bruteforce(
    t: float,
    nodes: NodeSet,
    tol: Optional[QuadratureTolerances] = None,
    d: int = 2,
) -> float:
    """直接積分 A_2(t, μ_N) = (1/N²) Σ_{i,j} ∬ G_2(x, y) heat(t/2, x - x_i) heat(t/2, y - x_j) dx dy。

    外層以 x_i 為中心取極座標，內層 F 為一維徑向積分；不使用把雙重熱核合併成單一時間的化簡。
    """

    if d != 2:
        raise InvalidArgumentError(f"暴力計算 A_d 只支援 d=2，收到 {d}")
    if nodes.dim != 2:
        raise InvalidArgumentError(f"節點需為二維，收到維度 {nodes.dim}")
    if nodes.size > MAX_BRUTEFORCE_NODES:
        raise InvalidArgumentError(f"暴力計算 A_2 最多支援 N={MAX_BRUTEFORCE_NODES}，收到 {nodes.size}")
    if t <= 0:
        raise InvalidArgumentError(f"需要 t > 0，收到 {t}")

    tol = tol or QuadratureTolerances()
    s = t / 2.0
    radius = tol.radius_for(t)
    points = nodes.points
    n = nodes.size

    def diagonal_term() -> float:
        return adaptive_quad(
            lambda rho: heat_kernel(2, s, rho) * _smoothed_fundamental(rho, s, radius, tol) * TWO_PI * rho,
            0.0,
            radius,
            tol,
        )

    def cross_term(shift: np.ndarray) -> float:
        gap = float(np.linalg.norm(shift))

        def integrand(theta: float, rho: float) -> float:
            c = math.hypot(shift[0] + rho * math.cos(theta), shift[1] + rho * math.sin(theta))
            return heat_kernel(2, s, rho) * _smoothed_fundamental(c, s, radius, tol) * rho

        breaks = [gap] if 0.0 < gap < radius else None
        return adaptive_nquad(integrand, [(0.0, TWO_PI), (0.0, radius)], tol, points=[None, breaks])

    total = 0.0
    for i in range(n):
        total += diagonal_term()
        for j in range(i + 1, n):
            # G 對稱，(i, j) 與 (j, i) 兩項相等
            total += 2.0 * cross_term(points[i] - points[j])
            logger.debug("A_2 交叉項 (%d, %d) 完成", i, j)
    return total / n**2
