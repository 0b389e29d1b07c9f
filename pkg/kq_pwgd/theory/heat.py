# 說明：本模組提供熱核與熱核對時間的積分，d=2、d=3 走閉式，其他維度改用自適應積分。
from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.special import erfc, exp1

from ..config import QuadratureTolerances
from ..errors import InvalidArgumentError
from .quadrature import adaptive_quad


def heat_kernel(d: int, t: float, r: float) -> float:
    if t <= 0:
        raise InvalidArgumentError(f"熱核需要 t > 0，收到 {t}")
    if r < 0:
        raise InvalidArgumentError(f"距離需 >= 0，收到 {r}")
    return (4.0 * math.pi * t) ** (-d / 2.0) * math.exp(-(r**2) / (4.0 * t))


def _check_time_and_distance(t: float, r: float) -> None:
    if t <= 0:
        raise InvalidArgumentError(f"需要 t > 0，收到 {t}")
    if r <= 0:
        raise InvalidArgumentError(f"r = {r} 時 ∫_0^t 熱核 ds 在 d >= 2 發散")


def int_heat_kernel(d: int, t: float, r: float, tol: Optional[QuadratureTolerances] = None) -> float:
    """∫_0^t (4πs)^{-d/2} exp(-r²/4s) ds；d=2 用 E_1、d=3 用 erfc 閉式，其他維度改用積分。"""

    _check_time_and_distance(t, r)
    if d == 2:
        return float(exp1(r**2 / (4.0 * t))) / (4.0 * math.pi)
    if d == 3:
        return float(erfc(r / (2.0 * math.sqrt(t)))) / (4.0 * math.pi * r)
    return int_heat_kernel_numeric(d, t, r, tol)


def int_heat_kernel_numeric(d: int, t: float, r: float, tol: Optional[QuadratureTolerances] = None) -> float:
    """以 u = r²/(4s) 換元後的自適應積分，適用任意 d >= 2。"""

    if d < 2:
        raise InvalidArgumentError(f"需要 d >= 2，收到 {d}")
    _check_time_and_distance(t, r)
    tol = tol or QuadratureTolerances()
    u0 = r**2 / (4.0 * t)
    prefactor = r ** (2.0 - d) * math.pi ** (-d / 2.0) / 4.0
    exponent = d / 2.0 - 2.0

    def integrand(u: float) -> float:
        return u**exponent * math.exp(-u)

    # 小 u0 時被積函數在左端點附近陡峭，先在有限區間積分再接無窮尾端
    split = max(1.0, 2.0 * u0)
    value = adaptive_quad(integrand, u0, split, tol) + adaptive_quad(integrand, split, np.inf, tol)
    return prefactor * value
