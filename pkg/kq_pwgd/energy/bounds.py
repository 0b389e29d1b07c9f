# 說明：本模組提供高斯核能量上界所需的確定性常數：Ĉ_{d,D} 與熱核積分下界的尾項 h_{d,D}(t)。
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidArgumentError

# t 與 D²/d 比較時容許的相對誤差
RATIO_SLACK = 1e-12


def h_function(d: int, D: float, t: float) -> float:
    """下界中的尾項 h_{d,D}(t)，於 t = D²/d 時恰為 0。"""

    if d < 1 or D <= 0:
        raise InvalidArgumentError(f"需要 d >= 1 且 D > 0，收到 d={d}, D={D}")
    ratio = d * t / D**2
    if ratio < 1.0 - RATIO_SLACK:
        raise InvalidArgumentError(f"需要 t >= D²/d = {D**2 / d:.6g}，收到 t={t}")
    if ratio <= 1.0 + RATIO_SLACK:
        ratio = 1.0
    if d == 2:
        return math.exp(-0.5) * math.log(ratio)
    scale = (d / D**2) ** (d / 2.0 - 1.0)
    return math.exp(-d / 4.0) / (1.0 - d / 2.0) * scale * (ratio ** (1.0 - d / 2.0) - 1.0)


def upper_bound_constant(d: int, D: float) -> float:
    """Ĉ_{d,D} = 2(4π)^{d/2} D^{d-2} / d^{d/2-1}。"""

    if d < 2 or D <= 0:
        raise InvalidArgumentError(f"需要 d >= 2 且 D > 0，收到 d={d}, D={D}")
    return 2.0 * (4.0 * math.pi) ** (d / 2.0) * D ** (d - 2.0) / d ** (d / 2.0 - 1.0)


@dataclass(frozen=True, slots=True)
class UpperBoundConstants:
    """上界中與節點無關的部分；A_d 與 C_d 需由 theory 模組以積分求得。"""

    d: int
    D: float
    t: float
    c_hat: float
    h: float

    @property
    def tail_weight(self) -> float:
        """(4π)^{-d/2} h_{d,D}(t)，乘上 (N-1)/N 後即為上界中的修正項。"""

        return (4.0 * math.pi) ** (-self.d / 2.0) * self.h


def ub_constants(d: int, D: float, t: float) -> UpperBoundConstants:
    if d < 2:
        raise InvalidArgumentError(f"上界常數需要 d >= 2，收到 {d}")
    return UpperBoundConstants(d=d, D=D, t=t, c_hat=upper_bound_constant(d, D), h=h_function(d, D, t))
