# 說明：本模組定義 kq_pwgd 套件共用的例外階層，讓 CLI 能依錯誤類型決定結束代碼。
from __future__ import annotations

from typing import Optional

import numpy as np


class KernelQuadratureError(Exception):
    """套件內所有數值與參數錯誤的基底類別。"""


class InvalidArgumentError(KernelQuadratureError, ValueError):
    """參數不符合前置條件。"""


class SingularityError(KernelQuadratureError, ArithmeticError):
    """能量或基本解在重合點上發散。"""


class BarrierDomainError(KernelQuadratureError, ValueError):
    """節點座標落在障礙函數的定義域之外。"""

    def __init__(self, point_index: int, coordinate: int, value: float) -> None:
        super().__init__(
            f"節點 {point_index} 的第 {coordinate} 個座標 {value!r} 位於障礙邊界上或之外"
        )
        self.point_index = point_index
        self.coordinate = coordinate
        self.value = value


class ConditioningError(KernelQuadratureError, ArithmeticError):
    """平方最壞誤差出現超出捨入範圍的負值。"""

    def __init__(self, value: float, threshold: float, detail: str = "") -> None:
        message = f"平方最壞誤差 {value:.3e} 低於容許下限 {threshold:.0e}"
        if detail:
            message = f"{message}（{detail}）"
        super().__init__(message)
        self.value = value
        self.threshold = threshold


class SingularMatrixError(KernelQuadratureError, np.linalg.LinAlgError):
    """Cholesky 分解在最大 jitter 下仍失敗。"""

    def __init__(self, smallest_pivot: float, jitter: float) -> None:
        super().__init__(
            f"核矩陣在 jitter={jitter:.0e} 時仍非正定，最小 pivot 為 {smallest_pivot:.3e}"
        )
        self.smallest_pivot = smallest_pivot
        self.jitter = jitter


class QuadratureAccuracyError(KernelQuadratureError, ArithmeticError):
    """自適應積分未在容許誤差內收斂。"""

    def __init__(self, estimate: float, error: float, message: str = "") -> None:
        super().__init__(
            f"積分未收斂：估計值 {estimate!r}，誤差估計 {error:.3e}" + (f"；{message}" if message else "")
        )
        self.estimate = estimate
        self.error = error


class PwgdAbortError(KernelQuadratureError):
    """PWGD 在某次掃描的某個節點上無法繼續。"""

    def __init__(self, sweep: int, index: int, reason: str) -> None:
        super().__init__(f"PWGD 於第 {sweep} 次掃描、節點 {index} 中止：{reason}")
        self.sweep = sweep
        self.index = index


class SbqError(KernelQuadratureError):
    """SBQ 貪婪選點失敗。"""

    def __init__(self, step: int, reason: str, smallest_pivot: Optional[float] = None) -> None:
        super().__init__(f"SBQ 第 {step} 步失敗：{reason}")
        self.step = step
        self.smallest_pivot = smallest_pivot
