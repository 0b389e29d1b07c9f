# 說明：本模組包裝 scipy 的自適應積分，統一套用容許誤差設定並在未收斂時拋出 QuadratureAccuracyError。
from __future__ import annotations

import logging
import warnings
from typing import Callable, Optional, Sequence

from scipy.integrate import IntegrationWarning, nquad, quad

from ..config import QuadratureTolerances
from ..errors import QuadratureAccuracyError

logger = logging.getLogger(__name__)

# scipy 常以 roundoff 警告結束但結果仍可用；誤差估計超過此倍數才視為失敗
ACCEPTANCE_FACTOR = 1e3


def _acceptable(value: float, error: float, tol: QuadratureTolerances) -> bool:
    return error <= ACCEPTANCE_FACTOR * max(tol.abs_tol, tol.rel_tol * abs(value))


def adaptive_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: QuadratureTolerances,
    points: Optional[Sequence[float]] = None,
) -> float:
    """一維自適應積分（QUADPACK），points 為已知的奇異或峰值位置。"""

    inner_points = [p for p in (points or []) if a < p < b]
    result = quad(
        func,
        a,
        b,
        epsabs=tol.abs_tol,
        epsrel=tol.rel_tol,
        limit=tol.limit,
        points=inner_points or None,
        full_output=1,
    )
    value, error = float(result[0]), float(result[1])
    if len(result) > 3:
        if not _acceptable(value, error, tol):
            raise QuadratureAccuracyError(value, error, str(result[3]).splitlines()[0])
        logger.debug("quad 回報警告但誤差可接受：value=%r error=%.2e", value, error)
    return value


def adaptive_nquad(
    func: Callable[..., float],
    ranges: Sequence[object],
    tol: QuadratureTolerances,
    points: Optional[Sequence[Optional[Sequence[float]]]] = None,
) -> float:
    """多維巢狀自適應積分；ranges 與 points 由最內層往外排列。"""

    opts = []
    for level in range(len(ranges)):
        opt = {"epsabs": tol.abs_tol, "epsrel": tol.rel_tol, "limit": tol.limit}
        if points is not None and points[level]:
            opt["points"] = list(points[level])
        opts.append(opt)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, error = nquad(func, list(ranges), opts=opts)
    if not _acceptable(value, error, tol):
        raise QuadratureAccuracyError(float(value), float(error), "nquad")
    return float(value)
