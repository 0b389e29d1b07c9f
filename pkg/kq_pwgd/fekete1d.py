# 說明：本模組處理一維近似 Fekete 點：帶外場的對數能量、其牛頓法最小化，以及與截斷高斯核行列式的恆等式檢查。
from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InvalidArgumentError, KernelQuadratureError
from .kernel import GaussianKernel, KernelMatrix, stable_cholesky, truncated_kernel_matrix

logger = logging.getLogger(__name__)

NEWTON_TOLERANCE = 1e-10
MAX_NEWTON_ITERATIONS = 200
MAX_HALVINGS = 60


def _ordered(xs: ArrayLike) -> NDArray[np.float64]:
    values = np.asarray(xs, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise InvalidArgumentError("點集合不可為空")
    if np.any(np.diff(values) <= 0):
        raise InvalidArgumentError("一維點集合必須嚴格遞增")
    return values


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise InvalidArgumentError(f"ε 必須為正數，收到 {eps}")


def log_energy(eps: float, xs: ArrayLike) -> float:
    """ε² Σ x_k² + Σ_{i<j} log(1/|x_i - x_j|)。"""

    _check_eps(eps)
    values = _ordered(xs)
    i, j = np.triu_indices(values.size, k=1)
    return float(eps**2 * (values**2).sum() - np.log(values[j] - values[i]).sum())


def log_energy_gradient(eps: float, xs: NDArray[np.float64]) -> NDArray[np.float64]:
    diff = xs[:, None] - xs[None, :]
    np.fill_diagonal(diff, np.inf)
    return 2.0 * eps**2 * xs - (1.0 / diff).sum(axis=1)


def log_energy_hessian(eps: float, xs: NDArray[np.float64]) -> NDArray[np.float64]:
    diff = xs[:, None] - xs[None, :]
    np.fill_diagonal(diff, np.inf)
    coupling = 1.0 / diff**2
    hessian = -coupling
    hessian[np.diag_indices_from(hessian)] = 2.0 * eps**2 + coupling.sum(axis=1)
    return hessian


def minimize_log_energy(eps: float, n: int) -> NDArray[np.float64]:
    """以牛頓法求對數能量在有序區域內的唯一最小點，步長減半直到維持遞增。"""

    _check_eps(eps)
    if n < 1:
        raise InvalidArgumentError(f"n 需 >= 1，收到 {n}")
    if n == 1:
        return np.zeros(1)

    # 最小點為 Hermite 多項式零點除以 sqrt(2)ε，最外側約在 sqrt(n)/ε
    xs = np.linspace(-1.0, 1.0, n) * math.sqrt(n) / eps
    energy = log_energy(eps, xs)
    for iteration in range(MAX_NEWTON_ITERATIONS):
        grad = log_energy_gradient(eps, xs)
        if np.linalg.norm(grad) < NEWTON_TOLERANCE:
            logger.debug("對數能量牛頓法於第 %d 步收斂", iteration)
            # 最小點對原點對稱，消去累積的捨入偏差
            return 0.5 * (xs - xs[::-1])
        step = np.linalg.solve(log_energy_hessian(eps, xs), grad)
        scale = 1.0
        for _ in range(MAX_HALVINGS):
            trial = xs - scale * step
            if np.all(np.diff(trial) > 0):
                trial_energy = log_energy(eps, trial)
                if trial_energy <= energy + 1e-14 * abs(energy):
                    break
            scale *= 0.5
        else:
            raise KernelQuadratureError("牛頓步長減半後仍無法維持遞增順序")
        xs, energy = trial, trial_energy
    raise KernelQuadratureError(f"對數能量牛頓法在 {MAX_NEWTON_ITERATIONS} 步內未收斂")


def half_log_det(matrix: KernelMatrix) -> float:
    """-(1/2) log det，以不加 jitter 的 Cholesky 對角線計算。"""

    return -0.5 * stable_cholesky(matrix.values, ladder=(0.0,)).logdet()


def check_det_identity(
    eps: float,
    xs_a: ArrayLike,
    xs_b: ArrayLike,
    n_terms: Optional[int] = None,
) -> float:
    """比較兩組點的 -(1/2) log det K̂ 差與對數能量差，回傳絕對殘差。

    n_terms 預設為 N，此時截斷核矩陣為方陣 Φ 的 ΦΦᵀ，恆等式只差捨入誤差。
    """

    _check_eps(eps)
    a = _ordered(xs_a)
    b = _ordered(xs_b)
    if a.size != b.size:
        raise InvalidArgumentError(f"兩組點數需相同，收到 {a.size} 與 {b.size}")
    det_gap = truncated_det_gap(eps, a, b, a.size if n_terms is None else n_terms)
    energy_gap = log_energy(eps, a) - log_energy(eps, b)
    return abs(det_gap - energy_gap)


def gaussian_det_gap(eps: float, xs_a: ArrayLike, xs_b: ArrayLike) -> float:
    """未截斷高斯核 exp(-ε²(x-y)²) 的 -(1/2) log det 差，作為截斷展開的收斂目標。"""

    kernel = GaussianKernel(a=eps)
    a = _ordered(xs_a).reshape(-1, 1)
    b = _ordered(xs_b).reshape(-1, 1)
    return half_log_det(KernelMatrix(kernel.gram(a))) - half_log_det(KernelMatrix(kernel.gram(b)))


def truncated_det_gap(eps: float, xs_a: ArrayLike, xs_b: ArrayLike, n_terms: int) -> float:
    a = _ordered(xs_a)
    b = _ordered(xs_b)
    return half_log_det(truncated_kernel_matrix(eps, n_terms, a)) - half_log_det(
        truncated_kernel_matrix(eps, n_terms, b)
    )
