# 說明：本模組實作高斯核的求值、核矩陣與帶 jitter 的 Cholesky 分解，以及單位立方體上的解析核均值嵌入 J_d 與雙重積分 k0。
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import cho_solve, cholesky, lapack, solve_triangular
from scipy.spatial.distance import cdist
from scipy.special import erf, gammaln

from .domain import DomainBox, NodeSet
from .errors import InvalidArgumentError, SingularMatrixError

logger = logging.getLogger(__name__)

# 分解失敗時依序嘗試的對角線 jitter
JITTER_LADDER: tuple[float, ...] = (0.0, 1e-12, 1e-10, 1e-8)

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True, slots=True)
class GaussianKernel:
    """K(x, y) = exp(-a^2 ||x - y||^2)。"""

    a: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0):
            raise InvalidArgumentError(f"形狀參數 a 必須為正數，收到 {self.a}")

    def __call__(self, x: ArrayLike, y: ArrayLike) -> float:
        return kernel_eval(self, x, y)

    def gram(self, X: NDArray[np.float64], Y: Optional[NDArray[np.float64]] = None) -> NDArray[np.float64]:
        other = X if Y is None else Y
        return np.exp(-(self.a**2) * cdist(X, other, "sqeuclidean"))

    def gradient(self, x: NDArray[np.float64], Y: NDArray[np.float64]) -> NDArray[np.float64]:
        """對 x 的梯度 ∇_x K(x, y_j)，每列對應一個 y_j。"""

        diff = x[None, :] - Y
        values = np.exp(-(self.a**2) * np.einsum("ij,ij->i", diff, diff))
        return -2.0 * self.a**2 * diff * values[:, None]

    def mean_embedding(self, X: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.prod(j1(X, self.a), axis=-1)

    def mean_embedding_gradient(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        values = j1(x, self.a)
        derivatives = j1_derivative(x, self.a)
        grad = np.empty_like(values)
        for ell in range(values.shape[0]):
            grad[ell] = derivatives[ell] * np.prod(np.delete(values, ell))
        return grad

    def double_integral(self, dim: int) -> float:
        return k0(dim, self.a)

    def admissible_for(self, domain: DomainBox) -> bool:
        """高斯能量上界要求 a >= sqrt(d) / (2D)。"""

        return self.a >= math.sqrt(domain.dim) / (2.0 * domain.diameter)


@dataclass(frozen=True, slots=True, eq=False)
class CholeskyFactor:
    lower: NDArray[np.float64]
    jitter: float = 0.0

    def solve(self, rhs: NDArray[np.float64]) -> NDArray[np.float64]:
        return cho_solve((self.lower, True), rhs)

    def logdet(self) -> float:
        return float(2.0 * np.log(np.diag(self.lower)).sum())


@dataclass(frozen=True, slots=True, eq=False)
class KernelMatrix:
    values: NDArray[np.float64]
    jitter: float = 0.0

    @property
    def size(self) -> int:
        return int(self.values.shape[0])

    def cholesky(self, ladder: Sequence[float] = JITTER_LADDER) -> CholeskyFactor:
        return stable_cholesky(self.values, ladder)


def _failing_pivot(matrix: NDArray[np.float64], info: int) -> float:
    # dpotrf 回報第 info 個前導子矩陣非正定；以 Schur 補數還原該 pivot
    k = info - 1
    if k == 0:
        return float(matrix[0, 0])
    leading = cholesky(matrix[:k, :k], lower=True)
    column = solve_triangular(leading, matrix[:k, k], lower=True)
    return float(matrix[k, k] - column @ column)


def stable_cholesky(matrix: NDArray[np.float64], ladder: Sequence[float] = JITTER_LADDER) -> CholeskyFactor:
    """依 ladder 逐步加大對角 jitter 直到 Cholesky 成功。"""

    identity = np.eye(matrix.shape[0])
    shifted = matrix
    info = 0
    jitter = 0.0
    for jitter in ladder:
        shifted = matrix + jitter * identity
        factor, info = lapack.dpotrf(shifted, lower=1, clean=1)
        if info == 0:
            if jitter > 0:
                logger.warning("核矩陣需要 jitter=%.0e 才能完成 Cholesky 分解（N=%d）", jitter, matrix.shape[0])
            return CholeskyFactor(lower=factor, jitter=jitter)
        if info < 0:
            raise InvalidArgumentError(f"dpotrf 的第 {-info} 個參數不合法")
    raise SingularMatrixError(smallest_pivot=_failing_pivot(shifted, info), jitter=jitter)


def _as_points(nodes: Union[NodeSet, ArrayLike]) -> NDArray[np.float64]:
    if isinstance(nodes, NodeSet):
        return nodes.points
    return NodeSet(np.asarray(nodes, dtype=np.float64)).points


def kernel_eval(k: GaussianKernel, x: ArrayLike, y: ArrayLike) -> float:
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    yv = np.asarray(y, dtype=np.float64).reshape(-1)
    if xv.shape != yv.shape:
        raise InvalidArgumentError(f"維度不符：{xv.shape} 與 {yv.shape}")
    diff = xv - yv
    return float(np.exp(-(k.a**2) * (diff @ diff)))


def kernel_matrix(k: GaussianKernel, nodes: NodeSet, jitter: float = 0.0) -> KernelMatrix:
    if jitter < 0:
        raise InvalidArgumentError(f"jitter 需 >= 0，收到 {jitter}")
    values = k.gram(nodes.points)
    if jitter:
        values[np.diag_indices_from(values)] += jitter
    return KernelMatrix(values=values, jitter=jitter)


def j1(x: ArrayLike, a: float = 1.0) -> NDArray[np.float64]:
    """J_1(x) = ∫_0^1 exp(-a^2 (x - y)^2) dy，以 erf 閉式計算。"""

    xv = np.asarray(x, dtype=np.float64)
    return SQRT_PI / (2.0 * a) * (erf(a * (1.0 - xv)) + erf(a * xv))


def j1_derivative(x: ArrayLike, a: float = 1.0) -> NDArray[np.float64]:
    xv = np.asarray(x, dtype=np.float64)
    return np.exp(-(a**2) * xv**2) - np.exp(-(a**2) * (1.0 - xv) ** 2)


def j_d(x: ArrayLike, a: float = 1.0) -> float:
    """J_d(x) = ∏_ℓ J_1(x^(ℓ))，即 ∫_{[0,1]^d} K(x, y) dy。"""

    return float(np.prod(j1(np.asarray(x, dtype=np.float64).reshape(-1), a)))


def k0(d: int, a: float = 1.0) -> float:
    if d < 1:
        raise InvalidArgumentError(f"維度需 >= 1，收到 {d}")
    one_dim = SQRT_PI / a * math.erf(a) + (math.exp(-(a**2)) - 1.0) / a**2
    return one_dim**d


def truncated_features(eps: float, n_terms: int, x: ArrayLike) -> NDArray[np.float64]:
    """φ_ℓ(x) = exp(-ε²x²) sqrt((2ε²)^ℓ / ℓ!) x^ℓ，於對數域計算以避免 ℓ! 溢位。"""

    if eps <= 0:
        raise InvalidArgumentError(f"ε 必須為正數，收到 {eps}")
    if n_terms < 1:
        raise InvalidArgumentError(f"n_terms 需 >= 1，收到 {n_terms}")
    xs = np.asarray(x, dtype=np.float64).reshape(-1)
    ell = np.arange(n_terms)
    log_coef = 0.5 * (ell * math.log(2.0 * eps**2) - gammaln(ell + 1.0))
    with np.errstate(divide="ignore"):
        log_abs_x = np.log(np.abs(xs))
    log_power = np.zeros((xs.size, n_terms))
    log_power[:, 1:] = ell[1:][None, :] * log_abs_x[:, None]
    signs = np.sign(xs)[:, None] ** ell[None, :]
    return signs * np.exp(-(eps**2) * xs[:, None] ** 2 + log_coef[None, :] + log_power)


def truncated_kernel_matrix(eps: float, n_terms: int, nodes: Union[NodeSet, ArrayLike]) -> KernelMatrix:
    points = _as_points(nodes)
    if points.shape[1] != 1:
        raise InvalidArgumentError(f"截斷核只支援一維節點，收到維度 {points.shape[1]}")
    phi = truncated_features(eps, n_terms, points[:, 0])
    return KernelMatrix(values=phi @ phi.T)
