# 說明：本模組計算勒貝格測度下單位立方體上高斯核求積的平方最壞誤差（任意權重、等權重與最佳權重），並提供行列式公式作為交叉驗證。
from __future__ import annotations

import logging

import numpy as np

from .domain import NodeSet, QuadratureRule
from .errors import ConditioningError
from .kernel import GaussianKernel, kernel_matrix

logger = logging.getLogger(__name__)

EQUAL_WEIGHT_CLAMP = -1e-10
OPTIMAL_WEIGHT_CLAMP = -1e-8


def _clamp(value: float, threshold: float, route: str) -> float:
    if value >= 0.0:
        return value
    if value >= threshold:
        return 0.0
    raise ConditioningError(value, threshold, route)


def squared_wce(rule: QuadratureRule, kernel: GaussianKernel) -> float:
    """k0 - 2 Σ w_j J_d(x_j) + Σ Σ w_i w_j K(x_i, x_j)。"""

    nodes = rule.nodes
    w = rule.weights
    z = kernel.mean_embedding(nodes.points)
    gram = kernel.gram(nodes.points)
    value = kernel.double_integral(nodes.dim) - 2.0 * float(w @ z) + float(w @ gram @ w)
    return _clamp(value, EQUAL_WEIGHT_CLAMP, f"N={nodes.size} 的三項展開")


def _solve_optimal(nodes: NodeSet, kernel: GaussianKernel) -> tuple[np.ndarray, np.ndarray]:
    z = kernel.mean_embedding(nodes.points)
    factor = kernel_matrix(kernel, nodes).cholesky()
    return z, factor.solve(z)


def optimal_weights(nodes: NodeSet, kernel: GaussianKernel) -> QuadratureRule:
    """解 𝒦 w = z（z_i = J_d(x_i)），得到使最壞誤差最小的權重。"""

    _, weights = _solve_optimal(nodes, kernel)
    return QuadratureRule(nodes=nodes, weights=weights)


def squared_wce_optimal(nodes: NodeSet, kernel: GaussianKernel) -> float:
    z, weights = _solve_optimal(nodes, kernel)
    value = kernel.double_integral(nodes.dim) - float(z @ weights)
    return _clamp(value, OPTIMAL_WEIGHT_CLAMP, f"N={nodes.size} 的 k0 - zᵀ𝒦⁻¹z")


def squared_wce_optimal_determinant(nodes: NodeSet, kernel: GaussianKernel) -> float:
    """加邊行列式公式 det[k0, zᵀ; z, 𝒦] / det 𝒦，只用於交叉驗證。"""

    z = kernel.mean_embedding(nodes.points)
    gram = kernel.gram(nodes.points)
    bordered = np.empty((nodes.size + 1, nodes.size + 1))
    bordered[0, 0] = kernel.double_integral(nodes.dim)
    bordered[0, 1:] = z
    bordered[1:, 0] = z
    bordered[1:, 1:] = gram
    sign_b, logdet_b = np.linalg.slogdet(bordered)
    sign_k, logdet_k = np.linalg.slogdet(gram)
    return float(sign_b * sign_k * np.exp(logdet_b - logdet_k))
