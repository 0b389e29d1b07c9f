# 說明：本模組計算 PWGD 的目標函數（基本解能量 I_d 或等權重高斯最壞誤差）、障礙正則項與對單一節點的解析梯度。
from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import pdist

from ..config import ObjectiveKind, ObjectiveSpec
from ..domain import NodeSet, QuadratureRule
from ..errors import InvalidArgumentError, SingularityError
from ..kernel import GaussianKernel
from ..wce import squared_wce
from .barrier import barrier_point_gradient, barrier_scale, regularizer_sum
from .bounds import upper_bound_constant
from .fundamental import fundamental_gradient, fundamental_values


def pair_coefficient(spec: ObjectiveSpec, n: int) -> float:
    """基本解配對項的係數 Ĉ_{d,D}/N²，D 取立方體直徑 sqrt(d)。"""

    return upper_bound_constant(spec.dim, math.sqrt(spec.dim)) / n**2


def _check_nodes(spec: ObjectiveSpec, nodes: NodeSet) -> None:
    if nodes.dim != spec.dim:
        raise InvalidArgumentError(f"節點維度 {nodes.dim} 與目標函數維度 {spec.dim} 不符")
    if not nodes.is_distinct():
        raise SingularityError("節點集合含有重合點，能量無定義")


def energy_value(spec: ObjectiveSpec, nodes: NodeSet) -> float:
    """不含正則項的 I_d；高斯型目標則為 w = 1/N 的平方最壞誤差。"""

    _check_nodes(spec, nodes)
    kernel = spec.kernel()
    if spec.kind is ObjectiveKind.GAUSSIAN_WCE:
        return squared_wce(QuadratureRule.equal_weights(nodes), kernel)

    n = nodes.size
    embedding_term = -2.0 / n * float(kernel.mean_embedding(nodes.points).sum())
    if n < 2:
        return embedding_term
    # pdist 只列出 i<j，有序對的和要乘 2
    pair_sum = 2.0 * float(fundamental_values(spec.dim, pdist(nodes.points)).sum())
    return embedding_term - pair_coefficient(spec, n) * pair_sum


def regularizer_value(spec: ObjectiveSpec, nodes: NodeSet) -> float:
    if nodes.dim != spec.dim:
        raise InvalidArgumentError(f"節點維度 {nodes.dim} 與目標函數維度 {spec.dim} 不符")
    return regularizer_sum(spec, nodes.points)


def total_objective(spec: ObjectiveSpec, nodes: NodeSet) -> float:
    return energy_value(spec, nodes) + regularizer_value(spec, nodes)


def point_gradient(
    spec: ObjectiveSpec,
    kernel: GaussianKernel,
    points: NDArray[np.float64],
    i: int,
) -> NDArray[np.float64]:
    """∇_{x_i}(目標 + 正則項)，points 可為 PWGD 正在更新的可寫陣列。"""

    n = points.shape[0]
    x = points[i]
    others = np.delete(points, i, axis=0)
    grad = -2.0 / n * kernel.mean_embedding_gradient(x)

    if spec.kind is ObjectiveKind.GAUSSIAN_WCE:
        if others.size:
            grad += 2.0 / n**2 * kernel.gradient(x, others).sum(axis=0)
        return grad

    if others.size:
        pair_grad = fundamental_gradient(spec.dim, x[None, :] - others).sum(axis=0)
        grad -= 2.0 * pair_coefficient(spec, n) * pair_grad
    if spec.regularized:
        grad += barrier_scale(spec, n) * barrier_point_gradient(spec, x, i)
    return grad


def energy_gradient(spec: ObjectiveSpec, nodes: NodeSet, i: int) -> NDArray[np.float64]:
    _check_nodes(spec, nodes)
    if not 0 <= i < nodes.size:
        raise InvalidArgumentError(f"節點索引 {i} 超出範圍 [0, {nodes.size})")
    return point_gradient(spec, spec.kernel(), np.array(nodes.points), i)


def full_gradient(spec: ObjectiveSpec, nodes: NodeSet) -> NDArray[np.float64]:
    """所有節點的梯度，第 i 列為 ∇_{x_i}。"""

    _check_nodes(spec, nodes)
    kernel = spec.kernel()
    points = np.array(nodes.points)
    return np.vstack([point_gradient(spec, kernel, points, i) for i in range(nodes.size)])
