# 說明：本模組提供單位立方體幾何、節點集合與求積規則容器，以及可重現的亂數串流，供其他模組共用。
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Iterator, List

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from .errors import InvalidArgumentError

DUPLICATE_THRESHOLD = 1e-12


@dataclass(frozen=True, slots=True)
class DomainBox:
    """積分區域 [0,1]^d。"""

    dim: int
    lower: ClassVar[float] = 0.0
    upper: ClassVar[float] = 1.0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidArgumentError(f"維度需 >= 1，收到 {self.dim}")

    @property
    def diameter(self) -> float:
        return math.sqrt(self.dim)

    def contains(self, x: ArrayLike) -> bool:
        point = np.asarray(x, dtype=np.float64)
        if point.shape != (self.dim,):
            raise InvalidArgumentError(f"點的維度 {point.shape} 與區域維度 {self.dim} 不符")
        return bool(np.all((point >= self.lower) & (point <= self.upper)))


@dataclass(frozen=True, slots=True, eq=False)
class NodeSet:
    """N 個 d 維節點，以 (N, d) 的唯讀陣列保存。"""

    points: NDArray[np.float64]

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=np.float64, copy=True)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] == 0:
            raise InvalidArgumentError(f"節點陣列需為 (N, d) 且 N >= 1，收到形狀 {points.shape}")
        if not np.all(np.isfinite(points)):
            raise InvalidArgumentError("節點座標必須為有限值")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[NDArray[np.float64]]:
        return iter(self.points)

    def is_distinct(self, threshold: float = 0.0) -> bool:
        if self.size < 2:
            return True
        return bool(pdist(self.points).min() > threshold)

    def validate(self, domain: DomainBox) -> None:
        """確認所有節點落在區域內且兩兩相異。"""

        if self.dim != domain.dim:
            raise InvalidArgumentError(f"節點維度 {self.dim} 與區域維度 {domain.dim} 不符")
        outside = np.flatnonzero(np.any((self.points < domain.lower) | (self.points > domain.upper), axis=1))
        if outside.size:
            raise InvalidArgumentError(f"節點 {outside[0]} 不在 [0,1]^{domain.dim} 內")
        if not self.is_distinct():
            raise InvalidArgumentError("節點集合含有重合點")

    def with_point(self, point: ArrayLike) -> "NodeSet":
        return NodeSet(np.vstack([self.points, np.asarray(point, dtype=np.float64).reshape(1, -1)]))


@dataclass(frozen=True, slots=True, eq=False)
class QuadratureRule:
    """節點加上權重向量，即最終交付的求積公式。"""

    nodes: NodeSet
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        if weights.shape[0] != self.nodes.size:
            raise InvalidArgumentError(
                f"權重長度 {weights.shape[0]} 與節點數 {self.nodes.size} 不符"
            )
        if not np.all(np.isfinite(weights)):
            raise InvalidArgumentError("權重必須為有限值")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def equal_weights(cls, nodes: NodeSet) -> "QuadratureRule":
        return cls(nodes=nodes, weights=np.full(nodes.size, 1.0 / nodes.size))

    def integrate(self, f: Callable[[NDArray[np.float64]], float]) -> float:
        """以此規則近似 ∫ f dx。"""

        values = np.array([f(x) for x in self.nodes.points], dtype=np.float64)
        return float(self.weights @ values)


@dataclass(slots=True)
class SeededRng:
    """以 PCG64 為底的可重現亂數串流；相同 seed 在任何平台產生相同序列。"""

    ALGORITHM: ClassVar[str] = "numpy.PCG64/v1"

    seed: int
    _generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError(f"seed 需為 64 位元非負整數，收到 {self.seed}")
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, size: int, dim: int) -> NDArray[np.float64]:
        return self._generator.random((size, dim))

    def spawn(self, count: int) -> List["SeededRng"]:
        """切出互不重疊的子串流，供平行工作使用。"""

        children = np.random.SeedSequence(self.seed).spawn(count)
        return [SeededRng(int(child.generate_state(1, dtype=np.uint64)[0])) for child in children]


def sample_uniform(domain: DomainBox, n: int, rng: SeededRng) -> NodeSet:
    """在立方體內均勻抽取 n 個相異點；距離小於 1e-12 的重複點會重新抽樣。"""

    if n < 1:
        raise InvalidArgumentError(f"n 需 >= 1，收到 {n}")
    points = rng.uniform(n, domain.dim)
    while n > 1:
        pairs = cKDTree(points).query_pairs(r=DUPLICATE_THRESHOLD, output_type="ndarray")
        if pairs.size == 0:
            break
        offenders = np.unique(pairs[:, 1])
        points[offenders] = rng.uniform(offenders.size, domain.dim)
    return NodeSet(points)


def min_pairwise_distance(nodes: NodeSet) -> float:
    if nodes.size < 2:
        raise InvalidArgumentError("最小兩兩距離至少需要 2 個節點")
    return float(pdist(nodes.points).min())
