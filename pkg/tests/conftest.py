# 說明：本測試設定檔提供共用的區域、核函數、隨機節點與輸出目錄，供各項功能測試使用。
from __future__ import annotations

from pathlib import Path
import sys
PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from typing import Callable

import numpy as np
import pytest

from kq_pwgd.domain import DomainBox, NodeSet
from kq_pwgd.kernel import GaussianKernel


@pytest.fixture()
def kernel() -> GaussianKernel:
    return GaussianKernel(a=1.0)


@pytest.fixture()
def square() -> DomainBox:
    return DomainBox(dim=2)


@pytest.fixture()
def cube() -> DomainBox:
    return DomainBox(dim=3)


@pytest.fixture()
def random_nodes() -> Callable[..., NodeSet]:
    """產生彼此至少相距 min_gap 的隨機節點，座標落在 [low, high]。"""

    def factory(
        n: int,
        dim: int,
        seed: int,
        low: float = 0.0,
        high: float = 1.0,
        min_gap: float = 0.0,
    ) -> NodeSet:
        rng = np.random.default_rng(seed)
        while True:
            points = rng.uniform(low, high, size=(n, dim))
            nodes = NodeSet(points)
            if nodes.size < 2 or nodes.is_distinct(min_gap):
                return nodes

    return factory


@pytest.fixture()
def out_dir(tmp_path: Path) -> Path:
    path = tmp_path / "out"
    path.mkdir()
    return path
