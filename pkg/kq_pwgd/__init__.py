# 說明：本模組提供對外匯出的主要 API，包括節點產生、權重計算、核心流程與理論驗證入口。
from .core import RunReport, execute_plan, generate, run_sweep, run_verification
from .domain import DomainBox, NodeSet, QuadratureRule, SeededRng, min_pairwise_distance, sample_uniform
from .generator import make_candidates, make_quadrature, run_pwgd, run_sbq
from .kernel import GaussianKernel
from .wce import optimal_weights, squared_wce, squared_wce_optimal

__all__ = [
    "DomainBox",
    "GaussianKernel",
    "NodeSet",
    "QuadratureRule",
    "RunReport",
    "SeededRng",
    "execute_plan",
    "generate",
    "make_candidates",
    "make_quadrature",
    "min_pairwise_distance",
    "optimal_weights",
    "run_pwgd",
    "run_sbq",
    "run_sweep",
    "run_verification",
    "sample_uniform",
    "squared_wce",
    "squared_wce_optimal",
]
