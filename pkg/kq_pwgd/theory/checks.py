# 說明：本模組把熱核下界、配對能量恆等式與高斯核配對能量上界轉成可數值檢查的函式，並提供依套件分組執行的驗證器。
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from ..config import QuadratureTolerances
from ..domain import DomainBox, NodeSet
from ..energy.bounds import h_function, ub_constants
from ..energy.fundamental import fundamental_profile, fundamental_values, sphere_area
from ..errors import InvalidArgumentError
from ..fekete1d import check_det_identity, minimize_log_energy
from .heat import heat_kernel, int_heat_kernel, int_heat_kernel_numeric
from .integrals import a_energy_bruteforce, c_constant, c_constant_cartesian, convolved_fundamental_solution
from .quadrature import adaptive_quad

logger = logging.getLogger(__name__)

LOWER_BOUND_SLACK = 1e-12
UPPER_BOUND_SLACK = 1e-2

# 能量恆等式與上界檢查的四維積分在此容許誤差下約需數分鐘
ENERGY_TOLERANCES = QuadratureTolerances(abs_tol=1e-9, rel_tol=1e-6)


def _pair_distances(nodes: NodeSet) -> np.ndarray:
    if nodes.size < 2:
        raise InvalidArgumentError("至少需要 2 個節點")
    if not nodes.is_distinct():
        raise InvalidArgumentError("節點集合含有重合點")
    return pdist(nodes.points)


def heat_lower_bound_sides(d: int, D: float, t: float, alpha: float) -> Tuple[float, float]:
    """熱核時間積分與其下界 (4π)^{-d/2}[d^{d/2-1}/(2D^{d-2}) e^{-dα²/4D²} + h_{d,D}(t)]。"""

    if not 0 < alpha <= D:
        raise InvalidArgumentError(f"需要 0 < α <= D = {D}，收到 {alpha}")
    h = h_function(d, D, t)
    lhs = int_heat_kernel(d, t, alpha)
    lead = d ** (d / 2.0 - 1.0) / (2.0 * D ** (d - 2.0)) * math.exp(-d * alpha**2 / (4.0 * D**2))
    rhs = (4.0 * math.pi) ** (-d / 2.0) * (lead + h)
    return lhs, rhs


def check_lemma4_bound(d: int, D: float, t: float, alpha: float) -> bool:
    lhs, rhs = heat_lower_bound_sides(d, D, t, alpha)
    return lhs >= rhs - LOWER_BOUND_SLACK


def energy_identity_sides(
    t: float,
    nodes: NodeSet,
    tol: Optional[QuadratureTolerances] = None,
    a_energy: Optional[float] = None,
) -> Tuple[float, float]:
    """(1/N²) Σ_{i≠j} ∫_0^t heat 與 A_2 - C_2/N - (1/N²) Σ_{i≠j} G_2。"""

    distances = _pair_distances(nodes)
    n = nodes.size
    tol = tol or ENERGY_TOLERANCES
    lhs = 2.0 * sum(int_heat_kernel(2, t, float(r)) for r in distances) / n**2
    g_sum = 2.0 * float(fundamental_values(2, distances).sum()) / n**2
    if a_energy is None:
        a_energy = a_energy_bruteforce(t, nodes, tol)
    rhs = a_energy - c_constant(2, t, tol) / n - g_sum
    return lhs, rhs


def check_theorem1(
    t: float,
    nodes: NodeSet,
    tol: Optional[QuadratureTolerances] = None,
    a_energy: Optional[float] = None,
) -> float:
    """回傳兩側的相對殘差 |LHS - RHS| / max(|LHS|, |RHS|)。"""

    if nodes.dim != 2:
        raise InvalidArgumentError(f"能量恆等式檢查只支援 d=2，收到 {nodes.dim}")
    lhs, rhs = energy_identity_sides(t, nodes, tol, a_energy)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def gaussian_bound_sides(
    t: float,
    nodes: NodeSet,
    a: float,
    tol: Optional[QuadratureTolerances] = None,
    a_energy: Optional[float] = None,
) -> Tuple[float, float]:
    """高斯核配對能量 (1/N²) Σ_{i≠j} K 與其上界。"""

    if nodes.dim != 2:
        raise InvalidArgumentError(f"高斯能量上界檢查只支援 d=2，收到 {nodes.dim}")
    domain = DomainBox(dim=2)
    D = domain.diameter
    if a < math.sqrt(domain.dim) / (2.0 * D):
        raise InvalidArgumentError(f"需要 a >= sqrt(d)/(2D) = {math.sqrt(domain.dim) / (2.0 * D):.4g}，收到 {a}")
    constants = ub_constants(domain.dim, D, t)
    distances = _pair_distances(nodes)
    n = nodes.size
    tol = tol or ENERGY_TOLERANCES

    lhs = 2.0 * float(np.exp(-(a**2) * distances**2).sum()) / n**2
    g_sum = 2.0 * float(fundamental_values(2, distances).sum()) / n**2
    if a_energy is None:
        a_energy = a_energy_bruteforce(t, nodes, tol)
    bracket = -g_sum + a_energy - c_constant(2, t, tol) / n - (n - 1) / n * constants.tail_weight
    return lhs, constants.c_hat * bracket


def check_theorem2(
    t: float,
    nodes: NodeSet,
    a: float,
    tol: Optional[QuadratureTolerances] = None,
    a_energy: Optional[float] = None,
) -> bool:
    lhs, rhs = gaussian_bound_sides(t, nodes, a, tol, a_energy)
    return lhs <= rhs + UPPER_BOUND_SLACK * abs(rhs)


class Suite(str, Enum):
    LEMMAS = "lemmas"
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    FEKETE = "fekete"
    ALL = "all"


@dataclass(slots=True)
class CheckResult:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.threshold


@dataclass(slots=True)
class VerificationReport:
    """一次驗證的所有檢查列。"""

    suite: Suite
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


class TheoryVerifier:
    """依套件名稱執行理論檢查，並把每項結果整理為 CheckResult。"""

    def __init__(self, tol: Optional[float] = None) -> None:
        self.tol = tol
        self.quadrature_tolerances = QuadratureTolerances() if tol is None else QuadratureTolerances.from_tol(tol)
        self.energy_tolerances = ENERGY_TOLERANCES if tol is None else QuadratureTolerances.from_tol(tol)
        # 恆等式與上界檢查共用同一個 A_2 積分結果
        self._energy_nodes = NodeSet(np.array([[0.25, 0.5], [0.75, 0.5]]))
        self._energy_t = 2.0
        self._a_energy: Optional[float] = None

    def _threshold(self, base: float) -> float:
        return base if self.tol is None else max(base, self.tol)

    def run(self, suite: Suite) -> VerificationReport:
        runners: List[Callable[[], List[CheckResult]]]
        if suite is Suite.ALL:
            runners = [self.lemmas, self.fekete, self.theorem1, self.theorem2]
        else:
            runners = [
                {
                    Suite.LEMMAS: self.lemmas,
                    Suite.THEOREM1: self.theorem1,
                    Suite.THEOREM2: self.theorem2,
                    Suite.FEKETE: self.fekete,
                }[suite]
            ]
        report = VerificationReport(suite=suite)
        for runner in runners:
            for result in runner():
                logger.info("%s: residual=%.3e threshold=%.1e", result.name, result.residual, result.threshold)
                report.results.append(result)
        return report

    def lemmas(self) -> List[CheckResult]:
        tol = self.quadrature_tolerances
        results: List[CheckResult] = []

        for d in (2, 3):
            mass = adaptive_quad(lambda r, d=d: heat_kernel(d, 1.0, r) * r ** (d - 1), 0.0, np.inf, tol)
            results.append(CheckResult(f"熱核總質量 d={d}", abs(sphere_area(d) * mass - 1.0), self._threshold(1e-8)))

        for d in (2, 3):
            worst = max(
                _relative(int_heat_kernel(d, t, r), int_heat_kernel_numeric(d, t, r, tol))
                for r in (0.05, 0.5, 2.0)
                for t in (0.1, 1.0, 10.0)
            )
            results.append(CheckResult(f"熱核時間積分閉式 d={d}", worst, self._threshold(1e-9)))

        for d in (2, 3):
            D = math.sqrt(d)
            results.append(CheckResult(f"h_{{d,D}}(D²/d) = 0, d={d}", abs(h_function(d, D, D**2 / d)), 0.0))

        for t in (0.5, 2.0):
            radial = c_constant(2, t, tol)
            shifted = c_constant_cartesian(t, (0.3, 0.4), tol)
            results.append(CheckResult(f"C_2({t:g}) 與中心無關", abs(shifted - radial), self._threshold(1e-6)))

        for t in (1.0, 4.0):
            for gap in (0.3, 1.0):
                a_point, b_point = (0.0, 0.0), (gap, 0.0)
                lhs = convolved_fundamental_solution(t, a_point, b_point, tol)
                rhs = fundamental_profile(2, gap) + int_heat_kernel(2, t, gap)
                results.append(
                    CheckResult(f"基本解與熱核摺積：t={t:g}, |a-b|={gap:g}", _relative(lhs, rhs), self._threshold(1e-3))
                )

        for d, times in ((2, (1.0, 2.0, 5.0, 20.0, 50.0)), (3, (1.0, 2.0, 5.0, 20.0, 50.0))):
            D = math.sqrt(d)
            violation = 0.0
            for t in times:
                for alpha in np.linspace(D / 20.0, D, 20):
                    lhs, rhs = heat_lower_bound_sides(d, D, t, float(alpha))
                    violation = max(violation, rhs - lhs, -h_function(d, D, t))
            results.append(CheckResult(f"熱核時間積分下界 d={d}", max(violation, 0.0), LOWER_BOUND_SLACK))
        return results

    def _cached_a_energy(self) -> float:
        if self._a_energy is None:
            logger.info("計算 A_2(t=%g) 的四維積分，可能需要數分鐘", self._energy_t)
            self._a_energy = a_energy_bruteforce(self._energy_t, self._energy_nodes, self.energy_tolerances)
        return self._a_energy

    def theorem1(self) -> List[CheckResult]:
        residual = check_theorem1(
            self._energy_t, self._energy_nodes, self.energy_tolerances, self._cached_a_energy()
        )
        return [CheckResult("配對能量恆等式：N=2, t=2, 間距 0.5", residual, self._threshold(1e-2))]

    def theorem2(self) -> List[CheckResult]:
        results = []
        for a in (1.0, 2.0):
            lhs, rhs = gaussian_bound_sides(
                self._energy_t, self._energy_nodes, a, self.energy_tolerances, self._cached_a_energy()
            )
            results.append(
                CheckResult(f"高斯配對能量上界：a={a:g}", max(lhs - rhs, 0.0) / abs(rhs), self._threshold(UPPER_BOUND_SLACK))
            )
        return results

    def fekete(self) -> List[CheckResult]:
        rng = np.random.Generator(np.random.PCG64(3))
        xs_a = np.sort(rng.uniform(-1.0, 1.0, 3))
        xs_b = np.sort(rng.uniform(-1.0, 1.0, 3))
        results = [CheckResult("行列式恆等式 N=3, ε=1", check_det_identity(1.0, xs_a, xs_b), 1e-6)]
        for eps in (0.5, 1.0, 2.0):
            xs = minimize_log_energy(eps, 2)
            error = float(np.max(np.abs(xs - np.array([-1.0, 1.0]) / (2.0 * eps))))
            results.append(CheckResult(f"N=2 最小點 ±1/(2ε), ε={eps:g}", error, 1e-6))
        return results


def run_suite(suite: Suite, tol: Optional[float] = None) -> VerificationReport:
    return TheoryVerifier(tol).run(suite)
