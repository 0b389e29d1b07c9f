# 說明：匯出理論驗證相關的公開介面：熱核、積分常數與各項恆等式、上界的數值檢查。
from .checks import (
    CheckResult,
    Suite,
    TheoryVerifier,
    VerificationReport,
    check_lemma4_bound,
    check_theorem1,
    check_theorem2,
    run_suite,
)
from .heat import heat_kernel, int_heat_kernel, int_heat_kernel_numeric
from .integrals import a_energy_bruteforce, c_constant, c_constant_cartesian, convolved_fundamental_solution

__all__ = [
    "CheckResult",
    "Suite",
    "TheoryVerifier",
    "VerificationReport",
    "a_energy_bruteforce",
    "c_constant",
    "c_constant_cartesian",
    "check_lemma4_bound",
    "check_theorem1",
    "check_theorem2",
    "convolved_fundamental_solution",
    "heat_kernel",
    "int_heat_kernel",
    "int_heat_kernel_numeric",
    "run_suite",
]
