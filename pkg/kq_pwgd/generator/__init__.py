# 說明：匯出節點產生方法（PWGD 與 SBQ）的公開介面，方便外部模組引用。
from .pwgd import PointwiseGradientDescent, PwgdTrace, SweepRecord, TerminationReason, make_quadrature, run_pwgd
from .sbq import CandidateSet, SbqSelection, default_candidate_count, greedy_select, make_candidates, run_sbq

__all__ = [
    "CandidateSet",
    "PointwiseGradientDescent",
    "PwgdTrace",
    "SbqSelection",
    "SweepRecord",
    "TerminationReason",
    "default_candidate_count",
    "greedy_select",
    "make_candidates",
    "make_quadrature",
    "run_pwgd",
    "run_sbq",
]
