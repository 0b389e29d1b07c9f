# 說明：能量模組的公開介面，集中匯出基本解、障礙正則項、目標函數與上界常數。
from .barrier import barrier_walls
from .bounds import UpperBoundConstants, h_function, ub_constants, upper_bound_constant
from .fundamental import fundamental_profile, fundamental_solution, sphere_area
from .objective import (
    energy_gradient,
    energy_value,
    full_gradient,
    point_gradient,
    regularizer_value,
    total_objective,
)

__all__ = [
    "UpperBoundConstants",
    "barrier_walls",
    "energy_gradient",
    "energy_value",
    "full_gradient",
    "fundamental_profile",
    "fundamental_solution",
    "h_function",
    "point_gradient",
    "regularizer_value",
    "sphere_area",
    "total_objective",
    "ub_constants",
    "upper_bound_constant",
]
