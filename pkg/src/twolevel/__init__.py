"""Optimal test functions for 2-level densities of low-lying zeros.

The optimization over ``phi`` with ``supp phi_hat in [-1, 1]`` (one variable
fixed to a test function psi) reduces to a Fredholm equation of the second
kind on ``[-1/2, 1/2]``; its solution gives the optimal value and, through the
central-point inequality, bounds on the order of vanishing.
"""

from .bounds import (BoundReport, Level, lower_bound_low_rank, naive_value, optimal_value,
                     upper_bound_order)
from .fnspace import GridFunction, cumulative, integrate, self_correlate
from .fredholm import (NeumannResult, TrigSolution, contraction_norm_sq, neumann_iterate,
                       nystrom_solve, solve_quadratic)
from .kernels import (QuadraticKernel, SymmetryGroup, group_constant, normalize,
                      quadratic_coefficients, weight_kernel)

__version__ = "0.1.0"
