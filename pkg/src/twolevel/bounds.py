"""Bounds on the order of vanishing at the central point.

Keeping only the central-point terms of the 2-level density gives

    4 * sum_m [m(m-1) Prob(2m) + m^2 Prob(2m+1)]  <=  B2(G),

where ``B2(G)`` is the optimized 2-level functional (``c / <1, g>``).  The
analogous 1-level statement is ``sum_m m Prob(m) <= B1(G)``, with ``B1``
taken from the literature for SO(even) and SO(odd).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from . import fnspace
from .fredholm import NeumannResult, TrigSolution, neumann_iterate, nystrom, solve_quadratic
from .kernels import (SymmetryGroup, fejer_constant, normalize, quadratic_coefficients,
                      weight_kernel)


class BoundError(ValueError):
    pass


class ParityMismatch(BoundError):
    pass


class ZeroCoefficient(BoundError):
    pass


class UndefinedBound(BoundError):
    pass


class Level(enum.Enum):
    """Which density inequality a bound comes from (1-level needs a support size)."""

    ONE_SUPPORT2 = "one2"
    ONE_SUPPORT3 = "one3"
    TWO = "two"

    @property
    def is_one_level(self) -> bool:
        return self is not Level.TWO

    @property
    def support(self) -> Optional[int]:
        return {Level.ONE_SUPPORT2: 2, Level.ONE_SUPPORT3: 3}.get(self)


@dataclass(frozen=True)
class ReferenceConstants:
    """Optimal 1-level values ``inf (1/phi(0)) int phi W_1``, supp phi_hat in [-s, s]."""

    one_level_support2: dict = field(default_factory=lambda: {
        SymmetryGroup.SO_EVEN: (3 + 1 / math.tan(0.25)) / 8,
        SymmetryGroup.SO_ODD: (5 + 1 / math.tan(0.25)) / 8,
    })
    one_level_support3: dict = field(default_factory=lambda: {
        SymmetryGroup.SO_EVEN: 0.60363,
        SymmetryGroup.SO_ODD: 1.04304,
    })
    sources: dict = field(default_factory=lambda: {
        2: "Iwaniec-Luo-Sarnak, Appendix A: (3 + cot(1/4))/8 and (5 + cot(1/4))/8",
        3: "Freeman-Miller, Corollary 1.2 with sigma = 1.5 (decimals as published)",
    })

    def one_level(self, group: SymmetryGroup, support: int) -> float:
        table = {2: self.one_level_support2, 3: self.one_level_support3}.get(support)
        if table is None or group not in table:
            raise UndefinedBound(f"no 1-level constant for {group.label} with support [-{support}, {support}]")
        return table[group]


REFERENCE = ReferenceConstants()


@dataclass(frozen=True)
class BoundReport:
    group: SymmetryGroup
    naive_value: float
    optimal_value: float
    g_integral: float
    c_const: float
    provenance: str = "analytic"

    def as_dict(self) -> dict:
        return {
            "group": self.group.value,
            "naive_value": self.naive_value,
            "optimal_value": self.optimal_value,
            "g_integral": self.g_integral,
            "c_const": self.c_const,
            "provenance": self.provenance,
        }


def order_coefficient(r: int) -> int:
    """Weight of ``Prob(r)`` in the 2-level inequality: 4m(m-1) at r=2m, 4m^2 at r=2m+1."""
    if r < 0:
        raise ValueError(f"order must be nonnegative, got {r}")
    m, odd = divmod(r, 2)
    return 4 * m * m if odd else 4 * m * (m - 1)


def optimal_solution(group: SymmetryGroup) -> TrigSolution:
    return solve_quadratic(quadratic_coefficients(group))


def naive_value_exact(group: SymmetryGroup) -> Fraction:
    """Objective at ``f = 1`` (i.e. ``phi = psi``).

    Over the centered unit square, ``int int |x-y| = 1/3`` and
    ``int int (x-y)^2 = 1/6``.
    """
    k = quadratic_coefficients(group)
    return fejer_constant(group) * (1 + k.a + k.b / 3 + k.c / 6)


def naive_value(group: SymmetryGroup) -> float:
    return float(naive_value_exact(group))


def optimal_value(group: SymmetryGroup) -> BoundReport:
    c = float(fejer_constant(group))
    I = optimal_solution(group).integral()
    return BoundReport(group, naive_value(group), c / I, I, c, "analytic")


def optimal_value_numeric(group: SymmetryGroup, n: int = fnspace.DEFAULT_N) -> BoundReport:
    """Same quantity through the Nystrom oracle on ``n`` nodes."""
    c = float(fejer_constant(group))
    m = quadratic_coefficients(group).sample(2 * n - 1)
    I = fnspace.integrate(nystrom(m, n).g)
    return BoundReport(group, naive_value(group), c / I, I, c, "nystrom")


def _two_level_value(group: SymmetryGroup) -> float:
    return optimal_value(group).optimal_value


def _check_parity(group: SymmetryGroup, r: int):
    if group.parity is not None and r % 2 != group.parity:
        kind = "even" if group.parity == 0 else "odd"
        raise ParityMismatch(f"{group.label} only has {kind} orders of vanishing; got {r}")


def upper_bound_order(group: SymmetryGroup, r: int, level: Level) -> float:
    """Upper bound for the proportion vanishing to order at least ``r``."""
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    _check_parity(group, r)
    if level.is_one_level:
        return REFERENCE.one_level(group, level.support) / r
    # c2 is nondecreasing, so every order >= r carries weight at least c2(r)
    coeff = order_coefficient(r)
    if coeff == 0:
        raise ZeroCoefficient(f"the 2-level coefficient vanishes at rank {r}")
    return _two_level_value(group) / coeff


def lower_bound_low_rank(group: SymmetryGroup, k: int, level: Level) -> float:
    """Lower bound for the proportion of low rank.

    SO(even): ranks 0, 2, ..., 2k.  SO(odd): ranks 1, 3, ..., 2k+1.
    O, U, Sp: ranks at most ``k``, available only for the 2-level and k = 2.
    """
    if group.parity is None:
        if level.is_one_level:
            raise UndefinedBound(f"no 1-level low-rank bound for {group.label}")
        if k != 2:
            raise UndefinedBound(f"for {group.label} only the rank <= 2 bound is defined (k = 2)")
        return 1.0 - _two_level_value(group) / 4
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    even = group is SymmetryGroup.SO_EVEN
    if level.is_one_level:
        B1 = REFERENCE.one_level(group, level.support)
        return 1.0 - B1 / ((2 * k + 2) if even else (2 * k + 3))
    B = _two_level_value(group)
    return 1.0 - B / ((4 * k * (k + 1)) if even else (4 * (k + 1) ** 2))


@dataclass(frozen=True)
class TableRow:
    order: int
    one_level: float
    two_level: float


def comparison_table(orders: Iterable[int], group: SymmetryGroup) -> list:
    """1-level (support 2) and 2-level upper bounds side by side."""
    return [TableRow(r, upper_bound_order(group, r, Level.ONE_SUPPORT2),
                     upper_bound_order(group, r, Level.TWO)) for r in orders]


# -- iteration -------------------------------------------------------------

@dataclass(frozen=True)
class IterationReport:
    group: SymmetryGroup
    terms: int
    grid_n: int
    c_const: float
    neumann: NeumannResult
    nystrom_value: float

    @property
    def partial_bounds(self) -> list:
        return self.neumann.truncated_values(self.c_const)

    @property
    def final_bound(self) -> float:
        return self.partial_bounds[-1]

    def as_dict(self) -> dict:
        return {
            "group": self.group.value,
            "terms": self.terms,
            "grid_n": self.grid_n,
            "c_const": self.c_const,
            "norm_sq": self.neumann.norm_sq,
            "certified": self.neumann.certified,
            "terms_nonnegative": self.neumann.terms_nonnegative,
            "partial_sums": list(self.neumann.partial_sums),
            "partial_bounds": self.partial_bounds,
            "final_bound": self.final_bound,
            "nystrom_value": self.nystrom_value,
        }


def iterated_weight(group: SymmetryGroup, n: int = fnspace.DEFAULT_N):
    """Normalized weight built from ``phi_hat = g * g~`` of the group's optimum.

    ``g`` is sampled on ``n`` nodes; the kernel lives on ``2n - 1`` nodes of
    ``[-1, 1]`` with the same spacing.
    """
    g = optimal_solution(group).sample(n)
    phi_hat = fnspace.self_correlate(g)
    phi0 = fnspace.value_at_zero_from_transform(phi_hat)
    return normalize(weight_kernel(group, phi_hat, phi0))


def iterate(group: SymmetryGroup, terms: int, n: int = fnspace.DEFAULT_N) -> IterationReport:
    """Replace psi by the optimal phi and bound the new optimum by truncated Neumann sums."""
    w = iterated_weight(group, n)
    res = neumann_iterate(w.kernel, terms, n)
    exact = w.c_const / fnspace.integrate(nystrom(w.kernel, n).g)
    return IterationReport(group, terms, n, w.c_const, res, exact)
