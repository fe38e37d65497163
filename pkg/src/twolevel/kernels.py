"""Fourier-side weight functions for the five classical symmetry types.

For a fixed test function psi with transform supported in [-1, 1], the
2-level density integrated against psi in one variable becomes the weight
``c * delta(x) + m~(x) 1_{[-1,1]}(x)`` in the other.  This module builds the
constant ``c`` and the kernel ``m~`` for a sampled transform of psi, and the
closed-form quadratic kernels obtained when psi is the Fejer kernel
``(sin(pi y) / (pi y))^2``, whose transform is the triangle ``(1 - |x|)_+``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .fnspace import GridFunction, symmetric_integral, value_at_zero_from_transform


class SymmetryGroup(enum.Enum):
    SO_EVEN = "so-even"
    SO_ODD = "so-odd"
    O = "o"
    U = "u"
    SP = "sp"

    @property
    def parity(self) -> Optional[int]:
        """Forced parity of the order of vanishing (0 even, 1 odd), or None."""
        return {SymmetryGroup.SO_EVEN: 0, SymmetryGroup.SO_ODD: 1}.get(self)

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, name: str) -> "SymmetryGroup":
        key = name.strip().lower().replace("_", "-")
        for g in cls:
            if key in (g.value, g.label.lower(), g.name.lower().replace("_", "-")):
                return g
        raise ValueError(f"unknown symmetry group {name!r}; expected one of "
                         + ", ".join(g.value for g in cls))


_LABELS = {
    SymmetryGroup.SO_EVEN: "SO(even)",
    SymmetryGroup.SO_ODD: "SO(odd)",
    SymmetryGroup.O: "O",
    SymmetryGroup.U: "U",
    SymmetryGroup.SP: "Sp",
}

# shift added to psi_hat(0)/psi(0) to get the Dirac coefficient
_DIRAC_SHIFT = {
    SymmetryGroup.SP: Fraction(-1, 2),
    SymmetryGroup.U: Fraction(0),
    SymmetryGroup.SO_EVEN: Fraction(1, 2),
    SymmetryGroup.SO_ODD: Fraction(1, 2),
    SymmetryGroup.O: Fraction(1, 2),
}

# normalized kernels for the Fejer choice of psi: (a, b, c) in a + b|x| + c x^2
_QUADRATIC = {
    SymmetryGroup.SO_EVEN: (Fraction(-3, 2), Fraction(8, 3), Fraction(-2, 3)),
    SymmetryGroup.SO_ODD: (Fraction(-5, 6), Fraction(8, 3), Fraction(-2)),
    # printed ambiguously in the literature; -4/3 follows from the general formula
    SymmetryGroup.O: (Fraction(-7, 6), Fraction(8, 3), Fraction(-4, 3)),
    SymmetryGroup.U: (Fraction(-1), Fraction(2), Fraction(-1)),
    SymmetryGroup.SP: (Fraction(-5, 2), Fraction(8), Fraction(-6)),
}


@dataclass(frozen=True)
class QuadraticKernel:
    """``m(x) = a + b|x| + c x^2`` on ``[-1, 1]``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.b < 0:
            raise ValueError(f"quadratic kernel needs b >= 0, got b = {self.b}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return float(self.a) + float(self.b) * np.abs(x) + float(self.c) * x * x

    def sample(self, n: int) -> GridFunction:
        return GridFunction.from_callable(self, -1.0, 1.0, n)

    def scaled(self, s) -> "QuadraticKernel":
        return QuadraticKernel(self.a * s, self.b * s, self.c * s)


@dataclass(frozen=True)
class WeightDecomposition:
    group: SymmetryGroup
    c_const: float
    kernel: GridFunction
    normalized: bool = False


def group_constant(group: SymmetryGroup, psi_ratio: float) -> float:
    """Dirac coefficient ``psi_hat(0)/psi(0) + shift(G)``."""
    if not psi_ratio > 0:
        raise ValueError(f"psi_hat(0)/psi(0) must be positive, got {psi_ratio}")
    return float(psi_ratio + _DIRAC_SHIFT[group])


def triangle(n: int) -> GridFunction:
    """``(1 - |x|)`` on ``[-1, 1]``: the transform of the Fejer kernel."""
    return GridFunction.from_callable(lambda x: 1.0 - np.abs(x), -1.0, 1.0, n)


def psi_at_zero(psi_hat: GridFunction) -> float:
    return value_at_zero_from_transform(psi_hat)


def weight_kernel(group: SymmetryGroup, psi_hat: GridFunction, psi0: float) -> WeightDecomposition:
    """Unnormalized weight ``(c, m~)`` induced by fixing one variable to psi.

    ``psi_hat`` must be sampled on ``[-1, 1]`` (odd node count, so 0 is a node)
    and ``psi0`` is ``psi(0)``; see :func:`psi_at_zero` when the transform
    is all of psi's spectrum.
    """
    if not psi0 > 0:
        raise ValueError(f"psi(0) must be positive, got {psi0}")
    if not (np.isclose(psi_hat.lo, -1.0) and np.isclose(psi_hat.hi, 1.0)):
        raise ValueError("psi_hat must be sampled on [-1, 1]")

    x = psi_hat.x
    ratio = psi_hat.at_node(0.0) / psi0
    slope = psi_hat.values / psi0 * (np.abs(x) - 1.0)
    sym = symmetric_integral(psi_hat, x) / psi0

    if group is SymmetryGroup.SO_EVEN:
        m = 0.5 * (ratio + 0.5) + 2 * slope - sym
    elif group is SymmetryGroup.SO_ODD:
        m = 0.5 * (ratio - 1.5) + 2 * slope + sym
    elif group is SymmetryGroup.O:
        m = 0.5 * (ratio - 0.5) + 2 * slope
    elif group is SymmetryGroup.U:
        m = slope
    elif group is SymmetryGroup.SP:
        m = -0.5 * (ratio - 0.5) + 2 * slope + sym
    else:  # pragma: no cover
        raise ValueError(group)

    return WeightDecomposition(group, group_constant(group, ratio), psi_hat.with_values(m))


def normalize(w: WeightDecomposition) -> WeightDecomposition:
    if w.normalized:
        raise ValueError("weight is already normalized")
    if not w.c_const > 0:
        raise ValueError(f"cannot normalize by c = {w.c_const}")
    return WeightDecomposition(w.group, w.c_const, w.kernel.with_values(w.kernel.values / w.c_const),
                               normalized=True)


def quadratic_coefficients(group: SymmetryGroup) -> QuadraticKernel:
    """Normalized kernel for the Fejer test function, with exact rational coefficients."""
    return QuadraticKernel(*_QUADRATIC[group])


def fejer_constant(group: SymmetryGroup) -> Fraction:
    """``c_{G,psi}`` for the Fejer test function, where ``psi_hat(0) = psi(0) = 1``."""
    return 1 + _DIRAC_SHIFT[group]
