"""Sampled real functions on uniform grids and the quadrature built on them.

Every grid has an odd number of nodes, so symmetric intervals always carry a
node at 0 and composite Simpson applies without a leftover panel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

DEFAULT_N = 4001
FAST_N = 401

HALF = (-0.5, 0.5)
UNIT = (-1.0, 1.0)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real samples at ``n`` equispaced nodes of ``[lo, hi]``, endpoints included."""

    lo: float
    hi: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        Interval(self.lo, self.hi)
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if vals.size < 3 or vals.size % 2 == 0:
            raise ValueError(f"node count must be odd and >= 3, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                      n: int) -> "GridFunction":
        x = np.linspace(lo, hi, n)
        return cls(lo, hi, np.broadcast_to(f(x), x.shape))

    @classmethod
    def zeros(cls, lo: float, hi: float, n: int) -> "GridFunction":
        return cls(lo, hi, np.zeros(n))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.lo, self.hi, values)

    def __call__(self, x):
        """Linear interpolation; exact at nodes, zero outside ``[lo, hi]``."""
        return np.interp(x, self.x, self.values, left=0.0, right=0.0)

    def at_node(self, x0: float) -> float:
        """Sample at the node nearest ``x0`` (which must be within half a cell of it)."""
        k = int(round((x0 - self.lo) / self.h))
        if not 0 <= k < self.n or abs(self.lo + k * self.h - x0) > 1e-9 * max(1.0, abs(x0)):
            raise ValueError(f"{x0} is not a node of the grid")
        return float(self.values[k])


@lru_cache(maxsize=None)
def _rule(n_intervals: int) -> np.ndarray:
    w = np.zeros(n_intervals + 1)
    if n_intervals == 0:
        return w
    if n_intervals == 1:
        w[:] = 0.5
        return w
    # odd interval counts close with a 3/8 panel
    m = n_intervals if n_intervals % 2 == 0 else n_intervals - 3
    if m > 0:
        w[0:m + 1:2] += 2.0 / 3.0
        w[1:m:2] += 4.0 / 3.0
        w[0] -= 1.0 / 3.0
        w[m] -= 1.0 / 3.0
    if n_intervals % 2:
        w[m:m + 4] += np.array([3.0, 9.0, 9.0, 3.0]) / 8.0
    w.setflags(write=False)
    return w


def quadrature_weights(n_nodes: int, h: float = 1.0) -> np.ndarray:
    """Composite Newton-Cotes weights for ``n_nodes`` equispaced samples of spacing ``h``.

    Even interval counts use Simpson; odd counts use Simpson plus one 3/8
    panel at the right end (both O(h^4)); a single interval falls back to
    the trapezoid rule.
    """
    if n_nodes < 1:
        raise ValueError("need at least one node")
    return h * _rule(n_nodes - 1)


def integrate(f: GridFunction) -> float:
    """Composite Simpson integral of ``f`` over its interval."""
    return float(quadrature_weights(f.n, f.h) @ f.values)


def cumulative(f: GridFunction) -> GridFunction:
    """Running integral ``F(x) = int_lo^x f`` on the same grid.

    Each Simpson panel is split with the quadratic through its three nodes,
    so ``F`` at even-indexed nodes reproduces :func:`integrate` exactly.
    """
    v = f.values
    h = f.h
    left = h * (5 * v[:-2:2] + 8 * v[1:-1:2] - v[2::2]) / 12.0
    right = h * (-v[:-2:2] + 8 * v[1:-1:2] + 5 * v[2::2]) / 12.0
    out = np.empty(f.n)
    out[0] = 0.0
    panel = np.cumsum(left + right)
    out[2::2] = panel
    out[1::2] = np.concatenate(([0.0], panel[:-1])) + left
    return f.with_values(out)


def symmetric_integral(f: GridFunction, x) -> np.ndarray:
    """``int_{|x|-1}^{1-|x|} f`` for ``f`` on ``[-1, 1]``, zero once ``|x| >= 1``."""
    F = cumulative(f)
    ax = np.abs(np.asarray(x, dtype=float))
    val = F(1.0 - ax) - F(ax - 1.0)
    return np.where(ax < 1.0, val, 0.0)


def self_correlate(g: GridFunction) -> GridFunction:
    """``(g * g~)(x) = int g(y) g(y - x) dy`` for real ``g`` on ``[-1/2, 1/2]``.

    The result lives on ``[-1, 1]`` with the same spacing as ``g`` (``2n - 1``
    nodes), so every overlap interval starts and ends on a node of ``g``.
    """
    if not np.isclose(g.lo, -0.5) or not np.isclose(g.hi, 0.5):
        raise ValueError("self_correlate expects a function on [-1/2, 1/2]")
    n = g.n
    v = g.values
    pos = np.empty(n)
    for k in range(n):
        pos[k] = quadrature_weights(n - k, g.h) @ (v[k:] * v[:n - k])
    # the correlation of a real function is even
    out = np.concatenate((pos[:0:-1], pos))
    return GridFunction(-1.0, 1.0, out)


def value_at_zero_from_transform(fhat: GridFunction) -> float:
    """``phi(0)`` for a function whose Fourier transform ``fhat`` lives in its grid's interval.

    With ``phi(x) = int fhat(t) e(xt) dt`` the value at 0 is just the total mass.
    """
    return integrate(fhat)
