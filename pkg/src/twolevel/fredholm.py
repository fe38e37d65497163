"""Second-kind Fredholm equations ``g + K g = 1`` on ``[-1/2, 1/2]``.

``K`` is the convolution operator ``(Kf)(x) = int_{-1/2}^{1/2} m(x - y) f(y) dy``
with an even kernel ``m`` on ``[-1, 1]``.  Three routes are provided: the
closed-form cosine solution for quadratic kernels, a Nystrom discretization
used as the numerical oracle, and the Neumann series with a Hilbert-Schmidt
contraction certificate.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .fnspace import GridFunction, integrate, quadrature_weights
from .kernels import QuadraticKernel

log = logging.getLogger(__name__)


class FredholmError(ArithmeticError):
    pass


class DegenerateKernel(FredholmError):
    """b = 0 or b + c = 0: the cosine ansatz collapses."""


class SingularDenominator(FredholmError):
    pass


class SingularSystem(FredholmError):
    """The discretized ``I + K`` could not be inverted."""


class NotContractive(UserWarning):
    pass


@dataclass(frozen=True)
class TrigSolution:
    """``g(x) = A cos(omega x) + C``."""

    A: float
    omega: float
    C: float

    def __call__(self, x):
        return self.A * np.cos(self.omega * np.asarray(x, dtype=float)) + self.C

    def integral(self) -> float:
        """``int_{-1/2}^{1/2} g``."""
        if self.omega == 0:
            return self.A + self.C
        return self.A * 2.0 / self.omega * math.sin(self.omega / 2.0) + self.C

    def sample(self, n: int) -> GridFunction:
        return GridFunction.from_callable(self, -0.5, 0.5, n)


def solve_quadratic(k: QuadraticKernel, tol: float = 1e-12) -> TrigSolution:
    """Closed-form solution of ``1 = g(x) + int (a + b|x-y| + c(x-y)^2) g(y) dy``.

    Differentiating three times gives ``g''' + 2b g' = 0``, so the even
    solution is ``A cos(sqrt(2b) x) + C``; the second derivative ties ``C``
    to ``A`` and the equation at ``x = 0`` fixes ``A``.
    """
    a, b, c = float(k.a), float(k.b), float(k.c)
    if b == 0 or b + c == 0:
        raise DegenerateKernel(f"kernel ({a}, {b}, {c}) has b = 0 or b + c = 0")
    rb = math.sqrt(b)
    s = math.sin(math.sqrt(b / 2))
    co = math.cos(math.sqrt(b / 2))
    den = (6 * rb * (b + c) ** 2 * co
           + math.sqrt(2) * (6 * a * b * b + 3 * b ** 3 + 3 * b * b * c + b * c * (c - 12) - 6 * c * c) * s)
    scale = max(1.0, abs(6 * rb * (b + c) ** 2), abs(math.sqrt(2) * 6 * a * b * b))
    if abs(den) <= tol * scale:
        raise SingularDenominator(f"I + K is singular for kernel ({a}, {b}, {c})")
    A = 6 * b ** 1.5 * (b + c) / den
    C = -6 * math.sqrt(2) * b * c * s / den
    return TrigSolution(A, math.sqrt(2 * b), C)


# -- Nystrom ---------------------------------------------------------------

@lru_cache(maxsize=2)
def _split_weights(n: int) -> np.ndarray:
    """Row ``i`` integrates over ``[-1/2, x_i]`` and ``[x_i, 1/2]`` separately.

    The right half uses the mirrored rule so the discrete operator commutes
    with ``x -> -x`` and even kernels give even solutions.
    """
    h = 1.0 / (n - 1)
    W = np.zeros((n, n))
    for i in range(n):
        W[i, :i + 1] += quadrature_weights(i + 1, h)
        W[i, i:] += quadrature_weights(n - i, h)[::-1]
    W.setflags(write=False)
    return W


def _check_n(n: int):
    if n < 41 or n % 2 == 0:
        raise ValueError(f"node count must be odd and >= 41, got {n}")


def _kernel_on_lags(m: GridFunction, n: int) -> np.ndarray:
    """Kernel values at the lags ``(i - j) h`` of an ``n``-node half grid."""
    if not (np.isclose(m.lo, -1.0) and np.isclose(m.hi, 1.0)):
        raise ValueError("kernel must be sampled on [-1, 1]")
    if m.n == 2 * n - 1:
        return m.values
    return m(np.linspace(-1.0, 1.0, 2 * n - 1))


def matched_n(m: GridFunction) -> Optional[int]:
    """Half-grid size sharing ``m``'s spacing, if it is odd."""
    n = (m.n + 1) // 2
    return n if n % 2 == 1 and n >= 41 else None


def operator_matrix(m: GridFunction, n: Optional[int] = None) -> np.ndarray:
    """Nystrom matrix of ``K`` on the ``n``-node grid of ``[-1/2, 1/2]``.

    The kink of ``m(x_i - y)`` at ``y = x_i`` always sits on a node and the
    row quadrature is split there.  If ``m`` is not sampled at the lags of
    that grid it is linearly interpolated.
    """
    n = n or matched_n(m)
    if n is None:
        raise ValueError(f"cannot infer a grid from a kernel with {m.n} nodes; pass n")
    _check_n(n)
    lags = _kernel_on_lags(m, n)
    idx = np.arange(n)[:, None] - np.arange(n)[None, :] + (n - 1)
    return lags[idx] * _split_weights(n)


@dataclass(frozen=True)
class NystromSolution:
    g: GridFunction
    residual: float
    rcond: float


def nystrom(m: GridFunction, n: Optional[int] = None, residual_tol: float = 1e-8) -> NystromSolution:
    K = operator_matrix(m, n)
    n = K.shape[0]
    A = np.eye(n) + K
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
        raise SingularSystem(f"I + K is singular at n = {n}: {exc}") from exc
    anorm = np.abs(A).sum(axis=0).max()
    rcond, info = scipy.linalg.lapack.dgecon(lu, anorm, norm="1")
    if info != 0 or rcond < 1e-13:
        raise SingularSystem(f"I + K is numerically singular at n = {n} (rcond = {rcond:.3e})")
    g = scipy.linalg.lu_solve((lu, piv), np.ones(n), check_finite=False)
    residual = float(np.abs(A @ g - 1.0).max())
    if not residual <= residual_tol:
        raise SingularSystem(f"Nystrom residual {residual:.3e} exceeds {residual_tol:.1e}")
    log.debug("nystrom n=%d rcond=%.3e residual=%.3e", n, rcond, residual)
    return NystromSolution(GridFunction(-0.5, 0.5, g), residual, float(rcond))


def nystrom_solve(m: GridFunction, n: Optional[int] = None) -> GridFunction:
    """Solve ``(I + K) g = 1`` by Nystrom discretization on ``n`` nodes."""
    return nystrom(m, n).g


def apply_operator(m: Callable, f: Callable, x: Sequence[float], n: int = 4001) -> np.ndarray:
    """``(Kf)(x)`` at arbitrary points by quadrature split at ``y = x``.

    Independent of the Nystrom matrix: both ``m`` and ``f`` are callables
    evaluated on fresh grids of ``n`` nodes per half.
    """
    out = []
    for xi in np.atleast_1d(np.asarray(x, dtype=float)):
        total = 0.0
        for lo, hi in ((-0.5, xi), (xi, 0.5)):
            if hi - lo <= 0:
                continue
            y = np.linspace(lo, hi, n)
            total += quadrature_weights(n, (hi - lo) / (n - 1)) @ (m(xi - y) * f(y))
        out.append(total)
    return np.array(out)


def residual(m: Callable, g: Callable, x: Sequence[float], n: int = 4001) -> float:
    """Sup over ``x`` of ``|g(x) + (Kg)(x) - 1|``."""
    x = np.asarray(x, dtype=float)
    return float(np.abs(g(x) + apply_operator(m, g, x, n) - 1.0).max())


def quadratic_form_ratio(m: GridFunction, f: GridFunction) -> float:
    """``<(I + K) f, f> / <f, 1>^2`` with the Nystrom quadrature on ``f``'s grid."""
    K = operator_matrix(m, f.n)
    w = quadrature_weights(f.n, f.h)
    v = f.values
    num = w @ ((v + K @ v) * v)
    den = (w @ v) ** 2
    if den == 0:
        raise ValueError("<f, 1> vanishes")
    return float(num / den)


# -- Neumann series --------------------------------------------------------

def contraction_norm_sq(m: GridFunction) -> float:
    """``int int_{[-1/2,1/2]^2} m(x - y)^2 dx dy = int_{-1}^{1} m(t)^2 (1 - |t|) dt``."""
    if not (np.isclose(m.lo, -1.0) and np.isclose(m.hi, 1.0)):
        raise ValueError("kernel must be sampled on [-1, 1]")
    return integrate(m.with_values(m.values ** 2 * (1.0 - np.abs(m.x))))


@dataclass(frozen=True)
class NeumannResult:
    """Partial sums ``sum_{k<=n} (-1)^k <K^k 1, 1>`` for ``n = 0..n_max``."""

    partial_sums: tuple
    norm_sq: float
    certified: bool
    terms_nonnegative: Optional[bool] = None

    @property
    def q(self) -> float:
        return math.sqrt(self.norm_sq)

    def tail_bound(self, n: int) -> float:
        """L2 bound on what the series still owes after the ``n``-th partial sum."""
        if not self.certified:
            return math.inf
        return self.q ** (n + 1) / (1.0 - self.q)

    def truncated_values(self, c_const: float) -> list:
        return [c_const / s for s in self.partial_sums]


def neumann_iterate(m: GridFunction, n_max: int, n: Optional[int] = None,
                    tol: float = 1e-12) -> NeumannResult:
    """Sum the Neumann series for ``(I + K)^{-1} 1`` term by term.

    When ``m <= 0`` every term ``(-1)^k K^k 1`` is nonnegative in exact
    arithmetic; that is checked on the grid (to ``tol`` relative to the
    term's size) and recorded, since it is what makes each truncation an
    upper bound for ``c / <1, g>``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    K = operator_matrix(m, n)
    n = K.shape[0]
    w = quadrature_weights(n, 1.0 / (n - 1))
    norm_sq = contraction_norm_sq(m)
    certified = norm_sq < 1.0
    if not certified:
        warnings.warn(f"Hilbert-Schmidt norm^2 = {norm_sq:.6g} >= 1; series not certified",
                      NotContractive, stacklevel=2)

    check_sign = bool(np.all(m.values <= 0.0))
    nonneg = True
    term = np.ones(n)
    total = 0.0
    sums = []
    for _ in range(n_max + 1):
        total += float(w @ term)
        sums.append(total)
        if check_sign and term.min() < -tol * max(1.0, np.abs(term).max()):
            nonneg = False
        term = -(K @ term)
    return NeumannResult(tuple(sums), norm_sq, certified, nonneg if check_sign else None)
