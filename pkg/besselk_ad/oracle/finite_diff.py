"""
Finite-difference references.

``adaptive_fd`` is the high-order reference used to check AD derivatives;
``naive_fd`` is the textbook comparator with a fixed step.
"""

from __future__ import annotations

import logging
from typing import Callable, Optional, Sequence, Union

import numpy as np

from besselk_ad.numerics.errors import BesselDomainError, ConvergenceError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

STENCIL_HALF_WIDTH = 5
DEFAULT_LEVELS = 8


def fd_weights(nodes: Sequence[float], x0: float, order: int) -> np.ndarray:
    """
    Weights w with f^(order)(x0) ~ sum_j w[j] f(nodes[j]) (Fornberg's recursion).

    Exact for polynomials of degree < len(nodes).
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    if order < 0:
        raise ValueError("order must be nonnegative")
    if n < order + 1:
        raise ValueError(f"need at least {order + 1} nodes for order {order}")
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            if c3 == 0.0:
                raise ValueError("stencil nodes must be distinct")
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


_OFFSETS = np.arange(-STENCIL_HALF_WIDTH, STENCIL_HALF_WIDTH + 1, dtype=float)
_WEIGHTS = {k: fd_weights(_OFFSETS, 0.0, k) for k in (1, 2)}


def _stencil_estimate(
    f: Callable[[float], ArrayLike], x0: float, h: float, order: int
) -> np.ndarray:
    samples = np.array([np.asarray(f(x0 + h * o), dtype=float) for o in _OFFSETS])
    if not np.all(np.isfinite(samples)):
        raise ValueError(
            f"non-finite sample in finite difference around {x0} with step {h}"
        )
    return np.tensordot(_WEIGHTS[order], samples, axes=1) / h**order


def adaptive_fd(
    f: Callable[[float], ArrayLike],
    x0: float,
    order: int = 1,
    h0: Optional[float] = None,
    levels: int = DEFAULT_LEVELS,
) -> ArrayLike:
    """
    Tenth-order central difference of ``f`` at ``x0``.

    The 11-point stencil is evaluated at steps h0, h0/2, ..., and the level
    whose estimate moves least under halving is returned. ``f`` may return a
    scalar or an array; the result has the same shape. Levels whose stencil
    leaves the domain of ``f`` (``BesselDomainError``) are skipped.
    """
    if order not in _WEIGHTS:
        raise ValueError(f"adaptive_fd supports order 1 or 2, got {order}")
    if h0 is None:
        h0 = 0.1 * max(abs(x0), 1.0)

    estimates = []
    for i in range(levels):
        h = h0 * 0.5**i
        try:
            estimates.append(_stencil_estimate(f, x0, h, order))
        except BesselDomainError:
            logger.debug("adaptive_fd: step %.3g leaves the domain, halving", h)
            continue
    if len(estimates) < 2:
        raise ConvergenceError(f"adaptive_fd found fewer than two usable steps at {x0}")

    diffs = [
        float(np.max(np.abs(a - b))) for a, b in zip(estimates[:-1], estimates[1:])
    ]
    best = int(np.argmin(diffs))
    result = estimates[best + 1]
    return float(result) if result.ndim == 0 else result


def adaptive_fd_partial(
    f: Callable[[np.ndarray], ArrayLike],
    point: Sequence[float],
    index: int,
    order: int = 1,
    h0: Optional[float] = None,
) -> ArrayLike:
    """``adaptive_fd`` along one coordinate of a vector argument."""
    base = np.asarray(point, dtype=float)

    def along(t: float) -> ArrayLike:
        shifted = base.copy()
        shifted[index] = t
        return f(shifted)

    return adaptive_fd(along, float(base[index]), order, h0)


def naive_fd(f: Callable[[float], float], x0: float, h: float = 1e-6, k: int = 1) -> float:
    """Forward difference for k=1, central second difference for k=2."""
    if k == 1:
        return (f(x0 + h) - f(x0)) / h
    if k == 2:
        return (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h)
    raise ValueError(f"naive_fd supports k=1 or k=2, got {k}")
