"""Gauss-Legendre quadrature: cached rules, composite panels, adaptive bisection."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=None)
def _rule(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    x, w = leggauss(order)
    return tuple(x), tuple(w)


def panel_rule(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an order-point rule on [a, b]."""
    x, w = _rule(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * np.asarray(x), half * np.asarray(w)


def composite_rule(a: float, b: float, points_per_unit: int,
                   panel_width: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Composite panels covering [a, b] with the requested point density."""
    if b <= a:
        raise ValueError("empty interval")
    n_panels = max(1, int(np.ceil((b - a) / panel_width)))
    order = max(2, int(np.ceil(points_per_unit * (b - a) / n_panels)))
    edges = np.linspace(a, b, n_panels + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = panel_rule(lo, hi, order)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def integrate_adaptive(fn: Callable[[float], float], a: float, b: float,
                       rel_tol: float = 1e-13, abs_tol: float = 1e-300,
                       order: int = 24, max_depth: int = 48) -> float:
    """Adaptive bisection with a fixed-order panel rule.

    A panel is accepted when one- and two-panel estimates agree to the
    requested tolerance; used by the moment oracle at rel_tol below 1e-12.
    """

    def panel(lo: float, hi: float) -> float:
        x, w = panel_rule(lo, hi, order)
        return float(np.dot(w, [fn(t) for t in x]))

    def recurse(lo: float, hi: float, whole: float, depth: int) -> float:
        mid = 0.5 * (lo + hi)
        left = panel(lo, mid)
        right = panel(mid, hi)
        if depth >= max_depth:
            return left + right
        err = abs(left + right - whole)
        if err <= max(abs_tol, rel_tol * abs(left + right)):
            return left + right
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    return recurse(a, b, panel(a, b), 0)
