"""Weighted strong and weak Lebesgue norms of step functions."""
from __future__ import annotations

import numpy as np

from .grid import DyadicInterval, StepFunction


def _weights(f: StepFunction, w: StepFunction | None) -> np.ndarray:
    dx = f.window.cell_length
    if w is None:
        return np.full(f.window.n_cells, dx)
    if (w.window.K, w.window.N) != (f.window.K, f.window.N):
        raise ValueError("weight and function live on different windows")
    return w.values * dx


def lp_norm(f: StepFunction, p: float, w: StepFunction | None = None) -> float:
    """``(sum |f|**p w dx)**(1/p)``; Lebesgue measure when ``w`` is None."""
    if not p > 0:
        raise ValueError("p must be positive")
    return float(np.sum(np.abs(f.values) ** p * _weights(f, w)) ** (1.0 / p))


def _weak(values: np.ndarray, mass: np.ndarray, p: float) -> float:
    # levels from below: w({|f| >= v}) is the sup of w({|f| > t}) over t < v
    order = np.argsort(-values, kind="stable")
    v = values[order]
    cum = np.cumsum(mass[order])
    keep = v > 0
    if not keep.any():
        return 0.0
    return float(np.max(v[keep] * cum[keep] ** (1.0 / p)))


def weak_lp_norm(f: StepFunction, p: float, w: StepFunction | None = None) -> float:
    """``sup_t t * w({|f| > t})**(1/p)``, attained as ``t`` rises to a cell value."""
    if not p > 0:
        raise ValueError("p must be positive")
    return _weak(np.abs(f.values), _weights(f, w), p)


def localized_lp_norm(f: StepFunction, interval: DyadicInterval, p: float) -> float:
    """``((1/|I|) int_I |f|**p)**(1/p)``."""
    if not p > 0:
        raise ValueError("p must be positive")
    a, b = f.window.cell_span(interval)
    return float(np.mean(np.abs(f.values[a:b]) ** p) ** (1.0 / p))


def localized_weak_norm(f: StepFunction, interval: DyadicInterval, q: float) -> float:
    """Weak ``L^q`` norm on ``I`` for the normalized measure ``dy/|I|``."""
    if not q > 0:
        raise ValueError("q must be positive")
    a, b = f.window.cell_span(interval)
    vals = np.abs(f.values[a:b])
    return _weak(vals, np.full(vals.size, 1.0 / vals.size), q)


def kolmogorov_constant(p: float, q: float) -> float:
    """``(q/(q-p))**(1/p)``, valid for probability measures."""
    return (q / (q - p)) ** (1.0 / p)


def kolmogorov_ratio(f: StepFunction, interval: DyadicInterval, p: float, q: float) -> float:
    """Localized ``L^p`` norm over localized weak ``L^q`` norm (0 when f = 0 on I)."""
    if not 0 < p < q:
        raise ValueError("need 0 < p < q")
    weak = localized_weak_norm(f, interval, q)
    if weak == 0:
        return 0.0
    return localized_lp_norm(f, interval, p) / weak


def localized_lp_levels(f: StepFunction, p: float) -> list[np.ndarray]:
    """:func:`localized_lp_norm` for every in-window interval, one array per level."""
    a = np.abs(f.values) ** p
    return [a.reshape(2 << j, -1).mean(axis=1) ** (1.0 / p)
            for j in range(f.window.finest_level + 1)]


def localized_weak_levels(f: StepFunction, q: float) -> list[np.ndarray]:
    """:func:`localized_weak_norm` for every in-window interval, one array per level."""
    a = np.abs(f.values)
    out = []
    for j in range(f.window.finest_level + 1):
        blocks = -np.sort(-a.reshape(2 << j, -1), axis=1)
        B = blocks.shape[1]
        frac = (np.arange(1, B + 1) / B) ** (1.0 / q)
        out.append((blocks * frac[None, :]).max(axis=1))
    return out
