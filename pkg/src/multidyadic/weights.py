"""Muckenhoupt-type weight characteristics and dyadic BMO norms.

Weight characteristics are maxima over the in-window intervals only: a weight
is not defined outside the window, so ancestor intervals (which are mostly
outside it) are skipped.  BMO quantities treat ``b`` as zero outside the
window and include the ancestors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import DyadicInterval, HaarTable, StepFunction, Window


class Weight(StepFunction):
    """A step function with strictly positive, finite cell values."""

    __slots__ = ()

    def __init__(self, window: Window, values):
        super().__init__(window, values)
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0):
            bad = int(np.flatnonzero(~(np.isfinite(self.values) & (self.values > 0)))[0])
            raise ValueError(f"weight must be positive and finite; cell {bad} is {self.values[bad]}")

    @classmethod
    def of(cls, f: StepFunction) -> Weight:
        return f if isinstance(f, Weight) else cls(f.window, f.values)


@dataclass(frozen=True)
class ExponentVector:
    p_list: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "p_list", tuple(float(p) for p in self.p_list))
        if not self.p_list or any(not 1 <= p < math.inf for p in self.p_list):
            raise ValueError(f"exponents must lie in [1, inf), got {self.p_list}")

    @property
    def m(self) -> int:
        return len(self.p_list)

    @property
    def p(self) -> float:
        return 1.0 / sum(1.0 / q for q in self.p_list)

    def conjugate(self, j: int) -> float:
        q = self.p_list[j]
        return math.inf if q == 1 else q / (q - 1)


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[Weight, ...]
    exponents: ExponentVector

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Weight.of(w) for w in self.weights))
        if len(self.weights) != self.exponents.m:
            raise ValueError("need one weight per exponent")
        if any(w.window != self.weights[0].window for w in self.weights):
            raise ValueError("weights must share one window")


def weight_measure(w: StepFunction, cells) -> float:
    """``w(E)`` for ``E`` a union of cells (boolean mask or index array)."""
    return float(np.sum(w.values[cells]) * w.window.cell_length)


def _level_means(values: np.ndarray, window: Window) -> list[np.ndarray]:
    return [values.reshape(2 << j, -1).mean(axis=1) for j in range(window.finest_level + 1)]


def _argmax(window: Window, levels: Sequence[np.ndarray]) -> tuple[float, DyadicInterval]:
    best, where = -math.inf, None
    for j, vals in enumerate(levels):
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, where = float(vals[i]), window.interval_at(j, i)
    return best, where


def ap_characteristic(w: StepFunction, p: float, *, with_interval: bool = False):
    """``max_I <w>_I <w**(-1/(p-1))>_I**(p-1)`` over in-window intervals."""
    if not p > 1:
        raise ValueError("p must exceed 1; use a1_characteristic for p = 1")
    w = Weight.of(w)
    a = _level_means(w.values, w.window)
    with np.errstate(over="ignore"):
        b = _level_means(w.values ** (-1.0 / (p - 1)), w.window)
    best, where = _argmax(w.window, [x * y ** (p - 1) for x, y in zip(a, b)])
    return (best, where) if with_interval else best


def a1_characteristic(w: StepFunction, *, with_interval: bool = False):
    """``max_I <w>_I * max over I of 1/w``."""
    w = Weight.of(w)
    levels = [w.values.reshape(2 << j, -1) for j in range(w.window.finest_level + 1)]
    best, where = _argmax(w.window, [v.mean(axis=1) / v.min(axis=1) for v in levels])
    return (best, where) if with_interval else best


DEFAULT_P_GRID = tuple(sorted({1 + 2.0 ** -t for t in range(-4, 9)} | {2.0, 4.0, 8.0, 16.0}))


def ainf_estimate(w: StepFunction, p_grid: Sequence[float] = DEFAULT_P_GRID) -> tuple[float, float]:
    """Smallest ``[w]_{A_p}`` over the grid and the ``p`` attaining it.

    An upper bound for the ``A_inf`` characteristic, which is an infimum over
    all ``p > 1``.
    """
    if not len(p_grid):
        raise ValueError("p_grid must be nonempty")
    return min((ap_characteristic(w, p), p) for p in p_grid)


def nu_weight(wv: WeightVector) -> Weight:
    """``prod_j w_j**(p/p_j)``."""
    p = wv.exponents.p
    v = np.ones(wv.weights[0].window.n_cells)
    for w, pj in zip(wv.weights, wv.exponents.p_list):
        v = v * w.values ** (p / pj)
    return Weight(wv.weights[0].window, v)


def multilinear_ap_characteristic(wv: WeightVector, *, with_interval: bool = False):
    """``max_I <nu>_I**(1/p) prod_j <w_j**(1-p_j')>_I**(1/p_j')``.

    A slot with ``p_j = 1`` contributes ``max over I of 1/w_j`` instead.
    """
    window = wv.weights[0].window
    ex = wv.exponents
    levels = [m ** (1.0 / ex.p) for m in _level_means(nu_weight(wv).values, window)]
    for j, w in enumerate(wv.weights):
        if ex.p_list[j] == 1:
            factors = [1.0 / v.min(axis=1)
                       for v in (w.values.reshape(2 << i, -1) for i in range(window.finest_level + 1))]
        else:
            q = ex.conjugate(j)
            factors = [m ** (1.0 / q) for m in _level_means(w.values ** (1.0 - q), window)]
        levels = [x * y for x, y in zip(levels, factors)]
    best, where = _argmax(window, levels)
    return (best, where) if with_interval else best


def _oscillation_levels(b: StepFunction, r: float) -> tuple[list[np.ndarray], np.ndarray]:
    """``<|b - <b>_I|**r>_I`` on every known interval."""
    w = b.window
    t = HaarTable(b)
    levels = [(np.abs(b.values.reshape(2 << j, -1) - t.averages[j][:, None]) ** r).mean(axis=1)
              for j in range(w.finest_level + 1)]
    anc = np.empty((w.A, 2))
    halves = b.values.reshape(2, -1)
    for a in range(1, w.A + 1):
        length = math.ldexp(1.0, w.K + a)
        avg = t.ancestor_averages[a - 1]
        inside = (np.abs(halves - avg[:, None]) ** r).sum(axis=1) * w.cell_length
        anc[a - 1] = (inside + (length - w.extent) * np.abs(avg) ** r) / length
    return levels, anc


def _argmax_all(window: Window, levels, anc) -> tuple[float, DyadicInterval]:
    best, where = _argmax(window, levels)
    if window.A:
        a, side = np.unravel_index(int(np.argmax(anc)), anc.shape)
        if anc[a, side] > best:
            best, where = float(anc[a, side]), window.ancestor(int(a) + 1, bool(side))
    return best, where


def bmo_norm(b: StepFunction, *, with_interval: bool = False):
    """``max_I <|b - <b>_I|>_I``."""
    return bmo_r_norm(b, 1.0, with_interval=with_interval)


def bmo_r_norm(b: StepFunction, r: float, *, with_interval: bool = False):
    """``(max_I <|b - <b>_I|**r>_I)**(1/r)``."""
    if not r > 0:
        raise ValueError("r must be positive")
    best, where = _argmax_all(b.window, *_oscillation_levels(b, r))
    best = best ** (1.0 / r)
    return (best, where) if with_interval else best


def bmo2_haar(b: StepFunction, *, with_interval: bool = False):
    """``max_I ((1/|I|) sum over J inside I of <b, h_J>**2)**(1/2)``.

    Sums of squared coefficients are accumulated bottom-up through the tree.
    """
    w = b.window
    t = HaarTable(b)
    L = w.finest_level
    energy = [None] * (L + 1)
    energy[L] = np.zeros(w.n_cells)
    for j in range(L - 1, -1, -1):
        energy[j] = t.coefficients[j] ** 2 + energy[j + 1][0::2] + energy[j + 1][1::2]
    levels = [energy[j] / w.level_length(j) for j in range(L + 1)]
    anc = np.empty((w.A, 2))
    below = energy[0]
    for a in range(1, w.A + 1):
        below = t.ancestor_coefficients[a - 1] ** 2 + below
        anc[a - 1] = below / math.ldexp(1.0, w.K + a)
    best, where = _argmax_all(w, levels, anc)
    best = math.sqrt(best)
    return (best, where) if with_interval else best


def truncate_bmo(b: StepFunction, j: float) -> StepFunction:
    """Clamp ``b`` to ``[-j, j]``."""
    if not j > 0:
        raise ValueError("truncation level must be positive")
    return StepFunction(b.window, np.clip(b.values, -j, j))
