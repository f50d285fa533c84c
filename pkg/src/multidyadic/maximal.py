"""Dyadic maximal operators evaluated exactly over a window's intervals.

Each operator first builds one value per known interval (an average, a
product of averages, or a best-constant oscillation) and then sweeps top-down,
carrying the running maximum from each interval to its children.  The cost is
proportional to the number of intervals.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .grid import HaarTable, StepFunction, Window


def _sweep(window: Window, levels: Sequence[np.ndarray], ancestors: np.ndarray) -> np.ndarray:
    cur = levels[0].copy()
    if window.A:
        cur = np.maximum(cur, ancestors.max(axis=0))
    for j in range(1, window.finest_level + 1):
        cur = np.maximum(np.repeat(cur, 2), levels[j])
    return cur


def _power_table(f: StepFunction, r: float) -> HaarTable:
    return HaarTable(StepFunction(f.window, np.abs(f.values) ** r))


def maximal(f: StepFunction) -> StepFunction:
    """``Mf(x) = max over known I containing x of <|f|>_I``."""
    t = _power_table(f, 1.0)
    return StepFunction(f.window, _sweep(f.window, t.averages, t.ancestor_averages))


def maximal_delta(f: StepFunction, delta: float) -> StepFunction:
    if not delta > 0:
        raise ValueError("delta must be positive")
    t = _power_table(f, delta)
    return StepFunction(f.window, _sweep(f.window, t.averages, t.ancestor_averages) ** (1.0 / delta))


def _best_constant_oscillation(f: StepFunction) -> tuple[list[np.ndarray], np.ndarray]:
    """``inf_c <|f - c|>_I`` for every known interval.

    Cells have equal length, so on an in-window interval the infimum is taken
    at the median of the cell values.  An ancestor interval is at least half
    outside the window, where ``f = 0``; zero is then a weighted median and the
    infimum is ``<|f|>_I``.
    """
    w = f.window
    levels = []
    for j in range(w.finest_level + 1):
        vals = f.values.reshape(2 << j, -1)
        B = vals.shape[1]
        if B == 1:
            levels.append(np.zeros(vals.shape[0]))
            continue
        med = np.sort(vals, axis=1)[:, (B - 1) // 2]
        levels.append(np.abs(vals - med[:, None]).mean(axis=1))
    return levels, _power_table(f, 1.0).ancestor_averages


def _mean_oscillation(f: StepFunction) -> tuple[list[np.ndarray], np.ndarray]:
    """``<|f - <f>_I|>_I`` for every known interval."""
    w = f.window
    t = HaarTable(f)
    levels = []
    for j in range(w.finest_level + 1):
        vals = f.values.reshape(2 << j, -1)
        levels.append(np.abs(vals - t.averages[j][:, None]).mean(axis=1))
    anc = np.empty((w.A, 2))
    halves = f.values.reshape(2, -1)
    for a in range(1, w.A + 1):
        length = 2.0 ** (w.K + a)
        avg = t.ancestor_averages[a - 1]
        inside = np.abs(halves - avg[:, None]).sum(axis=1) * w.cell_length
        anc[a - 1] = (inside + (length - w.extent) * np.abs(avg)) / length
    return levels, anc


def sharp_maximal(f: StepFunction) -> StepFunction:
    """``M#f(x) = max over I containing x of inf_c <|f - c|>_I``."""
    levels, anc = _best_constant_oscillation(f)
    return StepFunction(f.window, _sweep(f.window, levels, anc))


def mean_oscillation_maximal(f: StepFunction) -> StepFunction:
    """The variant of ``M#`` with ``c = <f>_I``; between ``M#f`` and ``2 M#f``."""
    levels, anc = _mean_oscillation(f)
    return StepFunction(f.window, _sweep(f.window, levels, anc))


def sharp_maximal_delta(f: StepFunction, delta: float) -> StepFunction:
    """``(M#(|f|**delta))**(1/delta)`` for ``0 < delta < 1``."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    g = StepFunction(f.window, np.abs(f.values) ** delta)
    return StepFunction(f.window, sharp_maximal(g).values ** (1.0 / delta))


def _check_shared(fs: Sequence[StepFunction]) -> Window:
    if not fs:
        raise ValueError("need at least one function")
    window = fs[0].window
    if any(f.window != window for f in fs[1:]):
        raise ValueError("all functions must share one window")
    return window


def multilinear_maximal(fs: Sequence[StepFunction]) -> StepFunction:
    """``max over I containing x of prod_j <|f_j|>_I``."""
    return multilinear_maximal_r(fs, 1.0)


def multilinear_maximal_r(fs: Sequence[StepFunction], r: float) -> StepFunction:
    """``max over I containing x of prod_j <|f_j|**r>_I**(1/r)``."""
    if not r > 0:
        raise ValueError("r must be positive")
    window = _check_shared(fs)
    tables = [_power_table(f, r) for f in fs]
    levels = []
    for j in range(window.finest_level + 1):
        prod = np.ones(2 << j)
        for t in tables:
            prod = prod * t.averages[j] ** (1.0 / r)
        levels.append(prod)
    anc = np.ones((window.A, 2))
    for t in tables:
        anc = anc * t.ancestor_averages ** (1.0 / r)
    return StepFunction(window, _sweep(window, levels, anc))
