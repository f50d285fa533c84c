"""Slow reference implementations built directly from the definitions.

Each oracle loops over explicit intervals and cells and shares no code with
the vectorized library paths except the enumeration of intervals and the
``StepFunction``/``Window`` containers.
"""
import itertools
import math

import numpy as np

from multidyadic.grid import enumerate_intervals


def cells_in(window, interval):
    """Indices of cells whose left endpoint lies in ``interval``."""
    x = window.left_endpoints()
    return [i for i in range(window.n_cells) if interval.left <= x[i] < interval.right]


def avg(f, interval, values=None):
    v = f.values if values is None else values
    idx = cells_in(f.window, interval)
    return sum(v[i] for i in idx) * f.window.cell_length / interval.length


def haar_vector(window, interval):
    """``h_I`` sampled on the cells; ``None`` when the halves are not resolved."""
    if interval.length <= window.cell_length:
        return None
    mid = interval.left + interval.length / 2
    x = window.left_endpoints()
    out = np.zeros(window.n_cells)
    amp = 1 / math.sqrt(interval.length)
    for i in range(window.n_cells):
        if interval.left <= x[i] < mid:
            out[i] = -amp
        elif mid <= x[i] < interval.right:
            out[i] = amp
    return out


def coeff(f, interval, values=None):
    h = haar_vector(f.window, interval)
    if h is None:
        return 0.0
    v = f.values if values is None else values
    return float(np.sum(v * h) * f.window.cell_length)


def dyadic_sum(fs, bits, power, *, b=None, eps=None):
    """``sum_I [eps_I] [<b,h_I>] prod_j f_j(I, bit_j) h_I**power`` over known intervals."""
    window = fs[0].window
    out = np.zeros(window.n_cells)
    for I in enumerate_intervals(window):
        h = haar_vector(window, I)
        if h is None:
            continue
        c = 1.0
        for f, bit in zip(fs, bits):
            c *= coeff(f, I) if bit == 0 else avg(f, I)
        if b is not None:
            c *= coeff(b, I)
        if eps is not None:
            c *= eps[I]
        out += c * h ** power
    return out


def maximal_over(window, value_of):
    """``max over known I containing the cell of value_of(I)`` per cell."""
    out = np.full(window.n_cells, -np.inf)
    for I in enumerate_intervals(window):
        v = value_of(I)
        for i in cells_in(window, I):
            out[i] = max(out[i], v)
    return out


def best_constant(f_vals, window, interval):
    """``inf_c <|f - c|>_I`` by scanning every cell value (and 0 off-window) as ``c``."""
    idx = cells_in(window, interval)
    outside = interval.length - len(idx) * window.cell_length
    candidates = {float(f_vals[i]) for i in idx} | ({0.0} if outside > 0 else set())
    best = math.inf
    for c in candidates:
        total = sum(abs(f_vals[i] - c) for i in idx) * window.cell_length + outside * abs(c)
        best = min(best, total / interval.length)
    return best


def ap(w, p):
    best = 0.0
    for I in enumerate_intervals(w.window):
        if not w.window.is_in_window(I):
            continue
        a = avg(w, I)
        b = avg(w, I, w.values ** (-1 / (p - 1)))
        best = max(best, a * b ** (p - 1))
    return best


def weak_norm(values, mass, p):
    """``sup_t t * mass(|f| > t)**(1/p)`` from the level sets ``{|f| >= v}``."""
    a = np.abs(values)
    best = 0.0
    for v in set(a.tolist()):
        if v > 0:
            best = max(best, v * float(mass[a >= v].sum()) ** (1 / p))
    return best


def bmo_r(b, r):
    best = 0.0
    w = b.window
    for I in enumerate_intervals(w):
        idx = cells_in(w, I)
        outside = I.length - len(idx) * w.cell_length
        a = avg(b, I)
        total = sum(abs(b.values[i] - a) ** r for i in idx) * w.cell_length + outside * abs(a) ** r
        best = max(best, total / I.length)
    return best ** (1 / r)


def bmo2(b):
    w = b.window
    intervals = enumerate_intervals(w)
    best = 0.0
    for I in intervals:
        energy = sum(coeff(b, J) ** 2 for J in intervals
                     if I.left <= J.left and J.right <= I.right)
        best = max(best, energy / I.length)
    return math.sqrt(best)


def subsets(n):
    return itertools.product((0, 1), repeat=n)
