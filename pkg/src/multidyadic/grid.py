"""Finite dyadic windows, step functions and the exact Haar calculus.

A :class:`Window` ``(K, N, A)`` covers ``[-2**K, 2**K)`` with cells of length
``2**-N``.  The dyadic intervals it knows about are the in-window ones (lengths
``2**K`` down to ``2**-N``) plus ``A`` ancestor pairs ``[0, 2**(K+a))`` and
``[-2**(K+a), 0)``.  Functions are assumed to vanish outside the window, so
every average and Haar coefficient is a finite sum of cell values.

Interval bookkeeping used throughout the package: in-window level ``j``
(``0 <= j <= K + N``) holds ``2**(j+1)`` intervals of length ``2**(K-j)``,
indexed left to right; an interval ``(k, m)`` sits on level ``j = k + K`` at
index ``m + 2**j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np


class GridError(ValueError):
    """Raised for intervals or functions incompatible with a window."""


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The interval ``[m * 2**-k, (m + 1) * 2**-k)``."""

    k: int
    m: int

    @property
    def length(self) -> float:
        return math.ldexp(1.0, -self.k)

    @property
    def left(self) -> float:
        return math.ldexp(float(self.m), -self.k)

    @property
    def right(self) -> float:
        return math.ldexp(float(self.m + 1), -self.k)

    @property
    def parent(self) -> DyadicInterval:
        return DyadicInterval(self.k - 1, self.m // 2)

    @property
    def children(self) -> tuple[DyadicInterval, DyadicInterval]:
        return DyadicInterval(self.k + 1, 2 * self.m), DyadicInterval(self.k + 1, 2 * self.m + 1)

    def contains(self, other: DyadicInterval) -> bool:
        if other.k < self.k:
            return False
        return other.m >> (other.k - self.k) == self.m

    def contains_point(self, x: float) -> bool:
        return self.left <= x < self.right

    def __str__(self) -> str:
        return f"[{self.left:g}, {self.right:g})"


@dataclass(frozen=True)
class Window:
    """``[-2**K, 2**K)`` at resolution ``2**-N`` with ``A`` ancestor levels."""

    K: int
    N: int
    A: int = 16

    def __post_init__(self):
        if self.A < 0:
            raise GridError("ancestor_depth must be >= 0")
        if self.K + self.N < 0:
            raise GridError("window must contain at least two cells")
        if self.K + self.A > 52 or self.N > 52:
            raise GridError("window scales exceed exact float range")

    @property
    def n_cells(self) -> int:
        return 1 << (self.K + self.N + 1)

    @property
    def half_cells(self) -> int:
        return 1 << (self.K + self.N)

    @property
    def cell_length(self) -> float:
        return math.ldexp(1.0, -self.N)

    @property
    def finest_level(self) -> int:
        return self.K + self.N

    @property
    def extent(self) -> float:
        return math.ldexp(1.0, self.K)

    def level_length(self, j: int) -> float:
        return math.ldexp(1.0, self.K - j)

    def level_block(self, j: int) -> int:
        """Number of cells in an in-window interval of level ``j``."""
        return 1 << (self.K + self.N - j)

    def left_endpoints(self) -> np.ndarray:
        return -self.extent + self.cell_length * np.arange(self.n_cells)

    def cell_of(self, x: float) -> int:
        if not -self.extent <= x < self.extent:
            raise GridError(f"point {x} outside window")
        return int(math.floor((x + self.extent) / self.cell_length))

    def is_in_window(self, interval: DyadicInterval) -> bool:
        j = interval.k + self.K
        return 0 <= j <= self.finest_level and 0 <= interval.m + (1 << j) < (2 << j)

    def is_ancestor(self, interval: DyadicInterval) -> bool:
        a = -interval.k - self.K
        return 1 <= a <= self.A and interval.m in (-1, 0)

    def level_index(self, interval: DyadicInterval) -> tuple[int, int]:
        """(level, index) of an in-window interval."""
        if not self.is_in_window(interval):
            raise GridError(f"{interval} is not an in-window interval")
        j = interval.k + self.K
        return j, interval.m + (1 << j)

    def interval_at(self, j: int, index: int) -> DyadicInterval:
        return DyadicInterval(j - self.K, index - (1 << j))

    def ancestor(self, a: int, positive: bool) -> DyadicInterval:
        return DyadicInterval(-(self.K + a), 0 if positive else -1)

    def cell_span(self, interval: DyadicInterval) -> tuple[int, int]:
        """Cell index range ``[start, stop)`` of ``interval`` clipped to the window.

        Raises if the interval is shorter than a cell.
        """
        if interval.k > self.N:
            raise GridError(f"{interval} is below resolution")
        lo = max(interval.left, -self.extent)
        hi = min(interval.right, self.extent)
        if hi <= lo:
            return 0, 0
        return (int((lo + self.extent) / self.cell_length),
                int((hi + self.extent) / self.cell_length))

    def to_dict(self) -> dict:
        return {"K": self.K, "N": self.N, "A": self.A}

    @classmethod
    def from_dict(cls, d: Mapping) -> Window:
        return cls(int(d["K"]), int(d["N"]), int(d.get("A", 16)))


def enumerate_intervals(window: Window) -> list[DyadicInterval]:
    """All intervals known to ``window``, coarse to fine, left to right.

    Ancestors come first (largest first, negative side before positive),
    followed by the in-window levels.
    """
    out = []
    for a in range(window.A, 0, -1):
        out.append(window.ancestor(a, positive=False))
        out.append(window.ancestor(a, positive=True))
    for j in range(window.finest_level + 1):
        out.extend(window.interval_at(j, i) for i in range(2 << j))
    return out


def interval_count(window: Window) -> int:
    return 2 * ((2 << window.finest_level) - 1) + 2 * window.A


class StepFunction:
    """A function constant on each cell of a window and zero outside it."""

    __slots__ = ("window", "values")

    def __init__(self, window: Window, values):
        values = np.array(values, dtype=float)
        if values.shape != (window.n_cells,):
            raise GridError(
                f"expected {window.n_cells} cell values for {window}, got shape {values.shape}")
        values.setflags(write=False)
        self.window = window
        self.values = values

    @classmethod
    def zeros(cls, window: Window) -> StepFunction:
        return cls(window, np.zeros(window.n_cells))

    @classmethod
    def constant(cls, window: Window, c: float) -> StepFunction:
        return cls(window, np.full(window.n_cells, float(c)))

    @classmethod
    def indicator(cls, window: Window, interval: DyadicInterval) -> StepFunction:
        v = np.zeros(window.n_cells)
        a, b = window.cell_span(interval)
        v[a:b] = 1.0
        return cls(window, v)

    def restrict(self, interval: DyadicInterval) -> StepFunction:
        """``f * 1_I``."""
        a, b = self.window.cell_span(interval)
        v = np.zeros_like(self.values)
        v[a:b] = self.values[a:b]
        return StepFunction(self.window, v)

    def refine(self, N: int) -> StepFunction:
        """The same function represented at a finer resolution ``N``."""
        if N < self.window.N:
            raise GridError("refine can only increase resolution")
        w = Window(self.window.K, N, self.window.A)
        return StepFunction(w, np.repeat(self.values, 1 << (N - self.window.N)))

    def embed(self, window: Window) -> StepFunction:
        """Zero-extend into a window with the same resolution and larger extent."""
        if window.N != self.window.N or window.K < self.window.K:
            raise GridError("embed needs equal resolution and a larger window")
        v = np.zeros(window.n_cells)
        off = window.half_cells - self.window.half_cells
        v[off:off + self.window.n_cells] = self.values
        return StepFunction(window, v)

    def with_window(self, window: Window) -> StepFunction:
        """Same cells, different ancestor depth."""
        if (window.K, window.N) != (self.window.K, self.window.N):
            raise GridError("with_window only changes ancestor depth")
        return StepFunction(window, self.values)

    def integral(self) -> float:
        return float(self.values.sum() * self.window.cell_length)

    def _check(self, other: StepFunction) -> None:
        if (other.window.K, other.window.N) != (self.window.K, self.window.N):
            raise GridError("step functions live on different windows")

    def __add__(self, other):
        if isinstance(other, StepFunction):
            self._check(other)
            return StepFunction(self.window, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, StepFunction):
            self._check(other)
            return StepFunction(self.window, self.values - other.values)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            self._check(other)
            return StepFunction(self.window, self.values * other.values)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return StepFunction(self.window, self.values * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return StepFunction(self.window, -self.values)

    def __abs__(self):
        return StepFunction(self.window, np.abs(self.values))

    def __repr__(self) -> str:
        return f"StepFunction({self.window}, cells={self.values.size})"


def _check_length(window: Window, interval: DyadicInterval) -> None:
    if interval.k > window.N:
        raise GridError(f"{interval} is below resolution")


def average(f: StepFunction, interval: DyadicInterval) -> float:
    """``(1/|I|) * integral of f over I``; ancestors only see the window part."""
    w = f.window
    _check_length(w, interval)
    a, b = w.cell_span(interval)
    return float(f.values[a:b].sum() * w.cell_length / interval.length)


def haar_coefficient(f: StepFunction, interval: DyadicInterval) -> float:
    """``<f, h_I>``.  Zero for single-cell intervals, on which f is constant."""
    w = f.window
    _check_length(w, interval)
    if interval.k == w.N:
        return 0.0
    lo_half, hi_half = interval.children
    a0, b0 = w.cell_span(lo_half)
    a1, b1 = w.cell_span(hi_half)
    diff = f.values[a1:b1].sum() - f.values[a0:b0].sum()
    return float(diff * w.cell_length / math.sqrt(interval.length))


def haar_function(interval: DyadicInterval, window: Window) -> StepFunction:
    if interval.k >= window.N:
        raise GridError(f"{interval}: halves unresolvable at resolution 2^-{window.N}")
    amp = 1.0 / math.sqrt(interval.length)
    v = np.zeros(window.n_cells)
    lo_half, hi_half = interval.children
    a, b = window.cell_span(lo_half)
    v[a:b] = -amp
    a, b = window.cell_span(hi_half)
    v[a:b] = amp
    return StepFunction(window, v)


class HaarTable:
    """Integrals, averages and Haar coefficients of ``f`` on every known interval.

    Built bottom-up in ``O(n_cells)``.  ``averages[j]`` and ``coefficients[j]``
    are indexed like level ``j`` of the window; ``ancestor_averages[a-1]`` and
    ``ancestor_coefficients[a-1]`` hold the (negative, positive) pair for
    ancestor depth ``a``.
    """

    def __init__(self, f: StepFunction):
        w = f.window
        self.window = w
        L = w.finest_level
        sums = [None] * (L + 1)
        sums[L] = f.values * w.cell_length
        for j in range(L - 1, -1, -1):
            sums[j] = sums[j + 1][0::2] + sums[j + 1][1::2]
        self.sums = sums
        self.averages = [sums[j] / w.level_length(j) for j in range(L + 1)]
        self.coefficients = [
            (sums[j + 1][1::2] - sums[j + 1][0::2]) / math.sqrt(w.level_length(j))
            for j in range(L)
        ]
        self.coefficients.append(np.zeros(w.n_cells))
        halves = sums[0]
        self.ancestor_averages = np.empty((w.A, 2))
        self.ancestor_coefficients = np.empty((w.A, 2))
        for a in range(1, w.A + 1):
            length = math.ldexp(1.0, w.K + a)
            self.ancestor_averages[a - 1] = halves / length
            # window halves sit in I_+ of the negative ancestor, I_- of the positive one
            self.ancestor_coefficients[a - 1] = np.array([halves[0], -halves[1]]) / math.sqrt(length)

    def coefficient(self, interval: DyadicInterval) -> float:
        w = self.window
        if w.is_ancestor(interval):
            return float(self.ancestor_coefficients[-interval.k - w.K - 1, interval.m + 1])
        j, i = w.level_index(interval)
        return float(self.coefficients[j][i])

    def average(self, interval: DyadicInterval) -> float:
        w = self.window
        if w.is_ancestor(interval):
            return float(self.ancestor_averages[-interval.k - w.K - 1, interval.m + 1])
        j, i = w.level_index(interval)
        return float(self.averages[j][i])

    def window_averages(self) -> tuple[float, float]:
        return float(self.averages[0][0]), float(self.averages[0][1])

    def coefficient_map(self) -> dict[DyadicInterval, float]:
        """Coefficients of all in-window intervals above the finest scale."""
        w = self.window
        return {w.interval_at(j, i): float(c)
                for j in range(w.finest_level)
                for i, c in enumerate(self.coefficients[j])}


def analyze(f: StepFunction) -> tuple[dict[DyadicInterval, float], tuple[float, float]]:
    """Haar coefficients and the two half-window averages of ``f``."""
    t = HaarTable(f)
    return t.coefficient_map(), t.window_averages()


def reconstruct(coeffs: Mapping[DyadicInterval, float],
                window_averages: Sequence[float],
                window: Window) -> StepFunction:
    """Inverse of :func:`analyze`."""
    L = window.finest_level
    levels = [np.zeros(2 << j) for j in range(L)]
    for interval, c in coeffs.items():
        if not window.is_in_window(interval) or interval.k >= window.N:
            raise GridError(f"coefficient at {interval} is not an in-window interval above the finest scale")
        j, i = window.level_index(interval)
        levels[j][i] = c
    avg = np.asarray(window_averages, dtype=float)
    if avg.shape != (2,):
        raise GridError("window_averages must be a pair")
    for j in range(L):
        step = levels[j] / math.sqrt(window.level_length(j))
        nxt = np.empty(avg.size * 2)
        nxt[0::2] = avg - step
        nxt[1::2] = avg + step
        avg = nxt
    return StepFunction(window, avg)


def level_pattern(window: Window, j: int, power: int) -> np.ndarray:
    """Cell values of ``h_I**power`` across one level-``j`` interval, unscaled.

    ``power == 0`` gives the indicator of ``I``.
    """
    B = window.level_block(j)
    if power == 0:
        return np.ones(B)
    if B < 2:
        raise GridError("halves unresolvable at the finest level")
    half = np.ones(B // 2)
    return np.concatenate([-half if power % 2 else half, half])


def iter_levels(window: Window) -> Iterator[tuple[str, int]]:
    """("ancestor", a) for a = A..1 then ("level", j) for j = 0..K+N."""
    for a in range(window.A, 0, -1):
        yield "ancestor", a
    for j in range(window.finest_level + 1):
        yield "level", j
