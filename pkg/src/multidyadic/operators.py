"""Multilinear dyadic paraproducts, Haar multipliers and their commutators.

All operators share one kernel: for every known interval ``I`` a scalar
coefficient (a product of Haar coefficients and averages, possibly times a
symbol value) multiplies the pointwise power ``h_I**power``.  Sums run in a
fixed order (ancestors from the largest down, then in-window levels coarse to
fine), so results are reproducible bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .grid import (DyadicInterval, GridError, HaarTable, StepFunction, Window,
                   average, haar_coefficient, level_pattern)

# With ``corrupt=True`` each finest-level coefficient also receives this
# fraction of its right neighbour's (cyclically), a deliberately non-local term.
CORRUPTION = 0.25


@dataclass(frozen=True)
class MultiIndex:
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"multi-index entries must be 0 or 1, got {self.bits}")

    @classmethod
    def parse(cls, text: str) -> MultiIndex:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"alpha must be a 0/1 string, got {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def m(self) -> int:
        return len(self.bits)

    @property
    def sigma(self) -> int:
        """Number of zero entries."""
        return self.bits.count(0)

    def in_U(self) -> bool:
        return self.sigma > 0

    def prepend_zero(self) -> MultiIndex:
        return MultiIndex((0,) + self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class SymbolSequence:
    """Bounded symbol ``eps`` given sparsely with a default for unlisted intervals."""

    values: Mapping[DyadicInterval, float] = field(default_factory=dict)
    default: float = 1.0

    def __getitem__(self, interval: DyadicInterval) -> float:
        return float(self.values.get(interval, self.default))

    @property
    def sup_norm(self) -> float:
        return max([abs(self.default)] + [abs(v) for v in self.values.values()])

    def dense(self, window: Window) -> tuple[list[np.ndarray], np.ndarray]:
        """Per-level symbol arrays and the ``(A, 2)`` ancestor array, cached per window."""
        cache = self.__dict__.setdefault("_dense_cache", {})
        if window not in cache:
            levels = [np.full(2 << j, float(self.default)) for j in range(window.finest_level + 1)]
            anc = np.full((window.A, 2), float(self.default))
            for interval, v in self.values.items():
                if window.is_in_window(interval):
                    j, i = window.level_index(interval)
                    levels[j][i] = v
                elif window.is_ancestor(interval):
                    anc[-interval.k - window.K - 1, interval.m + 1] = v
            cache[window] = (levels, anc)
        return cache[window]

    def level_array(self, window: Window, j: int) -> np.ndarray:
        return self.dense(window)[0][j]

    def ancestor_array(self, window: Window, a: int) -> np.ndarray:
        return self.dense(window)[1][a - 1]

    @classmethod
    def random_signs(cls, window: Window, rng: np.random.Generator) -> SymbolSequence:
        from .grid import enumerate_intervals
        return cls({I: float(rng.choice((-1.0, 1.0))) for I in enumerate_intervals(window)}, 1.0)


def _check_inputs(fs: Sequence[StepFunction], alpha: MultiIndex) -> Window:
    if len(fs) != alpha.m:
        raise ValueError(f"alpha has {alpha.m} entries but {len(fs)} functions were given")
    window = fs[0].window
    for f in fs[1:]:
        if f.window != window:
            raise GridError("all functions must share one window")
    return window


def slot_value(f: StepFunction, interval: DyadicInterval, bit: int) -> float:
    """``f(I, 0) = <f, h_I>`` and ``f(I, 1) = <f>_I``."""
    if bit == 0:
        return haar_coefficient(f, interval)
    if bit == 1:
        return average(f, interval)
    raise ValueError("bit must be 0 or 1")


def _dyadic_sum(tables: Sequence[HaarTable], bits: Sequence[int], power: int,
                symbol: SymbolSequence | None = None,
                corrupt: bool = False) -> np.ndarray:
    window = tables[0].window
    out = np.zeros(window.n_cells)
    half = window.half_cells
    for a in range(window.A, 0, -1):
        c = np.ones(2)
        for t, bit in zip(tables, bits):
            c = c * (t.ancestor_coefficients[a - 1] if bit == 0 else t.ancestor_averages[a - 1])
        if symbol is not None:
            c = c * symbol.ancestor_array(window, a)
        amp = math.ldexp(1.0, window.K + a) ** -0.5
        # the window's left half lies in the + half of the negative ancestor,
        # its right half in the - half of the positive one
        out[:half] += c[0] * amp ** power
        out[half:] += c[1] * (-amp) ** power
    last = window.finest_level if power == 0 else window.finest_level - 1
    for j in range(last + 1):
        c = np.ones(2 << j)
        for t, bit in zip(tables, bits):
            c = c * (t.coefficients[j] if bit == 0 else t.averages[j])
        if symbol is not None:
            c = c * symbol.level_array(window, j)
        if corrupt and j == last:
            c = c + CORRUPTION * np.roll(c, -1)
        amp = window.level_length(j) ** (-power / 2)
        pattern = level_pattern(window, j, power) * amp
        out.reshape(2 << j, -1)[...] += c[:, None] * pattern[None, :]
    return out


def paraproduct(alpha: MultiIndex, fs: Sequence[StepFunction], *, corrupt: bool = False) -> StepFunction:
    """``P^alpha(f_1, ..., f_m)``; ``alpha`` must have a zero entry."""
    if not alpha.in_U():
        raise ValueError("alpha must lie in U_m (not all ones)")
    window = _check_inputs(fs, alpha)
    tables = [HaarTable(f) for f in fs]
    return StepFunction(window, _dyadic_sum(tables, alpha.bits, alpha.sigma, corrupt=corrupt))


def pi_b(b: StepFunction, alpha: MultiIndex, fs: Sequence[StepFunction], *,
         corrupt: bool = False) -> StepFunction:
    """``pi_b^alpha(f) = P^(0, alpha)(b, f)``; any ``alpha`` is allowed."""
    window = _check_inputs(fs, alpha)
    if b.window != window:
        raise GridError("b must share the window of the inputs")
    tables = [HaarTable(b)] + [HaarTable(f) for f in fs]
    bits = (0,) + alpha.bits
    return StepFunction(window, _dyadic_sum(tables, bits, 1 + alpha.sigma, corrupt=corrupt))


def haar_multiplier(eps: SymbolSequence, alpha: MultiIndex, fs: Sequence[StepFunction], *,
                    corrupt: bool = False) -> StepFunction:
    """``T_eps^alpha(f_1, ..., f_m)``."""
    if not alpha.in_U():
        raise ValueError("alpha must lie in U_m (not all ones)")
    window = _check_inputs(fs, alpha)
    tables = [HaarTable(f) for f in fs]
    return StepFunction(window, _dyadic_sum(tables, alpha.bits, alpha.sigma, eps, corrupt=corrupt))


def multiply_slot(g: StepFunction, i: int, fs: Sequence[StepFunction]) -> list[StepFunction]:
    """Replace slot ``i`` (1-based) by ``g * f_i``."""
    if not 1 <= i <= len(fs):
        raise ValueError(f"slot {i} out of range 1..{len(fs)}")
    out = list(fs)
    out[i - 1] = g * fs[i - 1]
    return out


def commutator(b: StepFunction, eps: SymbolSequence, alpha: MultiIndex, i: int,
               fs: Sequence[StepFunction], *, corrupt: bool = False) -> StepFunction:
    """``[b, T_eps^alpha]_i(f) = b * T(f) - T(f_1, ..., b f_i, ..., f_m)``."""
    first = haar_multiplier(eps, alpha, fs, corrupt=corrupt)
    second = haar_multiplier(eps, alpha, multiply_slot(b, i, fs), corrupt=corrupt)
    return b * first - second
