"""Seeded random inputs: step functions, symbols and weights with a budget."""
from __future__ import annotations

import hashlib
import math

import numpy as np

from ..grid import StepFunction, Window, reconstruct
from ..operators import SymbolSequence
from ..weights import (ExponentVector, Weight, WeightVector, ap_characteristic,
                       multilinear_ap_characteristic)

PROFILES = ("haar_series", "indicator_sum", "two_level")
BISECTION_STEPS = 64


def trial_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for one trial; depends only on the master seed and stream ids."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_step_function(seed, window: Window, profile: str = "haar_series", *,
                      amplitude: float = 1.0, bound: float = 8.0) -> StepFunction:
    """A random bounded step function supported in ``window``.

    ``haar_series`` draws ``a_I`` uniformly with ``|a_I| <= amplitude * sqrt(|I|)``
    for every in-window ``I`` plus the two half-window averages, so every
    level adds at most ``amplitude`` in sup norm.  Values are clipped to
    ``[-bound, bound]``.
    """
    rng = _rng(seed)
    if profile == "haar_series":
        coeffs = {}
        for j in range(window.finest_level):
            scale = amplitude * math.sqrt(window.level_length(j))
            draws = rng.uniform(-1.0, 1.0, 2 << j) * scale
            coeffs.update({window.interval_at(j, i): float(a) for i, a in enumerate(draws)})
        avgs = rng.uniform(-1.0, 1.0, 2) * amplitude
        values = reconstruct(coeffs, avgs, window).values
    elif profile == "indicator_sum":
        values = np.zeros(window.n_cells)
        for _ in range(int(rng.integers(1, 6))):
            j = int(rng.integers(0, window.finest_level + 1))
            i = int(rng.integers(0, 2 << j))
            B = window.level_block(j)
            values[i * B:(i + 1) * B] += amplitude * int(rng.choice([-3, -2, -1, 1, 2, 3]))
    elif profile == "two_level":
        lo, hi = rng.uniform(-2.0, 2.0, 2) * amplitude
        values = np.where(rng.random(window.n_cells) < rng.uniform(0.1, 0.9), hi, lo)
    else:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    return StepFunction(window, np.clip(values, -bound, bound))


def gen_symbol(seed, window: Window, kind: str = "random_signs") -> SymbolSequence:
    rng = _rng(seed)
    if kind == "ones":
        return SymbolSequence({}, 1.0)
    if kind == "random_signs":
        return SymbolSequence.random_signs(window, rng)
    if kind == "random_bounded":
        s = SymbolSequence.random_signs(window, rng)
        return SymbolSequence({I: v * float(rng.uniform(0.0, 1.0)) for I, v in s.values.items()}, 1.0)
    raise ValueError(f"unknown symbol kind {kind!r}")


def _exponent_field(seed, window: Window) -> np.ndarray:
    g = gen_step_function(seed, window, "haar_series").values
    peak = np.abs(g).max()
    return g / peak if peak > 0 else g


def _bisect(char, lam_hi: float, budget: float, rel: float = 1e-6) -> float:
    """Largest feasible exponent found by bisection on ``[0, lam_hi]``."""
    if char(lam_hi) <= budget:
        return lam_hi
    lo, hi = 0.0, lam_hi
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if char(mid) <= budget:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel * lam_hi:
            break
    return lo


def gen_ap_weight(seed, window: Window, p: float, budget: float, *,
                  lam_max: float = 4.0) -> tuple[Weight, float]:
    """``w = exp(lam * g)`` with ``[w]_{A_p} <= budget``; returns ``(w, [w]_{A_p})``.

    ``g`` is a random Haar series scaled to sup norm 1 and ``lam`` starts from a
    uniform draw in ``[0, lam_max]``, shrunk by bisection while the budget is
    exceeded.
    """
    if not p > 1:
        raise ValueError("p must exceed 1")
    if budget < 1:
        raise ValueError("budget infeasible: every A_p characteristic is at least 1")
    rng = _rng(seed)
    g = _exponent_field(rng, window)
    lam0 = float(rng.uniform(0.0, lam_max))

    def char(lam):
        return ap_characteristic(Weight(window, np.exp(lam * g)), p)

    lam = _bisect(char, lam0, budget)
    w = Weight(window, np.exp(lam * g))
    value = ap_characteristic(w, p)
    if value > budget * (1 + 1e-12):
        raise ValueError("budget infeasible")
    return w, value


def weight_vector_from_fields(fields, lam: float, exponents: ExponentVector) -> WeightVector:
    return WeightVector(tuple(Weight(g.window, np.exp(lam * g.values)) for g in fields), exponents)


def gen_ap_vector(seed, window: Window, exponents: ExponentVector, budget: float, *,
                  lam_max: float = 4.0) -> tuple[WeightVector, float, dict]:
    """Weights ``w_j = exp(lam * g_j)`` sharing one ``lam`` with ``[w]_{A_P} <= budget``.

    Returns the vector, its multilinear characteristic, and the generating
    fields and exponent (so callers can perturb ``lam``).
    """
    if budget < 1:
        raise ValueError("budget infeasible: every A_P characteristic is at least 1")
    rng = _rng(seed)
    fields = [StepFunction(window, _exponent_field(rng, window)) for _ in range(exponents.m)]
    lam0 = float(rng.uniform(0.0, lam_max))

    def char(lam):
        return multilinear_ap_characteristic(weight_vector_from_fields(fields, lam, exponents))

    lam = _bisect(char, lam0, budget)
    wv = weight_vector_from_fields(fields, lam, exponents)
    return wv, multilinear_ap_characteristic(wv), {"fields": fields, "lam": lam}


def refine_vector(wv: WeightVector, N: int) -> WeightVector:
    return WeightVector(tuple(Weight.of(w.refine(N)) for w in wv.weights), wv.exponents)


def digest(f: StepFunction) -> str:
    return hashlib.sha256(np.ascontiguousarray(f.values).tobytes()).hexdigest()[:16]
