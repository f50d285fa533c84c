"""Empirical lower bounds for operator-norm ratios by restarts plus hill climbing."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..grid import StepFunction
from ..maximal import multilinear_maximal
from ..norms import lp_norm, weak_lp_norm
from ..operators import commutator
from ..weights import bmo2_haar, multilinear_ap_characteristic, nu_weight
from .checks import TrialInputs, draw_inputs, make_operator
from .config import ExperimentConfig, ratio_of
from .generators import gen_ap_vector, trial_rng, weight_vector_from_fields

SEARCH_STREAM = 1000
OBJECTIVES = ("maximal_strong", "maximal_weak", "operator_strong", "operator_weak",
              "commutator_strong")


def _denominator(inp: TrialInputs) -> float:
    out = 1.0
    for f, w, pj in zip(inp.fs, inp.weights.weights, inp.weights.exponents.p_list):
        out *= lp_norm(f, pj, w)
    return out


def objective_value(name: str, cfg: ExperimentConfig, inp: TrialInputs) -> float:
    """The ratio selected by ``name``; 0 when the denominator vanishes."""
    nu = nu_weight(inp.weights)
    p = inp.weights.exponents.p
    den = _denominator(inp)
    if den == 0:
        return 0.0
    if name in ("maximal_strong", "maximal_weak"):
        out = multilinear_maximal(inp.fs)
    elif name in ("operator_strong", "operator_weak"):
        out = make_operator(cfg.operator_kind, cfg.alpha, inp, slot=cfg.slot)(inp.fs)
    elif name == "commutator_strong":
        out = commutator(inp.b, inp.eps, cfg.alpha, cfg.slot, inp.fs)
        den *= bmo2_haar(inp.b)
    else:
        raise ValueError(f"unknown objective {name!r}; choose from {OBJECTIVES}")
    lhs = weak_lp_norm(out, p, nu) if name.endswith("weak") else lp_norm(out, p, nu)
    return ratio_of(lhs, den)


@dataclass
class SearchResult:
    ratio: float
    witness: TrialInputs
    history: list[float] = field(default_factory=list)
    restarts: list[float] = field(default_factory=list)


def _weights_for(cfg, fields, lam):
    wv = weight_vector_from_fields(fields, lam, cfg.exponents)
    return wv, multilinear_ap_characteristic(wv)


def estimate_ratio_supremum(cfg: ExperimentConfig, objective: str) -> SearchResult:
    """Best ratio over ``cfg.trials`` random restarts, then ``cfg.ascent_steps`` of ascent.

    Ascent perturbs one cell of one slot (or, one step in five, the common
    weight exponent ``lam``) and keeps the move only when the ratio increases
    and the weights stay inside ``cfg.weight_budget``.  The incumbent never
    decreases; ``history`` records it after every step.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; choose from {OBJECTIVES}")
    best, best_inp, restarts = -math.inf, None, []
    for t in range(max(cfg.trials, 1)):
        rng = trial_rng(cfg.seed, SEARCH_STREAM, t)
        inp = draw_inputs(cfg, rng, t)
        wv, char, gen = gen_ap_vector(rng, cfg.window, cfg.exponents, cfg.weight_budget)
        inp.weights = wv
        inp.extras.update(fields=gen["fields"], lam=gen["lam"], ap_characteristic=char)
        r = objective_value(objective, cfg, inp)
        restarts.append(r)
        if r > best:
            best, best_inp = r, inp

    rng = trial_rng(cfg.seed, SEARCH_STREAM, cfg.trials + 1)
    fs = [f.values.copy() for f in best_inp.fs]
    lam = best_inp.extras["lam"]
    fields = best_inp.extras["fields"]
    window = cfg.window
    history = []
    for _ in range(cfg.ascent_steps):
        trial_fs, trial_lam = fs, lam
        if rng.random() < 0.2:
            trial_lam = lam * float(math.exp(rng.normal(0.0, 0.2)))
        else:
            j = int(rng.integers(0, len(fs)))
            c = int(rng.integers(0, window.n_cells))
            scale = max(float(np.abs(fs[j]).max()), 1e-3)
            trial_fs = [v.copy() for v in fs]
            trial_fs[j][c] += float(rng.normal(0.0, 0.5 * scale))
        if trial_lam != lam:
            wv, char = _weights_for(cfg, fields, trial_lam)
            if char > cfg.weight_budget:
                history.append(best)
                continue
        else:
            wv, char = best_inp.weights, best_inp.extras["ap_characteristic"]
        cand = TrialInputs([StepFunction(window, v) for v in trial_fs], best_inp.b, None,
                           best_inp.eps, wv,
                           dict(best_inp.extras, lam=trial_lam, ap_characteristic=char))
        r = objective_value(objective, cfg, cand)
        if r > best:
            best, best_inp, fs, lam = r, cand, trial_fs, trial_lam
        history.append(best)
    witness = TrialInputs(best_inp.fs, best_inp.b, None, best_inp.eps, best_inp.weights,
                          {k: v for k, v in best_inp.extras.items() if k != "fields"})
    return SearchResult(best, witness, history, restarts)
