"""Reference experiment suites with fixed seeds.

The envelope suites are the ones whose measured constants are committed as
golden values; ``envelope_values`` extracts the numbers that must reproduce
bit for bit.
"""
from __future__ import annotations

from ..grid import Window
from ..operators import MultiIndex
from ..weights import ExponentVector
from .checks import CHECKS
from .config import ExperimentConfig

RESOLUTIONS = (6, 8, 10)
EXPONENT_VECTORS = ((2.0, 2.0), (3.0, 3.0), (2.0, 4.0))


def _cfg(**kw) -> ExperimentConfig:
    alpha = MultiIndex.parse(kw.pop("alpha"))
    kw.setdefault("exponents", ExponentVector((2.0,) * alpha.m))
    if isinstance(kw["exponents"], tuple):
        kw["exponents"] = ExponentVector(kw["exponents"])
    return ExperimentConfig(alpha=alpha, m=alpha.m, **kw)


def localization_suite(trials: int = 84) -> dict[str, ExperimentConfig]:
    out = {}
    for kind, alphas in (("paraproduct", ("01", "010")), ("pi_b", ("11", "011")),
                         ("haar_multiplier", ("10", "001"))):
        for seed, a in enumerate(alphas):
            out[f"localization/{kind}/{a}"] = _cfg(
                alpha=a, operator_kind=kind, seed=seed, trials=trials,
                window=Window(1, 6, 16), delta=0.5 / len(a), checks=("localization",),
                profile="mixed")
    return out


def outside_support_suite(trials: int = 200) -> dict[str, ExperimentConfig]:
    return {f"outside_support/{a}": _cfg(alpha=a, trials=trials, window=Window(2, 5, 16),
                                         support_shift=1, tolerance=1e-9, profile="mixed",
                                         checks=("outside_support",))
            for a in ("01", "00", "10")}


def sharp_domination_suite(trials: int = 100) -> dict[str, ExperimentConfig]:
    out = {}
    cases = (("paraproduct", ("01", "10", "00", "011")),
             ("pi_b", ("01", "11", "00")),
             ("haar_multiplier", ("01", "10", "00")))
    for kind, alphas in cases:
        for a in alphas:
            out[f"sharp_domination/{kind}/{a}"] = _cfg(
                alpha=a, operator_kind=kind, trials=trials, window=Window(1, 6, 16),
                delta=1.0 / (2 * len(a)), resolutions=RESOLUTIONS,
                checks=("sharp_domination",), profile="mixed")
    return out


def weighted_suite(trials: int = 100) -> dict[str, ExperimentConfig]:
    out = {}
    for P in EXPONENT_VECTORS:
        tag = ",".join(f"{p:g}" for p in P)
        for kind in ("paraproduct", "pi_b", "haar_multiplier"):
            out[f"weighted_theorem/{kind}/{tag}"] = _cfg(
                alpha="01", operator_kind=kind, exponents=P, trials=trials,
                window=Window(1, 6, 16), weight_budget=4.0, resolutions=RESOLUTIONS,
                checks=("weighted_theorem",))
        out[f"commutator_theorem/{tag}"] = _cfg(
            alpha="01", operator_kind="commutator", exponents=P, trials=trials,
            window=Window(1, 6, 16), weight_budget=4.0, resolutions=RESOLUTIONS,
            checks=("commutator_theorem",))
    return out


def maximal_suite(trials: int = 100) -> dict[str, ExperimentConfig]:
    return {f"maximal_weighted/{','.join(f'{p:g}' for p in P)}": _cfg(
                alpha="01", exponents=P, trials=trials, window=Window(1, 6, 16),
                weight_budget=4.0, resolutions=RESOLUTIONS, checks=("maximal_weighted",))
            for P in EXPONENT_VECTORS}


def contraction_config(trials: int = 100) -> ExperimentConfig:
    """One slot, unit symbol, unit weight, ``p = 2``: an orthogonal projection."""
    return _cfg(alpha="0", operator_kind="haar_multiplier", symbol="ones", exponents=(2.0,),
                weight_budget=1.0, delta=0.5, trials=trials, window=Window(1, 6, 16),
                resolutions=RESOLUTIONS, checks=("weighted_theorem",))


def envelope_suites(trials: int = 100) -> dict[str, ExperimentConfig]:
    out = {}
    for suite in (sharp_domination_suite, weighted_suite, maximal_suite):
        out.update(suite(trials))
    return out


def envelope_values(cfg: ExperimentConfig) -> dict:
    """The committed numbers for one envelope configuration."""
    (name,) = cfg.checks
    res = CHECKS[name](cfg)
    return {"max_ratio": res.max_ratio, "pass": res.passed, "envelope": res.details["envelope"]}
