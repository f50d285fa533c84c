"""Experiment configuration and per-trial report records."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..grid import Window
from ..operators import MultiIndex, SymbolSequence
from ..weights import ExponentVector

OPERATOR_KINDS = ("paraproduct", "pi_b", "haar_multiplier", "commutator")
R_GRID = (1.01, 1.05, 1.1, 1.25, 1.5)


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    seed: int = 0
    trials: int = 100
    m: int = 2
    alpha: MultiIndex = field(default_factory=lambda: MultiIndex((0, 1)))
    operator_kind: str = "paraproduct"
    window: Window = field(default_factory=lambda: Window(1, 6, 16))
    exponents: ExponentVector = field(default_factory=lambda: ExponentVector((2.0, 2.0)))
    delta: float = 0.25
    gamma: float | None = None
    r: float = 1.25
    weight_budget: float = 4.0
    tolerance: float = 1e-10
    checks: tuple[str, ...] = ()
    resolutions: tuple[int, ...] = ()
    slot: int = 1
    symbol: Any = "random_signs"
    profile: str = "haar_series"
    support_shift: int = 1
    corrupt: bool = False
    threads: int = 1
    ascent_steps: int = 200

    def __post_init__(self):
        if self.gamma is None:
            self.gamma = min(2 * self.delta, (self.delta + 1.0 / self.m) / 2)
        if not self.resolutions:
            self.resolutions = (self.window.N,)
        self.resolutions = tuple(int(n) for n in self.resolutions)
        self.checks = tuple(self.checks)
        self.validate()

    def validate(self) -> None:
        if self.trials < 0:
            raise ConfigError("trials", "must be >= 0")
        if self.m < 1:
            raise ConfigError("m", "must be >= 1")
        if self.alpha.m != self.m:
            raise ConfigError("alpha", f"has {self.alpha.m} entries, expected m = {self.m}")
        if self.operator_kind not in OPERATOR_KINDS:
            raise ConfigError("operator_kind", f"must be one of {OPERATOR_KINDS}")
        if self.operator_kind != "pi_b" and not self.alpha.in_U():
            raise ConfigError("alpha", "must lie in U_m (not all ones) for this operator")
        if self.exponents.m != self.m:
            raise ConfigError("exponents", f"need {self.m} exponents")
        if not 0 < self.delta < 1.0 / self.m:
            raise ConfigError("delta", f"must lie in (0, 1/m) = (0, {1.0 / self.m:g})")
        if not self.gamma > self.delta:
            raise ConfigError("gamma", "must exceed delta")
        if not self.r > 0:
            raise ConfigError("r", "must be positive")
        if self.weight_budget < 1:
            raise ConfigError("weight_budget", "must be >= 1")
        if self.tolerance < 0:
            raise ConfigError("tolerance", "must be >= 0")
        if not 1 <= self.slot <= self.m:
            raise ConfigError("slot", f"must lie in 1..{self.m}")
        if any(n < self.window.N for n in self.resolutions):
            raise ConfigError("resolutions", "must not be coarser than window.N")
        if not 1 <= self.support_shift <= self.window.K + self.window.N:
            raise ConfigError("support_shift", "must leave room for an inner sub-window")
        if self.threads < 1:
            raise ConfigError("threads", "must be >= 1")
        from .checks import CHECKS
        for name in self.checks:
            if name not in CHECKS:
                raise ConfigError("checks", f"unknown check {name!r}")

    def with_(self, **changes) -> ExperimentConfig:
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(changes)
        if "m" in changes and "gamma" not in changes:
            d["gamma"] = None
        return ExperimentConfig(**d)

    def to_dict(self) -> dict:
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d["alpha"] = str(self.alpha)
        d["window"] = self.window.to_dict()
        d["exponents"] = list(self.exponents.p_list)
        d["checks"] = list(self.checks)
        d["resolutions"] = list(self.resolutions)
        if isinstance(self.symbol, SymbolSequence):
            from ..io import symbol_to_dict
            d["symbol"] = symbol_to_dict(self.symbol)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> ExperimentConfig:
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        kw = dict(d)
        try:
            if "alpha" in kw:
                kw["alpha"] = (MultiIndex.parse(kw["alpha"]) if isinstance(kw["alpha"], str)
                               else MultiIndex(tuple(kw["alpha"])))
        except (ValueError, TypeError) as exc:
            raise ConfigError("alpha", str(exc)) from None
        try:
            if "window" in kw:
                kw["window"] = Window.from_dict(kw["window"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError("window", str(exc)) from None
        try:
            if "exponents" in kw:
                kw["exponents"] = ExponentVector(tuple(kw["exponents"]))
        except (ValueError, TypeError) as exc:
            raise ConfigError("exponents", str(exc)) from None
        if isinstance(kw.get("symbol"), Mapping):
            from ..io import symbol_from_dict
            try:
                kw["symbol"] = symbol_from_dict(kw["symbol"])
            except ValueError as exc:
                raise ConfigError("symbol", str(exc)) from None
        for name, typ in (("seed", int), ("trials", int), ("m", int), ("slot", int),
                          ("support_shift", int), ("threads", int), ("ascent_steps", int),
                          ("delta", float), ("r", float), ("weight_budget", float),
                          ("tolerance", float)):
            if name in kw:
                try:
                    kw[name] = typ(kw[name])
                except (TypeError, ValueError):
                    raise ConfigError(name, f"expected {typ.__name__}") from None
        if kw.get("gamma") is not None:
            kw["gamma"] = float(kw["gamma"])
        if "alpha" in kw and "m" not in kw:
            kw["m"] = kw["alpha"].m
        return cls(**kw)

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        try:
            d = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON ({exc})") from None
        if not isinstance(d, Mapping):
            raise ConfigError("config", "top level must be an object")
        return cls.from_dict(d)


@dataclass
class TrialReport:
    trial_id: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    witness_cell: int | str | None = None
    input_digests: tuple[str, ...] = ()

    def row(self) -> list:
        return [self.trial_id, self.lhs, self.rhs, self.ratio, self.passed]


def ratio_of(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf
