"""Seeded verification harness for the dyadic inequalities."""
from .checks import CHECKS, CheckResult, TrialInputs, make_operator
from .config import ConfigError, ExperimentConfig, TrialReport
from .experiment import ExperimentReport, evaluate_witness, run_experiment
from .generators import (gen_ap_vector, gen_ap_weight, gen_step_function, gen_symbol,
                         trial_rng)
from .search import OBJECTIVES, SearchResult, estimate_ratio_supremum

__all__ = [
    "CHECKS", "CheckResult", "ConfigError", "ExperimentConfig", "ExperimentReport",
    "OBJECTIVES", "SearchResult", "TrialInputs", "TrialReport", "estimate_ratio_supremum",
    "evaluate_witness", "gen_ap_vector", "gen_ap_weight", "gen_step_function", "gen_symbol",
    "make_operator", "run_experiment", "trial_rng",
]
