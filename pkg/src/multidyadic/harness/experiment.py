"""Run configured checks and write JSON summaries, per-trial CSVs and witnesses."""
from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .. import io as fio
from .checks import (CHECKS, ENVELOPE_EVALUATORS, HARD_EVALUATORS, NOTES, CheckResult,
                     TrialInputs)
from .config import ExperimentConfig, TrialReport

CSV_HEADER = ["trial_id", "lhs", "rhs", "ratio", "pass"]


@dataclass
class ExperimentReport:
    results: list[CheckResult]
    summary: dict
    out_dir: Path | None

    @property
    def hard_failed(self) -> bool:
        return any(r.hard and not r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 1 if self.hard_failed else 0


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    try:
        return float(x)
    except (TypeError, ValueError):
        return str(x)


def write_trials(rows: list[TrialReport], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.trial_id, fio.fmt(r.lhs), fio.fmt(r.rhs), fio.fmt(r.ratio),
                        "true" if r.passed else "false"])


def save_witness(result: CheckResult, cfg: ExperimentConfig, path: Path) -> list[str]:
    files = result.witness.save(path)
    meta = {"check": result.check, "config": cfg.to_dict(),
            "extras": _jsonable(result.witness.extras),
            "values": _jsonable(result.witness_values)}
    (path / "meta.json").write_text(json.dumps(_jsonable(meta), indent=1, sort_keys=True))
    return [str(path / "meta.json")] + files


def evaluate_witness(path) -> tuple[dict, dict]:
    """Reload a witness directory and re-evaluate it; returns ``(recomputed, stored)``."""
    path = Path(path)
    meta = json.loads((path / "meta.json").read_text())
    cfg = ExperimentConfig.from_dict(meta["config"])
    inp = TrialInputs.load(path, 1 if meta["check"] in _SINGLE else cfg.m, meta["extras"])
    name = meta["check"]
    evaluate = HARD_EVALUATORS.get(name) or ENVELOPE_EVALUATORS[name]
    return _jsonable(evaluate(cfg, inp)), meta["values"]


_SINGLE = {"kolmogorov", "bmo_identity", "ap_structure", "truncation", "haar_exactness",
           "fefferman_stein"}


def _summary_entry(res: CheckResult, witness_paths: list[str]) -> dict:
    return _jsonable({"check": res.check, "trials": len(res.trials), "max_ratio": res.max_ratio,
                      "pass": res.passed, "hard": res.hard, "witness_paths": witness_paths,
                      "details": res.details})


def summary_digest(summary: dict) -> str:
    """Digest of the numeric content, independent of output paths."""
    stripped = [{k: v for k, v in c.items() if k != "witness_paths"} for c in summary["checks"]]
    blob = json.dumps(stripped, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def run_experiment(config: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """Run ``config.checks`` in order; exit code 1 iff a hard-constant check fails."""
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    results, entries = [], []
    for name in config.checks:
        res = CHECKS[name](config)
        results.append(res)
        paths: list[str] = []
        if out is not None:
            if res.tables:
                for key, rows in res.tables.items():
                    write_trials(rows, out / f"{name}_{_safe(key)}.csv")
            else:
                write_trials(res.trials, out / f"{name}.csv")
            if res.witness is not None:
                paths = save_witness(res, config, out / "witnesses" / name)
        entries.append(_summary_entry(res, paths))
    summary = {"config": config.to_dict(), "notes": NOTES, "checks": entries}
    summary = _jsonable(summary)
    summary["digest"] = summary_digest(summary)
    if out is not None:
        (out / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return ExperimentReport(results, summary, out)


def _safe(key: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in key)
