"""Command line front end.

    multidyadic haar coeffs f.csv
    multidyadic haar reconstruct coeffs.json --out f.csv
    multidyadic apply --op P --alpha 01 --inputs f.csv,g.csv
    multidyadic weights ap --p 2 w.csv
    multidyadic verify --config configs/localization.json --out report/

Exit codes: 0 success, 1 a hard-constant check failed, 2 usage or input error.
Every subcommand accepts ``--json`` for machine-readable output carrying the
same numbers as the human-readable form.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as fio
from .grid import analyze, reconstruct
from .operators import MultiIndex, SymbolSequence, commutator, haar_multiplier, paraproduct, pi_b
from .weights import (a1_characteristic, ainf_estimate, ap_characteristic, bmo2_haar, bmo_r_norm,
                      multilinear_ap_characteristic)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, human: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def cmd_haar(args) -> int:
    if args.action == "coeffs":
        f = fio.read_step_function(args.file)
        coeffs, avgs = analyze(f)
        doc = fio.coefficients_to_dict(f.window, coeffs, avgs)
        if args.out:
            Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
        lines = [f"# window {json.dumps(f.window.to_dict())}",
                 f"# averages {fio.fmt(avgs[0])} {fio.fmt(avgs[1])}", "k,m,value"]
        lines += [f"{e['k']},{e['m']},{fio.fmt(e['value'])}" for e in doc["coefficients"]]
        _emit(args, "\n".join(lines), doc)
        return EXIT_OK
    try:
        doc = json.loads(Path(args.file).read_text())
    except json.JSONDecodeError as exc:
        raise fio.FormatError(f"{args.file}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    window, coeffs, avgs = fio.coefficients_from_dict(doc)
    f = reconstruct(coeffs, avgs, window)
    return _write_function(args, f)


def _write_function(args, f) -> int:
    if args.out:
        fio.write_step_function(f, args.out)
    if args.json:
        print(json.dumps({"window": f.window.to_dict(), "values": [float(v) for v in f.values]}))
    elif not args.out:
        sys.stdout.write(fio.dumps_step_function(f))
    return EXIT_OK


def cmd_apply(args) -> int:
    try:
        alpha = MultiIndex.parse(args.alpha)
    except ValueError as exc:
        raise UsageError(f"--alpha: {exc}") from None
    paths = [p for p in args.inputs.split(",") if p]
    if len(paths) != alpha.m:
        raise UsageError(f"--alpha has {alpha.m} entries but --inputs lists {len(paths)} files")
    if args.op in ("P", "T", "comm") and not alpha.in_U():
        raise UsageError(f"--alpha {alpha} is all ones; {args.op} needs alpha in U_m")
    if args.op in ("pi", "comm") and not args.b:
        raise UsageError(f"--op {args.op} requires --b")
    fs = [fio.read_step_function(p) for p in paths]
    eps = fio.read_symbol(args.eps) if args.eps else SymbolSequence({}, 1.0)
    if args.op == "P":
        out = paraproduct(alpha, fs)
    elif args.op == "T":
        out = haar_multiplier(eps, alpha, fs)
    else:
        b = fio.read_step_function(args.b)
        if args.op == "pi":
            out = pi_b(b, alpha, fs)
        else:
            if not 1 <= args.slot <= alpha.m:
                raise UsageError(f"--slot must lie in 1..{alpha.m}")
            out = commutator(b, eps, alpha, args.slot, fs)
    return _write_function(args, out)


def cmd_weights(args) -> int:
    what = args.quantity
    where = None
    extra = {}
    if what == "multi-ap":
        value, where = multilinear_ap_characteristic(fio.read_weight_vector(args.file),
                                                     with_interval=True)
    elif what in ("ap", "a1", "ainf"):
        w = fio.read_weight(args.file)
        if what == "ap":
            if args.p is None:
                raise UsageError("weights ap requires --p")
            if not args.p > 1:
                raise UsageError(f"--p must exceed 1, got {args.p:g}")
            value, where = ap_characteristic(w, args.p, with_interval=True)
        elif what == "a1":
            value, where = a1_characteristic(w, with_interval=True)
        else:
            value, p = ainf_estimate(w)
            value, where = ap_characteristic(w, p, with_interval=True)
            extra["p"] = p
    else:
        b = fio.read_step_function(args.file)
        if what == "bmo2":
            value, where = bmo2_haar(b, with_interval=True)
        else:
            r = 1.0 if args.r is None else args.r
            if not r > 0:
                raise UsageError(f"--r must be positive, got {r:g}")
            value, where = bmo_r_norm(b, r, with_interval=True)
    human = f"{fio.fmt(value)}\t{where}"
    if "p" in extra:
        human += f"\tp={fio.fmt(extra['p'])}"
    _emit(args, human, dict(value=value, interval=fio.interval_to_dict(where), **extra))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .harness import ExperimentConfig, run_experiment
    cfg = ExperimentConfig.load(args.config)
    changes = {}
    if args.corrupt:
        changes["corrupt"] = True
    if args.threads is not None:
        changes["threads"] = args.threads
    if changes:
        cfg = cfg.with_(**changes)
    report = run_experiment(cfg, args.out)
    rows = [{"check": c["check"], "pass": c["pass"], "hard": c["hard"],
             "max_ratio": c["max_ratio"], "trials": c["trials"]}
            for c in report.summary["checks"]]
    human = "\n".join(f"{r['check']}\t{'pass' if r['pass'] else 'FAIL'}\t"
                      f"{'hard' if r['hard'] else 'envelope'}\tmax_ratio={fio.fmt(r['max_ratio'])}"
                      f"\ttrials={r['trials']}" for r in rows)
    _emit(args, human, {"checks": rows, "digest": report.summary["digest"]})
    return report.exit_code


def cmd_search(args) -> int:
    from .harness import ExperimentConfig, estimate_ratio_supremum
    from .harness.experiment import _jsonable
    cfg = ExperimentConfig.load(args.config)
    res = estimate_ratio_supremum(cfg, args.objective)
    if args.out:
        out = Path(args.out)
        res.witness.save(out)
        (out / "meta.json").write_text(json.dumps(_jsonable(
            {"objective": args.objective, "ratio": res.ratio, "config": cfg.to_dict(),
             "extras": res.witness.extras}), indent=1, sort_keys=True))
    _emit(args, f"{args.objective}\t{fio.fmt(res.ratio)}",
          {"objective": args.objective, "ratio": res.ratio})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="multidyadic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("haar", parents=[common], help="Haar coefficients and reconstruction")
    p.add_argument("action", choices=("coeffs", "reconstruct"))
    p.add_argument("file", help="step-function CSV (coeffs) or coefficient JSON (reconstruct)")
    p.add_argument("--out", help="also write the result to this file")
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("apply", parents=[common], help="apply a dyadic operator")
    p.add_argument("--op", required=True, choices=("P", "pi", "T", "comm"))
    p.add_argument("--alpha", required=True, help="0/1 string such as 01")
    p.add_argument("--inputs", required=True, help="comma-separated step-function CSVs")
    p.add_argument("--b", help="symbol function CSV for pi and comm")
    p.add_argument("--eps", help="symbol sequence JSON for T and comm (default all ones)")
    p.add_argument("--slot", type=int, default=1, help="commutator slot, 1-based")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("weights", parents=[common], help="weight characteristics and BMO norms")
    p.add_argument("quantity", choices=("ap", "a1", "ainf", "multi-ap", "bmo", "bmo2"))
    p.add_argument("file", help="weight CSV, weight-vector JSON (multi-ap) or function CSV")
    p.add_argument("--p", type=float, help="exponent for ap")
    p.add_argument("--r", type=float, help="power for bmo (default 1)")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("verify", parents=[common], help="run a verification experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="report directory (created if absent)")
    p.add_argument("--corrupt", action="store_true",
                   help="inject a non-local term into every operator (negative control)")
    p.add_argument("--threads", type=int, help="worker threads for trials")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="hill-climb an operator-norm ratio")
    p.add_argument("--config", required=True)
    p.add_argument("--objective", required=True,
                   choices=("maximal_strong", "maximal_weak", "operator_strong",
                            "operator_weak", "commutator_strong"))
    p.add_argument("--out", help="witness directory")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
