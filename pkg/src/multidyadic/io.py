"""File formats: step-function CSV, symbol JSON, coefficient JSON, weight vectors.

A step-function CSV starts with a comment line holding the window as JSON,
followed by the header ``cell_index,left_endpoint,value``::

    # {"K": 0, "N": 1, "A": 0}
    cell_index,left_endpoint,value
    0,-1.0,0.0
    ...

Without the comment line the window is inferred from the endpoints (ancestor
depth then defaults to 16).
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Mapping

import numpy as np

from .grid import DyadicInterval, StepFunction, Window
from .operators import SymbolSequence
from .weights import ExponentVector, Weight, WeightVector

HEADER = ["cell_index", "left_endpoint", "value"]


class FormatError(ValueError):
    """Malformed input file; the message names the line."""


def fmt(x: float) -> str:
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def dumps_step_function(f: StepFunction) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(f.window.to_dict()) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for i, (x, v) in enumerate(zip(f.window.left_endpoints(), f.values)):
        writer.writerow([i, fmt(x), fmt(v)])
    return buf.getvalue()


def write_step_function(f: StepFunction, path) -> None:
    Path(path).write_text(dumps_step_function(f))


def loads_step_function(text: str, source: str = "<string>") -> StepFunction:
    lines = text.splitlines()
    window = None
    start = 0
    while start < len(lines) and not lines[start].strip():
        start += 1
    if start < len(lines) and lines[start].lstrip().startswith("#"):
        try:
            window = Window.from_dict(json.loads(lines[start].lstrip()[1:]))
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(f"{source}:{start + 1}: bad window line ({exc})") from None
        start += 1
    rows = [(n + 1, row) for n, row in enumerate(csv.reader(lines[start:]), start=start) if row]
    if rows and [c.strip() for c in rows[0][1]] == HEADER:
        rows = rows[1:]
    elif rows:
        raise FormatError(f"{source}:{rows[0][0]}: expected header {','.join(HEADER)}")
    if not rows:
        raise FormatError(f"{source}: no cells")
    idx, left, vals = [], [], []
    for lineno, row in rows:
        if len(row) != 3:
            raise FormatError(f"{source}:{lineno}: expected 3 fields, got {len(row)}")
        try:
            i, x, v = int(row[0]), float(row[1]), float(row[2])
        except ValueError as exc:
            raise FormatError(f"{source}:{lineno}: {exc}") from None
        if i != len(idx):
            raise FormatError(f"{source}:{lineno}: expected cell_index {len(idx)}, got {i}")
        if not math.isfinite(v):
            raise FormatError(f"{source}:{lineno}: value must be finite")
        idx.append(i)
        left.append(x)
        vals.append(v)
    if window is None:
        window = _infer_window(left, source)
    if len(vals) != window.n_cells:
        raise FormatError(f"{source}: {len(vals)} cells but window {window.to_dict()} needs {window.n_cells}")
    expected = window.left_endpoints()
    bad = np.flatnonzero(np.asarray(left) != expected)
    if bad.size:
        lineno = rows[int(bad[0])][0]
        raise FormatError(f"{source}:{lineno}: left_endpoint {left[bad[0]]} should be {expected[bad[0]]}")
    return StepFunction(window, vals)


def _infer_window(left, source) -> Window:
    if len(left) < 2:
        raise FormatError(f"{source}: cannot infer window from {len(left)} cell(s)")
    K = math.log2(-left[0]) if left[0] < 0 else math.nan
    N = -math.log2(left[1] - left[0]) if left[1] > left[0] else math.nan
    if not (K.is_integer() and N.is_integer()):
        raise FormatError(f"{source}: endpoints do not describe a dyadic window")
    return Window(int(K), int(N))


def read_step_function(path) -> StepFunction:
    path = Path(path)
    return loads_step_function(path.read_text(), str(path))


def read_weight(path) -> Weight:
    f = read_step_function(path)
    return Weight(f.window, f.values)


def interval_to_dict(interval: DyadicInterval) -> dict:
    return {"k": interval.k, "m": interval.m}


def symbol_to_dict(eps: SymbolSequence) -> dict:
    return {"default": eps.default,
            "entries": [{"k": I.k, "m": I.m, "value": v} for I, v in sorted(eps.values.items())]}


def symbol_from_dict(d: Mapping) -> SymbolSequence:
    try:
        entries = {DyadicInterval(int(e["k"]), int(e["m"])): float(e["value"])
                   for e in d.get("entries", [])}
        return SymbolSequence(entries, float(d.get("default", 1.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad symbol: {exc}") from None


def read_symbol(path) -> SymbolSequence:
    return symbol_from_dict(json.loads(Path(path).read_text()))


def coefficients_to_dict(window: Window, coeffs: Mapping[DyadicInterval, float],
                         averages) -> dict:
    return {"window": window.to_dict(),
            "averages": [float(a) for a in averages],
            "coefficients": [{"k": I.k, "m": I.m, "value": float(v)}
                             for I, v in sorted(coeffs.items())]}


def coefficients_from_dict(d: Mapping):
    try:
        window = Window.from_dict(d["window"])
        coeffs = {DyadicInterval(int(e["k"]), int(e["m"])): float(e["value"])
                  for e in d["coefficients"]}
        return window, coeffs, tuple(float(a) for a in d["averages"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad coefficient file: {exc}") from None


def read_weight_vector(path) -> WeightVector:
    path = Path(path)
    d = json.loads(path.read_text())
    try:
        exps = ExponentVector(tuple(d["exponents"]))
        files = d["weight_files"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: missing field {exc}") from None
    weights = tuple(read_weight(path.parent / f) for f in files)
    return WeightVector(weights, exps)
