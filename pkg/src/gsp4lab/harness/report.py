"""Deterministic JSON reports."""
from __future__ import annotations

import json
import math
from typing import Any, Iterable

from .. import __version__


def _clean(v: Any) -> Any:
    # JSON has no inf/nan; report them as strings so output stays valid
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return _clean(v.item())
    return v


def result(name: str, value, reference=None, abs_err=None, std_err=None) -> dict:
    return {"name": name, "value": value, "reference": reference, "abs_err": abs_err, "std_err": std_err}


def make_report(command: str, inputs: dict, seed: int | None, results: Iterable[dict]) -> dict:
    rows = [result(r["name"], r.get("value"), r.get("reference"), r.get("abs_err"), r.get("std_err"))
            for r in results]
    return {"command": command, "inputs": inputs, "seed": seed, "results": rows, "version": __version__}


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"
