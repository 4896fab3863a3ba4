"""CSV/JSON rendering of curves, error curves and empirical curves.

Numbers are written with ``repr`` so output is byte-stable for identical
inputs; NaN becomes an empty CSV cell and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

from .error_analysis import ErrorCurve
from .simulate import EmpiricalCurve
from .systems import FUNCS, CurveSet

CURVE_HEADER = ("t", "sf", "fr", "rfr", "mrl", "ai", "provenance")
ERROR_HEADER = ("t", "e_sf", "e_fr", "e_rfr", "e_mrl", "e_ai")
EMPIRICAL_HEADER = ("t", "estimate", "ci_low", "ci_high")


def _num(x):
    x = float(x)
    return None if math.isnan(x) else x


def _cell(x) -> str:
    if isinstance(x, str):
        return x
    v = _num(x)
    return "" if v is None else repr(v)


def provenance_tag(prov: dict) -> str:
    return "|".join(f"{f.value}:{prov[f].value}" for f in FUNCS)


def curve_records(curves: CurveSet) -> list[dict]:
    tag = provenance_tag(curves.provenance)
    t = curves.t
    return [{"t": float(t[j]), **{f.value: _num(curves.values[f][j]) for f in FUNCS}, "provenance": tag}
            for j in range(len(t))]


def error_records(curve: ErrorCurve) -> list[dict]:
    t = curve.t
    return [{"t": float(t[j]), **{f"e_{f.value}": _num(curve.values[f][j]) for f in FUNCS}} for j in range(len(t))]


def empirical_records(curve: EmpiricalCurve) -> list[dict]:
    t = curve.grid.t
    return [{"t": float(t[j]), "estimate": float(curve.estimate[j]), "ci_low": float(curve.ci_low[j]),
             "ci_high": float(curve.ci_high[j])} for j in range(len(t))]


def to_csv(records: Iterable[dict], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow([_cell(r[h]) if r[h] is not None else "" for h in header])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def curves_csv(curves: CurveSet) -> str:
    return to_csv(curve_records(curves), CURVE_HEADER)


def errors_csv(curve: ErrorCurve) -> str:
    return to_csv(error_records(curve), ERROR_HEADER)


def empirical_csv(curve: EmpiricalCurve) -> str:
    return to_csv(empirical_records(curve), EMPIRICAL_HEADER)


def read_csv(text: str) -> list[dict]:
    """Parse CSV written by this module; empty cells come back as NaN."""
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for r in rows:
        rec = {}
        for k, v in r.items():
            if k == "provenance":
                rec[k] = v
            else:
                rec[k] = float(v) if v != "" else math.nan
        out.append(rec)
    return out
