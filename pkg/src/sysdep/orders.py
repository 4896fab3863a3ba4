"""Stochastic-order checks, the implication audit and orthant dependence.

A grid can only support or refute an order; every verdict carries the grid
size it was checked on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

from ._numerics import subset_masks
from .error_analysis import SIGN_TOL, error_values
from .exceptions import DegenerateError, InvalidParameter, Unsupported
from .models import Baseline, LifetimeModel, validate
from .systems import EvalGrid, Func, Structure, SystemSpec, evaluate


class Relation(enum.Enum):
    ST = "ST"
    FR = "FR"
    RFR = "RFR"
    MRL = "MRL"
    LR = "LR"
    AF = "AF"
    AI = "AI"


def as_relation(value) -> Relation:
    if isinstance(value, Relation):
        return value
    try:
        return Relation(str(value).upper())
    except ValueError:
        raise InvalidParameter("relation", f"expected one of {[r.value for r in Relation]}, got {value!r}") from None


class Direction(enum.Enum):
    A_LEQ_B = "A_leq_B"
    A_GEQ_B = "A_geq_B"
    EQUAL = "Equal"
    CROSSING = "Crossing"


@dataclass(frozen=True)
class OrderVerdict:
    relation: Relation
    direction: Direction
    witnesses: tuple[float, ...] = ()
    grid_size: int = 0

    def to_json(self) -> dict:
        return {"relation": self.relation.value, "direction": self.direction.value,
                "witnesses": [float(w) for w in self.witnesses], "grid_size": self.grid_size}


_POINTWISE = {
    # relation: (function, sign) with d = sign * (g_A - g_B); d <= 0 means A <= B
    Relation.ST: (Func.SF, 1.0),
    Relation.FR: (Func.FR, -1.0),
    Relation.RFR: (Func.RFR, 1.0),
    Relation.MRL: (Func.MRL, 1.0),
    Relation.AI: (Func.AI, -1.0),
}


def _values(spec: SystemSpec, which: Func, t) -> np.ndarray:
    v, _ = evaluate(spec, which, t)
    if np.any(np.isnan(v)):
        bad = np.atleast_1d(t)[np.isnan(v)][0]
        raise DegenerateError(f"{which.value} undefined at t={bad}")
    return v


def _pointwise_diff(spec_a, spec_b, relation, t):
    which, sign = _POINTWISE[relation]
    a, b = _values(spec_a, which, t), _values(spec_b, which, t)
    return sign * (a - b), np.maximum(np.abs(a), np.abs(b))


def _log_density(spec, t):
    with np.errstate(divide="ignore"):
        return np.log(_values(spec, Func.FR, t)) + np.log(_values(spec, Func.SF, t))


def _log_ratio(spec_a, spec_b, relation, t):
    """``log`` of ``f_A/f_B`` (LR) or ``r_A/r_B`` (AF)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if relation is Relation.LR:
            return _log_density(spec_a, t) - _log_density(spec_b, t)
        return np.log(_values(spec_a, Func.FR, t)) - np.log(_values(spec_b, Func.FR, t))


def _classify(d, thr):
    if np.all(np.abs(d) <= thr):
        return Direction.EQUAL
    if np.all(d <= thr):
        return Direction.A_LEQ_B
    if np.all(d >= -thr):
        return Direction.A_GEQ_B
    return Direction.CROSSING


def _refine_crossing(spec_a, spec_b, relation, lo, hi, s_lo, rtol=1e-6):
    for _ in range(200):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        d, _ = _pointwise_diff(spec_a, spec_b, relation, np.array([mid]))
        if np.sign(d[0]) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def compare_order(spec_a: SystemSpec, spec_b: SystemSpec, relation, grid: EvalGrid,
                  tol: float = 1e-9, slack: float = 1e-9) -> OrderVerdict:
    """Check ``A <= B`` / ``A >= B`` in the given order on ``grid``.

    Pointwise orders compare the defining functions with relative tolerance
    ``tol``: ST on SF, FR on the reversed hazard comparison (``A <= B`` iff
    ``r_A >= r_B``), RFR and MRL directly, and AI reversed (``A <= B`` iff
    ``L_A >= L_B``).  LR holds as ``A <= B`` when ``f_A/f_B`` is nonincreasing
    and AF when ``r_A/r_B`` is nondecreasing; ratio steps within ``slack``
    (relative to the log ratio) are treated as flat.

    Returns
    -------
    OrderVerdict
        Crossing verdicts list the sign-change locations (bisected) for
        pointwise orders and the left ends of the violating grid intervals for
        ratio orders.
    """
    relation = as_relation(relation)
    t = grid.t
    if relation in _POINTWISE:
        d, scale = _pointwise_diff(spec_a, spec_b, relation, t)
        thr = tol * np.maximum(scale, np.finfo(float).tiny)
        direction = _classify(d, thr)
        witnesses = []
        if direction is Direction.CROSSING:
            s = np.where(d > thr, 1, np.where(d < -thr, -1, 0))
            idx = np.flatnonzero(s)
            for a, b in zip(idx[:-1], idx[1:]):
                if s[a] != s[b]:
                    witnesses.append(float(_refine_crossing(spec_a, spec_b, relation, t[a], t[b], s[a])))
            if not witnesses:
                witnesses.append(float(t[idx[0]]))
        return OrderVerdict(relation, direction, tuple(witnesses), len(t))
    rho = _log_ratio(spec_a, spec_b, relation, t)
    if not np.all(np.isfinite(rho)):
        raise DegenerateError(f"{relation.value} ratio undefined on the grid")
    step = np.diff(rho)
    # oriented so that a nonpositive value supports A <= B
    d = step if relation is Relation.LR else -step
    thr = slack * np.maximum(1.0, np.maximum(np.abs(rho[1:]), np.abs(rho[:-1])))
    direction = _classify(d, thr)
    witnesses = ()
    if direction is Direction.CROSSING:
        majority = 1 if np.sum(d > thr) >= np.sum(d < -thr) else -1
        witnesses = tuple(float(x) for x in t[:-1][(majority * d) < -thr])
    return OrderVerdict(relation, direction, witnesses, len(t))


def compare_all(spec_a, spec_b, grid, relations: Iterable = tuple(Relation)) -> dict:
    return {as_relation(r): compare_order(spec_a, spec_b, r, grid) for r in relations}


IMPLICATIONS = {
    Relation.LR: (Relation.ST, Relation.FR, Relation.RFR, Relation.MRL),
    Relation.FR: (Relation.ST, Relation.MRL),
    Relation.RFR: (Relation.ST,),
    Relation.AF: (Relation.AI,),
}


@dataclass
class AuditReport:
    consistent: bool
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"consistent": self.consistent,
                "violations": [{"edge": e, "witnesses": list(w)} for e, w in self.violations]}


def _implied(ante: Direction, cons: Direction) -> bool:
    if ante is Direction.CROSSING:
        return True
    if ante is Direction.EQUAL:
        return cons is Direction.EQUAL
    return cons in (ante, Direction.EQUAL)


def audit_implications(verdicts) -> AuditReport:
    """Flag verdict pairs that break LR=>{ST,FR,RFR,MRL}, FR=>{ST,MRL}, RFR=>ST, AF=>AI.

    ``verdicts`` is an iterable of :class:`OrderVerdict` or a mapping of them,
    all for the same ordered pair of systems.
    """
    items = verdicts.values() if isinstance(verdicts, dict) else verdicts
    by_rel = {v.relation: v for v in items}
    violations = []
    for ante, conses in IMPLICATIONS.items():
        if ante not in by_rel:
            continue
        for cons in conses:
            if cons in by_rel and not _implied(by_rel[ante].direction, by_rel[cons].direction):
                violations.append((f"{ante.value}=>{cons.value}", by_rel[cons].witnesses))
    return AuditReport(not violations, violations)


# ---------------------------------------------------------------- dependence

@dataclass
class DependenceLabel:
    """Orthant-dependence classification.

    ``upper`` is PUOD/NUOD/Independent/None from the survival comparison and
    ``lower`` is PLOD/NLOD/Independent/None from the CDF comparison.  ``label``
    is ``upper`` unless that is Independent, in which case ``lower`` is used.
    ``counterexample`` is the point showing why ``label`` is None.
    """

    label: str
    upper: str
    lower: str
    counterexample: Optional[tuple[float, ...]] = None
    n_points: int = 0
    box: tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {"label": self.label, "upper": self.upper, "lower": self.lower,
                "counterexample": None if self.counterexample is None else list(self.counterexample),
                "n_points": self.n_points, "box": list(self.box)}


def _marginal_quantile(model: LifetimeModel, i: int, p_survive: float) -> float:
    target = np.log(p_survive)

    def f(x):
        return float(model.marginal_log_sf(i, np.array([x]))[0]) - target

    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise DegenerateError(f"marginal {i + 1} does not reach survival {p_survive}")
    lo = hi / 2.0
    while f(lo) < 0 and lo > 1e-300:
        lo /= 2.0
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-12)


def sampling_box(model: LifetimeModel, quantile: float = 0.995) -> np.ndarray:
    """Upper edges of the default orthant box: each true marginal's quantile."""
    model = validate(model)
    return np.array([_marginal_quantile(model, i, 1.0 - quantile) for i in range(model.n)])


def default_sample_points(model: LifetimeModel, n_points: int = 256, seed: int = 0) -> np.ndarray:
    box = sampling_box(model)
    u = qmc.LatinHypercube(d=model.n, seed=seed).random(n_points)
    return u * box


def _joint_cdf(model: LifetimeModel, X: np.ndarray) -> np.ndarray:
    """``P(T <= x)`` by inclusion-exclusion over the joint survival function."""
    masks, sizes = subset_masks(model.n)
    T = masks[:, None, :] * X[None, :, :]
    signs = np.where(sizes % 2 == 1, -1.0, 1.0)[:, None]
    return 1.0 + np.sum(signs * np.exp(model.log_joint_sf(T)), axis=0)


def _side(diff, tol, pos, neg):
    if np.all(np.abs(diff) <= tol):
        return "Independent"
    if np.all(diff >= -tol):
        return pos
    if np.all(diff <= tol):
        return neg
    return "None"


def classify_orthant_dependence(model, sample_points=None, tol: float = 1e-10, n_points: int = 256,
                                seed: int = 0) -> DependenceLabel:
    """Compare the joint SF and CDF with the products of the true marginals."""
    model = validate(model)
    box = ()
    if sample_points is None:
        X = default_sample_points(model, n_points, seed)
        box = tuple(float(b) for b in sampling_box(model))
    else:
        X = np.atleast_2d(np.asarray(sample_points, dtype=float))
        if X.shape[1] != model.n or np.any(X < 0):
            raise DegenerateError("sample points must be nonnegative with one column per component")
    log_marg = np.stack([model.marginal_log_sf(i, X[:, i]) for i in range(model.n)], axis=1)
    up_diff = np.exp(model.log_joint_sf(X)) - np.exp(log_marg.sum(axis=1))
    low_diff = _joint_cdf(model, X) - np.prod(-np.expm1(log_marg), axis=1)
    upper = _side(up_diff, tol, "PUOD", "NUOD")
    lower = _side(low_diff, tol, "PLOD", "NLOD")
    label = upper if upper != "Independent" else lower
    counter = None
    if label == "None":
        diff = up_diff if upper == "None" else low_diff
        # point of largest disagreement with the majority sign
        k = np.argmin(diff) if np.sum(diff > tol) >= np.sum(diff < -tol) else np.argmax(diff)
        counter = tuple(float(x) for x in X[k])
    return DependenceLabel(label, upper, lower, counter, len(X), box)


@dataclass
class SignLinkReport:
    passed: bool
    witnesses: list
    checked: int

    def to_json(self) -> dict:
        return {"passed": self.passed, "witnesses": [float(w) for w in self.witnesses], "checked": self.checked}


def check_series_parallel_sign(model, grid: EvalGrid, tol: float = SIGN_TOL) -> SignLinkReport:
    """Two-component sign link: series and parallel SF errors have opposite signs.

    Both errors use the true-marginal baseline; points where either error is
    within ``tol`` of zero are skipped.
    """
    model = validate(model)
    if model.n != 2:
        raise Unsupported(f"sign link is defined for n = 2, got n = {model.n}")
    t = grid.t
    es, _ = error_values(model, Structure.SERIES, Baseline.TRUE_MARGINAL, Func.SF, t)
    ep, _ = error_values(model, Structure.PARALLEL, Baseline.TRUE_MARGINAL, Func.SF, t)
    both = (np.abs(es) > tol) & (np.abs(ep) > tol)
    bad = both & (np.sign(es) == np.sign(ep))
    return SignLinkReport(not bool(bad.any()), [float(x) for x in t[bad]], int(both.sum()))
