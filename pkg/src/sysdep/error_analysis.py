"""Relative error from wrongly assuming independent components.

For a function ``g`` of the system lifetime the error is
``E_g = g_dependent / g_independent - 1``; positive values are
under-assessment (UA) and negative values over-assessment (OA).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import closed_forms as cf
from ._numerics import log_expm1, rel_dev
from .exceptions import DegenerateError
from .models import FGMW, LB1, MG1, MOME, MOMW, Crowder, Lee, LifetimeModel, Baseline, validate
from .systems import FUNCS, EvalGrid, Func, Provenance, Structure, SystemSpec, _enum, evaluate

SIGN_TOL = 1e-12


@dataclass
class ErrorCurve:
    """Relative errors of all five functions on a grid.

    Undefined entries (baseline value 0 or NaN) are NaN.  ``model``,
    ``structure`` and ``baseline`` are kept so sign changes can be refined.
    """

    grid: EvalGrid
    values: dict
    provenance: dict
    model: Optional[LifetimeModel] = None
    structure: Structure = Structure.SERIES
    baseline: Baseline = Baseline.PAPER_LITERAL

    def __getitem__(self, which) -> np.ndarray:
        return self.values[_enum(Func, which)]

    @property
    def t(self):
        return self.grid.t

    def usable_range(self) -> Optional[tuple[float, float]]:
        """Smallest and largest grid times where every error is defined."""
        ok = np.ones(len(self.grid), dtype=bool)
        for f in FUNCS:
            ok &= np.isfinite(self.values[f])
        if not ok.any():
            return None
        t = self.t[ok]
        return float(t[0]), float(t[-1])


def _ratio_minus_one(dep, ind):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = dep / ind - 1.0
    return np.where(np.isfinite(out) & (ind != 0), out, np.nan)


def error_values(model, structure, baseline, which, t, method: str = "auto"):
    """Relative error of one function at the times ``t``; NaN where undefined."""
    model = validate(model)
    which = _enum(Func, which)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    dep = SystemSpec.dependent(model, structure)
    ind = SystemSpec.independent(model, structure, baseline)
    vd, pd = evaluate(dep, which, t, method)
    vi, pi = evaluate(ind, which, t, method)
    if which is Func.SF:
        with np.errstate(divide="ignore", invalid="ignore"):
            e = np.expm1(np.log(vd) - np.log(vi))
        e = np.where((vi > 0) & np.isfinite(e), e, np.nan)
    else:
        e = _ratio_minus_one(vd, vi)
    prov = Provenance.CLOSED_FORM if pd is pi is Provenance.CLOSED_FORM else Provenance.NUMERIC
    return e, prov


def relative_error_curve(model, structure, baseline, grid: EvalGrid, method: str = "auto") -> ErrorCurve:
    """Errors of SF, FR, RFR, MRL and AI between the dependent system and its baseline."""
    model = validate(model)
    structure = _enum(Structure, structure)
    baseline = _enum(Baseline, baseline)
    values, prov = {}, {}
    for f in FUNCS:
        values[f], prov[f] = error_values(model, structure, baseline, f, grid.t, method)
    return ErrorCurve(grid, values, prov, model, structure, baseline)


# ------------------------------------------------------------ closed forms

def _shock_errors(which: Func, lam_dep: float, lam_ind: float, x):
    """Errors for a dependent aggregate rate ``lam_dep`` against ``lam_ind``
    on a common time scale ``x`` (``t`` for exponential, ``t**alpha`` for Lee)."""
    if which is Func.SF:
        return np.expm1(-x * (lam_dep - lam_ind))
    if which is Func.FR:
        return np.full_like(x, lam_dep / lam_ind - 1.0)
    if which is Func.RFR:
        return (lam_dep / lam_ind) * np.exp(log_expm1(lam_ind * x) - log_expm1(lam_dep * x)) - 1.0
    if which is Func.AI:
        return np.zeros_like(x)
    return None


def _mome_series(m: MOME, which, t):
    return _shock_errors(which, m.rates.aggregate(), float(m.rates.singletons().sum()), t)


def _lee_series(m: Lee, which, t):
    lam_ind = float(np.sum(m.rates.singletons() * np.array(m.scales) ** m.alpha))
    return _shock_errors(which, m.lambda_L, lam_ind, t**m.alpha)


def _mg1_series(m: MG1, which, t):
    a = cf.mg1_coefficients(m)
    k = np.arange(1, m.n + 1)
    tk = t[:, None] ** k
    theta = tk @ a
    dtheta = (t[:, None] ** (k - 1)) @ (k * a)
    if which is Func.SF:
        return np.expm1(-(theta - a[0] * t))
    if which is Func.FR:
        return (dtheta - a[0]) / a[0]
    if which is Func.RFR:
        return (dtheta / a[0]) * np.exp(log_expm1(a[0] * t) - log_expm1(theta)) - 1.0
    if which is Func.AI:
        return (tk @ ((k - 1) * a)) / theta
    return None


def _momw_interactions(m: MOMW, t):
    """``B(t)``, ``B'(t)``: the shocks hitting two or more components."""
    B = np.zeros_like(t)
    dB = np.zeros_like(t)
    for idx, rate in m.rates.positive_entries():
        if len(idx) < 2:
            continue
        a = np.where(t >= 1.0, m.alpha[idx].max(), m.alpha[idx].min())
        B += rate * t**a
        dB += rate * a * t ** (a - 1)
    return B, dB


def _momw_series(m: MOMW, which, t):
    lam = m.rates.singletons()
    x = lam * t[:, None] ** m.alpha
    h = lam * m.alpha * t[:, None] ** (m.alpha - 1)
    a, da = x.sum(axis=1), h.sum(axis=1)
    B, dB = _momw_interactions(m, t)
    if which is Func.SF:
        return np.expm1(-B)
    if which is Func.FR:
        return dB / da
    if which is Func.RFR:
        return ((da + dB) / da) * np.exp(log_expm1(a) - log_expm1(a + B)) - 1.0
    if which is Func.AI:
        return (da + dB) * a / (da * (a + B)) - 1.0
    return None


def _crowder_series(m: Crowder, which, t):
    x = np.array(m.lambdas) * t[:, None] ** np.array(m.alphas)
    s = x.sum(axis=1)
    H = m.cumulative(s)
    g = m.l * (m.gamma + s) ** (m.l - 1.0)
    if which is Func.SF:
        return np.expm1(s - H)
    if which is Func.FR:
        return g - 1.0
    if which is Func.RFR:
        return g * np.exp(log_expm1(s) - log_expm1(H)) - 1.0
    if which is Func.AI:
        return g * s / H - 1.0
    return None


def _lb1_series(m: LB1, which, t):
    a, da, b, db = cf.lb1_terms(m, t)
    d = m.delta
    if which is Func.SF:
        return np.expm1(-d * b)
    if which is Func.FR:
        return d * db / da
    if which is Func.RFR:
        return (1.0 + d * db / da) * np.exp(log_expm1(a) - log_expm1(a + d * b)) - 1.0
    if which is Func.AI:
        return d * (db / da - b / a) / (1.0 + d * b / a)
    return None


def lb1_ai_error_as_printed(m: LB1, t):
    """Variant LB-I aging-intensity error with a constant ``-2`` offset,
    ``delta (B'/A' + B/A - 2) / (1 - delta B/A)`` with ``A = -a``, ``B = b``.

    Not a valid error expression; kept so tests can show how far it is from
    ``L_D / L_I - 1``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    a, da, b, db = cf.lb1_terms(validate(m), t)
    A, dA = -a, -da
    return m.delta * (db / dA + b / A - 2.0) / (1.0 - m.delta * b / A)


def _fgmw_series(m: FGMW, which, t):
    x, h, log_q, mu_sum = cf.fgmw_terms(m, t)
    q = np.exp(log_q)
    if which is Func.SF:
        return m.gamma * q
    if which is Func.FR:
        phi = 1.0 + m.gamma * q
        dphi = m.gamma * q * mu_sum
        return dphi / (phi * -h.sum(axis=1))
    return None


def _fgmw_parallel(m: FGMW, which, t):
    x, h, log_q, mu_sum = cf.fgmw_terms(m, t)
    q = np.exp(log_q)
    theta = -np.expm1(log_q)
    c = (1.0 if m.n % 2 == 1 else -1.0) * m.gamma * np.exp(-x.sum(axis=1))
    dA = -h.sum(axis=1)
    dtheta = -q * mu_sum
    if which is Func.SF:
        return c * q / theta
    if which is Func.FR:
        return c * (dA * theta * q - dtheta) / (dtheta * (theta + c * q))
    if which is Func.RFR:
        return c * dA * q / (dtheta * (1.0 - c))
    return None


def _alternating_sf_error(model, E_dep, t):
    """Parallel SF error ``sum_I (-1)**(|I|-1) [exp(-E_I) - exp(-t sum_{i in I} lambda_i)] / SF_I``."""
    from ._numerics import subset_masks

    masks, sizes = subset_masks(model.n)
    lam = model.rates.singletons()
    E_ind = (masks.astype(float) @ lam)[:, None] * t[None, :]
    signs = np.where(sizes % 2 == 1, 1.0, -1.0)[:, None]
    num = np.sum(signs * (np.exp(-E_dep) - np.exp(-E_ind)), axis=0)
    log_cdf_ind = np.sum(np.log(-np.expm1(-lam[None, :] * t[:, None])), axis=1)
    return num / -np.expm1(log_cdf_ind)


def _mome_parallel(m: MOME, which, t):
    if which is not Func.SF:
        return None
    A = cf.mome_parallel_coefficients(m)
    return _alternating_sf_error(m, A[:, None] * t[None, :], t)


def _mg1_parallel(m: MG1, which, t):
    if which is not Func.SF:
        return None
    C = cf.mg1_parallel_coefficients(m)
    k = np.arange(1, m.n + 1)
    return _alternating_sf_error(m, C @ (t[None, :] ** k[:, None]), t)


_SERIES = {"MOME": _mome_series, "MG1": _mg1_series, "MOMW": _momw_series, "Crowder": _crowder_series,
           "Lee": _lee_series, "LB1": _lb1_series, "FGMW": _fgmw_series}
_PARALLEL = {"MOME": _mome_parallel, "MG1": _mg1_parallel, "FGMW": _fgmw_parallel}


def closed_form_error(model, which, t, structure="series", baseline=Baseline.PAPER_LITERAL):
    """Analytic relative error, or ``None`` when no formula exists.

    The formulas compare against the singleton-rate (paper-literal) baseline;
    for another baseline they are returned only when both baselines coincide.
    """
    model = validate(model)
    which = _enum(Func, which)
    structure = _enum(Structure, structure)
    baseline = _enum(Baseline, baseline)
    table = _SERIES if structure is Structure.SERIES else _PARALLEL
    fn = table.get(model.family)
    if fn is None:
        return None
    if baseline is not Baseline.PAPER_LITERAL and model.paper_literal() != model.true_marginal():
        return None
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = fn(model, which, t_arr)
    if out is None:
        return None
    return float(out[0]) if np.ndim(t) == 0 else out


def closed_form_pairs() -> list[tuple[str, str, str]]:
    """``(family, structure, function)`` triples that have analytic errors."""
    from .models import example, from_dict

    out = []
    for structure, table in (("series", _SERIES), ("parallel", _PARALLEL)):
        for fam in table:
            m = from_dict(example(fam))
            for f in FUNCS:
                if closed_form_error(m, f, 1.0, structure) is not None:
                    out.append((fam, structure, f.value))
    return out


# -------------------------------------------------------------- assessment

class Label(enum.Enum):
    OA = "OA"
    UA = "UA"
    ZERO = "zero"
    MIXED = "Mixed"
    UNDEFINED = "undefined"


@dataclass
class AssessmentReport:
    labels: dict
    sign_changes: dict
    bounds: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "labels": {f.value: lab.value for f, lab in self.labels.items()},
            "sign_changes": {f.value: [float(x) for x in v] for f, v in self.sign_changes.items()},
            "bounds": [{"name": n, "satisfied": bool(ok)} for n, ok in self.bounds],
        }

    def bound(self, name: str) -> bool:
        return dict(self.bounds)[name]


def _signs(e, tol):
    return np.where(e >= tol, 1, np.where(e <= -tol, -1, 0))


def _bisect_change(curve: ErrorCurve, which: Func, lo: float, hi: float, s_lo: int, rtol=1e-6) -> float:
    for _ in range(200):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        v = error_values(curve.model, curve.structure, curve.baseline, which, mid)[0][0]
        if np.isnan(v) or np.sign(v) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_changes(curve: ErrorCurve, which: Func, tol: float) -> list[float]:
    e = curve.values[which]
    t = curve.t
    s = _signs(e, tol)
    idx = np.flatnonzero((s != 0) & np.isfinite(e))
    out = []
    for a, b in zip(idx[:-1], idx[1:]):
        if s[a] != s[b]:
            if curve.model is not None:
                out.append(float(_bisect_change(curve, which, t[a], t[b], s[a])))
            else:
                out.append(float(0.5 * (t[a] + t[b])))
    return out


def assess_signs(curve: ErrorCurve, tol: float = SIGN_TOL) -> AssessmentReport:
    """Label each error OA, UA, zero or Mixed and run the bound checks.

    Entries with ``|E| < tol`` count as zero and do not break an OA or UA
    label.  Bound checks always include ``E_sf >= -1`` and, for series systems,
    the hazard-prefix rule: on any grid prefix where ``E_fr <= 0`` (``>= 0``)
    the survival error is ``>= 0`` (``<= 0``).
    """
    labels, changes = {}, {}
    for f in FUNCS:
        e = curve.values[f]
        fin = e[np.isfinite(e)]
        if fin.size == 0:
            labels[f], changes[f] = Label.UNDEFINED, []
            continue
        s = _signs(fin, tol)
        changes[f] = _sign_changes(curve, f, tol)
        if changes[f]:
            labels[f] = Label.MIXED
        elif np.all(s == 0):
            labels[f] = Label.ZERO
        elif np.all(s >= 0):
            labels[f] = Label.UA
        else:
            labels[f] = Label.OA
    return AssessmentReport(labels, changes, _bound_checks(curve, tol))


def _prefix_rule(e_fr, e_sf, tol) -> bool:
    ok = True
    for sgn in (1, -1):
        hold = np.cumprod(np.nan_to_num(sgn * e_fr, nan=np.inf) <= tol).astype(bool)
        if hold.any():
            sf = e_sf[hold]
            ok &= bool(np.all(sgn * sf[np.isfinite(sf)] >= -tol))
    return ok


def _bound_checks(curve: ErrorCurve, tol: float) -> list[tuple[str, bool]]:
    e = {f: curve.values[f] for f in FUNCS}
    fin = lambda a: a[np.isfinite(a)]  # noqa: E731
    # E_sf = ratio - 1 of nonnegative survivals; rounding can land exactly on -1
    out = [("sf_error_at_least_minus_one", bool(np.all(fin(e[Func.SF]) >= -1)))]
    if curve.structure is Structure.SERIES:
        out.append(("hazard_prefix_rule", _prefix_rule(e[Func.FR], e[Func.SF], tol)))
    m = curve.model
    if m is None:
        return out
    if m.family == "MOME" and curve.structure is Structure.SERIES:
        # a ratio below machine epsilon rounds ratio - 1 to exactly -1
        below = lambda a: bool(np.all((np.abs(a) < 1) | (a == -1.0)))  # noqa: E731
        out.append(("abs_sf_error_below_one", below(fin(e[Func.SF]))))
        out.append(("abs_rfr_error_below_one", below(fin(e[Func.RFR]))))
    if m.family == "MG1" and curve.structure is Structure.SERIES:
        out.append(("ai_error_at_most_n_minus_1", bool(np.all(fin(e[Func.AI]) <= m.n - 1 + tol))))
    if m.family == "FGMW" and curve.structure is Structure.SERIES:
        out.append(("abs_sf_error_at_most_abs_gamma", bool(np.all(np.abs(fin(e[Func.SF])) <= abs(m.gamma) + tol))))
    return out


# ------------------------------------------------------------ monotone ratio

def monotone_ratio(beta, gamma, alpha, t, *, limit_at_zero: bool = False, log: bool = False):
    """``h(t) = (gamma/beta) (exp(beta t**alpha) - 1) / (exp(gamma t**alpha) - 1) - 1``.

    Computed in log space.  ``h`` increases in ``t`` when ``beta > gamma``,
    decreases when ``beta < gamma`` and is 0 when they are equal; its limit at
    ``t = 0`` is 0.  With ``log=True`` the value ``log(1 + h)`` is returned,
    which has the same monotonicity and sign and never overflows.

    Raises
    ------
    DegenerateError
        At ``t == 0`` unless ``limit_at_zero`` is set.
    """
    for name, v in (("beta", beta), ("gamma", gamma), ("alpha", alpha)):
        if not np.all(np.asarray(v) > 0):
            raise DegenerateError(f"{name} must be > 0")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DegenerateError("t must be >= 0")
    zero = t == 0
    if np.any(zero) and not limit_at_zero:
        raise DegenerateError("ratio is 0/0 at t = 0; pass limit_at_zero=True for the limit")
    x = np.where(zero, 1.0, t) ** alpha
    lg = np.log(gamma / beta) + log_expm1(beta * x) - log_expm1(gamma * x)
    lg = np.where(zero, 0.0, lg)
    if log:
        return lg
    with np.errstate(over="ignore"):
        return np.expm1(lg)


def max_closed_numeric_deviation(model, structure, which, grid: EvalGrid, baseline=Baseline.PAPER_LITERAL) -> float:
    """Largest relative deviation between the analytic and computed error."""
    c = closed_form_error(model, which, grid.t, structure, baseline)
    if c is None:
        raise DegenerateError("no closed-form error for this combination")
    n, _ = error_values(model, structure, baseline, which, grid.t, "numeric")
    return float(np.nanmax(rel_dev(c, n, floor=1.0)))
