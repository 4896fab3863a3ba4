"""Series and parallel system lifetime functions.

Every function is derived from two vectorised primitives, ``log F̄(t)`` and
``log F(t)`` of the system lifetime.  Hazards come from differentiating those
logs numerically unless an analytic form is registered in
:mod:`sysdep.closed_forms`.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad_vec

from . import closed_forms
from ._numerics import log1mexp, subset_masks
from .exceptions import DegenerateError, DomainError, IntegrationFailure, InvalidParameter, Unsupported
from .models import Baseline, LifetimeModel, independent_counterpart, validate


class Structure(enum.Enum):
    SERIES = "series"
    PARALLEL = "parallel"


class Assumption(enum.Enum):
    DEPENDENT = "dependent"
    INDEPENDENT = "independent"


class Func(enum.Enum):
    SF = "sf"
    FR = "fr"
    RFR = "rfr"
    MRL = "mrl"
    AI = "ai"


class Provenance(enum.Enum):
    CLOSED_FORM = "closed"
    NUMERIC = "numeric"


FUNCS = tuple(Func)
MIN_AI_TIME = 1e-10
_TAIL_DROP = 40.0


def _enum(cls, value):
    if isinstance(value, cls):
        return value
    try:
        return cls(str(value).lower())
    except ValueError:
        raise InvalidParameter(cls.__name__.lower(), f"expected one of {[e.value for e in cls]}, got {value!r}") from None


@dataclass(frozen=True)
class SystemSpec:
    """A model wired as a series or parallel system.

    ``baseline`` must be given exactly when ``assumption`` is independent; the
    system is then built from the independent counterpart of ``model``.
    """

    model: LifetimeModel
    structure: Structure = Structure.SERIES
    assumption: Assumption = Assumption.DEPENDENT
    baseline: Optional[Baseline] = None
    effective: LifetimeModel = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "model", validate(self.model))
        object.__setattr__(self, "structure", _enum(Structure, self.structure))
        object.__setattr__(self, "assumption", _enum(Assumption, self.assumption))
        if self.baseline is not None:
            object.__setattr__(self, "baseline", _enum(Baseline, self.baseline))
        if (self.baseline is None) == (self.assumption is Assumption.INDEPENDENT):
            raise InvalidParameter("baseline", "required iff assumption is independent")
        eff = self.model
        if self.assumption is Assumption.INDEPENDENT:
            eff = independent_counterpart(self.model, self.baseline)
        object.__setattr__(self, "effective", eff)

    @classmethod
    def dependent(cls, model, structure="series") -> "SystemSpec":
        return cls(model, structure, Assumption.DEPENDENT)

    @classmethod
    def independent(cls, model, structure="series", baseline=Baseline.PAPER_LITERAL) -> "SystemSpec":
        return cls(model, structure, Assumption.INDEPENDENT, baseline)

    def counterpart(self, baseline=None) -> "SystemSpec":
        """The independent system paired with this (dependent) one."""
        return SystemSpec.independent(self.model, self.structure, baseline or self.baseline or Baseline.PAPER_LITERAL)


@dataclass(frozen=True)
class EvalGrid:
    """Strictly increasing, finite, positive evaluation times."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in np.ravel(self.points))
        arr = np.array(pts)
        if arr.size == 0:
            raise InvalidParameter("grid", "at least one point required")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise InvalidParameter("grid", "points must be finite and > 0")
        if np.any(np.diff(arr) <= 0):
            raise InvalidParameter("grid", "points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def t(self) -> np.ndarray:
        return np.array(self.points)

    def __len__(self):
        return len(self.points)

    @classmethod
    def make(cls, start: float, stop: float, count: int, spacing: str = "log") -> "EvalGrid":
        if not start > 0:
            raise InvalidParameter("grid", "start must be > 0")
        if not stop > start:
            raise InvalidParameter("grid", "stop must exceed start")
        if int(count) < 2:
            raise InvalidParameter("grid", "count must be >= 2")
        if spacing == "log":
            pts = np.geomspace(start, stop, int(count))
        elif spacing in ("linear", "lin"):
            pts = np.linspace(start, stop, int(count))
        else:
            raise InvalidParameter("grid", f"spacing must be linear or log, got {spacing!r}")
        return cls(tuple(pts))

    @classmethod
    def parse(cls, text: str) -> "EvalGrid":
        """Parse ``START:STOP:COUNT[:SPACING]``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise InvalidParameter("grid", "expected START:STOP:COUNT:SPACING")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise InvalidParameter("grid", f"cannot parse {text!r}") from None
        return cls.make(start, stop, count, parts[3] if len(parts) == 4 else "log")


DEFAULT_GRID = "0.01:10:200:log"


def default_grid() -> EvalGrid:
    return EvalGrid.parse(DEFAULT_GRID)


# ---------------------------------------------------------------- numeric core

def _series_logs(model: LifetimeModel, t):
    ls = model.log_joint_sf(np.repeat(t[:, None], model.n, axis=1))
    return ls, log1mexp(ls)


def _product_logs(model: LifetimeModel, t):
    log_cdf = np.zeros_like(t)
    for i in range(model.n):
        log_cdf = log_cdf + log1mexp(model.marginal_log_sf(i, t))
    return log1mexp(log_cdf), log_cdf


def _inclusion_exclusion_logs(model: LifetimeModel, t, block: int = 2048, condition: bool = False):
    """Poincaré expansion ``F̄_max = sum_{I} (-1)**(|I|-1) F̄_I(t)``.

    ``F̄_I`` is the joint SF with ``t`` in the slots of ``I`` and 0 elsewhere.
    The CDF ``sum_I (-1)**|I| expm1(log F̄_I)`` is accumulated alongside to keep
    relative accuracy where ``F`` is small.  With ``condition`` the ratio
    ``sum_I |expm1(log F̄_I)| / F`` (the cancellation factor of that sum) is
    returned as a third element.
    """
    masks, sizes = subset_masks(model.n)
    m = t.size
    run_max = np.full(m, -np.inf)
    run_sum = np.zeros(m)
    F = np.zeros(m)
    F_abs = np.zeros(m)
    for lo in range(0, masks.shape[0], block):
        mk = masks[lo:lo + block]
        sg = np.where(sizes[lo:lo + block] % 2 == 1, 1.0, -1.0)
        T = mk[:, None, :] * t[None, :, None]
        L = model.log_joint_sf(T)
        F += np.sum(-sg[:, None] * np.expm1(L), axis=0)
        F_abs += np.sum(-np.expm1(L), axis=0)
        bm = np.max(L, axis=0)
        new_max = np.maximum(run_max, bm)
        ref = np.where(np.isfinite(new_max), new_max, 0.0)
        with np.errstate(invalid="ignore"):
            scale = np.where(np.isfinite(run_max), np.exp(run_max - ref), 0.0)
        run_sum = run_sum * scale + np.sum(sg[:, None] * np.exp(L - ref), axis=0)
        run_max = new_max
    # a negative P(max <= t) beyond rounding means the joint SF is not a distribution
    bad = F < -64 * np.finfo(float).eps * np.maximum(F_abs, 1.0)
    if np.any(bad):
        raise DomainError(f"joint survival function is not a proper distribution for these parameters: "
                          f"P(all components failed by t) = {F[bad][0]:.3g} < 0 at t={t[bad][0]:.6g}")
    ref = np.where(np.isfinite(run_max), run_max, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_sf_direct = np.where(run_sum > 0, np.log(np.where(run_sum > 0, run_sum, 1.0)) + ref, -np.inf)
        small_F = F < 0.5
        log_sf = np.where(small_F, np.log1p(-np.minimum(F, 0.5)), log_sf_direct)
        log_cdf = np.where(small_F, np.where(F > 0, np.log(np.where(F > 0, F, 1.0)), -np.inf), log1mexp(log_sf_direct))
    if condition:
        with np.errstate(divide="ignore", invalid="ignore"):
            return log_sf, log_cdf, np.where(F > 0, F_abs / np.where(F > 0, F, 1.0), np.inf)
    return log_sf, log_cdf


def parallel_log_sf(model: LifetimeModel, t, method: str = "inclusion-exclusion") -> np.ndarray:
    """Parallel-system ``log F̄`` by inclusion-exclusion or the marginal product.

    The product form ``1 - prod F_i`` is exact only for independent models; it
    is exposed so the two routes can be compared.
    """
    t = np.asarray(t, dtype=float)
    if method == "product":
        return _product_logs(model, t)[0]
    if method == "inclusion-exclusion":
        return _inclusion_exclusion_logs(model, t)[0]
    raise InvalidParameter("method", "inclusion-exclusion or product")


def system_logs(spec: SystemSpec, t) -> tuple[np.ndarray, np.ndarray]:
    """``(log F̄, log F)`` of the system lifetime on ``t`` (numeric engine)."""
    t = np.asarray(t, dtype=float)
    model = spec.effective
    if spec.structure is Structure.SERIES:
        return _series_logs(model, t)
    if model.is_independent:
        return _product_logs(model, t)
    return _inclusion_exclusion_logs(model, t)


def _step(t):
    return np.minimum(np.maximum(1e-5, 1e-4 * t), 1e-2 * t)


def log_derivative(g, t, rel_noise=None) -> np.ndarray:
    """Central difference of ``g`` with one Richardson extrapolation.

    ``rel_noise`` (per point) widens the step to ``t * rel_noise**(1/5)``,
    balancing rounding noise against the O(h**4) truncation error; the step
    never exceeds ``0.05 * t``.
    """
    t = np.asarray(t, dtype=float)
    h = _step(t)
    if rel_noise is not None:
        s = np.minimum(np.nan_to_num(rel_noise, nan=1.0, posinf=1.0), 1.0) ** 0.2
        h = np.minimum(np.maximum(h, s * t), 0.05 * t)
    vals = g(np.concatenate([t + h, t - h, t + h / 2, t - h / 2]))
    a, b, c, d = np.split(vals, 4)
    with np.errstate(invalid="ignore"):
        d1 = (a - b) / (2 * h)
        d2 = (c - d) / h
    return (4 * d2 - d1) / 3


def _mrl_numeric(spec: SystemSpec, t) -> np.ndarray:
    """``∫_t^∞ F̄(x) dx / F̄(t)`` via ``quad_vec`` after mapping ``[t, ∞)`` to ``[0, 1)``.

    Each point gets a length scale ``tau`` (the residual time over which
    ``log F̄`` falls by one unit, within a factor 2) and the substitution
    ``x = t + tau * v / (1 - v)``, so every component integral is O(1).
    """
    def lsf(x):
        return system_logs(spec, x)[0]

    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, np.nan)
    l0 = lsf(t)
    ok = np.isfinite(l0)
    if not np.any(ok):
        return out
    tv, l0v = t[ok], l0[ok]
    tau = np.maximum(tv, 1e-3)
    done = lsf(tv + tau) - l0v <= -1.0
    for _ in range(1100):
        if np.all(done):
            break
        tau = np.where(done, tau, 2 * tau)
        done = done | (lsf(tv + tau) - l0v <= -1.0)
        if np.any(~np.isfinite(tau)):
            break
    far = lsf(tv + 1e6 * tau) - l0v
    if not np.all(done & np.isfinite(tau) & (far < -_TAIL_DROP)):
        raise IntegrationFailure("survival function does not decay; no tail bound for the MRL integral")

    def integrand(v):
        s = v / (1.0 - v)
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.exp(lsf(tv + tau * s) - l0v) / (1.0 - v) ** 2
        return np.where(np.isfinite(val), val, 0.0)

    res, _ = quad_vec(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, norm="max", limit=2000)
    out[ok] = tau * res
    return out


# ------------------------------------------------------------ closed forms

def closed_parts(spec: SystemSpec, t):
    fn = closed_forms.lookup(spec.effective.family, spec.structure.value)
    if fn is None:
        return None
    return fn(spec.effective, np.asarray(t, dtype=float))


def _derived(which: Func, t, log_sf, log_cdf, r):
    if which is Func.SF:
        return np.exp(log_sf)
    if which is Func.FR:
        return r
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if which is Func.RFR:
            return r * np.exp(log_sf - log_cdf)
        if which is Func.AI:
            return t * r / (-log_sf)
    raise ValueError(which)


def closed_form_value(spec: SystemSpec, which, t):
    """Registry value of SF/FR/RFR/AI at ``t``, or ``None`` if unavailable."""
    which = _enum(Func, which)
    if which is Func.MRL:
        return None
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    parts = closed_parts(spec, t_arr)
    if parts is None:
        return None
    out = _derived(which, t_arr, *parts)
    return float(out[0]) if np.ndim(t) == 0 else out


def _mask_undefined(which: Func, t, log_sf, log_cdf, values):
    bad = ~np.isfinite(values)
    if which in (Func.FR, Func.MRL):
        bad |= ~np.isfinite(log_sf)
    elif which is Func.RFR:
        bad |= ~np.isfinite(log_sf) | ~np.isfinite(log_cdf)
    elif which is Func.AI:
        bad |= ~np.isfinite(log_sf) | (log_sf >= 0) | (t < MIN_AI_TIME)
    return np.where(bad, np.nan, values)


def evaluate(spec: SystemSpec, which, t, method: str = "auto") -> tuple[np.ndarray, Provenance]:
    """Vectorised evaluation of one function.

    ``method`` is ``auto`` (series closed form when registered, numeric
    otherwise), ``closed`` or ``numeric``.  Undefined points are NaN.
    """
    which = _enum(Func, which)
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise DomainError("times must be finite and > 0")
    parts = None
    if method == "closed" or (method == "auto" and spec.structure is Structure.SERIES):
        parts = closed_parts(spec, t) if which is not Func.MRL else None
        if parts is None and method == "closed":
            raise Unsupported(f"no closed form for {spec.effective.family} {spec.structure.value} {which.value}")
    if parts is not None:
        log_sf, log_cdf, r = parts
        with np.errstate(invalid="ignore"):
            vals = _derived(which, t, log_sf, log_cdf, r)
        return _mask_undefined(which, t, log_sf, log_cdf, vals), Provenance.CLOSED_FORM
    log_sf, log_cdf = system_logs(spec, t)
    if which is Func.SF:
        vals = np.exp(log_sf)
    elif which is Func.FR:
        vals = _numeric_hazard(spec, t)
    elif which in (Func.RFR, Func.AI):
        vals = _derived(which, t, log_sf, log_cdf, _numeric_hazard(spec, t))
    else:
        vals = _mrl_numeric(spec, t)
    return _mask_undefined(which, t, log_sf, log_cdf, vals), Provenance.NUMERIC


def _numeric_hazard(spec: SystemSpec, t) -> np.ndarray:
    noise = None
    if spec.structure is Structure.PARALLEL and not spec.effective.is_independent:
        noise = np.finfo(float).eps * _inclusion_exclusion_logs(spec.effective, t, condition=True)[2]
    return -log_derivative(lambda x: system_logs(spec, x)[0], t, noise)


def system_sf(spec: SystemSpec, t: float) -> float:
    if not np.isfinite(t) or t <= 0:
        raise DomainError(f"t must be finite and > 0, got {t}")
    return float(evaluate(spec, Func.SF, np.array([t]))[0][0])


def system_function(spec: SystemSpec, which, t: float, method: str = "auto") -> float:
    """Scalar FR, RFR, MRL or AI; raises :class:`DegenerateError` where undefined."""
    which = _enum(Func, which)
    if not np.isfinite(t) or t <= 0:
        raise DomainError(f"t must be finite and > 0, got {t}")
    if which is Func.AI and t < MIN_AI_TIME:
        raise DegenerateError(f"aging intensity refused below t={MIN_AI_TIME}")
    val = evaluate(spec, which, np.array([t]), method)[0][0]
    if np.isnan(val):
        raise DegenerateError(f"{which.value} undefined at t={t} (system SF is 0 or 1)")
    return float(val)


def integrated_hazard(spec: SystemSpec, t, method: str = "auto") -> np.ndarray:
    """``∫_0^t r(u) du`` by quadrature in ``log u`` from ``1e-30``."""
    t = np.asarray(t, dtype=float)
    lo = np.log(1e-30)

    def integrand(s):
        u = lo + (np.log(t) - lo) * s
        x = np.exp(u)
        r, _ = evaluate(spec, Func.FR, x, method)
        return np.nan_to_num(r * x * (np.log(t) - lo))

    res, _ = quad_vec(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-10, norm="max", limit=2000)
    return res


@dataclass
class CurveSet:
    grid: EvalGrid
    values: dict
    provenance: dict

    def __getitem__(self, which) -> np.ndarray:
        return self.values[_enum(Func, which)]

    @property
    def t(self):
        return self.grid.t

    def degenerate_fraction(self) -> float:
        bad = np.zeros(len(self.grid), dtype=bool)
        for f in FUNCS:
            bad |= np.isnan(self.values[f])
        return float(bad.mean())


def curves(spec: SystemSpec, grid: EvalGrid, method: str = "auto", threads: int = 1,
           verify: bool = False) -> CurveSet:
    """Evaluate all five functions on ``grid``.

    With ``threads > 1`` the grid is split into contiguous chunks whose results
    are reassembled by index, so output does not depend on the thread count.
    With ``verify`` every closed-form column is recomputed numerically and a
    ``DomainError`` is raised on a relative deviation above 1e-6.
    """
    t = grid.t
    chunks = np.array_split(np.arange(t.size), max(1, min(int(threads), t.size)))

    def run(idx):
        return {f: evaluate(spec, f, t[idx], method) for f in FUNCS}

    if len(chunks) == 1:
        parts = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(len(chunks)) as pool:
            parts = list(pool.map(run, chunks))
    values = {f: np.concatenate([p[f][0] for p in parts]) for f in FUNCS}
    prov = {f: parts[0][f][1] for f in FUNCS}
    if verify:
        from ._numerics import rel_dev

        for f in FUNCS:
            if prov[f] is Provenance.CLOSED_FORM:
                num = evaluate(spec, f, t, "numeric")[0]
                dev = rel_dev(values[f], num)
                if np.nanmax(dev, initial=0.0) > 1e-6:
                    raise DomainError(f"closed form and numeric disagree for {f.value}: {np.nanmax(dev):.3g}")
    return CurveSet(grid, values, prov)


class AgingClass(enum.Enum):
    IFRA = "IFRA"
    DFRA = "DFRA"
    BOTH = "IFRA-and-DFRA"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class AgingVerdict:
    label: AgingClass
    first_violation: Optional[float] = None


def classify_aging(spec: SystemSpec, grid: EvalGrid, tol: float = 1e-9) -> AgingVerdict:
    """IFRA iff AI >= 1 on the grid, DFRA iff AI <= 1 (both for the exponential)."""
    ai, _ = evaluate(spec, Func.AI, grid.t)
    if np.any(np.isnan(ai)):
        bad = grid.t[np.isnan(ai)][0]
        raise DegenerateError(f"aging intensity undefined at t={bad}")
    up = ai >= 1 - tol
    down = ai <= 1 + tol
    if up.all() and down.all():
        return AgingVerdict(AgingClass.BOTH)
    if up.all():
        return AgingVerdict(AgingClass.IFRA)
    if down.all():
        return AgingVerdict(AgingClass.DFRA)
    # first point contradicting the side taken at the start of the grid
    ref = up if up[0] else down
    return AgingVerdict(AgingClass.INDETERMINATE, float(grid.t[np.argmin(ref)]))
