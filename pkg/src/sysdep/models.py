"""Multivariate lifetime families and their joint survival functions.

Every family is an immutable dataclass that validates its parameters on
construction.  The vectorised workhorse is :meth:`LifetimeModel.log_joint_sf`,
which takes an array of shape ``(..., n)`` and returns the log joint survival
probability; the scalar helpers :func:`joint_sf` and :func:`marginal_sf` add
domain checks on top.

Component indices are 1-based in every public signature and in model
documents; arrays are 0-based internally.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field
from typing import Any, ClassVar, Iterable, Mapping

import numpy as np

from ._numerics import log_expm1
from .exceptions import DomainError, InvalidParameter, Unsupported

__all__ = [
    "Baseline",
    "SubsetRateMap",
    "LifetimeModel",
    "IndExp",
    "MOME",
    "MG1",
    "IndWeibull",
    "MOMW",
    "Crowder",
    "Lee",
    "LB1",
    "FGMW",
    "LB2",
    "MarginalProduct",
    "FAMILIES",
    "validate",
    "joint_sf",
    "marginal_sf",
    "independent_counterpart",
    "from_dict",
]


class Baseline(enum.Enum):
    """Which independent model stands in for the dependent one."""

    PAPER_LITERAL = "paper-literal"
    TRUE_MARGINAL = "true-marginal"


SubsetKey = tuple  # strictly increasing tuple of 1-based component indices


def parse_subset_key(key: Any, n: int) -> tuple[int, ...]:
    """Normalise ``"1,2"``, ``(1, 2)`` or ``1`` to a sorted tuple of indices."""
    if isinstance(key, str):
        parts = [p for p in key.replace(" ", "").split(",") if p]
        try:
            idx = [int(p) for p in parts]
        except ValueError:
            raise InvalidParameter("rates", f"subset key {key!r} is not a comma-joined index list") from None
    elif isinstance(key, (int, np.integer)):
        idx = [int(key)]
    else:
        idx = [int(k) for k in key]
    if not idx:
        raise InvalidParameter("rates", "subset keys must be nonempty")
    if len(set(idx)) != len(idx):
        raise InvalidParameter("rates", f"subset key {key!r} repeats an index")
    if idx != sorted(idx):
        raise InvalidParameter("rates", f"subset key {key!r} is not in ascending order")
    if idx[0] < 1 or idx[-1] > n:
        raise InvalidParameter("rates", f"subset key {key!r} has an index outside 1..{n}")
    return tuple(idx)


@dataclass(frozen=True, eq=False)
class SubsetRateMap:
    """Nonnegative shock rates indexed by nonempty subsets of ``{1..n}``.

    Absent keys mean rate zero.  Missing singletons are filled with an
    explicit zero so that ``rate((i,))`` is always defined.
    """

    n: int
    rates: Mapping[Any, float]

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidParameter("n", "component count must be an integer >= 1")
        clean: dict[tuple[int, ...], float] = {}
        for raw_key, raw_rate in dict(self.rates).items():
            key = parse_subset_key(raw_key, int(self.n))
            rate = float(raw_rate)
            if not math.isfinite(rate):
                raise InvalidParameter("rates", f"rate for {key} is not finite")
            if rate < 0:
                raise InvalidParameter("rates", f"negative rate {rate} for subset {key}")
            if key in clean:
                raise InvalidParameter("rates", f"duplicate subset key {key}")
            clean[key] = rate
        for i in range(1, int(self.n) + 1):
            clean.setdefault((i,), 0.0)
        if not any(r > 0 for r in clean.values()):
            raise InvalidParameter("rates", "at least one rate must be strictly positive")
        ordered = dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0])))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "rates", ordered)

    def __eq__(self, other):
        return isinstance(other, SubsetRateMap) and self.n == other.n and self.rates == other.rates

    def __hash__(self):
        return hash((self.n, tuple(self.rates.items())))

    def rate(self, key) -> float:
        return self.rates.get(parse_subset_key(key, self.n), 0.0)

    def singletons(self) -> np.ndarray:
        return np.array([self.rates[(i,)] for i in range(1, self.n + 1)])

    def interactions(self) -> list[tuple[tuple[int, ...], float]]:
        return [(k, r) for k, r in self.rates.items() if len(k) > 1]

    def aggregate(self) -> float:
        """Sum of every rate; the constant hazard of the series MOME system."""
        return math.fsum(self.rates.values())

    def marginal_rates(self) -> np.ndarray:
        """Per component, the total rate of all shocks that hit it."""
        out = np.zeros(self.n)
        for key, r in self.rates.items():
            for i in key:
                out[i - 1] += r
        return out

    def order_sums(self) -> np.ndarray:
        """``a_k`` = total rate over subsets of size ``k``, for k = 1..n."""
        out = np.zeros(self.n)
        for key, r in self.rates.items():
            out[len(key) - 1] += r
        return out

    def positive_entries(self) -> list[tuple[np.ndarray, float]]:
        """(0-based index array, rate) for every strictly positive rate."""
        return [(np.array(k) - 1, r) for k, r in self.rates.items() if r > 0]

    def to_json(self) -> dict[str, float]:
        return {",".join(map(str, k)): r for k, r in self.rates.items()}

    def with_interactions_zeroed(self) -> "SubsetRateMap":
        return SubsetRateMap(self.n, {k: r for k, r in self.rates.items() if len(k) == 1})


def _vector(name: str, values, n: int, *, lower: float = 0.0, strict: bool = True) -> tuple[float, ...]:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InvalidParameter(name, f"expected {n} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(name, "all values must be finite")
    bad = arr <= lower if strict else arr < lower
    if np.any(bad):
        op = ">" if strict else ">="
        raise InvalidParameter(name, f"all values must be {op} {lower}")
    return tuple(float(v) for v in arr)


def _scalar(name: str, value, *, lo=None, hi=None, lo_open=False, hi_open=False) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise InvalidParameter(name, "must be a real number") from None
    if not math.isfinite(v):
        raise InvalidParameter(name, "must be finite")
    if lo is not None and (v <= lo if lo_open else v < lo):
        raise InvalidParameter(name, f"must be {'>' if lo_open else '>='} {lo}")
    if hi is not None and (v >= hi if hi_open else v > hi):
        raise InvalidParameter(name, f"must be {'<' if hi_open else '<='} {hi}")
    return v


def _check_n(n) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InvalidParameter("n", "component count must be an integer >= 1")
    return int(n)


class LifetimeModel:
    """Common interface of every family.

    Subclasses implement :meth:`log_joint_sf` and the parameter bookkeeping;
    everything else is generic.
    """

    family: ClassVar[str] = ""
    is_independent: ClassVar[bool] = False
    n: int

    def log_joint_sf(self, T: np.ndarray) -> np.ndarray:
        """Log of P(T_1 > t_1, ..., T_n > t_n) for ``T`` of shape (..., n)."""
        raise NotImplementedError

    def marginal_log_sf(self, i: int, t) -> np.ndarray:
        """Log marginal survival of component ``i`` (0-based) at times ``t``."""
        t = np.asarray(t, dtype=float)
        T = np.zeros(t.shape + (self.n,))
        T[..., i] = t
        return self.log_joint_sf(T)

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "n": self.n, **self.params()}

    def paper_literal(self) -> "LifetimeModel":
        raise NotImplementedError

    def true_marginal(self) -> "LifetimeModel":
        raise NotImplementedError


@dataclass(frozen=True)
class IndExp(LifetimeModel):
    """Independent exponential components, ``exp(-sum lambda_i t_i)``."""

    family: ClassVar[str] = "IndExp"
    is_independent: ClassVar[bool] = True
    n: int
    lambdas: tuple[float, ...]

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "lambdas", _vector("lambdas", self.lambdas, n, strict=False))

    @property
    def lam(self) -> np.ndarray:
        return np.array(self.lambdas)

    def log_joint_sf(self, T):
        return -np.asarray(T, dtype=float) @ self.lam

    def params(self):
        return {"lambdas": list(self.lambdas)}

    def paper_literal(self):
        return self

    def true_marginal(self):
        return self


@dataclass(frozen=True)
class IndWeibull(LifetimeModel):
    """Independent Weibull components, ``exp(-sum lambda_i t_i**alpha_i)``."""

    family: ClassVar[str] = "IndWeibull"
    is_independent: ClassVar[bool] = True
    n: int
    lambdas: tuple[float, ...]
    alphas: tuple[float, ...]

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "lambdas", _vector("lambdas", self.lambdas, n, strict=False))
        object.__setattr__(self, "alphas", _vector("alphas", self.alphas, n))

    @property
    def lam(self):
        return np.array(self.lambdas)

    @property
    def alpha(self):
        return np.array(self.alphas)

    def log_joint_sf(self, T):
        T = np.asarray(T, dtype=float)
        return -np.sum(self.lam * T**self.alpha, axis=-1)

    def params(self):
        return {"lambdas": list(self.lambdas), "alphas": list(self.alphas)}

    def paper_literal(self):
        return self

    def true_marginal(self):
        return self


def _rate_map(rates, n) -> SubsetRateMap:
    if isinstance(rates, SubsetRateMap):
        if rates.n != n:
            raise InvalidParameter("rates", f"rate map is for n={rates.n}, model has n={n}")
        return rates
    if not isinstance(rates, Mapping):
        raise InvalidParameter("rates", "must be a mapping from subset keys to rates")
    return SubsetRateMap(n, rates)


@dataclass(frozen=True)
class MOME(LifetimeModel):
    """Marshall-Olkin multivariate exponential (fatal shock model)."""

    family: ClassVar[str] = "MOME"
    n: int
    rates: SubsetRateMap

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "rates", _rate_map(self.rates, n))

    def log_joint_sf(self, T):
        T = np.asarray(T, dtype=float)
        out = np.zeros(T.shape[:-1])
        for idx, r in self.rates.positive_entries():
            out -= r * np.max(T[..., idx], axis=-1)
        return out

    def params(self):
        return {"rates": self.rates.to_json()}

    def paper_literal(self):
        return IndExp(self.n, self.rates.singletons())

    def true_marginal(self):
        return IndExp(self.n, self.rates.marginal_rates())


@dataclass(frozen=True)
class MG1(LifetimeModel):
    """Multivariate Gumbel type I exponential, product interaction terms.

    Nonnegativity of the rates is all that is checked.  Whether the joint
    survival function is a proper distribution depends on further
    constraints (for n = 2, ``lambda_12 <= lambda_1 * lambda_2``).
    """

    family: ClassVar[str] = "MG1"
    n: int
    rates: SubsetRateMap

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "rates", _rate_map(self.rates, n))

    def log_joint_sf(self, T):
        T = np.asarray(T, dtype=float)
        out = np.zeros(T.shape[:-1])
        for idx, r in self.rates.positive_entries():
            out -= r * np.prod(T[..., idx], axis=-1)
        return out

    def params(self):
        return {"rates": self.rates.to_json()}

    def paper_literal(self):
        return IndExp(self.n, self.rates.singletons())

    def true_marginal(self):
        return IndExp(self.n, self.rates.singletons())


@dataclass(frozen=True)
class MOMW(LifetimeModel):
    """Marshall-Olkin multivariate Weibull: MOME applied to ``t_i**alpha_i``."""

    family: ClassVar[str] = "MOMW"
    n: int
    rates: SubsetRateMap
    alphas: tuple[float, ...]

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "rates", _rate_map(self.rates, n))
        object.__setattr__(self, "alphas", _vector("alphas", self.alphas, n))

    @property
    def alpha(self):
        return np.array(self.alphas)

    def log_joint_sf(self, T):
        P = np.asarray(T, dtype=float) ** self.alpha
        out = np.zeros(P.shape[:-1])
        for idx, r in self.rates.positive_entries():
            out -= r * np.max(P[..., idx], axis=-1)
        return out

    def params(self):
        return {"rates": self.rates.to_json(), "alphas": list(self.alphas)}

    def paper_literal(self):
        return IndWeibull(self.n, self.rates.singletons(), self.alphas)

    def true_marginal(self):
        return IndWeibull(self.n, self.rates.marginal_rates(), self.alphas)


@dataclass(frozen=True)
class Crowder(LifetimeModel):
    """Crowder's extension of Hougaard's Weibull frailty model.

    ``F(t) = exp(gamma**l - (gamma + sum lambda_i t_i**alpha_i)**l)``.
    Only ``l <= 1`` yields a proper multivariate distribution; larger ``l``
    is accepted because the series-system formulas remain meaningful.
    """

    family: ClassVar[str] = "Crowder"
    n: int
    lambdas: tuple[float, ...]
    alphas: tuple[float, ...]
    l: float
    gamma: float

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "lambdas", _vector("lambdas", self.lambdas, n))
        object.__setattr__(self, "alphas", _vector("alphas", self.alphas, n))
        object.__setattr__(self, "l", _scalar("l", self.l, lo=0.0, lo_open=True))
        object.__setattr__(self, "gamma", _scalar("gamma", self.gamma, lo=0.0))

    def cumulative(self, s):
        """``(gamma + s)**l - gamma**l`` evaluated without cancellation."""
        s = np.asarray(s, dtype=float)
        if self.gamma == 0.0:
            return s**self.l
        return self.gamma**self.l * np.expm1(self.l * np.log1p(s / self.gamma))

    def log_joint_sf(self, T):
        T = np.asarray(T, dtype=float)
        s = np.sum(np.array(self.lambdas) * T ** np.array(self.alphas), axis=-1)
        return -self.cumulative(s)

    def params(self):
        return {"lambdas": list(self.lambdas), "alphas": list(self.alphas), "l": self.l, "gamma": self.gamma}

    def paper_literal(self):
        return IndWeibull(self.n, self.lambdas, self.alphas)

    def true_marginal(self):
        if self.gamma == 0.0:
            lam = np.array(self.lambdas) ** self.l
            return IndWeibull(self.n, lam, np.array(self.alphas) * self.l)
        return MarginalProduct(self)


@dataclass(frozen=True)
class Lee(LifetimeModel):
    """Lee's multivariate Weibull: MOME applied to ``(c_i t_i)**alpha``."""

    family: ClassVar[str] = "Lee"
    n: int
    alpha: float
    scales: tuple[float, ...]
    rates: SubsetRateMap

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "alpha", _scalar("alpha", self.alpha, lo=0.0, lo_open=True))
        object.__setattr__(self, "scales", _vector("scales", self.scales, n))
        object.__setattr__(self, "rates", _rate_map(self.rates, n))

    @property
    def lambda_L(self) -> float:
        """Aggregate rate of the series system, weighted by the largest scale in each subset."""
        cpow = np.array(self.scales) ** self.alpha
        return math.fsum(r * float(np.max(cpow[np.array(k) - 1])) for k, r in self.rates.rates.items())

    def log_joint_sf(self, T):
        P = (np.asarray(T, dtype=float) * np.array(self.scales)) ** self.alpha
        out = np.zeros(P.shape[:-1])
        for idx, r in self.rates.positive_entries():
            out -= r * np.max(P[..., idx], axis=-1)
        return out

    def params(self):
        return {"alpha": self.alpha, "scales": list(self.scales), "rates": self.rates.to_json()}

    def paper_literal(self):
        cpow = np.array(self.scales) ** self.alpha
        return IndWeibull(self.n, self.rates.singletons() * cpow, [self.alpha] * self.n)

    def true_marginal(self):
        cpow = np.array(self.scales) ** self.alpha
        return IndWeibull(self.n, self.rates.marginal_rates() * cpow, [self.alpha] * self.n)


@dataclass(frozen=True)
class LB1(LifetimeModel):
    """Lu-Bhattacharyya model I: Weibull exponent plus a power-mean interaction ``delta * w(t)``."""

    family: ClassVar[str] = "LB1"
    n: int
    lambdas: tuple[float, ...]
    alphas: tuple[float, ...]
    delta: float
    m: float

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "lambdas", _vector("lambdas", self.lambdas, n))
        object.__setattr__(self, "alphas", _vector("alphas", self.alphas, n))
        object.__setattr__(self, "delta", _scalar("delta", self.delta, lo=0.0))
        object.__setattr__(self, "m", _scalar("m", self.m, lo=1.0))

    def w(self, T):
        """Interaction term ``(sum lambda_i**(1/m) t_i**(alpha_i/m))**m``."""
        T = np.asarray(T, dtype=float)
        lam, a = np.array(self.lambdas), np.array(self.alphas)
        return np.sum(lam ** (1.0 / self.m) * T ** (a / self.m), axis=-1) ** self.m

    def log_joint_sf(self, T):
        T = np.asarray(T, dtype=float)
        base = np.sum(np.array(self.lambdas) * T ** np.array(self.alphas), axis=-1)
        if self.delta == 0.0:
            return -base
        return -(base + self.delta * self.w(T))

    def params(self):
        return {"lambdas": list(self.lambdas), "alphas": list(self.alphas), "delta": self.delta, "m": self.m}

    def paper_literal(self):
        return IndWeibull(self.n, self.lambdas, self.alphas)

    def true_marginal(self):
        return IndWeibull(self.n, np.array(self.lambdas) * (1.0 + self.delta), self.alphas)


@dataclass(frozen=True)
class FGMW(LifetimeModel):
    """Farlie-Gumbel-Morgenstern copula with Weibull margins."""

    family: ClassVar[str] = "FGMW"
    n: int
    lambdas: tuple[float, ...]
    alphas: tuple[float, ...]
    gamma: float

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "lambdas", _vector("lambdas", self.lambdas, n))
        object.__setattr__(self, "alphas", _vector("alphas", self.alphas, n))
        object.__setattr__(self, "gamma", _scalar("gamma", self.gamma, lo=-1.0, hi=1.0, lo_open=True, hi_open=True))

    def log_joint_sf(self, T):
        x = np.array(self.lambdas) * np.asarray(T, dtype=float) ** np.array(self.alphas)
        prod_cdf = np.prod(-np.expm1(-x), axis=-1)
        return -np.sum(x, axis=-1) + np.log1p(self.gamma * prod_cdf)

    def params(self):
        return {"lambdas": list(self.lambdas), "alphas": list(self.alphas), "gamma": self.gamma}

    def paper_literal(self):
        return IndWeibull(self.n, self.lambdas, self.alphas)

    def true_marginal(self):
        return IndWeibull(self.n, self.lambdas, self.alphas)


@dataclass(frozen=True)
class LB2(LifetimeModel):
    """Lu-Bhattacharyya model II, read as
    ``[1 + (sum_i (exp(lambda_i t_i**alpha_i) - 1)**(1/gamma))**gamma]**-1``.
    """

    family: ClassVar[str] = "LB2"
    n: int
    lambdas: tuple[float, ...]
    alphas: tuple[float, ...]
    gamma: float

    def __post_init__(self):
        n = _check_n(self.n)
        object.__setattr__(self, "lambdas", _vector("lambdas", self.lambdas, n))
        object.__setattr__(self, "alphas", _vector("alphas", self.alphas, n))
        object.__setattr__(self, "gamma", _scalar("gamma", self.gamma, lo=0.0, hi=1.0, lo_open=True, hi_open=True))

    def log_joint_sf(self, T):
        x = np.array(self.lambdas) * np.asarray(T, dtype=float) ** np.array(self.alphas)
        with np.errstate(divide="ignore"):
            u = log_expm1(x) / self.gamma
        m = np.max(u, axis=-1, keepdims=True)
        finite = np.isfinite(m)
        m = np.where(finite, m, 0.0)
        with np.errstate(divide="ignore"):
            lse = np.log(np.sum(np.exp(u - m), axis=-1)) + m[..., 0]
        lse = np.where(finite[..., 0], lse, -np.inf)
        return -np.logaddexp(0.0, self.gamma * lse)

    def params(self):
        return {"lambdas": list(self.lambdas), "alphas": list(self.alphas), "gamma": self.gamma}

    def paper_literal(self):
        return IndWeibull(self.n, self.lambdas, self.alphas)

    def true_marginal(self):
        # setting the other coordinates to zero leaves exp(-lambda_i t**alpha_i)
        return IndWeibull(self.n, self.lambdas, self.alphas)


@dataclass(frozen=True)
class MarginalProduct(LifetimeModel):
    """Independent product of another model's true marginals.

    Used as the true-marginal baseline when the marginals are not a named
    parametric family (Crowder with ``gamma > 0``).
    """

    family: ClassVar[str] = "MarginalProduct"
    is_independent: ClassVar[bool] = True
    base: LifetimeModel
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", self.base.n)

    def log_joint_sf(self, T):
        T = np.asarray(T, dtype=float)
        return sum(self.base.marginal_log_sf(i, T[..., i]) for i in range(self.n))

    def params(self):
        return {"base": self.base.to_dict()}

    def paper_literal(self):
        return self

    def true_marginal(self):
        return self


FAMILIES: dict[str, type[LifetimeModel]] = {
    cls.family: cls for cls in (IndExp, MOME, MG1, IndWeibull, MOMW, Crowder, Lee, LB1, FGMW, LB2)
}


def validate(model: LifetimeModel | Mapping[str, Any]) -> LifetimeModel:
    """Return a validated model; accepts a model instance or a model document.

    Construction already enforces every invariant, so for instances this
    re-checks by rebuilding from the serialised parameters.
    """
    if isinstance(model, Mapping):
        return from_dict(model)
    if isinstance(model, MarginalProduct):
        validate(model.base)
        return model
    if not isinstance(model, LifetimeModel):
        raise InvalidParameter("model", f"expected a LifetimeModel, got {type(model).__name__}")
    return from_dict(model.to_dict())


def _as_time_vector(model: LifetimeModel, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.shape != (model.n,):
        raise DomainError(f"expected a time vector of length {model.n}, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise DomainError("time coordinates must be finite")
    if np.any(t < 0):
        raise DomainError("time coordinates must be >= 0")
    return t


def joint_sf(model: LifetimeModel, t) -> float:
    """P(T_1 > t_1, ..., T_n > t_n) at a single point of the nonnegative orthant."""
    t = _as_time_vector(model, t)
    return float(np.exp(model.log_joint_sf(t)))


def marginal_sf(model: LifetimeModel, i: int, t: float) -> float:
    """P(T_i > t) for 1-based component ``i``."""
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= model.n:
        raise DomainError(f"component index must be in 1..{model.n}, got {i!r}")
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError("time must be finite and >= 0")
    return float(np.exp(model.marginal_log_sf(int(i) - 1, t)))


def independent_counterpart(model: LifetimeModel, baseline: Baseline = Baseline.PAPER_LITERAL) -> LifetimeModel:
    """Independent model whose product survival function serves as the baseline.

    ``PAPER_LITERAL`` keeps only the singleton parameters and drops every
    interaction term.  ``TRUE_MARGINAL`` uses each component's actual
    marginal distribution.
    """
    baseline = Baseline(baseline)
    if baseline is Baseline.PAPER_LITERAL:
        return model.paper_literal()
    return model.true_marginal()


def _req(doc: Mapping[str, Any], key: str, family: str):
    if key not in doc:
        raise InvalidParameter(key, f"required for family {family}")
    return doc[key]


def from_dict(doc: Mapping[str, Any]) -> LifetimeModel:
    """Build a model from its JSON document.

    Subset keys of ``rates`` are comma-joined ascending 1-based indices,
    e.g. ``{"1": 1.0, "2": 1.0, "1,2": 0.5}``.
    """
    if not isinstance(doc, Mapping):
        raise InvalidParameter("model", "model document must be a JSON object")
    family = doc.get("family")
    if family == "MarginalProduct":
        return MarginalProduct(from_dict(_req(doc, "base", family)))
    if family not in FAMILIES:
        raise InvalidParameter("family", f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    n = _req(doc, "n", family)
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidParameter("n", "component count must be an integer >= 1")
    cls = FAMILIES[family]
    names = [f.name for f in dataclasses.fields(cls) if f.name != "n" and f.init]
    known = set(names) | {"family", "n"}
    extra = set(doc) - known
    if extra:
        raise InvalidParameter(sorted(extra)[0], f"unexpected field for family {family}")
    kwargs = {name: _req(doc, name, family) for name in names}
    try:
        return cls(n=n, **kwargs)
    except InvalidParameter:
        raise
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(family, str(exc)) from None


SCHEMAS: dict[str, dict[str, str]] = {
    "IndExp": {"lambdas": "n rates >= 0"},
    "MOME": {"rates": "map 'i,j,...' -> rate >= 0 (missing singletons are 0)"},
    "MG1": {"rates": "map 'i,j,...' -> rate >= 0 (missing singletons are 0)"},
    "IndWeibull": {"lambdas": "n rates >= 0", "alphas": "n shapes > 0"},
    "MOMW": {"rates": "map 'i,j,...' -> rate >= 0", "alphas": "n shapes > 0"},
    "Crowder": {"lambdas": "n rates > 0", "alphas": "n shapes > 0", "l": "power > 0", "gamma": "shift >= 0"},
    "Lee": {"alpha": "common shape > 0", "scales": "n scales > 0", "rates": "map 'i,j,...' -> rate >= 0"},
    "LB1": {"lambdas": "n rates > 0", "alphas": "n shapes > 0", "delta": ">= 0", "m": ">= 1"},
    "FGMW": {"lambdas": "n rates > 0", "alphas": "n shapes > 0", "gamma": "in (-1, 1)"},
    "LB2": {"lambdas": "n rates > 0", "alphas": "n shapes > 0", "gamma": "in (0, 1)"},
}

EXAMPLES: dict[str, dict[str, Any]] = {
    "IndExp": {"family": "IndExp", "n": 2, "lambdas": [1.0, 2.0]},
    "MOME": {"family": "MOME", "n": 2, "rates": {"1": 1.0, "2": 1.0, "1,2": 0.5}},
    "MG1": {"family": "MG1", "n": 2, "rates": {"1": 1.0, "2": 1.0, "1,2": 0.5}},
    "IndWeibull": {"family": "IndWeibull", "n": 2, "lambdas": [1.0, 0.5], "alphas": [1.5, 0.8]},
    "MOMW": {"family": "MOMW", "n": 2, "rates": {"1": 1.0, "2": 0.5, "1,2": 0.3}, "alphas": [1.5, 1.5]},
    "Crowder": {"family": "Crowder", "n": 2, "lambdas": [1.0, 0.5], "alphas": [1.2, 0.9], "l": 0.7, "gamma": 0.5},
    "Lee": {"family": "Lee", "n": 2, "alpha": 1.5, "scales": [1.0, 2.0], "rates": {"1": 0.5, "2": 0.3, "1,2": 0.2}},
    "LB1": {"family": "LB1", "n": 2, "lambdas": [1.0, 0.5], "alphas": [1.2, 0.9], "delta": 0.4, "m": 2.0},
    "FGMW": {"family": "FGMW", "n": 2, "lambdas": [1.0, 1.0], "alphas": [1.0, 1.0], "gamma": 0.5},
    "LB2": {"family": "LB2", "n": 2, "lambdas": [1.0, 0.5], "alphas": [1.2, 0.9], "gamma": 0.6},
}


def example(family: str) -> dict[str, Any]:
    if family not in EXAMPLES:
        raise InvalidParameter("family", f"unknown family {family!r}")
    return json_copy(EXAMPLES[family])


def json_copy(doc):
    return json.loads(json.dumps(doc))


def iter_families() -> Iterable[tuple[str, dict[str, str]]]:
    return iter(SCHEMAS.items())
