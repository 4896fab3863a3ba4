"""Exact samplers and a Monte Carlo check of the analytic system SF.

Rows are generated in fixed blocks of ``BLOCK_ROWS``.  Block ``b`` draws from
a Philox stream seeded by ``SeedSequence(seed, spawn_key=(b,))`` and is
always drawn in full, then truncated.  Row ``r`` is therefore a function of
``(model, seed, r)`` alone: it does not depend on ``n_samples`` or on how
blocks are scheduled across threads.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.stats import binomtest

from .exceptions import DegenerateError, InvalidParameter, UnsupportedFamily
from .models import FGMW, MOME, MOMW, IndExp, IndWeibull, Lee, LifetimeModel, validate
from .systems import EvalGrid, Func, Structure, SystemSpec, _enum, evaluate

BLOCK_ROWS = 8192
SUPPORTED = ("IndExp", "IndWeibull", "MOME", "MOMW", "Lee", "FGMW")


@dataclass(frozen=True)
class SampleMatrix:
    data: np.ndarray
    seed: int
    family: str

    def __post_init__(self):
        if self.data.ndim != 2 or not np.all(np.isfinite(self.data)) or np.any(self.data < 0):
            raise DegenerateError("samples must be a finite, nonnegative 2-D array")

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"T{i + 1}" for i in range(self.data.shape[1])])
            w.writerows(self.data.tolist())


def _shock_minima(rates, n: int, rng: np.random.Generator, k: int) -> np.ndarray:
    """``Z_i = min_{S ∋ i} E_S`` with independent ``E_S ~ Exp(lambda_S)``."""
    Z = np.full((k, n), np.inf)
    for idx, rate in rates.positive_entries():
        e = rng.standard_exponential(k) / rate
        Z[:, idx] = np.minimum(Z[:, idx], e[:, None])
    return Z


def _fgm_pair(m: FGMW, rng: np.random.Generator, k: int) -> np.ndarray:
    """Survival probabilities from the FGM copula, second one by conditional inversion."""
    u = rng.random(k)
    w = rng.random(k)
    a = m.gamma * (1.0 - 2.0 * u)
    # root of a v**2 - (1 + a) v + w = 0 in [0, 1], written without dividing by a
    v = 2.0 * w / ((1.0 + a) + np.sqrt((1.0 + a) ** 2 - 4.0 * a * w))
    S = np.stack([u, v], axis=1)
    return (-np.log(S) / np.array(m.lambdas)) ** (1.0 / np.array(m.alphas))


def _draw(model: LifetimeModel, rng: np.random.Generator, k: int) -> np.ndarray:
    n = model.n
    if isinstance(model, IndExp):
        return rng.standard_exponential((k, n)) / model.lam
    if isinstance(model, IndWeibull):
        return (rng.standard_exponential((k, n)) / model.lam) ** (1.0 / model.alpha)
    if isinstance(model, MOME):
        return _shock_minima(model.rates, n, rng, k)
    if isinstance(model, MOMW):
        return _shock_minima(model.rates, n, rng, k) ** (1.0 / model.alpha)
    if isinstance(model, Lee):
        return _shock_minima(model.rates, n, rng, k) ** (1.0 / model.alpha) / np.array(model.scales)
    if isinstance(model, FGMW) and n == 2:
        return _fgm_pair(model, rng, k)
    raise UnsupportedFamily(f"no exact sampler for {model.family} with n={n}; supported: {', '.join(SUPPORTED)} (FGMW n=2)")


def _check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InvalidParameter("seed", "must be an unsigned 64-bit integer")
    return seed


def sample_model(model, n_samples: int, seed: int = 0, threads: int = 1) -> SampleMatrix:
    """Draw ``n_samples`` exact joint lifetimes.

    Raises
    ------
    UnsupportedFamily
        For MG1, Crowder, LB1, LB2 and FGMW with more than two components.
    """
    model = validate(model)
    seed = _check_seed(seed)
    if int(n_samples) < 1:
        raise InvalidParameter("n_samples", "must be >= 1")
    n_samples = int(n_samples)
    _draw(model, np.random.Generator(np.random.Philox(0)), 1)  # fail fast if unsupported
    starts = range(0, n_samples, BLOCK_ROWS)

    def block(start):
        ss = np.random.SeedSequence(seed, spawn_key=(start // BLOCK_ROWS,))
        rng = np.random.Generator(np.random.Philox(ss))
        # draw the full block so a row never depends on n_samples
        return _draw(model, rng, BLOCK_ROWS)[: min(BLOCK_ROWS, n_samples - start)]

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(int(threads)) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(s) for s in starts]
    data = np.concatenate(parts, axis=0)
    if not np.all(np.isfinite(data)):
        raise DegenerateError("a component has zero total failure rate; its lifetime is infinite")
    return SampleMatrix(data, seed, model.family)


@dataclass
class EmpiricalCurve:
    grid: EvalGrid
    estimate: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    level: float
    n_samples: int


def system_lifetimes(samples: SampleMatrix, structure) -> np.ndarray:
    structure = _enum(Structure, structure)
    return samples.data.min(axis=1) if structure is Structure.SERIES else samples.data.max(axis=1)


def empirical_system_sf(samples: SampleMatrix, structure, grid: EvalGrid, level: float = 0.99) -> EmpiricalCurve:
    """Fraction of system lifetimes exceeding each grid time, with Wilson bounds."""
    if not 0 < level < 1:
        raise InvalidParameter("level", "must lie in (0, 1)")
    life = np.sort(system_lifetimes(samples, structure))
    N = life.size
    survivors = N - np.searchsorted(life, grid.t, side="right")
    lo = np.empty(len(grid))
    hi = np.empty(len(grid))
    for j, k in enumerate(survivors):
        ci = binomtest(int(k), N).proportion_ci(confidence_level=level, method="wilson")
        lo[j], hi[j] = ci.low, ci.high
    est = survivors / N
    return EmpiricalCurve(grid, est, np.minimum(lo, est), np.maximum(hi, est), level, N)


@dataclass
class CoverageReport:
    coverage: float
    passed: bool
    inside: np.ndarray
    analytic: np.ndarray
    empirical: EmpiricalCurve
    threshold: float = 0.95

    def to_json(self) -> dict:
        return {"coverage": self.coverage, "passed": self.passed, "threshold": self.threshold,
                "level": self.empirical.level, "n_samples": self.empirical.n_samples,
                "n_points": int(self.inside.size), "outside_t": [float(x) for x in self.empirical.grid.t[~self.inside]]}


def mc_validate(model, structure, grid: EvalGrid, n_samples: int = 100_000, level: float = 0.99, seed: int = 0,
                analytic: Optional[Union[np.ndarray, Callable]] = None, threads: int = 1,
                threshold: float = 0.95) -> CoverageReport:
    """Share of grid points where the analytic system SF lies in the empirical interval.

    ``analytic`` overrides the values under test (an array or a function of
    the grid times); it exists so the harness can be shown to reject a
    corrupted curve.  Passes iff the share is at least ``threshold``.
    """
    model = validate(model)
    samples = sample_model(model, n_samples, seed, threads)
    emp = empirical_system_sf(samples, structure, grid, level)
    if analytic is None:
        vals, _ = evaluate(SystemSpec.dependent(model, structure), Func.SF, grid.t)
    elif callable(analytic):
        vals = np.asarray(analytic(grid.t), dtype=float)
    else:
        vals = np.asarray(analytic, dtype=float)
    inside = (vals >= emp.ci_low) & (vals <= emp.ci_high)
    cov = float(inside.mean())
    return CoverageReport(cov, cov >= threshold, inside, vals, emp, threshold)
