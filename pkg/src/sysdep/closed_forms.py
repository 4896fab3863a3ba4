"""Registry of analytic series/parallel system formulas.

Each entry maps ``(family, structure)`` to a function returning the triple
``(log_sf, log_cdf, hazard)`` on a time array.  RFR and AI follow from the
triple as ``hazard * exp(log_sf - log_cdf)`` and ``t * hazard / -log_sf``,
which are exactly the closed forms ``r / (exp(H) - 1)`` and ``t r / H``.

These evaluators use the family parameters directly (aggregate rates,
polynomial coefficients, subset coefficients) and never call
``log_joint_sf``; they are an independent route to the values produced by
the numeric engine in :mod:`sysdep.systems`.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ._numerics import log1mexp, signed_logsumexp, subset_masks
from .models import FGMW, LB1, MG1, MOME, MOMW, Crowder, IndExp, IndWeibull, Lee, LifetimeModel

Parts = tuple[np.ndarray, np.ndarray, np.ndarray]


def _series(H, r) -> Parts:
    return -H, log1mexp(-H), r


def series_indexp(m: IndExp, t) -> Parts:
    L = float(np.sum(m.lam))
    return _series(L * t, np.full_like(t, L))


def series_mome(m: MOME, t) -> Parts:
    L = m.rates.aggregate()
    return _series(L * t, np.full_like(t, L))


def mg1_coefficients(m: MG1) -> np.ndarray:
    return m.rates.order_sums()


def series_mg1(m: MG1, t) -> Parts:
    a = mg1_coefficients(m)
    k = np.arange(1, m.n + 1)
    tk = t[:, None] ** k
    H = tk @ a
    r = (t[:, None] ** (k - 1)) @ (k * a)
    return _series(H, r)


def _weibull_sums(lam, alpha, t):
    tt = t[:, None]
    x = lam * tt**alpha
    h = lam * alpha * tt ** (alpha - 1)
    return x, h


def series_indweibull(m: IndWeibull, t) -> Parts:
    x, h = _weibull_sums(m.lam, m.alpha, t)
    return _series(x.sum(axis=1), h.sum(axis=1))


def series_momw(m: MOMW, t) -> Parts:
    """Shock ``S`` contributes ``lambda_S * max_{i in S} t**alpha_i``.

    The active exponent is the largest shape for ``t >= 1`` and the smallest
    for ``t < 1``; at ``t == 1`` the hazard is the right derivative.
    """
    H = np.zeros_like(t)
    r = np.zeros_like(t)
    alpha = m.alpha
    for idx, rate in m.rates.positive_entries():
        a = np.where(t >= 1.0, alpha[idx].max(), alpha[idx].min())
        H += rate * t**a
        r += rate * a * t ** (a - 1)
    return _series(H, r)


def series_crowder(m: Crowder, t) -> Parts:
    x, h = _weibull_sums(np.array(m.lambdas), np.array(m.alphas), t)
    s, ds = x.sum(axis=1), h.sum(axis=1)
    H = m.cumulative(s)
    r = m.l * (m.gamma + s) ** (m.l - 1.0) * ds
    return _series(H, r)


def series_lee(m: Lee, t) -> Parts:
    L = m.lambda_L
    return _series(L * t**m.alpha, m.alpha * L * t ** (m.alpha - 1.0))


def lb1_terms(m: LB1, t):
    """``a, a', b, b'`` with ``a = sum lambda_i t**alpha_i`` and ``b = w(t, ..., t)``."""
    lam, alpha = np.array(m.lambdas), np.array(m.alphas)
    x, h = _weibull_sums(lam, alpha, t)
    a, da = x.sum(axis=1), h.sum(axis=1)
    tt = t[:, None]
    p = np.sum(lam ** (1.0 / m.m) * tt ** (alpha / m.m), axis=1)
    dp = np.sum(lam ** (1.0 / m.m) * (alpha / m.m) * tt ** (alpha / m.m - 1.0), axis=1)
    b = p**m.m
    db = m.m * p ** (m.m - 1.0) * dp
    return a, da, b, db


def series_lb1(m: LB1, t) -> Parts:
    a, da, b, db = lb1_terms(m, t)
    return _series(a + m.delta * b, da + m.delta * db)


def fgmw_terms(m: FGMW, t):
    """Pieces shared by the FGMW series and parallel formulas.

    Returns ``x`` (per-component cumulative hazards, shape (len(t), n)),
    ``h`` (component hazards), ``log_q`` with ``q = prod(1 - exp(-x_i))``
    (so ``q = 1 - theta``) and ``mu_sum = sum_i f_i / F_i``, for which
    ``q' = q * mu_sum``.
    """
    x, h = _weibull_sums(np.array(m.lambdas), np.array(m.alphas), t)
    log_q = np.sum(log1mexp(-x), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu_sum = np.sum(h / np.expm1(x), axis=1)
    return x, h, log_q, mu_sum


def series_fgmw(m: FGMW, t) -> Parts:
    x, h, log_q, mu_sum = fgmw_terms(m, t)
    q = np.exp(log_q)
    H = x.sum(axis=1) - np.log1p(m.gamma * q)
    dphi_over_phi = m.gamma * q * mu_sum / (1.0 + m.gamma * q)
    return _series(H, h.sum(axis=1) - dphi_over_phi)


def _parallel_from_exponents(E, dE, sizes) -> Parts:
    """Inclusion-exclusion over index sets ``I``: SF = sum (-1)**(|I|-1) exp(-E_I).

    ``E`` and ``dE`` have shape (K, m).  The CDF is accumulated as
    ``sum (-1)**|I| expm1(-E_I)`` so that it keeps relative accuracy near
    ``t = 0``.
    """
    signs = np.where(sizes % 2 == 1, 1.0, -1.0)[:, None]
    log_sf_direct = signed_logsumexp(-E, signs)
    F = np.sum(-signs * np.expm1(-E), axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_f = signed_logsumexp(-E + np.log(dE), signs * np.ones_like(E))
        log_sf = np.where(F < 0.5, np.log1p(-np.minimum(F, 0.5)), log_sf_direct)
        log_cdf = np.where(F < 0.5, np.log(np.where(F > 0, F, np.nan)), log1mexp(log_sf_direct))
    log_cdf = np.where((F <= 0) & (F < 0.5), -np.inf, log_cdf)
    return log_sf, log_cdf, np.exp(log_f - log_sf)


def _parallel_product(x, h) -> Parts:
    """Independent components: ``F = prod F_i`` and ``f = F * sum f_i / F_i``.

    Algebraically identical to the alternating sum over index sets, without
    its cancellation at small ``t``.
    """
    log_cdf = np.sum(log1mexp(-x), axis=1)
    log_sf = log1mexp(log_cdf)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mu_sum = np.sum(h / np.expm1(x), axis=1)
        r = mu_sum * np.exp(log_cdf - log_sf)
    return log_sf, log_cdf, r


def parallel_indexp(m: IndExp, t) -> Parts:
    return _parallel_product(t[:, None] * m.lam, np.repeat(m.lam[None, :], t.size, axis=0))


def mome_parallel_coefficients(m: MOME) -> np.ndarray:
    """``A_I`` = total rate of the shocks that hit at least one component of ``I``."""
    masks, _ = subset_masks(m.n)
    A = np.zeros(masks.shape[0])
    for idx, rate in m.rates.positive_entries():
        A += rate * masks[:, idx].any(axis=1)
    return A


def parallel_mome(m: MOME, t) -> Parts:
    _, sizes = subset_masks(m.n)
    A = mome_parallel_coefficients(m)
    return _parallel_from_exponents(A[:, None] * t[None, :], np.repeat(A[:, None], t.size, axis=1), sizes)


def mg1_parallel_coefficients(m: MG1) -> np.ndarray:
    """``C[I, k-1]`` = total rate of the size-``k`` subsets contained in ``I``."""
    masks, _ = subset_masks(m.n)
    C = np.zeros((masks.shape[0], m.n))
    for idx, rate in m.rates.positive_entries():
        C[:, len(idx) - 1] += rate * masks[:, idx].all(axis=1)
    return C


def parallel_mg1(m: MG1, t) -> Parts:
    _, sizes = subset_masks(m.n)
    C = mg1_parallel_coefficients(m)
    k = np.arange(1, m.n + 1)
    E = C @ (t[None, :] ** k[:, None])
    dE = C @ (k[:, None] * t[None, :] ** (k[:, None] - 1))
    return _parallel_from_exponents(E, dE, sizes)


def parallel_indweibull(m: IndWeibull, t) -> Parts:
    return _parallel_product(*_weibull_sums(m.lam, m.alpha, t))


def parallel_fgmw(m: FGMW, t) -> Parts:
    """``SF = theta + (-1)**(n-1) gamma exp(A) (1 - theta)`` with ``A = -sum x_i``.

    The CDF factorises as ``q * (1 - c)`` with ``q = 1 - theta`` and
    ``c = (-1)**(n-1) gamma exp(A)``, and the density is
    ``q * [mu_sum * (1 - c) + c * sum h_i]``.
    """
    x, h, log_q, mu_sum = fgmw_terms(m, t)
    sign = 1.0 if m.n % 2 == 1 else -1.0
    c = sign * m.gamma * np.exp(-x.sum(axis=1))
    log_cdf = log_q + np.log1p(-c)
    q = np.exp(log_q)
    theta = -np.expm1(log_q)
    sf_direct = theta + c * q
    with np.errstate(divide="ignore"):
        log_sf = np.where(log_cdf < np.log(0.5), np.log1p(-np.exp(log_cdf)), np.log(sf_direct))
    f = q * (mu_sum * (1.0 - c) + c * h.sum(axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = f / np.exp(log_sf)
    return log_sf, log_cdf, r


SERIES: dict[str, Callable[[LifetimeModel, np.ndarray], Parts]] = {
    "IndExp": series_indexp,
    "MOME": series_mome,
    "MG1": series_mg1,
    "IndWeibull": series_indweibull,
    "MOMW": series_momw,
    "Crowder": series_crowder,
    "Lee": series_lee,
    "LB1": series_lb1,
    "FGMW": series_fgmw,
}

PARALLEL: dict[str, Callable[[LifetimeModel, np.ndarray], Parts]] = {
    "IndExp": parallel_indexp,
    "MOME": parallel_mome,
    "MG1": parallel_mg1,
    "IndWeibull": parallel_indweibull,
    "FGMW": parallel_fgmw,
}


def lookup(family: str, structure: str):
    table = SERIES if structure == "series" else PARALLEL
    return table.get(family)


def registry_pairs() -> list[tuple[str, str]]:
    return [(f, "series") for f in SERIES] + [(f, "parallel") for f in PARALLEL]
