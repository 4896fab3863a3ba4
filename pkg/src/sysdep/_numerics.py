"""Log-space helpers and subset enumeration."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .exceptions import SizeLimit

MAX_ENUM_N = 20
_LN2 = np.log(2.0)


def log1mexp(x):
    """Return ``log(1 - exp(x))`` for ``x <= 0`` without cancellation."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > -_LN2, np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


def log_expm1(x):
    """Return ``log(exp(x) - 1)`` for ``x >= 0``; large ``x`` does not overflow."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        big = x > 30.0
        return np.where(big, x + np.log1p(-np.exp(-np.where(big, x, 1.0))), np.log(np.expm1(np.where(big, 1.0, x))))


def signed_logsumexp(logs, signs, axis=0):
    """Log of ``sum(signs * exp(logs))`` along ``axis``.

    The signed sum must be positive; non-positive results map to ``-inf``.
    """
    logs = np.asarray(logs, dtype=float)
    m = np.max(logs, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    total = np.sum(np.asarray(signs) * np.exp(logs - m), axis=axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(np.where(total > 0, total, np.nan)) + np.squeeze(m, axis=axis)
    return np.where(total > 0, out, -np.inf)


@lru_cache(maxsize=32)
def nonempty_subsets(n: int) -> tuple[tuple[int, ...], ...]:
    """All nonempty subsets of ``range(n)`` ordered by size, then lexicographically."""
    if n > MAX_ENUM_N:
        raise SizeLimit(f"subset enumeration capped at n <= {MAX_ENUM_N}, got n={n}")
    return tuple(s for k in range(1, n + 1) for s in itertools.combinations(range(n), k))


def subset_masks(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean membership matrix (2**n - 1, n) and subset sizes."""
    subsets = nonempty_subsets(n)
    masks = np.zeros((len(subsets), n), dtype=bool)
    for row, s in enumerate(subsets):
        masks[row, list(s)] = True
    return masks, masks.sum(axis=1)


def rel_dev(a, b, floor: float = 0.0):
    """Elementwise ``|a - b| / max(|a|, |b|, floor)``; 0 where both vanish."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(a - b) / scale
    both_tiny = (np.abs(a) < 1e-300) & (np.abs(b) < 1e-300)
    return np.where(both_tiny, 0.0, out)
