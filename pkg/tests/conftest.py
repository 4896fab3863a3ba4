import itertools

import numpy as np
import pytest

from sysdep.models import example, from_dict
from sysdep.systems import EvalGrid

_RESULTS: list[tuple[str, bool, str]] = []


def subset_keys(n):
    for k in range(1, n + 1):
        for c in itertools.combinations(range(1, n + 1), k):
            yield ",".join(map(str, c))


def random_rates(rng, n, singleton=(0.2, 2.0), interaction_total=(0.2, 2.5)):
    """Singleton rates uniform on ``singleton``; interaction rates scaled to a random total."""
    rates = {}
    inter = [k for k in subset_keys(n) if "," in k]
    w = rng.random(len(inter)) + 0.05
    w *= rng.uniform(*interaction_total) / w.sum()
    for i in range(1, n + 1):
        rates[str(i)] = float(rng.uniform(*singleton))
    rates.update({k: float(x) for k, x in zip(inter, w)})
    return rates


def random_mome(rng, n):
    return from_dict({"family": "MOME", "n": n, "rates": random_rates(rng, n)})


def random_mg1(rng, n):
    return from_dict({"family": "MG1", "n": n, "rates": random_rates(rng, n)})


def random_fgmw(rng, n, gamma=None):
    if gamma is None:
        gamma = float(rng.uniform(0.05, 0.95) * rng.choice([-1.0, 1.0]))
    return from_dict({"family": "FGMW", "n": n, "lambdas": rng.uniform(0.3, 2.0, n).tolist(),
                      "alphas": rng.uniform(0.5, 2.0, n).tolist(), "gamma": gamma})


def model(family):
    return from_dict(example(family))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid100():
    return EvalGrid.make(0.01, 10.0, 100, "log")


@pytest.fixture
def criterion():
    """Record an acceptance outcome; a summary line per criterion is printed at the end."""

    def record(name: str, ok: bool, detail: str = ""):
        _RESULTS.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
