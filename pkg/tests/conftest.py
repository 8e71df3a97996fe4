"""Shared fixtures and random-instance generators for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from orric import (
    AccuracyModel,
    Decision,
    InfeasibleError,
    InferConfig,
    ProfileSet,
    RetrainConfig,
    Trace,
    evaluate_objective,
    make_model,
)

FAMILY_POOL = ("linear", "shifted-power", "exponential-saturation", "shifted-log")

ACCEPTANCE_LINES: list[str] = []


def record_verdict(number: int, ok: bool, detail: str) -> str:
    """Queue one acceptance verdict for the terminal summary."""
    line = f"criterion {number:02d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # the reporter writes through capture, so the verdicts stay visible
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def worked_profiles() -> ProfileSet:
    # two-by-two menus used throughout the worked examples
    return ProfileSet(retrain=[(0.0, 0.0), (1.0, 10.0)], infer=[(0.6, 2.0), (1.0, 5.0)])


@pytest.fixture
def worked_model() -> AccuracyModel:
    return make_model("linear", {"intercept": 0.5, "slope": 0.3}, 1.0)


@pytest.fixture
def worked_trace() -> Trace:
    return Trace(d=(1.0, 1.0), c=(12.0, 5.0), d_min=1.0, d_max=1.0)


def strictly_increasing(rng: np.random.Generator, k: int, lo: float, hi: float) -> np.ndarray:
    """k strictly increasing values with lo < v_1 < ... < v_k = hi."""
    steps = rng.uniform(0.1, 1.0, k)
    cum = np.cumsum(steps)
    return lo + (hi - lo) * cum / cum[-1]


def random_profileset(
    rng: np.random.Generator,
    max_m: int = 4,
    max_n: int = 4,
    min_m: int = 1,
    min_n: int = 1,
) -> ProfileSet:
    """A valid post-pruning menu pair: strictly ascending in cost and payoff."""
    m = int(rng.integers(min_m, max_m + 1))
    n = int(rng.integers(min_n, max_n + 1))
    retrain = [RetrainConfig(gain=0.0, cost=0.0)]
    if m > 1:
        gains = strictly_increasing(rng, m - 1, 0.0, float(rng.uniform(0.3, 1.0)))
        costs = strictly_increasing(rng, m - 1, 0.0, float(rng.uniform(1.0, 20.0)))
        retrain += [RetrainConfig(gain=float(g), cost=float(c)) for g, c in zip(gains, costs)]
    profits = strictly_increasing(rng, n, 0.0, 1.0)
    icosts = strictly_increasing(rng, n, 0.0, float(rng.uniform(1.0, 10.0)))
    infer = [InferConfig(profit=float(p), cost=float(c)) for p, c in zip(profits, icosts)]
    return ProfileSet(retrain=retrain, infer=infer)


def random_model(rng: np.random.Generator, domain_max: float) -> AccuracyModel:
    """A valid curve from a random non-constant family with f(0) > 0."""
    family = FAMILY_POOL[int(rng.integers(len(FAMILY_POOL)))]
    f0 = float(rng.uniform(0.3, 0.7))
    if family == "linear":
        slope = float(rng.uniform(0.01, (1.0 - f0) / domain_max))
        params = {"intercept": f0, "slope": slope}
    elif family == "shifted-power":
        shift = float(rng.uniform(0.5, 2.0))
        power = float(rng.uniform(0.5, 2.0))
        limit = float(rng.uniform(f0 + 0.1, 1.2))
        params = {"limit": limit, "scale": (limit - f0) * shift**power,
                  "shift": shift, "power": power}
    elif family == "exponential-saturation":
        limit = float(rng.uniform(f0 + 0.1, 1.2))
        params = {"limit": limit, "scale": limit - f0, "rate": float(rng.uniform(0.5, 3.0))}
    else:
        shift = float(rng.uniform(0.5, 2.0))
        scale = float(rng.uniform(0.05, 0.3))
        params = {"scale": scale, "shift": shift,
                  "offset": f0 - scale * float(np.log(shift))}
    return make_model(family, params, domain_max)


def random_feasible_trace(
    rng: np.random.Generator, profiles: ProfileSet, horizon: int
) -> Trace:
    """Volumes in [1, 10]; capacities span scarce through more-than-sufficient."""
    d = rng.uniform(1.0, 10.0, horizon)
    lo = profiles.min_infer_cost
    hi = 1.2 * profiles.top_pair_cost
    c = d * rng.uniform(lo, hi, horizon)
    return Trace(d=tuple(d), c=tuple(c), d_min=1.0, d_max=10.0)


def naive_optimal_total(trace, profiles, model):
    """Max objective over the full cartesian product of decision sequences."""
    slot_choices = [
        Decision(i, j)
        for i in range(1, profiles.m + 1)
        for j in range(1, profiles.n + 1)
    ]
    best = None
    for seq in itertools.product(slot_choices, repeat=trace.horizon):
        try:
            result = evaluate_objective(seq, trace, profiles, model)
        except InfeasibleError:
            continue
        if best is None or result.total > best:
            best = result.total
    return best
