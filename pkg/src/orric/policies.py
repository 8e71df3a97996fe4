"""Per-slot decision rules for splitting compute between retraining and inference.

The scheduled rule (orric) prices retraining gain and inference profit
with per-slot weights and maximizes their weighted sum under the
per-sample budget via a single two-pointer scan. The four heuristics
cover the natural fixed strategies: spend everything on inference,
top up retraining with leftovers, put retraining first, or shift the
budget split from retraining toward inference as the horizon runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .accuracy import AccuracyModel
from .errors import InfeasibleError
from .profiles import ProfileSet

__all__ = [
    "ORRIC",
    "INFERENCE_ONLY",
    "INFERENCE_GREEDY",
    "KNOWLEDGE_DISTILLATION",
    "FOCUS_SHIFT",
    "HEURISTICS",
    "POLICIES",
    "ScheduleWeights",
    "Decision",
    "DecisionSequence",
    "compute_weights",
    "orric_step",
    "heuristic_step",
]

ORRIC = "orric"
INFERENCE_ONLY = "inference-only"
INFERENCE_GREEDY = "inference-greedy"
KNOWLEDGE_DISTILLATION = "knowledge-distillation"
FOCUS_SHIFT = "focus-shift"
HEURISTICS = (INFERENCE_ONLY, INFERENCE_GREEDY, KNOWLEDGE_DISTILLATION, FOCUS_SHIFT)
POLICIES = (ORRIC,) + HEURISTICS


@dataclass(frozen=True)
class ScheduleWeights:
    """Slot weights: v prices retraining gain, w prices inference profit.

    lam is the per-slot regularizer value, kept for diagnostics only; it
    never enters a decision. u is the slot's per-sample budget, filled in
    by the runner.
    """

    v: float
    w: float
    lam: float
    u: float | None = None

    def __post_init__(self) -> None:
        if self.v < 0.0:
            raise ValueError("v must be >= 0")
        if self.w <= 0.0:
            raise ValueError("w must be positive")
        if self.lam < 0.0:
            raise ValueError("lam must be >= 0")
        if self.u is not None and self.u <= 0.0:
            raise ValueError("per-sample budget u must be positive")


@dataclass(frozen=True)
class Decision:
    """1-based menu indices chosen for one slot."""

    retrain_index: int
    infer_index: int


DecisionSequence = tuple[Decision, ...]


def compute_weights(
    t: int,
    horizon: int,
    model: AccuracyModel,
    d_min: float,
    d_max: float,
    a_min_infer: float,
) -> ScheduleWeights:
    """Weight schedule for slot t of the given horizon.

    v discounts retraining by the guaranteed future value of one unit of
    gain (a harmonic tail that vanishes at the last slot), w prices
    inference by the curve ceiling, except in slot 1 where it uses the
    overestimate intercept so the two prices stay comparable.
    """
    if not 1 <= t <= horizon:
        raise ValueError(f"slot t = {t} outside 1..{horizon}")
    if not 0.0 < d_min <= d_max:
        raise ValueError("need 0 < d_min <= d_max")
    if a_min_infer <= 0.0:
        raise ValueError("a_min_infer must be positive")
    base = model.L * (d_min * a_min_infer / d_max)
    v = base * math.fsum(1.0 / tau for tau in range(t, horizon))
    w = model.g_at_max if t == 1 else model.f_at_max
    return ScheduleWeights(v=v, w=w, lam=base / t)


def orric_step(weights: ScheduleWeights, profiles: ProfileSet) -> Decision:
    """Pick the budget-feasible pair maximizing v * gain + w * profit.

    Walks retraining cost up and inference cost down in one O(M + N)
    pass; because both menus are strictly ascending, every maximizer is
    visited. Ties keep the first maximizer in scan order (strict >).
    """
    u = weights.u
    if u is None:
        raise ValueError("per-sample budget u is not set on the weights")
    retrain, infer = profiles.retrain, profiles.infer
    i, j = 0, len(infer) - 1
    best_i = best_j = -1
    best = 0.0
    while i < len(retrain) and j >= 0:
        if retrain[i].cost + infer[j].cost <= u:
            value = weights.v * retrain[i].gain + weights.w * infer[j].profit
            if value > best:
                best_i, best_j, best = i, j, value
            i += 1
        else:
            j -= 1
    if best_i < 0:
        raise InfeasibleError(
            f"no menu pair fits the per-sample budget {u} (cheapest inference costs "
            f"{profiles.min_infer_cost})"
        )
    return Decision(best_i + 1, best_j + 1)


def _max_fitting_infer(profiles: ProfileSet, budget: float) -> int:
    best = -1
    for k, cfg in enumerate(profiles.infer):
        if cfg.cost <= budget:
            best = k
        else:
            break
    return best


def _max_fitting_retrain(profiles: ProfileSet, budget: float) -> int:
    best = -1
    for k, cfg in enumerate(profiles.retrain):
        if cfg.cost <= budget:
            best = k
        else:
            break
    return best


def heuristic_step(policy: str, t: int, horizon: int, u: float, profiles: ProfileSet) -> Decision:
    """One slot of a named fixed strategy under per-sample budget u."""
    if policy not in HEURISTICS:
        raise ValueError(f"unknown heuristic {policy!r}; known: {list(HEURISTICS)}")
    if not 1 <= t <= horizon:
        raise ValueError(f"slot t = {t} outside 1..{horizon}")
    if u <= 0.0:
        raise InfeasibleError(f"per-sample budget {u} is not positive")

    if policy == INFERENCE_ONLY:
        j = _max_fitting_infer(profiles, u)
        if j < 0:
            raise InfeasibleError(f"no inference configuration fits budget {u}")
        return Decision(1, j + 1)

    if policy == INFERENCE_GREEDY:
        j = _max_fitting_infer(profiles, u)
        if j < 0:
            raise InfeasibleError(f"no inference configuration fits budget {u}")
        i = _max_fitting_retrain(profiles, u - profiles.infer[j].cost)
        return Decision(i + 1, j + 1)

    if policy == KNOWLEDGE_DISTILLATION:
        # retraining first, but always leave room for the cheapest inference
        i = _max_fitting_retrain(profiles, u - profiles.min_infer_cost)
        if i < 0:
            raise InfeasibleError(f"no inference configuration fits budget {u}")
        j = _max_fitting_infer(profiles, u - profiles.retrain[i].cost)
        return Decision(i + 1, j + 1)

    # focus-shift: retraining's budget share decays linearly to 0 at the horizon
    rho = 0.0 if horizon <= 1 else (horizon - t) / (horizon - 1)
    i = _max_fitting_retrain(profiles, rho * (u - profiles.min_infer_cost))
    if i < 0:
        raise InfeasibleError(f"no inference configuration fits budget {u}")
    j = _max_fitting_infer(profiles, u - profiles.retrain[i].cost)
    if j < 0:
        raise InfeasibleError(f"no inference configuration fits budget {u}")
    return Decision(i + 1, j + 1)
