"""Synthetic trace laws and the image-classification replay setup.

Traces are drawn from small declarative specs so batch experiments stay
reproducible: volumes and capacities come from named laws seeded with a
counter-based generator. The replay turns the shipped compute/accuracy
table into menus, a drift curve pinned by its end value and end slope,
and a capacity law spanning the per-slot compute of the deployed
(student) and labeling (teacher) models at full input resolution.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .accuracy import AccuracyModel, make_model
from .engine import Trace, ensure_feasible
from .profiles import InferConfig, ProfileSet, RetrainConfig, normalize_profits, prune_dominated

__all__ = [
    "TraceSpec",
    "ReplaySpec",
    "generate_trace",
    "build_replay",
    "load_compute_table",
    "corruption_labels",
    "load_replay_spec",
    "NOISE_CORRUPTIONS",
    "SAMPLING_RATIOS",
]

D_LAWS = ("constant", "uniform")
C_LAWS = ("constant", "uniform", "sufficient", "scarce")

STUDENT_MODEL = "MobileNetV2"
TEACHER_MODEL = "ResNet50"
FULL_RESOLUTION = 32
MACS_PER_MILLION = 1e6

# accuracy ceiling reachable after full retraining, as a fraction; the noise
# corruptions lose their full-resolution inference row to pruning, which
# lowers the ceiling to the next resolution's clean accuracy
F_AT_MAX_DEFAULT = 0.7957
F_AT_MAX_NOISE = 0.7329
NOISE_CORRUPTIONS = frozenset({"gaussian noise", "impulse noise", "shot noise", "speckle noise"})

SAMPLING_RATIOS = (0.0, 0.1, 0.2, 0.3, 0.5, 1.0)


@dataclass(frozen=True)
class TraceSpec:
    """Declarative trace description.

    d_law: constant (value d_lo) or uniform on [d_lo, d_hi].
    c_law: constant (value c_lo), uniform on [c_lo, c_hi], or derived
    from the menus: sufficient affords the top pair every slot, scarce
    affords exactly the cheapest inference.
    """

    horizon: int
    d_law: str = "constant"
    d_lo: float = 1000.0
    d_hi: float | None = None
    c_law: str = "sufficient"
    c_lo: float | None = None
    c_hi: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.d_law not in D_LAWS:
            raise ValueError(f"unknown d_law {self.d_law!r}; known: {list(D_LAWS)}")
        if self.c_law not in C_LAWS:
            raise ValueError(f"unknown c_law {self.c_law!r}; known: {list(C_LAWS)}")
        if self.d_lo <= 0.0:
            raise ValueError("d_lo must be positive")
        if self.d_hi is not None and self.d_hi < self.d_lo:
            raise ValueError("d_hi must be >= d_lo")


def generate_trace(spec: TraceSpec, profiles: ProfileSet | None = None) -> Trace:
    """Draw the trace a TraceSpec describes, deterministically in the seed.

    The menu-derived laws (sufficient, scarce) require profiles; when
    profiles are given the result is also checked to afford the cheapest
    inference configuration in every slot.
    """
    # counter-based generator so concurrent batch runs stay reproducible
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    horizon = spec.horizon
    d_hi = spec.d_lo if spec.d_hi is None else spec.d_hi
    if spec.d_law == "constant":
        d = np.full(horizon, spec.d_lo)
    else:
        d = rng.uniform(spec.d_lo, d_hi, horizon)

    if spec.c_law in ("sufficient", "scarce"):
        if profiles is None:
            raise ValueError(f"c_law {spec.c_law!r} needs a profile set")
        per_sample = profiles.top_pair_cost if spec.c_law == "sufficient" else profiles.min_infer_cost
        c = d * per_sample
    elif spec.c_law == "constant":
        if spec.c_lo is None:
            raise ValueError("c_law 'constant' needs c_lo")
        c = np.full(horizon, spec.c_lo)
    else:
        if spec.c_lo is None or spec.c_hi is None:
            raise ValueError("c_law 'uniform' needs c_lo and c_hi")
        if spec.c_hi < spec.c_lo:
            raise ValueError("c_hi must be >= c_lo")
        c = rng.uniform(spec.c_lo, spec.c_hi, horizon)

    trace = Trace(d=tuple(d), c=tuple(c), d_min=spec.d_lo, d_max=d_hi)
    if profiles is not None:
        ensure_feasible(trace, profiles)
    return trace


@dataclass(frozen=True)
class ReplaySpec:
    """Replay of the image-classification deployment.

    Retraining cost per sample is ratio * (teacher labeling pass plus
    train_cost_multiplier student passes per epoch) at full resolution;
    gains are those costs normalized so the top entry buys gain 1.
    f_at_max defaults per corruption (see NOISE_CORRUPTIONS); L is the
    end-slope price of retraining.
    """

    corruption: str
    sampling_ratios: tuple[float, ...] = SAMPLING_RATIOS
    train_cost_multiplier: float = 3.0
    epochs_per_slot: int = 1
    f_at_max: float | None = None
    L: float = 0.01
    horizon: int = 100
    data_per_slot: float = 1000.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sampling_ratios", tuple(float(r) for r in self.sampling_ratios))
        if not self.sampling_ratios or max(self.sampling_ratios) <= 0.0:
            raise ValueError("sampling_ratios needs at least one positive entry")
        if min(self.sampling_ratios) < 0.0:
            raise ValueError("sampling_ratios must be >= 0")
        if self.train_cost_multiplier <= 0.0:
            raise ValueError("train_cost_multiplier must be positive")
        if self.epochs_per_slot < 1:
            raise ValueError("epochs_per_slot must be >= 1")
        if self.L < 0.0:
            raise ValueError("L must be >= 0")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.data_per_slot <= 0.0:
            raise ValueError("data_per_slot must be positive")


@lru_cache(maxsize=1)
def load_compute_table() -> tuple[dict, ...]:
    """Rows of the shipped compute/accuracy table."""
    rows = []
    with resources.files("orric").joinpath("data/cifar10c_profiles.csv").open() as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "model": row["model"],
                    "resolution": int(row["resolution"]),
                    "macs_m": float(row["macs_m"]),
                    "latency_us": float(row["latency_us"]),
                    "corruption": row["corruption"],
                    "accuracy": float(row["accuracy"]),
                }
            )
    return tuple(rows)


def corruption_labels() -> tuple[str, ...]:
    return tuple(sorted({row["corruption"] for row in load_compute_table()}))


def _model_macs(model: str, resolution: int) -> float:
    for row in load_compute_table():
        if row["model"] == model and row["resolution"] == resolution:
            return row["macs_m"] * MACS_PER_MILLION
    raise ValueError(f"no table row for {model} at resolution {resolution}")


def build_replay(spec: ReplaySpec) -> tuple[ProfileSet, AccuracyModel, TraceSpec]:
    """Assemble menus, drift curve, and capacity law for a replay run.

    Inference menus are the student rows for the corruption with
    accuracies normalized to the best one; dominated resolutions drop
    out. Capacity per slot is uniform between the student's and the
    teacher's full-resolution compute for one slot of data.
    """
    rows = sorted(
        (
            row
            for row in load_compute_table()
            if row["model"] == STUDENT_MODEL and row["corruption"] == spec.corruption
        ),
        key=lambda row: row["macs_m"],
    )
    if not rows:
        raise ValueError(
            f"unknown corruption {spec.corruption!r}; known: {list(corruption_labels())}"
        )
    profits = normalize_profits([row["accuracy"] for row in rows])
    infer = [
        InferConfig(profit=p, cost=row["macs_m"] * MACS_PER_MILLION)
        for p, row in zip(profits, rows)
    ]

    student_full = _model_macs(STUDENT_MODEL, FULL_RESOLUTION)
    teacher_full = _model_macs(TEACHER_MODEL, FULL_RESOLUTION)
    per_unit = teacher_full + spec.epochs_per_slot * spec.train_cost_multiplier * student_full
    costs = [ratio * per_unit for ratio in spec.sampling_ratios]
    beta = 1.0 / max(costs)
    retrain = [RetrainConfig(gain=cost * beta, cost=cost) for cost in costs]

    profile_set = prune_dominated(retrain, infer)
    f_at_max = spec.f_at_max
    if f_at_max is None:
        f_at_max = F_AT_MAX_NOISE if spec.corruption in NOISE_CORRUPTIONS else F_AT_MAX_DEFAULT

    domain_max = profile_set.max_gain
    if spec.L == 0.0:
        model = make_model("constant", {"value": f_at_max}, domain_max)
    else:
        # the minimal curve pinned by its end value and end slope
        model = make_model(
            "linear",
            {"intercept": f_at_max - spec.L * domain_max, "slope": spec.L},
            domain_max,
        )

    trace_spec = TraceSpec(
        horizon=spec.horizon,
        d_law="constant",
        d_lo=spec.data_per_slot,
        c_law="uniform",
        c_lo=spec.data_per_slot * student_full,
        c_hi=spec.data_per_slot * teacher_full,
        seed=spec.seed,
    )
    return profile_set, model, trace_spec


def load_replay_spec(path) -> ReplaySpec:
    """Read a ReplaySpec from JSON mirroring its fields."""
    data = json.loads(Path(path).read_text())
    if "sampling_ratios" in data:
        data["sampling_ratios"] = tuple(data["sampling_ratios"])
    try:
        return ReplaySpec(**data)
    except TypeError as exc:
        raise ValueError(f"bad replay spec: {exc}") from exc
