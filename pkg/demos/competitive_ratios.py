"""Worst-case guarantees, their crossover, and the trace that attains one.

cr_inference_only = f(0)/f_at_max holds for the never-retrain policy on
any feasible trace, but no inference-only schedule can beat the tight
ceiling T*f(0)/(f(0)+(T-1)*f_at_max). The scheduled policy's guarantee
cr_orric grows with alpha, the priced future value of retraining, and
overtakes that ceiling once the horizon passes crossover_horizon.
"""

from orric import (
    ProfileSet,
    build_io_tight_instance,
    compute_bounds,
    make_model,
    offline_optimal,
    run_policy,
)

profiles = ProfileSet(retrain=[(0.0, 0.0), (1.0, 10.0)], infer=[(0.6, 2.0), (1.0, 5.0)])
model = make_model("linear", {"intercept": 0.5, "slope": 0.3}, 1.0, L_override=0.01)

print("bounds for the priced worked instance (d constant, L = 0.01):")
print(f"{'T':>5} {'cr_io':>8} {'tight_io_upper':>15} {'cr_orric':>9}")
for horizon in (2, 10, 40, 80, 81, 120, 200):
    b = compute_bounds(model, profiles, 1000.0, 1000.0, horizon)
    marker = "  <- orric guarantee passes the inference-only ceiling" if b.cr_orric_b > b.tight_cr_io_upper else ""
    print(f"{horizon:>5} {b.cr_inference_only:>8.4f} {b.tight_cr_io_upper:>15.4f} {b.cr_orric:>9.4f}{marker}")
b = compute_bounds(model, profiles, 1000.0, 1000.0, 2)
print(f"alpha={b.alpha}  crossover_horizon={b.crossover_horizon}")
print()

print("the adversarial trace attains the tight ceiling exactly:")
full_model = make_model("linear", {"intercept": 0.5, "slope": 0.3}, 1.0)
for horizon in (2, 4, 8):
    trace = build_io_tight_instance(full_model, profiles, horizon)
    io = run_policy("inference-only", trace, profiles, full_model).total
    opt = offline_optimal(trace, profiles, full_model).total
    closed = horizon * 0.5 / (0.5 + (horizon - 1) * 0.8)
    print(f"  T={horizon}: ratio {io / opt:.12f}  closed form {closed:.12f}")
