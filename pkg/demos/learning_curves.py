"""Tour of the accuracy-over-volume curve families.

Every family maps cumulative per-sample retraining gain x to model
accuracy f(x); validation enforces concave nondecreasing shape with
f(0) > 0. The end-slope underestimate L drives the weight schedule and
the closed-form guarantees, and makes L * x + f_at_max an upper bound
on the whole curve.
"""

from orric import linear_bound_holds, make_model

SPECS = [
    ("linear", {"intercept": 0.5, "slope": 0.3}),
    ("shifted-power", {"limit": 0.9, "scale": 0.4, "shift": 1.0, "power": 1.0}),
    ("exponential-saturation", {"limit": 0.8, "scale": 0.3, "rate": 2.0}),
    ("shifted-log", {"scale": 0.2, "shift": 1.0, "offset": 0.5}),
]
DOMAIN = 1.0
GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

for family, params in SPECS:
    model = make_model(family, params, DOMAIN)
    values = "  ".join(f"f({x:.2f})={model.eval(x):.4f}" for x in GRID)
    print(f"{family:>24}: {values}")
    print(
        f"{'':>24}  f_at_max={model.f_at_max:.4f}  default L={model.L:.4f}  "
        f"linear overestimate holds: {linear_bound_holds(model)}"
    )

print()
print("a smaller L keeps the bound valid but weakens the schedule; override it")
model = make_model("linear", {"intercept": 0.5, "slope": 0.3}, DOMAIN, L_override=0.01)
print(f"linear with L_override=0.01: L={model.L}, still holds: {linear_bound_holds(model)}")
