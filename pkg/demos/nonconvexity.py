"""Why the slot objective cannot be handled by convex programming.

The per-slot score is a product f(x) * y of the accuracy reached and
the inference profit chosen. Even with f concave this surface is
neither concave nor convex: mixtures of two operating points can score
above or below the mixed endpoints depending on which corner pairs are
mixed. The witness search certifies both signs on a lattice.
"""

from orric import make_model, mixture_gap, nonconvexity_witness

print("bilinear core, f(x) = x on [0, 1], y in [0, 1]:")
up = mixture_gap(lambda x: x, 0.0, 1.0, 1.0, 0.5, 0.5)
down = mixture_gap(lambda x: x, 0.0, 1.0, 0.5, 1.0, 0.5)
print(f"  mixing (0, high-y) with (1, low-y): gap {up:+.3f} (above the chord)")
print(f"  mixing (0, low-y) with (1, high-y): gap {down:+.3f} (below the chord)")
print()

for family, params in (
    ("linear", {"intercept": 0.5, "slope": 0.3}),
    ("exponential-saturation", {"limit": 0.8, "scale": 0.3, "rate": 2.0}),
):
    model = make_model(family, params, 1.0)
    report = nonconvexity_witness(model, 0.5, 1.0)
    print(f"{family}: witness complete = {report.complete}")
    for side in ("positive", "negative"):
        point = getattr(report, side)
        print(
            f"  {side}: x=({point.x1:.3f}, {point.x2:.3f}) y=({point.y1:.3f}, "
            f"{point.y2:.3f}) alpha={point.alpha:.3f} gap={point.gap:+.2e}"
        )
print()

model = make_model("constant", {"value": 0.7}, 0.0)
report = nonconvexity_witness(model, 0.5, 1.0)
print(f"constant curve: positive={report.positive} negative={report.negative}")
print("a flat curve makes the surface linear in y, so no witness exists;")
print("everything else forces the exhaustive offline oracle used here.")
