"""Build operating-point menus from the shipped compute table and prune them.

Each inference entry is (profit, cost per sample); each retraining entry
is (accuracy gain, cost per sample). Entries that cost at least as much
as another while paying no more are dominated and never worth picking,
so menu assembly drops them up front.
"""

from orric import load_compute_table, normalize_profits, prune_dominated

STUDENT = "MobileNetV2"
MACS = 1e6

table = load_compute_table()

for corruption in ("gaussian noise", "fog"):
    rows = sorted(
        (r for r in table if r["model"] == STUDENT and r["corruption"] == corruption),
        key=lambda r: r["resolution"],
    )
    print(f"== {STUDENT} under {corruption} ==")
    for r in rows:
        print(
            f"  {r['resolution']}x{r['resolution']}: accuracy {r['accuracy']:.4f}, "
            f"{r['macs_m']:.2f}M MACs"
        )

    profits = normalize_profits([r["accuracy"] for r in rows])
    raw_infer = [(p, r["macs_m"] * MACS) for p, r in zip(profits, rows)]
    profiles = prune_dominated([], raw_infer)
    print(f"  kept {profiles.n} of {len(raw_infer)} inference entries after pruning:")
    for cfg in profiles.infer:
        print(f"    profit {cfg.profit:.4f} at cost {cfg.cost:.3g}")
    kept_costs = {cfg.cost for cfg in profiles.infer}
    dropped = [r["resolution"] for r in rows if r["macs_m"] * MACS not in kept_costs]
    if dropped:
        print(f"  dominated resolutions: {dropped}")
    print()

print("gaussian noise flattens the accuracy-resolution curve, so the most")
print("expensive resolution stops paying for itself and gets pruned; under")
print("fog every step up in resolution still buys accuracy, so all four stay.")
