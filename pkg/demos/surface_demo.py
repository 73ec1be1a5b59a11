"""Build an open Lipschitz surface over a strip of columns and draw it.

The surface value of a column is one plus how far the column is flooded by
admissible paths climbing from the floor layer; the site at the value is
always open, and neighbouring values never differ by more than one.
"""

from lipsurf import PercolationField, build_surface, verify_surface

D = 2
P = 0.97
SEED = 7
RADIUS = 36

field = PercolationField(D, P, master_seed=SEED)
base = [(x,) for x in range(-RADIUS, RADIUS + 1)]
patch = build_surface(field, base)
report = verify_surface(field, patch)

values = [patch.values[c] for c in patch.columns]
print(f"surface over {len(base)} columns at p={P} (seed {SEED})")
print(f"certified fraction: {patch.certified_fraction():.3f}")
print(f"openness violations: {len(report.openness_violations)}, "
      f"Lipschitz violations: {len(report.lipschitz_violations)}")
print()

top = max(values)
for level in range(top, 0, -1):
    row = "".join("#" if v >= level else " " for v in values)
    print(f"{level:2d} |{row}|")
print("   +" + "-" * len(values) + "+")
print()
print("values:", " ".join(str(v) for v in values))
