"""Minimal local covers: the smallest open Lipschitz cap over one column.

For a few values of p, sample fields and report the cover of the origin:
its positive entries, its spread radius (how far the underlying climb set
reaches) and its cover radius (always spread + 1).
"""

from collections import Counter

from lipsurf import PercolationField, minimal_cover

D = 2
SEED = 99

for p in (0.99, 0.97, 0.95):
    radii = Counter()
    example = None
    for rep in range(2000):
        field = PercolationField(D, p, master_seed=SEED, replicate=rep)
        cover = minimal_cover(field, (0,))
        if not cover.certified:
            radii["unresolved"] += 1
            continue
        radii[cover.cover_radius] += 1
        if cover.cover_radius >= 3 and example is None:
            example = cover
    print(f"p={p}: cover radius distribution over 2000 fields")
    for key in sorted(radii, key=str):
        print(f"  radius {key}: {radii[key]}")
    if example is not None:
        cols = sorted(example.entries)
        print("  a wide one:", {c[0]: example.entries[c] for c in cols},
              f"(spread {example.spread_radius}, cover {example.cover_radius})")
    print()
