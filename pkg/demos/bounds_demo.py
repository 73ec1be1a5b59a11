"""Closed-form constants across dimensions and densities.

For each (d, p): the step count a, the two geometric rates, the explicit
prefactor, and the branching-random-walk diagnostics (the optimal tilt and
its transform value).  The last block locates, per dimension, the density
above which the optimally tilted transform dips below one.
"""

from lipsurf.bounds import (constants_summary, minimize_offspring_laplace,
                            subcritical_threshold)

print(f"{'d':>2} {'p':>6} {'a':>3} {'a*q':>7} {'a^2*q':>7} {'prefactor':>10} "
      f"{'mu*':>8} {'alpha*':>9}")
for d in (2, 3, 4):
    for p in (0.95, 0.98, 0.99, 0.999):
        s = constants_summary(d, p)
        pref = f"{s['prefactor']:.4f}" if s["prefactor"] else "   --"
        print(f"{d:>2} {p:>6} {s['steps_per_site']:>3} "
              f"{s['surface_tail_rate']:>7.4f} {s['spread_tail_rate']:>7.4f} "
              f"{pref:>10} {s['brw_mu_star']:>8.4f} {s['brw_alpha_star']:>9.5f}")
print()

print("density where the optimal transform crosses 1 (no reference value "
      "exists; pinned by its own bracketing postcondition):")
for d in (2, 3, 4):
    p1 = subcritical_threshold(d, tol=1e-6)
    a_above = minimize_offspring_laplace(d, p1 + 1e-6)[1]
    print(f"  d={d}: p1 = {p1:.6f} (alpha* just above: {a_above:.6f})")
