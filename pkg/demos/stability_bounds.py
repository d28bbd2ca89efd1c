# Stability bounds: ||T f|| can only be tiny if f oscillates.  Fit the
# exponential (or power-of-ratio) envelope along the shared eigenfunctions,
# relax the constants, and check random ensembles never dip below it.
#
#   python3 demos/stability_bounds.py

import numpy as np

from illposed import (Interval, OperatorKind, assemble_bertero_grunbaum,
                      gram_matrix, make_grid, make_rng, verify_lemma2,
                      verify_lemma3, verify_theorem, violation_count)
from illposed.stability import (EXPONENTIAL, eigenfunction_sweep,
                                fit_constants_from_sweep, random_sine_series,
                                random_nonnegative_series)

ab = Interval(1, 2)
grid = make_grid(ab, 256)
M = gram_matrix(OperatorKind.laplace_tt(ab), grid)
bg = assemble_bertero_grunbaum(ab, 128)

print("eigenfunction sweep (oscillation ratio vs image norm):")
sweep = eigenfunction_sweep(M, bg, 10)
for n, r, lhs in zip(sweep.indices, sweep.ratios, sweep.lhs):
    print(f"  mode {n:2d}: ratio {r:7.3f}   ||T u_n|| = {lhs:.3e}")
fit = fit_constants_from_sweep(sweep, EXPONENTIAL)
print(f"fitted envelope: ||T f|| >= {fit.c1:.3g} exp(-{fit.c2:.3g} ratio) ||f||"
      f"   (r^2 = {fit.r_squared:.4f})")

rng = make_rng(0xC0FFEE)
ensemble = random_sine_series(ab, 300, rng)
records = verify_theorem(M, fit, ensemble)
print(f"\nrelaxed bound vs 300 random sine series: "
      f"{violation_count(records)} violations")
margins = [r.lhs / r.rhs_at_fit for r in records if r.rhs_at_fit > 0]
print(f"smallest margin above the bound: {min(margins):.1f}x")

print("\nelementary lemmas on random ensembles:")
v2 = sum(not verify_lemma2(f, grid).passed for f in random_sine_series(ab, 200, rng))
v3 = sum(not verify_lemma3(f, grid, c2=1.0).passed
         for f in random_nonnegative_series(ab, 200, rng))
print(f"  sign-change sup bound:    {v2} violations / 200")
print(f"  nonnegative mass bound:   {v3} violations / 200")
