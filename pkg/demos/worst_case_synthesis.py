# Worst-case synthesis: how invisible can a function be made to a truncated
# transform?  Grow an orthonormal sine family, minimize the image-energy
# Gramian, and watch the smallest achievable ratio ||T f||^2 / ||f||^2
# collapse exponentially with the subspace dimension.
#
#   python3 demos/worst_case_synthesis.py

import numpy as np

from illposed import (FigureId, Interval, OperatorKind, build_gramian,
                      make_grid, make_sine_basis, reproduce_figure,
                      worst_function)

op = OperatorKind.hilbert_truncated(Interval(0, 1), Interval(2, 3))
grid = make_grid(Interval(0, 1), 256)

print("smallest Gramian eigenvalue vs sine-basis size (Hilbert, gap [1,2]):")
for n in range(1, 10):
    rep = build_gramian(op, make_sine_basis(Interval(0, 1), n), grid)
    print(f"  n={n}:  min eig = {rep.min_eigenvalue:.3e}")

rep = build_gramian(op, make_sine_basis(Interval(0, 1), 6), grid)
f = worst_function(rep)
print("\nworst 6-mode combination (coefficients):")
print(" ", np.array2string(rep.minimizer_coefficients, precision=5))
xs = np.linspace(0, 1, 9)
print("  sampled f:", np.array2string(f.values(xs), precision=4))

print("\nbuilt-in reference figures (printed plot coefficients):")
for fid in (FigureId.FIG1, FigureId.FIG2, FigureId.FIG3):
    rec = reproduce_figure(fid)
    print(f"  figure {rec['figure']}: computed {rec['computed_ratio']:.3e}  "
          f"claimed {rec['claimed_ratio']:.0e}  pass={rec['pass']}")
print("\n(figures 1 and 3 are expected to miss their captioned ratios: the")
print(" printed coefficients carry a sign typo / rounding floor; see README)")
