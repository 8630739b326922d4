"""Fréchet distance between polylines: decision, search, discrete bound.

The Fréchet distance is the classic dog-leash measure: both curves are
traversed monotonically and the leash length is the worst pointwise gap
under the best traversal.  This script walks through the primitives the
rest of the toolkit builds on.
"""

import numpy as np

from pathdist import PolyLine, discrete_frechet, frechet_decision, frechet_distance

# Two parallel streets, one meter apart: the leash never needs more than 1 m.
f = PolyLine([(0, 0), (50, 0), (80, 20)])
g = PolyLine(f.points + np.array([0.0, 1.0]))

print("decision at 0.99 m:", frechet_decision(f, g, 0.99))
print("decision at 1.01 m:", frechet_decision(f, g, 1.01))
print("distance (tol 1e-6):", frechet_distance(f, g, 1e-6))

# The discrete variant couples vertex sequences only, so sparse vertices
# overestimate badly: here the middle vertex of b has no partner anywhere
# near it on a.  Resampling closes the gap to at most the sample spacing.
a = PolyLine([(0, 0), (100, 0)])
b = PolyLine([(0, 1), (50, 1), (100, 1)])
d = frechet_distance(a, b, 1e-3)
print("\nsparse-vertex pair:")
print("  continuous:", round(d, 3))
print("  discrete on raw vertices:", round(discrete_frechet(a, b), 3))
for spacing in (25.0, 5.0, 0.5):
    ra = a.resampled(spacing)
    rb = b.resampled(spacing)
    print(f"  discrete at spacing {spacing:5}:", round(discrete_frechet(ra, rb), 3))
