"""Frenet data, focal curvatures and the focal curve frame of a curve in R^4.

The focal curvatures are computed twice, by projecting the centre of the
osculating hypersphere onto the normals and by the recursion in the
curvatures; the two agree to roundoff. The Frenet frame of the focal curve
is the curve's own frame in reverse order, up to signs.
"""

import numpy as np

from focalis import builtin, focal_curvatures_recursive, focal_frenet, focal_point

curve = builtin("random_poly_r4(0)")
theta = 0.25
arc, fr, fd = focal_point(curve, theta)
print("curvatures        ", fr.curvatures)
print("focal curvatures  ", fd.focal_curvatures)
print("recursive         ", focal_curvatures_recursive(fr))
print("osculating radii  ", fd.radii)
print("sphericity residual", fd.vertex_residual)

f = focal_frenet(curve, theta)
print("focal curve curvatures", f.K)
print("|residual| * K / reversed curvatures",
      abs(f.residual) * np.abs(f.K) / np.abs(fr.curvatures[::-1]))
print("focal frame against reversed curve frame (rows of inner products):")
print(np.round(f.frame @ f.curve_frame[::-1].T, 12))
