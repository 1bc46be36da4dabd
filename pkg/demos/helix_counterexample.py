"""A curve whose osculating spheres all have the same radius but which lies on no sphere.

The circular helix has curvature and torsion 1/2. Its osculating sphere
has radius 2 everywhere, yet the sphericity residual is identically 1 and
the centres trace a second helix instead of sitting still.
"""

import numpy as np

from focalis import builtin, check_spherical, focal_curve

helix = builtin("helix")
report = check_spherical(helix, 40)
print(f"osculating radius: min {report.radius.min():.12f}, max {report.radius.max():.12f}")
print(f"max |(R^2)'|: {np.abs(report.radius_sq_derivative).max():.2e}")
print(f"sphericity residual range: {report.report.residuals.min():.6f} .. "
      f"{report.report.residuals.max():.6f}")
print(f"lies on a sphere: {report.is_spherical}")

centers = focal_curve(helix, 5).polyline()
print("centres of the osculating spheres (a helix of the same pitch):")
for row in centers:
    print("  ", np.array2string(row, precision=6, suppress_small=True))
