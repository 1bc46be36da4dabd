"""Vertex, pseudo-vertex and flattening counts on closed space curves.

For every closed curve scanned here the counts satisfy V + P >= 2 and
V + P >= F. At each vertex the osculating sphere has contact of order at
least m + 3 instead of the ordinary m + 2.
"""

import warnings

from focalis import builtin, focal_point, osculating_sphere_contact, scan_events
from focalis.errors import GridTooCoarse
from focalis.events import VERTEX

warnings.simplefilter("ignore", GridTooCoarse)

for name in ["ellipse_2_1", "trefoil_like", "random_closed_r3(0)", "random_closed_r3(1)"]:
    curve = builtin(name)
    report = scan_events(curve, 512)
    c = report.counts
    print(f"{name:22s} V={c['V']:2d} P={c['P']:2d} F={c['F']:2d} bounds={report.vertex_bounds()}")
    for th in report.thetas(VERTEX)[:2]:
        _, fr, fd = focal_point(curve, th)
        contact = osculating_sphere_contact(curve.eval_jet(th, 10), fr, fd, curve.m, 10)
        print(f"    vertex at theta={th:.9f}: osculating sphere contact {contact}")
