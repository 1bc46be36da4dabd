"""Acceptance criteria, one PASS/FAIL line per criterion."""

import math
import warnings

import numpy as np
import pytest

from focalis.contact import osculating_sphere_contact
from focalis.curvespec import sample_grid
from focalis.errors import FlatteningPoint, GridTooCoarse
from focalis.events import VERTEX, scan_events
from focalis.focal import focal_curvatures_recursive, focal_planes, focal_point
from focalis.frenet import curve_frenet
from focalis.verify import (
    _residual_scale,
    check_critical_radii,
    check_curvature_formula,
    check_focal_flag,
    check_radius_derivative,
    check_recursive,
    check_scalar_frenet,
    check_self_congruent,
    check_spherical,
    check_theorem5,
    focal_frenet,
)

from conftest import GOOD_FIXTURES, fixture_curve

POLY = [f"random_poly_r4({s})" for s in range(3)]
CLOSED = [f"random_closed_r3({s})" for s in range(3)]


def announce(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {title}"
              + (f" [{detail}]" if detail else ""))


def scan(name, samples=512):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridTooCoarse)
        return scan_events(fixture_curve(name), samples)


def test_01_helix_closed_form(capsys):
    c = fixture_curve("helix")
    errs = []
    for th in sample_grid(c, 100):
        arc, fr, fd = focal_point(c, th)
        errs.append(np.abs(fr.curvatures - 0.5).max())
        errs.append(np.abs(fd.focal_curvatures - [2.0, 0.0]).max())
        errs.append(abs(fd.radii[-1] - 2.0))
        errs.append(np.abs(fd.center - [-math.cos(th), -math.sin(th), th]).max())
        errs.append(abs(fd.vertex_residual - 1.0))
        f = focal_frenet(c, th)
        errs.append(abs(f.K[0] - 0.5))
        errs.append(abs(abs(f.K[1]) - 0.5))
        errs.append(abs(f.K[0] / abs(fr.curvatures[1]) - 1 / abs(f.residual)))
    rep = check_theorem5(c, 100)
    err = max(max(errs), rep.max_abs)
    ok = err < 1e-7
    announce(capsys, 1, "helix closed form", ok, f"max error {err:.2e}")
    assert ok


def test_02_ellipse_vertices(capsys):
    c = fixture_curve("ellipse_2_1")
    vertices = scan("ellipse_2_1").thetas(VERTEX)
    expected = np.array([0, math.pi / 2, math.pi, 3 * math.pi / 2])
    located = vertices.size == 4 and np.abs(np.sort(vertices) - expected).max() < 1e-6
    at_vertex = []
    for th in vertices:
        _, fr, fd = focal_point(c, th)
        at_vertex.append(osculating_sphere_contact(c.eval_jet(th, 8), fr, fd, 1, 8).order)
    rng = np.random.default_rng(2024)
    generic = []
    while len(generic) < 20:
        th = rng.uniform(0, 2 * math.pi)
        gap = np.abs((th - expected + math.pi) % (2 * math.pi) - math.pi).min()
        if gap < 0.05:
            continue
        _, fr, fd = focal_point(c, th)
        generic.append(osculating_sphere_contact(c.eval_jet(th, 8), fr, fd, 1, 8).order)
    ok = located and min(at_vertex) >= 4 and set(generic) == {3}
    announce(capsys, 2, "ellipse vertices and circle contact", ok,
             f"{vertices.size} vertices, vertex contact {at_vertex}, generic {sorted(set(generic))}")
    assert ok


def _trefoil_min_rel():
    """Smallest relative sphericity residual on trefoil_like, grid plus refined vertices."""
    c = fixture_curve("trefoil_like")
    rel = [check_spherical(c, 100).min_rel]
    for th in scan("trefoil_like").thetas(VERTEX):
        _, fr, fd = focal_point(c, th, order=2)
        rel.append(abs(fd.vertex_residual) / _residual_scale(fr, fd))
    return min(rel)


def test_03_sphericity_attainable_parts(capsys):
    r3 = check_spherical(fixture_curve("sphere_curve_r3"))
    r4 = check_spherical(fixture_curve("sphere_curve_r4"))
    tc = check_spherical(fixture_curve("twisted_cubic"))
    tr = check_spherical(fixture_curve("trefoil_like"))
    forms = [r.torsion_form.max_rel for r in (r3, tc, tr)]
    ok = (r3.report.max_rel < 1e-7 and r4.report.max_rel < 1e-7 and r3.is_spherical
          and r4.is_spherical and tc.min_rel > 1e-2 and not tc.is_spherical
          and not tr.is_spherical and max(forms) < 1e-7)
    announce(capsys, "3a", "sphericity residual: spherical fixtures, twisted cubic, torsion form",
             ok, f"r3 {r3.report.max_rel:.1e}, r4 {r4.report.max_rel:.1e}, "
                 f"twisted cubic min {tc.min_rel:.2e}, form gap {max(forms):.1e}")
    assert ok


@pytest.mark.xfail(strict=True, reason="trefoil_like has six genuine vertices, where the "
                   "sphericity residual is exactly zero; see the decision ledger")
def test_03_trefoil_minimum_residual(capsys):
    low = _trefoil_min_rel()
    ok = low > 1e-2
    announce(capsys, 3, "sphericity residual bounded below on trefoil_like", ok,
             f"minimum relative residual {low:.1e}; the residual vanishes at each of the "
             "curve's vertices, so no positive lower bound exists")
    assert ok


def test_04_scalar_frenet(capsys):
    reps = {n: check_scalar_frenet(fixture_curve(n), 100, corrected=False)
            for n in ("sphere_curve_r3", "sphere_curve_r4")}
    reps.update({n: check_scalar_frenet(fixture_curve(n), 100, corrected=True)
                 for n in ["twisted_cubic", *POLY]})
    worst = max(r.max_rel for r in reps.values())
    ok = worst < 1e-7
    announce(capsys, 4, "scalar Frenet equations of the focal curvatures", ok,
             f"max relative residual {worst:.1e}")
    assert ok


def test_05_curvature_formula(capsys):
    reps = [check_curvature_formula(fixture_curve(n), 100) for n in POLY]
    worst = max(r.max_rel for r in reps)
    used = sum(r.theta.size for r in reps)
    skipped = sum(len(r.skipped) for r in reps)
    ok = worst < 1e-6 and used > 0
    announce(capsys, 5, "curvatures from focal curvatures", ok,
             f"max relative error {worst:.1e}, {used} samples, {skipped} skipped")
    assert ok


def test_06_focal_curve_frame(capsys):
    worst_ratio = worst_frame = 0.0
    used = 0
    for name in ["helix", "twisted_cubic", *POLY]:
        rep = check_theorem5(fixture_curve(name), 50)
        m = rep.extra["ratio_rows"]
        worst_ratio = max(worst_ratio, np.abs(rep.residuals[:, :m]).max())
        worst_frame = max(worst_frame, np.abs(rep.residuals[:, m:]).max())
        used += rep.theta.size
    ok = worst_ratio < 1e-6 and worst_frame < 1e-6
    announce(capsys, 6, "focal curve curvatures and frame", ok,
             f"ratio {worst_ratio:.1e}, frame {worst_frame:.1e}, {used} samples")
    assert ok


def test_07_radius_derivative(capsys):
    worst = max(check_radius_derivative(fixture_curve(n), 100).max_rel for n in GOOD_FIXTURES)
    ok = worst < 1e-7
    announce(capsys, 7, "derivative of the squared osculating radius", ok,
             f"max relative residual {worst:.1e}")
    assert ok


def test_08_critical_radii(capsys):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridTooCoarse)
        checks = {n: check_critical_radii(fixture_curve(n), 512) for n in ["trefoil_like", *POLY]}
    worst = max(ch.mismatch for ch in checks.values())
    roots = sum(sum(r.size for r in ch.roots.values()) for ch in checks.values())
    low = math.inf
    for name in GOOD_FIXTURES:
        c = fixture_curve(name)
        for th in sample_grid(c, 200):
            _, fr = curve_frenet(c, th, order=0)
            low = min(low, 1 / fr.curvatures[0])
    ok = worst < 1e-6 and roots > 0 and 0 < low < math.inf
    announce(capsys, 8, "critical radii against focal curvature zeros", ok,
             f"{roots} critical points, mismatch {worst:.1e}, min c_1 {low:.3g}")
    assert ok


def test_09_vertex_count_bounds(capsys):
    results = {n: scan(n) for n in ["trefoil_like", *CLOSED]}
    ok = all(r.vertex_bounds() == {"V+P>=2": True, "V+P>=F": True} for r in results.values())
    detail = ", ".join(f"{n}: V={r.counts['V']} P={r.counts['P']} F={r.counts['F']}"
                       for n, r in results.items())
    announce(capsys, 9, "V + P >= 2 and V + P >= F on closed curves", ok, detail)
    assert ok


def test_10_constant_radius_counterexample(capsys):
    s = check_spherical(fixture_curve("helix"))
    drift = np.abs(s.radius_sq_derivative).max()
    ok = (drift < 1e-10 and np.abs(s.radius - 2.0).max() < 1e-10 and s.constant_radius
          and not s.is_spherical)
    announce(capsys, 10, "helix: constant osculating sphere radius without sphericity", ok,
             f"max |(R^2)'| {drift:.1e}, is_spherical {s.is_spherical}")
    assert ok


def test_11_constant_curvature(capsys):
    c = fixture_curve("sphere_curve_r4")
    rep = check_self_congruent(c)
    worst = 0.0
    for th in sample_grid(c, 25):
        _, fr, fd = focal_point(c, th)
        k1, k2, k3 = fr.curvatures
        c1, c2, c3 = fd.focal_curvatures
        worst = max(worst, abs(c2) / fd.radii[-1], abs(c1 * k1 - 1), abs(c3 / (k2 / (k1 * k3)) - 1))
    ok = rep.applicable and rep.max_rel < 1e-7 and worst < 1e-7
    announce(capsys, 11, "focal curvatures of the constant curvature curve in R^4", ok,
             f"report {rep.max_rel:.1e}, direct {worst:.1e}")
    assert ok


def test_12_recursion_and_flags(capsys):
    rec = max(check_recursive(fixture_curve(n), 100).max_rel for n in GOOD_FIXTURES)
    nest = 0.0
    for name in GOOD_FIXTURES:
        c = fixture_curve(name)
        for th in sample_grid(c, 20):
            try:
                arc, fr, fd = focal_point(c, th)
                focal_curvatures_recursive(fr)
            except FlatteningPoint:
                continue
            planes = focal_planes(arc, fr, fd)
            for big, small in zip(planes, planes[1:]):
                pts = [small.basepoint] + [small.basepoint + d for d in small.directions]
                for p in pts:
                    d = p - big.basepoint
                    if big.directions.size:
                        d = d - big.directions.T @ (big.directions @ d)
                    nest = max(nest, np.linalg.norm(d) / max(1.0, fd.radii[-1]))
    flags = [check_focal_flag(fixture_curve(n), 30) for n in GOOD_FIXTURES]
    flag = max(r.max_rel for r in flags if r.theta.size)
    ok = rec < 1e-7 and nest < 1e-6 and flag < 1e-6
    announce(capsys, 12, "recursive and projected focal curvatures, focal flag", ok,
             f"recursion {rec:.1e}, nesting {nest:.1e}, osculating flag {flag:.1e}")
    assert ok
