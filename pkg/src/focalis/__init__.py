"""Frenet frames, focal curvatures, focal curves and vertex-type events of
curves in Euclidean space, computed in truncated Taylor-series arithmetic."""

from .contact import ContactQuery, ContactResult, contact_order, osculating_sphere_contact
from .curvespec import BUILTIN_NAMES, CurveModel, builtin, eval_jet, load_curve, parse_curve
from .errors import *  # noqa: F401,F403
from .events import Event, EventReport, classify_critical_radii, scan_events
from .focal import (
    FocalData,
    FocalPlane,
    focal_center,
    focal_curvatures_recursive,
    focal_curve,
    focal_data,
    focal_planes,
    focal_point,
)
from .frenet import (
    FrenetData,
    arc_normalize,
    curve_frenet,
    frenet_at,
    frenet_jets,
    frenet_matrix,
    is_good,
)
from .jets import Jet, VecJet
from .verify import (
    FocalFrameData,
    ResidualReport,
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

__version__ = "0.1.0"
