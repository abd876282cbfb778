"""Signed geodesic curvature and the weighted-curve criteria.

In semi-geodesic coordinates the signed geodesic curvature of a curve
(u(t), v(t)) is

    kappa = -[vd*(G_v*ud*vd + 2*G_u*ud^2 + G^2*G_u*vd^2)
              + G*(ud*vdd - udd*vd)] / (ud^2 + G^2*vd^2)^(3/2)

and a regular curve with u > 0 is a critical point of the weighted length
integral of u^alpha ds exactly when kappa equals the target value
alpha*G*vd / (u*||gamma'||).  The residual returned here is the difference
between the two sides of that equation, normalized by ||gamma'||^3 so that
it does not depend on the parametrization speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import SingularJetError
from .surfaces import SurfaceSpec, eval_metric

__all__ = [
    "CurveJet2",
    "geodesic_curvature",
    "catenary_target_curvature",
    "catenary_residual",
    "normal_transversality",
    "parallel_catenary_check",
]


@dataclass(frozen=True)
class CurveJet2:
    """Second-order jet of a parametrized curve: position, velocity, acceleration."""

    u: float
    v: float
    du: float
    dv: float
    ddu: float
    ddv: float


def _speed(g: float, jet: CurveJet2) -> float:
    s2 = jet.du * jet.du + (g * jet.dv) * (g * jet.dv)
    if not s2 > 0.0:
        raise SingularJetError(f"zero-velocity jet at (u={jet.u!r}, v={jet.v!r})")
    return math.sqrt(s2)


def geodesic_curvature(spec: SurfaceSpec, jet: CurveJet2) -> float:
    """Signed geodesic curvature of the jet; zero exactly for geodesics."""
    g, gu, gv = eval_metric(spec, jet.u, jet.v)
    speed = _speed(g, jet)
    num = jet.dv * (gv * jet.du * jet.dv + 2.0 * gu * jet.du * jet.du
                    + g * g * gu * jet.dv * jet.dv) \
        + g * (jet.du * jet.ddv - jet.ddu * jet.dv)
    return -num / speed ** 3


def catenary_target_curvature(spec: SurfaceSpec, alpha: float, jet: CurveJet2) -> float:
    """Curvature a weighted critical curve must have: alpha*G*vd/(u*speed)."""
    g, _, _ = eval_metric(spec, jet.u, jet.v)
    speed = _speed(g, jet)
    return alpha * g * jet.dv / (jet.u * speed)


def catenary_residual(spec: SurfaceSpec, alpha: float, jet: CurveJet2) -> float:
    """Scale-invariant defect of the weighted-curve equation; 0 iff the jet solves it.

    Equals (target - kappa) for regular jets, so both criteria share one
    tolerance.
    """
    g, gu, gv = eval_metric(spec, jet.u, jet.v)
    speed_sq = jet.du * jet.du + (g * jet.dv) * (g * jet.dv)
    if not speed_sq > 0.0:
        raise SingularJetError(f"zero-velocity jet at (u={jet.u!r}, v={jet.v!r})")
    raw = (alpha * jet.dv * g / jet.u) * speed_sq \
        + jet.dv * (gv * jet.du * jet.dv + 2.0 * gu * jet.du * jet.du
                    + g * g * gu * jet.dv * jet.dv) \
        + g * (jet.du * jet.ddv - jet.ddu * jet.dv)
    return raw / speed_sq ** 1.5


def normal_transversality(spec: SurfaceSpec, jet: CurveJet2) -> float:
    """Inner product <n, d/du> of the unit normal with the distance gradient.

    With the normal n = (-vd*G, ud/G)/||gamma'|| this is -vd*G/||gamma'||.
    """
    g, _, _ = eval_metric(spec, jet.u, jet.v)
    return -jet.dv * g / _speed(g, jet)


def parallel_catenary_check(spec: SurfaceSpec, alpha: float, u0: float,
                            v_samples: Sequence[float], tol: float = 1e-9) -> bool:
    """Whether the coordinate circle u = u0 is itself a weighted critical curve.

    True iff alpha*G + u0*G_u vanishes (within ``tol``) at every v sample.
    """
    for v in v_samples:
        g, gu, _ = eval_metric(spec, u0, v)
        if abs(alpha * g + u0 * gu) >= tol:
            return False
    return True
