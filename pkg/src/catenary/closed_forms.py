"""Exact solution families used as residual oracles.

Each family exposes its value together with analytic first and second
derivatives, so residual checks against the governing equations isolate
formula errors from numerical noise.  Families: the Euclidean hanging
curve cosh(mu t + nu)/mu, the cone solution mu/sqrt(cos(sqrt(2) v + nu)),
the Grusin square-root catenary mu*sqrt(2 v + nu), the non-vertical Grusin
geodesics, and the hyperbolic-plane quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._quadsing import integrate_with_endpoints
from .curvature import CurveJet2, catenary_residual
from .errors import ConfigError, DomainError, InaccessibleRegionError
from .surfaces import SurfaceSpec

__all__ = [
    "ClosedFormFamily",
    "closed_form_family",
    "euclidean_catenary",
    "cone_catenary",
    "grusin_catenary",
    "grusin_geodesic",
    "hyperbolic_quadrature",
    "validate_closed_form",
]

FAMILIES = ("euclidean", "cone", "grusin_catenary", "grusin_geodesic",
            "hyperbolic_quadrature")


@dataclass(frozen=True)
class ClosedFormFamily:
    """A parametrized exact solution with analytic derivatives.

    ``value``, ``d1`` and ``d2`` map the curve parameter to floats for the
    graph families (u as a function of v or t) and to (u, v) pairs for the
    geodesic family.  ``domain`` is the open parameter interval.
    """

    family: str
    params: dict
    domain: tuple[float, float]
    value: Callable
    d1: Callable
    d2: Callable


def euclidean_catenary(mu: float, nu: float, t: float) -> float:
    """u(t) = cosh(mu t + nu)/mu, the plane solution for alpha = 1."""
    if not mu > 0.0:
        raise ConfigError(f"mu={mu!r} must be positive")
    return math.cosh(mu * t + nu) / mu


def cone_catenary(mu: float, nu: float, v: float) -> float:
    """u(v) = mu/sqrt(cos(sqrt(2) v + nu)) on the 45-degree cone, alpha = 1."""
    if not mu > 0.0:
        raise ConfigError(f"mu={mu!r} must be positive")
    w = math.sqrt(2.0) * v + nu
    cw = math.cos(w)
    if not cw > 0.0:
        raise DomainError(f"cos(sqrt(2) v + nu) = {cw!r} <= 0 at v={v!r}")
    return mu / math.sqrt(cw)


def grusin_catenary(mu: float, nu: float, v: float) -> float:
    """u(v) = mu*sqrt(2 v + nu) in the Grusin half-plane, alpha = 1."""
    if not mu > 0.0:
        raise ConfigError(f"mu={mu!r} must be positive")
    arg = 2.0 * v + nu
    if not arg > 0.0:
        raise DomainError(f"2 v + nu = {arg!r} <= 0 at v={v!r}")
    return mu * math.sqrt(arg)


def grusin_geodesic(u0: float, v0: float, s: float) -> tuple[float, float]:
    """Non-vertical unit-speed Grusin geodesic through (u0, v0), one arch."""
    if not u0 > 0.0:
        raise ConfigError(f"u0={u0!r} must be positive")
    u = u0 * math.cos(s / u0)
    if not u > 0.0:
        raise DomainError(f"geodesic leaves u > 0 at s={s!r}")
    v = v0 - 0.5 * u0 * u0 * (s / u0 + 0.5 * math.sin(2.0 * s / u0))
    return u, v


def hyperbolic_quadrature(r: float, alpha: float, c: float,
                          u0: float, u1: float) -> float:
    """v-advance on the hyperbolic plane of curvature -1/r^2.

    Computes c * int du / (cosh(u/r) * sqrt(u^(2 alpha) cosh(u/r)^2 - c^2))
    with the endpoint-singularity substitution; the integrand must be real
    on (u0, u1) except at integrable turning-point endpoints.
    """
    if not r > 0.0:
        raise ConfigError(f"r={r!r} must be positive")
    if c == 0.0:
        raise ConfigError("c must be nonzero")
    if u0 == u1:
        return 0.0
    sign = 1.0
    if u0 > u1:
        u0, u1, sign = u1, u0, -1.0
    c2 = c * c

    def q(t):
        ch = math.cosh(t / r)
        rad = t ** (2.0 * alpha) * ch * ch - c2
        if rad <= 0.0:
            return 0.0
        return 1.0 / (ch * math.sqrt(rad))

    margin = 1e-6 * (u1 - u0)
    for t in np.linspace(u0, u1, 513)[1:-1]:
        t = float(t)
        if u0 + margin < t < u1 - margin:
            if t ** (2.0 * alpha) * math.cosh(t / r) ** 2 <= c2 * (1.0 - 1e-13):
                raise InaccessibleRegionError(
                    f"u^(2 alpha) cosh(u/r)^2 <= c^2 at u={t:.6g}"
                )
    return sign * c * integrate_with_endpoints(q, u0, u1)


# --------------------------------------------------------------------------
# family objects
# --------------------------------------------------------------------------

def closed_form_family(family: str, **params) -> ClosedFormFamily:
    """Build a ClosedFormFamily by name.

    Parameters: euclidean/cone/grusin_catenary take mu, nu; grusin_geodesic
    takes u0, v0; hyperbolic_quadrature takes r, alpha, c (it has no curve
    parametrization, only the quadrature map).
    """
    if family == "euclidean":
        mu, nu = _mu_nu(params)
        return ClosedFormFamily(
            family, {"mu": mu, "nu": nu}, (-math.inf, math.inf),
            value=lambda t: math.cosh(mu * t + nu) / mu,
            d1=lambda t: math.sinh(mu * t + nu),
            d2=lambda t: mu * math.cosh(mu * t + nu),
        )
    if family == "cone":
        mu, nu = _mu_nu(params)
        rt2 = math.sqrt(2.0)
        lo = (-math.pi / 2 - nu) / rt2
        hi = (math.pi / 2 - nu) / rt2

        def d1(v):
            w = rt2 * v + nu
            return 0.5 * rt2 * mu * math.sin(w) * math.cos(w) ** -1.5

        def d2(v):
            w = rt2 * v + nu
            return mu * (math.cos(w) ** -0.5
                         + 1.5 * math.sin(w) ** 2 * math.cos(w) ** -2.5)

        return ClosedFormFamily(
            family, {"mu": mu, "nu": nu}, (lo, hi),
            value=lambda v: cone_catenary(mu, nu, v), d1=d1, d2=d2,
        )
    if family == "grusin_catenary":
        mu, nu = _mu_nu(params)
        return ClosedFormFamily(
            family, {"mu": mu, "nu": nu}, (-nu / 2.0, math.inf),
            value=lambda v: grusin_catenary(mu, nu, v),
            d1=lambda v: mu / math.sqrt(2.0 * v + nu),
            d2=lambda v: -mu * (2.0 * v + nu) ** -1.5,
        )
    if family == "grusin_geodesic":
        u0 = float(params.pop("u0"))
        v0 = float(params.pop("v0", 0.0))
        _no_extras(params)
        if not u0 > 0.0:
            raise ConfigError(f"u0={u0!r} must be positive")
        half = math.pi * u0 / 2.0

        def d1(s):
            return (-math.sin(s / u0), -0.5 * u0 * (1.0 + math.cos(2.0 * s / u0)))

        def d2(s):
            return (-math.cos(s / u0) / u0, math.sin(2.0 * s / u0))

        return ClosedFormFamily(
            family, {"u0": u0, "v0": v0}, (-half, half),
            value=lambda s: grusin_geodesic(u0, v0, s), d1=d1, d2=d2,
        )
    if family == "hyperbolic_quadrature":
        r = float(params.pop("r", 1.0))
        alpha = float(params.pop("alpha", 1.0))
        c = float(params.pop("c"))
        _no_extras(params)
        if not r > 0.0 or c == 0.0:
            raise ConfigError("hyperbolic family needs r > 0 and c != 0")
        return ClosedFormFamily(
            family, {"r": r, "alpha": alpha, "c": c}, (0.0, math.inf),
            value=lambda u0_u1: hyperbolic_quadrature(r, alpha, c, *u0_u1),
            d1=None, d2=None,
        )
    raise ConfigError(f"unknown closed-form family: {family!r}")


def _mu_nu(params: dict) -> tuple[float, float]:
    mu = float(params.pop("mu", 1.0))
    nu = float(params.pop("nu", 0.0))
    _no_extras(params)
    if not mu > 0.0:
        raise ConfigError(f"mu={mu!r} must be positive")
    return mu, nu


def _no_extras(params: dict) -> None:
    if params:
        raise ConfigError(f"unknown family parameter(s): {sorted(params)}")


def validate_closed_form(family: ClosedFormFamily, spec: SurfaceSpec,
                         alpha: float, grid: Sequence[float]) -> float:
    """Max residual of the family against its governing equation over the grid.

    Graph families are checked through ``catenary_residual`` on their exact
    2-jets; the geodesic family is checked against the two Grusin geodesic
    equations.  The quadrature family has no pointwise residual.
    """
    if len(grid) == 0:
        raise ConfigError("empty validation grid")
    if family.family == "hyperbolic_quadrature":
        raise ConfigError("the quadrature family has no pointwise residual")
    worst = 0.0
    if family.family == "grusin_geodesic":
        for s in grid:
            u, _ = family.value(s)
            du, dv = family.d1(s)
            ddu, ddv = family.d2(s)
            r1 = ddu + dv * dv / u ** 3
            r2 = ddv - 2.0 * du * dv / u
            worst = max(worst, abs(r1), abs(r2))
        return worst
    for t in grid:
        jet = CurveJet2(u=family.value(t), v=t, du=family.d1(t), dv=1.0,
                        ddu=family.d2(t), ddv=0.0)
        worst = max(worst, abs(catenary_residual(spec, alpha, jet)))
    return worst
