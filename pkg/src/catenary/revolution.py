"""Analysis on rotationally symmetric metrics G = a(u).

Because the metric does not depend on v, every traced curve conserves the
Clairaut-type quantity c = u^alpha * a(u) * sin(phi) = rho(u) * cos(theta),
where rho(u) = a(u) * u^alpha and theta is the angle with the parallels.
This module finds critical parallels (roots of rho'), classifies their
linear stability, solves for v by quadrature, builds the conformal
coordinate z with dz = du/a(u), and exports the Euclidean embedding when
|a'| <= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad

from ._quadsing import integrate_with_endpoints
from .errors import (
    ConfigError,
    DomainError,
    InaccessibleRegionError,
    KindError,
    NotCriticalError,
    NotRealizableError,
)
from .surfaces import RevolutionProfile, SurfaceSpec
from .tracing import CatenaryState

__all__ = [
    "CriticalParallel",
    "ClairautProfile",
    "clairaut_constant",
    "clairaut_profile",
    "critical_parallels",
    "turning_points",
    "quadrature_v",
    "conformal_coordinate",
    "stability_exponent",
    "embed_revolution",
    "export_embedding_csv",
]

SCAN_POINTS_PER_DECADE = 1000
ROOT_XTOL = 1e-12
DEGENERATE_TOL = 1e-9


class CriticalParallel(NamedTuple):
    u: float
    lam: float
    classification: str  # "stable" | "unstable" | "degenerate"


@dataclass(frozen=True)
class ClairautProfile:
    """rho(u) = a(u) * u^alpha with its derivatives and critical parallels."""

    alpha: float
    a: Callable[[float], float]
    rho: Callable[[float], float]
    rho_u: Callable[[float], float]
    rho_uu: Callable[[float], float]
    critical_parallels: tuple[CriticalParallel, ...]


def _require_profile(spec: SurfaceSpec) -> RevolutionProfile:
    if spec.profile is None:
        raise KindError(f"{spec.identifier} is not rotationally symmetric (G depends on v)")
    return spec.profile


def _rho_funcs(profile: RevolutionProfile, alpha: float):
    a, a_u, a_uu = profile.a, profile.a_u, profile.a_uu

    def rho(u):
        return u ** alpha * a(u)

    def rho_u(u):
        return alpha * u ** (alpha - 1.0) * a(u) + u ** alpha * a_u(u)

    def rho_uu(u):
        return (alpha * (alpha - 1.0) * u ** (alpha - 2.0) * a(u)
                + 2.0 * alpha * u ** (alpha - 1.0) * a_u(u)
                + u ** alpha * a_uu(u))

    return rho, rho_u, rho_uu


def clairaut_constant(spec: SurfaceSpec, alpha: float, state: CatenaryState) -> float:
    """Conserved quantity u^alpha * a(u) * sin(phi) of a unit-speed state."""
    profile = _require_profile(spec)
    if state.u <= spec.domain.u_min:
        raise DomainError(f"u={state.u!r} at or below u_min={spec.domain.u_min!r}")
    return state.u ** alpha * profile.a(state.u) * math.sin(state.phi)


def _default_range(spec: SurfaceSpec) -> tuple[float, float]:
    dom = spec.domain
    lo = dom.u_min + (1e-6 if dom.u_min == 0.0 else 1e-9 * (1.0 + dom.u_min))
    hi = dom.u_max - 1e-9 if math.isfinite(dom.u_max) else 100.0
    return lo, hi


def _scan_grid(lo: float, hi: float) -> np.ndarray:
    if not (hi > lo > 0.0):
        raise ConfigError(f"bad scan range ({lo!r}, {hi!r})")
    decades = math.log10(hi / lo)
    n = int(min(max(SCAN_POINTS_PER_DECADE * decades, 1000), 200_000))
    return np.geomspace(lo, hi, n)


def _bisect_root(fn, a, b, fa, fb):
    # plain bisection; brackets come from the scan so 60 halvings reach xtol
    for _ in range(200):
        mid = 0.5 * (a + b)
        if (b - a) <= ROOT_XTOL:
            return mid
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fa < 0.0) != (fm < 0.0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def _scan_roots(fn, lo, hi) -> list[float]:
    grid = _scan_grid(lo, hi)
    vals = [fn(float(t)) for t in grid]
    roots = []
    for i in range(len(grid) - 1):
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(float(grid[i]))
        elif (fa < 0.0) != (fb < 0.0):
            roots.append(_bisect_root(fn, float(grid[i]), float(grid[i + 1]), fa, fb))
    if vals and vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    # collapse duplicates from exact-zero grid hits
    dedup: list[float] = []
    for r in roots:
        if not dedup or abs(r - dedup[-1]) > 10 * ROOT_XTOL:
            dedup.append(r)
    return dedup


def critical_parallels(spec: SurfaceSpec, alpha: float,
                       u_range: tuple[float, float] | None = None
                       ) -> list[CriticalParallel]:
    """All roots of rho'(u) in the range, with stability exponent and class.

    Roots are bracketed on a log-spaced scan grid and refined by bisection;
    an empty list means no parallel of the surface is a critical curve.
    """
    profile = _require_profile(spec)
    lo, hi = u_range if u_range is not None else _default_range(spec)
    _, rho_u, _ = _rho_funcs(profile, alpha)
    out = []
    for r in _scan_roots(rho_u, lo, hi):
        lam = stability_exponent(spec, alpha, r, root_tol=math.inf)
        out.append(CriticalParallel(u=r, lam=lam, classification=_classify(lam)))
    return out


def _classify(lam: float) -> str:
    if abs(lam) < DEGENERATE_TOL:
        return "degenerate"
    return "stable" if lam > 0.0 else "unstable"


def clairaut_profile(spec: SurfaceSpec, alpha: float,
                     u_range: tuple[float, float] | None = None) -> ClairautProfile:
    """Bundle rho and its derivatives with the critical parallels found in range."""
    profile = _require_profile(spec)
    rho, rho_u, rho_uu = _rho_funcs(profile, alpha)
    criticals = tuple(critical_parallels(spec, alpha, u_range))
    return ClairautProfile(alpha=alpha, a=profile.a, rho=rho, rho_u=rho_u,
                           rho_uu=rho_uu, critical_parallels=criticals)


def turning_points(spec: SurfaceSpec, alpha: float, c: float,
                   u_range: tuple[float, float] | None = None) -> list[float]:
    """Sorted solutions of rho(u) = c in the range (extrema of u along traces).

    Transversal roots come from a sign-change scan; tangential roots (c at a
    critical value of rho) are added from the critical parallels.
    """
    if not c > 0.0:
        raise ConfigError(f"Clairaut constant c={c!r} must be positive")
    profile = _require_profile(spec)
    lo, hi = u_range if u_range is not None else _default_range(spec)
    rho, rho_u, _ = _rho_funcs(profile, alpha)
    roots = _scan_roots(lambda u: rho(u) - c, lo, hi)
    for r in _scan_roots(rho_u, lo, hi):
        if abs(rho(r) - c) <= 1e-10 * max(1.0, abs(c)):
            roots.append(r)
    roots.sort()
    dedup: list[float] = []
    for r in roots:
        if not dedup or abs(r - dedup[-1]) > 1e-9:
            dedup.append(r)
    return dedup


def quadrature_v(spec: SurfaceSpec, alpha: float, c: float,
                 u0: float, u1: float) -> float:
    """v-advance of a trace with Clairaut constant c between u0 and u1.

    Computes the first-integral quadrature

        dv = int_{u0}^{u1} dt / (a(t) * sqrt(t^(2*alpha) a(t)^2 / c^2 - 1)),

    allowing integrable square-root singularities at the endpoints (turning
    points) and an improper upper limit when the tail integrand decays
    faster than 1/t.
    """
    profile = _require_profile(spec)
    if not c > 0.0:
        raise ConfigError(f"Clairaut constant c={c!r} must be positive")
    if u0 == u1:
        return 0.0
    sign = 1.0
    if u0 > u1:
        u0, u1, sign = u1, u0, -1.0
    rho, _, _ = _rho_funcs(profile, alpha)
    a = profile.a

    def q(t):
        rad = (rho(t) / c) ** 2 - 1.0
        if rad <= 0.0:
            return 0.0
        return 1.0 / (a(t) * math.sqrt(rad))

    finite = math.isfinite(u1)
    hi_scan = u1 if finite else max(10.0 * u0, u0 + 10.0)
    interior = np.linspace(u0, hi_scan, 513)[1:-1]
    margin = 1e-6 * (hi_scan - u0)
    for t in interior:
        t = float(t)
        if u0 + margin < t < u1 - margin and rho(t) <= c * (1.0 - 1e-13):
            raise InaccessibleRegionError(
                f"rho({t:.6g}) = {rho(t):.6g} <= c = {c:.6g} inside ({u0:.6g}, {u1:.6g})"
            )
    if not finite:
        # o(1/t) decay needed for the improper tail
        t1 = hi_scan
        q1, q2 = q(t1), q(10.0 * t1)
        if not (q1 > 0.0) or not (q2 < q1 / 15.0):
            raise ConfigError(
                "improper upper limit needs an integrand decaying faster than 1/t"
            )
    return sign * integrate_with_endpoints(q, u0, u1)


def conformal_coordinate(spec: SurfaceSpec, u: float, u_ref: float | None = None) -> float:
    """Conformal coordinate z(u) = int_{u_ref}^{u} dt/a(t), increasing in u.

    In the (z, v) coordinates the metric is a^2 (dz^2 + dv^2).  The anchor
    defaults to the lower domain edge; pass ``u_ref`` explicitly for
    profiles with a(u_min) = 0 (for example the cone), where the default
    integral diverges.
    """
    profile = _require_profile(spec)
    dom = spec.domain
    if not dom.u_min < u < dom.u_max:
        raise DomainError(f"u={u!r} outside ({dom.u_min!r}, {dom.u_max!r})")
    if u_ref is None:
        u_ref = dom.u_min
    result = quad(lambda t: 1.0 / profile.a(t), u_ref, u,
                  epsabs=1e-13, epsrel=1e-12, limit=200, full_output=1)
    # a fourth element is QUADPACK's failure message (e.g. divergent anchor)
    if len(result) > 3 or not math.isfinite(result[0]):
        raise DomainError(
            f"1/a is not integrable from u_ref={u_ref!r}; choose a different anchor"
        )
    return result[0]


def stability_exponent(spec: SurfaceSpec, alpha: float, u_star: float, *,
                       root_tol: float = 1e-8) -> float:
    """Linearized oscillation coefficient lambda at a critical parallel.

    In conformal coordinates the radial deviation obeys dz'' = -lambda dz
    with lambda = V''(z*)/c^2 for V = -rho_bar^2/c^2 and c = rho(u*), i.e.

        lambda = -2 * (rho_bar * rho_bar'' + rho_bar'^2) / c^4,

    where d/dz = a(u) d/du.  Positive lambda means bounded oscillation
    (rho has a maximum), negative means exponential departure.
    """
    profile = _require_profile(spec)
    rho, rho_u, rho_uu = _rho_funcs(profile, alpha)
    slope = rho_u(u_star)
    if not abs(slope) < root_tol:
        raise NotCriticalError(
            f"rho'({u_star!r}) = {slope!r} is not within {root_tol!r} of zero"
        )
    a_val = profile.a(u_star)
    a_slope = profile.a_u(u_star)
    c = rho(u_star)
    rb = rho(u_star)
    rb_z = a_val * slope
    rb_zz = a_val * a_val * rho_uu(u_star) + a_val * a_slope * slope
    return -2.0 * (rb * rb_zz + rb_z * rb_z) / c ** 4


def embed_revolution(spec: SurfaceSpec, u: float, v: float,
                     u_ref: float | None = None) -> tuple[float, float, float]:
    """Euclidean point (a(u) cos v, a(u) sin v, b(u)) of the revolution surface.

    The height b(u) integrates sqrt(1 - a'(t)^2) from the anchor, which
    requires |a'| <= 1 along the way (arc-length realizability).
    """
    profile = _require_profile(spec)
    dom = spec.domain
    if not dom.u_min < u < dom.u_max:
        raise DomainError(f"u={u!r} outside ({dom.u_min!r}, {dom.u_max!r})")
    if u_ref is None:
        u_ref = dom.u_min
    lo, hi = (u_ref, u) if u_ref <= u else (u, u_ref)
    for t in np.linspace(lo, hi, 257):
        if abs(profile.a_u(float(t))) > 1.0 + 1e-12:
            raise NotRealizableError(
                f"|a'({float(t):.6g})| = {abs(profile.a_u(float(t))):.6g} > 1; "
                "the metric is valid but has no arc-length revolution embedding here"
            )

    def db(t):
        rad = 1.0 - profile.a_u(t) ** 2
        return math.sqrt(rad) if rad > 0.0 else 0.0

    b, _ = quad(db, u_ref, u, epsabs=1e-13, epsrel=1e-12, limit=200)
    a_val = profile.a(u)
    return a_val * math.cos(v), a_val * math.sin(v), b


def export_embedding_csv(trace, path, u_ref: float | None = None) -> None:
    """Write a trace as 3D points, columns exactly ``s,u,v,x,y,z``.

    Every sample must lie on a realizable stretch of the profile; floats are
    serialized with 17 significant digits so parsing them back is exact.
    """
    lines = ["s,u,v,x,y,z"]
    for smp in trace.samples:
        x, y, z = embed_revolution(trace.spec, smp.u, smp.v, u_ref=u_ref)
        lines.append(",".join(format(val, ".17g")
                              for val in (smp.s, smp.u, smp.v, x, y, z)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
