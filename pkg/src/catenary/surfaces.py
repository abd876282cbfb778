"""Semi-geodesic metric patches ds^2 = du^2 + G^2(u,v) dv^2.

The coordinate u is the intrinsic distance to the reference curve u = 0,
so every surface here is described by a single positive function G and its
partial derivatives.  A catalog of standard surfaces is provided (plane,
cylinder, sphere, hyperbolic plane, circular cone, catenoid, helicoid,
binormal ruled surfaces, Grusin half-plane) together with constructors for
tabulated revolution profiles and ruled surfaces.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DegenerateMetricError, DomainError

__all__ = [
    "Domain",
    "MetricPatch",
    "RevolutionProfile",
    "SurfaceSpec",
    "CATALOG_KINDS",
    "CATALOG_PARAMS",
    "catalog_surface",
    "eval_metric",
    "christoffel",
    "ruled_metric",
    "ruled_surface",
    "ruled_surface_from_samples",
    "tabulated_profile",
    "profile_surface",
    "load_profile_csv",
]

_INF = math.inf


class Domain(NamedTuple):
    """Open coordinate rectangle (u_min, u_max) x (v_min, v_max)."""

    u_min: float
    u_max: float
    v_min: float = -_INF
    v_max: float = _INF

    def contains(self, u: float, v: float) -> bool:
        return self.u_min < u < self.u_max and self.v_min < v < self.v_max


@dataclass(frozen=True)
class MetricPatch:
    """Evaluator of the metric coefficient G and its partials on a domain.

    G must be smooth and positive on the open rectangle; all queries with
    u <= u_min are rejected.
    """

    identifier: str
    G: Callable[[float, float], float]
    G_u: Callable[[float, float], float]
    G_v: Callable[[float, float], float]
    domain: Domain

    def evaluate(self, u: float, v: float) -> tuple[float, float, float]:
        """Return (G, G_u, G_v) at an interior point."""
        if not self.domain.contains(u, v):
            raise DomainError(
                f"({u!r}, {v!r}) outside domain {tuple(self.domain)} of {self.identifier}"
            )
        g = self.G(u, v)
        if not g > 0.0:
            raise DegenerateMetricError(
                f"G({u!r}, {v!r}) = {g!r} is not positive on {self.identifier}"
            )
        return g, self.G_u(u, v), self.G_v(u, v)


@dataclass(frozen=True)
class RevolutionProfile:
    """Profile a(u) of a rotationally symmetric metric du^2 + a(u)^2 dv^2."""

    a: Callable[[float], float]
    a_u: Callable[[float], float]
    a_uu: Callable[[float], float]


@dataclass(frozen=True)
class SurfaceSpec:
    """An immutable surface: a named metric patch plus optional profile data.

    ``profile`` is set for every rotationally symmetric metric (G_v == 0),
    including abstract ones that are not realizable in Euclidean space.
    ``profile_warning`` flags |a'| > 1 somewhere: the metric is fine but the
    arc-length revolution embedding does not exist there.
    """

    kind: str
    params: dict
    patch: MetricPatch
    profile: RevolutionProfile | None = None
    profile_warning: bool = field(default=False)

    @property
    def identifier(self) -> str:
        return self.patch.identifier

    @property
    def domain(self) -> Domain:
        return self.patch.domain

    @property
    def is_revolution(self) -> bool:
        return self.profile is not None


def eval_metric(spec: SurfaceSpec, u: float, v: float) -> tuple[float, float, float]:
    """Metric coefficient and partials (G, G_u, G_v) at an interior point."""
    return spec.patch.evaluate(u, v)


def christoffel(spec: SurfaceSpec, u: float, v: float) -> tuple[float, float, float]:
    """Nonzero Christoffel symbols (Gamma^1_22, Gamma^2_12, Gamma^2_22).

    For ds^2 = du^2 + G^2 dv^2 these are -G*G_u, G_u/G and G_v/G; the
    remaining symbols vanish identically and are not returned.
    """
    g, gu, gv = spec.patch.evaluate(u, v)
    return -g * gu, gu / g, gv / g


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------

def _zero2(u: float, v: float) -> float:
    return 0.0


def _const_profile(c: float):
    def a(u: float) -> float:
        return c

    def zero(u: float) -> float:
        return 0.0

    return a, zero, zero


def _sqrt_profile(k: float):
    # a(u) = sqrt(1 + (k u)^2).  Shared by catenoid, helicoid and binormal
    # surfaces so that isometric entries evaluate bit-identically.
    k2 = k * k

    def a(u: float) -> float:
        return math.sqrt(1.0 + k2 * u * u)

    def a_u(u: float) -> float:
        return k2 * u / math.sqrt(1.0 + k2 * u * u)

    def a_uu(u: float) -> float:
        r = math.sqrt(1.0 + k2 * u * u)
        return k2 / (r * r * r)

    return a, a_u, a_uu


def _revolution_spec(kind, params, identifier, a, a_u, a_uu, domain, warning=False):
    patch = MetricPatch(
        identifier=identifier,
        G=lambda u, v: a(u),
        G_u=lambda u, v: a_u(u),
        G_v=_zero2,
        domain=domain,
    )
    return SurfaceSpec(
        kind=kind,
        params=dict(params),
        patch=patch,
        profile=RevolutionProfile(a, a_u, a_uu),
        profile_warning=warning,
    )


def _positive_param(params: dict, key: str, default: float | None, kind: str) -> float:
    if key in params:
        value = params[key]
    elif default is not None:
        value = default
    else:
        raise ConfigError(f"surface kind {kind!r} requires parameter {key!r}")
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key}={value!r} is not a number") from None
    if not value > 0.0 or not math.isfinite(value):
        raise ConfigError(f"parameter {key}={value!r} must be a positive finite real")
    return value


CATALOG_KINDS = (
    "plane",
    "cylinder",
    "sphere",
    "hyperbolic",
    "cone",
    "catenoid",
    "helicoid",
    "binormal",
    "grusin",
)

CATALOG_PARAMS = {
    "plane": (),
    "cylinder": (),
    "sphere": ("extended",),
    "hyperbolic": ("r",),
    "cone": ("slope",),
    "catenoid": (),
    "helicoid": (),
    "binormal": ("tau",),
    "grusin": (),
}


def catalog_surface(kind: str, params: dict | None = None, **kwargs) -> SurfaceSpec:
    """Build a built-in surface by name.

    Optional parameters: hyperbolic ``r`` (default 1), cone ``slope``
    (default 1/sqrt(2), the 45-degree cone), binormal ``tau`` (default 1),
    sphere ``extended`` (domain (0, pi) instead of (0, pi/2); queries beyond
    the equator's focal distance then fail with G <= 0).
    """
    merged = dict(params or {})
    merged.update(kwargs)
    if kind not in CATALOG_PARAMS:
        raise ConfigError(f"unknown surface kind: {kind!r}")
    unknown = set(merged) - set(CATALOG_PARAMS[kind])
    if unknown:
        raise ConfigError(f"unknown parameter(s) {sorted(unknown)} for kind {kind!r}")

    if kind in ("plane", "cylinder"):
        a, a1, a2 = _const_profile(1.0)
        return _revolution_spec(kind, merged, kind, a, a1, a2, Domain(0.0, _INF))

    if kind == "sphere":
        extended = bool(merged.get("extended", False))
        u_max = math.pi if extended else math.pi / 2
        return _revolution_spec(
            kind, merged, "sphere",
            math.cos, lambda u: -math.sin(u), lambda u: -math.cos(u),
            Domain(0.0, u_max),
        )

    if kind == "hyperbolic":
        r = _positive_param(merged, "r", 1.0, kind)
        return _revolution_spec(
            kind, {"r": r}, f"hyperbolic(r={r:g})",
            lambda u: math.cosh(u / r),
            lambda u: math.sinh(u / r) / r,
            lambda u: math.cosh(u / r) / (r * r),
            Domain(0.0, _INF),
        )

    if kind == "cone":
        slope = _positive_param(merged, "slope", math.sqrt(0.5), kind)
        return _revolution_spec(
            kind, {"slope": slope}, f"cone(slope={slope:g})",
            lambda u: slope * u, lambda u: slope, lambda u: 0.0,
            Domain(0.0, _INF),
        )

    if kind in ("catenoid", "helicoid"):
        a, a1, a2 = _sqrt_profile(1.0)
        return _revolution_spec(kind, merged, kind, a, a1, a2, Domain(0.0, _INF))

    if kind == "binormal":
        tau = _positive_param(merged, "tau", 1.0, kind)
        a, a1, a2 = _sqrt_profile(tau)
        return _revolution_spec(
            kind, {"tau": tau}, f"binormal(tau={tau:g})", a, a1, a2, Domain(0.0, _INF)
        )

    if kind == "grusin":
        return _revolution_spec(
            kind, merged, "grusin",
            lambda u: 1.0 / u,
            lambda u: -1.0 / (u * u),
            lambda u: 2.0 / (u * u * u),
            Domain(0.0, _INF),
        )

    raise ConfigError(f"unknown surface kind: {kind!r}")  # pragma: no cover


# --------------------------------------------------------------------------
# ruled surfaces
# --------------------------------------------------------------------------

def ruled_metric(f: Callable[[float], float], g: Callable[[float], float],
                 u: float, v: float) -> float:
    """G for the ruled surface c(v) + u*W(v) with f = <c',W'>, g = ||W'||^2.

    Returns sqrt(1 + 2*u*f(v) + u^2*g(v)); the parametrization degenerates
    where the radicand is not positive.
    """
    rad = 1.0 + 2.0 * u * f(v) + u * u * g(v)
    if not rad > 0.0:
        raise DegenerateMetricError(
            f"ruled metric radicand {rad!r} <= 0 at (u={u!r}, v={v!r})"
        )
    return math.sqrt(rad)


def ruled_surface(f, g, f_v, g_v, u_range=(0.0, _INF), v_range=(-_INF, _INF),
                  identifier: str = "ruled") -> SurfaceSpec:
    """Ruled surface from callables f(v), g(v) and their derivatives."""

    def G(u, v):
        return ruled_metric(f, g, u, v)

    def G_u(u, v):
        return (f(v) + u * g(v)) / ruled_metric(f, g, u, v)

    def G_vv(u, v):
        return (u * f_v(v) + 0.5 * u * u * g_v(v)) / ruled_metric(f, g, u, v)

    patch = MetricPatch(
        identifier=identifier, G=G, G_u=G_u, G_v=G_vv,
        domain=Domain(u_range[0], u_range[1], v_range[0], v_range[1]),
    )
    return SurfaceSpec(kind="ruled", params={}, patch=patch, profile=None)


def ruled_surface_from_samples(v_samples: Sequence[float],
                               f_samples: Sequence[float],
                               g_samples: Sequence[float],
                               u_range=(0.0, _INF),
                               identifier: str = "ruled") -> SurfaceSpec:
    """Ruled surface with f and g given by samples over v (PCHIP interpolated)."""
    v_arr = np.asarray(v_samples, dtype=float)
    if v_arr.ndim != 1 or len(v_arr) < 4:
        raise ConfigError("need at least 4 samples of f and g")
    if not np.all(np.diff(v_arr) > 0):
        raise ConfigError("v samples must be strictly increasing")
    if np.any(np.asarray(g_samples, dtype=float) < 0):
        raise ConfigError("g = ||W'||^2 samples must be nonnegative")
    fi = PchipInterpolator(v_arr, np.asarray(f_samples, dtype=float))
    gi = PchipInterpolator(v_arr, np.asarray(g_samples, dtype=float))
    fd, gd = fi.derivative(), gi.derivative()
    return ruled_surface(
        lambda v: float(fi(v)), lambda v: float(gi(v)),
        lambda v: float(fd(v)), lambda v: float(gd(v)),
        u_range=u_range, v_range=(float(v_arr[0]), float(v_arr[-1])),
        identifier=identifier,
    )


# --------------------------------------------------------------------------
# revolution profiles
# --------------------------------------------------------------------------

def profile_surface(a, a_u, a_uu, u_range: tuple[float, float],
                    identifier: str = "profile") -> SurfaceSpec:
    """Rotationally symmetric metric from analytic profile callables."""
    lo, hi = float(u_range[0]), float(u_range[1])
    if not (lo >= 0.0 and hi > lo):
        raise ConfigError(f"bad profile u-range {u_range!r}")
    probe_hi = hi if math.isfinite(hi) else lo + 10.0
    probe = np.linspace(lo, probe_hi, 201)[1:-1]
    vals = np.array([a(float(t)) for t in probe])
    if not np.all(vals > 0):
        raise ConfigError("profile a(u) must be positive on its domain")
    warning = bool(max(abs(a_u(float(t))) for t in probe) > 1.0)
    return _revolution_spec(
        "revolution_profile", {}, identifier, a, a_u, a_uu,
        Domain(lo, hi), warning=warning,
    )


def tabulated_profile(samples: Sequence[tuple[float, float]],
                      identifier: str = "profile") -> SurfaceSpec:
    """Revolution surface with a(u) given by monotone cubic interpolation.

    Requires at least 4 samples with strictly increasing u and positive a.
    Shape-preserving (PCHIP) interpolation is used so that no spurious
    critical parallels are introduced by overshoot.
    """
    pts = [(float(u), float(a)) for u, a in samples]
    if len(pts) < 4:
        raise ConfigError(f"need at least 4 profile samples, got {len(pts)}")
    us = np.array([p[0] for p in pts])
    vals = np.array([p[1] for p in pts])
    if not np.all(np.diff(us) > 0):
        raise ConfigError("profile u samples must be strictly increasing")
    if not np.all(vals > 0):
        raise ConfigError("profile values a(u) must be positive")
    interp = PchipInterpolator(us, vals)
    d1 = interp.derivative()
    d2 = interp.derivative(2)
    fine = np.linspace(us[0], us[-1], max(2000, 20 * len(us)))
    warning = bool(np.max(np.abs(d1(fine))) > 1.0)
    return _revolution_spec(
        "revolution_profile", {}, identifier,
        lambda u: float(interp(u)), lambda u: float(d1(u)), lambda u: float(d2(u)),
        Domain(float(us[0]), float(us[-1])), warning=warning,
    )


def load_profile_csv(path) -> list[tuple[float, float]]:
    """Read a two-column profile CSV ``u,a`` with a header row."""
    rows: list[tuple[float, float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ConfigError(f"empty profile file {path}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise ConfigError(f"{path}:{lineno}: expected two columns")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: non-numeric value") from None
    return rows
