"""Initial-value tracing of weighted critical curves.

Two independent formulations are provided:

* ``trace_catenary`` integrates the unit-speed tangent-angle flow

      du/ds = cos(phi),  dv/ds = sin(phi)/G,
      dphi/ds = -sin(phi) * (alpha/u + G_u/G),

  which keeps unit speed structurally and has no singular turning points.

* ``trace_graph`` integrates the second-order graph equation u = u(v),

      u'' = [(alpha*G/u)*(u'^2 + G^2) + G_v*u' + 2*G_u*u'^2 + G^2*G_u] / G,

  valid away from points where the curve turns vertical.

Both use an embedded Dormand-Prince 5(4) pair with PI step-size control,
cubic Hermite dense output on accepted steps, and event localization by
bisection.  Runtime exits are reported through ``Trace.termination``, never
as exceptions.
"""

from __future__ import annotations

import bisect as _bisect
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .curvature import CurveJet2, catenary_residual, geodesic_curvature
from .errors import CatenaryError, ConfigError, DomainError
from .surfaces import SurfaceSpec

__all__ = [
    "CatenaryState",
    "TraceSample",
    "Trace",
    "TERMINATIONS",
    "catenary_rhs",
    "trace_catenary",
    "trace_graph",
]

TERMINATIONS = ("reached_smax", "hit_lower_u", "blow_up", "left_domain", "step_underflow")

TOL_MIN, TOL_MAX = 1e-12, 1e-3


@dataclass(frozen=True)
class CatenaryState:
    """Point on a unit-speed trace: position (u, v), tangent angle phi, arc length s.

    phi is measured from the meridian direction d/du toward d/dv, so the
    implied velocity (cos(phi), sin(phi)/G) always has unit ds-norm.
    """

    u: float
    v: float
    phi: float
    s: float = 0.0


class TraceSample(NamedTuple):
    s: float
    u: float
    v: float
    phi: float
    kappa: float
    residual: float


@dataclass
class Trace:
    """Result of a trace: per-step samples, diagnostics and the exit reason.

    ``mode`` is "arclength" (samples parametrized by s) or "graph"
    (integrated over v; s is the accumulated unweighted arc length).
    ``at(t)`` evaluates the dense output at a parameter value (s for
    arclength mode, v for graph mode).
    """

    spec: SurfaceSpec
    alpha: float
    samples: list[TraceSample]
    termination: str
    stats: dict
    mode: str = "arclength"
    _segments: list = field(default_factory=list, repr=False)
    _t_final: float = field(default=0.0, repr=False)

    def at(self, t: float) -> tuple[float, ...]:
        """Cubic-Hermite dense output of the integrated state at parameter t."""
        if not self._segments:
            raise ValueError("empty trace has no dense output")
        t = min(max(t, self._segments[0][0]), self._t_final)
        starts = [seg[0] for seg in self._segments]
        idx = _bisect.bisect_right(starts, t) - 1
        idx = min(max(idx, 0), len(self._segments) - 1)
        return _hermite(self._segments[idx], t)

    @property
    def s_final(self) -> float:
        return self.samples[-1].s

    @property
    def final_state(self) -> CatenaryState:
        last = self.samples[-1]
        return CatenaryState(u=last.u, v=last.v, phi=last.phi, s=last.s)


# --------------------------------------------------------------------------
# Dormand-Prince 5(4) with PI control
# --------------------------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_MAX_SHRINK = 5.0
_MAX_GROWTH = 10.0


def _hermite(seg, t):
    t0, y0, f0, t1, y1, f1 = seg
    h = t1 - t0
    if h == 0.0:
        return y0
    x = (t - t0) / h
    x2, x3 = x * x, x * x * x
    h00 = 2 * x3 - 3 * x2 + 1
    h10 = x3 - 2 * x2 + x
    h01 = -2 * x3 + 3 * x2
    h11 = x3 - x2
    return tuple(
        h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i]
        for i in range(len(y0))
    )


def _rms_scaled(vec, y_old, y_new, tol):
    acc = 0.0
    for i, e in enumerate(vec):
        sc = tol + tol * max(abs(y_old[i]), abs(y_new[i]))
        acc += (e / sc) ** 2
    return math.sqrt(acc / len(vec))


def _initial_step(f, t0, y0, f0, span, tol, max_step):
    n = len(y0)
    sc = [tol + tol * abs(y0[i]) for i in range(n)]
    d0 = math.sqrt(sum((y0[i] / sc[i]) ** 2 for i in range(n)) / n)
    d1 = math.sqrt(sum((f0[i] / sc[i]) ** 2 for i in range(n)) / n)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span, max_step)
    try:
        y1 = tuple(y0[i] + h0 * f0[i] for i in range(n))
        f1 = f(t0 + h0, y1)
        d2 = math.sqrt(sum(((f1[i] - f0[i]) / sc[i]) ** 2 for i in range(n)) / n) / h0
    except CatenaryError:
        d2 = d1
    dm = max(d1, d2)
    h1 = (0.01 / dm) ** 0.2 if dm > 1e-15 else max(1e-6, h0 * 1e-3)
    return min(100.0 * h0, h1, span, max_step)


class _Event(NamedTuple):
    termination: str
    flag: str | None
    g: Callable[[tuple], float]  # positive inside, crossing at zero


def _locate_event(seg, g):
    """First parameter in the segment where g(dense(t)) <= 0, by bisection."""
    a, b = seg[0], seg[3]
    # endpoint values: g(a) > 0 (checked before the step), g(b) <= 0
    while (b - a) > 1e-12 * max(1.0, abs(b)):
        mid = 0.5 * (a + b)
        if g(_hermite(seg, mid)) <= 0.0:
            b = mid
        else:
            a = mid
    return b


def _drive(f, t0, y0, t_end, tol, max_step, events):
    """Adaptive RK5(4) from t0 to t_end with endpoint event detection.

    Returns (segments, termination, flag, stats, t_final, y_final).  When an
    event fires inside a step the full segment is kept for dense output and
    (t_final, y_final) is the bisected event point.  Stage failures inside
    the domain guard are handled by shrinking the step, so the integration
    only ever ends on t_end, an event, or step underflow.
    """
    stats = {"steps_accepted": 0, "steps_rejected": 0, "rhs_evals": 0}
    segments: list = []
    n = len(y0)

    f0 = f(t0, y0)
    stats["rhs_evals"] += 1
    h = _initial_step(f, t0, y0, f0, t_end - t0, tol, max_step)
    stats["rhs_evals"] += 1
    t, y, fy = t0, y0, f0
    facold = 1e-4
    termination, flag = "reached_smax", None

    while True:
        h = min(h, max_step, t_end - t)
        if h <= 1e-14 * max(1.0, abs(t)):
            termination = "step_underflow"
            break
        try:
            k = [fy]
            for i in range(1, 6):
                yi = tuple(
                    y[j] + h * sum(a * k[m][j] for m, a in enumerate(_A[i]))
                    for j in range(n)
                )
                k.append(f(t + _C[i] * h, yi))
            y_new = tuple(
                y[j] + h * sum(b * k[m][j] for m, b in enumerate(_B)) for j in range(n)
            )
            f_new = f(t + h, y_new)
            k.append(f_new)
            stats["rhs_evals"] += 6
        except CatenaryError:
            # a stage left the metric's domain: shrink and retry
            stats["steps_rejected"] += 1
            h *= 0.5
            continue

        err_vec = tuple(
            h * sum(e * k[m][j] for m, e in enumerate(_E)) for j in range(n)
        )
        err = _rms_scaled(err_vec, y, y_new, tol)

        if err > 1.0:
            stats["steps_rejected"] += 1
            h /= min(_MAX_SHRINK, err ** _EXPO / _SAFETY)
            continue

        stats["steps_accepted"] += 1
        seg = (t, y, fy, t + h, y_new, f_new)
        segments.append(seg)

        hit = None
        for ev in events:
            if ev.g(y_new) <= 0.0:
                t_star = _locate_event(seg, ev.g)
                if hit is None or t_star < hit[0]:
                    hit = (t_star, ev)
        if hit is not None:
            t_star, ev = hit
            termination, flag = ev.termination, ev.flag
            return (segments, termination, flag, stats, t_star,
                    _hermite(seg, t_star))

        t, y, fy = t + h, y_new, f_new
        if t >= t_end:
            termination = "reached_smax"
            break

        fac = err ** _EXPO / facold ** _BETA / _SAFETY
        fac = max(1.0 / _MAX_GROWTH, min(_MAX_SHRINK, fac))
        facold = max(err, 1e-4)
        h /= fac

    return segments, termination, flag, stats, t, y


# --------------------------------------------------------------------------
# tangent-angle flow
# --------------------------------------------------------------------------

def catenary_rhs(spec: SurfaceSpec, alpha: float,
                 state: CatenaryState) -> tuple[float, float, float]:
    """Unit-speed flow (du/ds, dv/ds, dphi/ds) of the weighted-curve equation.

    Substituting this field into the curve equation gives a zero residual
    identically; meridians (phi = 0) are invariant.
    """
    g, gu, _ = spec.patch.evaluate(state.u, state.v)
    sin_phi = math.sin(state.phi)
    return (
        math.cos(state.phi),
        sin_phi / g,
        -sin_phi * (alpha / state.u + gu / g),
    )


def _flow_f(spec: SurfaceSpec, alpha: float):
    evaluate = spec.patch.evaluate

    def f(t, y):
        u, v, phi = y
        g, gu, _ = evaluate(u, v)
        sin_phi = math.sin(phi)
        return (math.cos(phi), sin_phi / g, -sin_phi * (alpha / u + gu / g))

    return f


def _flow_sample(spec: SurfaceSpec, alpha: float, t: float, y: tuple) -> TraceSample:
    u, v, phi = y
    g, gu, gv = spec.patch.evaluate(u, v)
    du = math.cos(phi)
    dv = math.sin(phi) / g
    dphi = -math.sin(phi) * (alpha / u + gu / g)
    ddu = -math.sin(phi) * dphi
    ddv = (math.cos(phi) * dphi) / g - math.sin(phi) * (gu * du + gv * dv) / (g * g)
    jet = CurveJet2(u=u, v=v, du=du, dv=dv, ddu=ddu, ddv=ddv)
    kappa = geodesic_curvature(spec, jet)
    residual = catenary_residual(spec, alpha, jet)
    return TraceSample(s=t, u=u, v=v, phi=phi, kappa=kappa, residual=residual)


def _check_tol(tol: float) -> None:
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise ConfigError(f"tol={tol!r} outside [{TOL_MIN}, {TOL_MAX}]")


def _boundary_events(spec: SurfaceSpec, lower_margin: float) -> list[_Event]:
    dom = spec.domain
    events = [
        _Event("hit_lower_u", None, lambda y, m=dom.u_min + lower_margin: y[0] - m)
    ]
    if math.isfinite(dom.u_max):
        events.append(
            _Event("left_domain", None, lambda y, m=dom.u_max - lower_margin: m - y[0])
        )
    if math.isfinite(dom.v_min):
        vlo = dom.v_min + 1e-9 * (1.0 + abs(dom.v_min))
        events.append(_Event("left_domain", None, lambda y, m=vlo: y[1] - m))
    if math.isfinite(dom.v_max):
        vhi = dom.v_max - 1e-9 * (1.0 + abs(dom.v_max))
        events.append(_Event("left_domain", None, lambda y, m=vhi: m - y[1]))
    return events


def trace_catenary(spec: SurfaceSpec, alpha: float, start: CatenaryState,
                   s_max: float, tol: float = 1e-9, *,
                   max_step: float = math.inf,
                   blowup_factor: float = 1e6,
                   dphi_limit: float = 1e12,
                   lower_margin: float = 1e-9) -> Trace:
    """Trace the weighted critical curve through ``start`` up to arc length s_max.

    Args:
        spec: surface to trace on.
        alpha: exponent of the distance weight (0 gives plain geodesics).
        start: initial (u, v, phi, s); u must be strictly inside the domain.
        s_max: arc length at which to stop if no event fires first.
        tol: per-step error tolerance, within [1e-12, 1e-3].
        max_step: optional cap on the step size (improves dense accuracy).
        blowup_factor: terminate with "blow_up" once u > blowup_factor * u0.
        dphi_limit: terminate with "blow_up" once |dphi/ds| exceeds this.
        lower_margin: distance above u_min at which "hit_lower_u" fires.

    Returns:
        A Trace with one sample per accepted step (kappa and the normalized
        residual recorded at each), a termination reason and step statistics.
    """
    _check_tol(tol)
    if not math.isfinite(alpha):
        raise ConfigError(f"alpha={alpha!r} must be finite")
    if not s_max > 0.0:
        raise ConfigError(f"s_max={s_max!r} must be positive")
    dom = spec.domain
    if not dom.contains(start.u, start.v) or start.u <= dom.u_min + lower_margin:
        raise DomainError(
            f"start (u={start.u!r}, v={start.v!r}) not strictly inside {tuple(dom)}"
        )

    f = _flow_f(spec, alpha)
    events = _boundary_events(spec, lower_margin)
    events.append(
        _Event("blow_up", None, lambda y, m=blowup_factor * start.u: m - y[0])
    )

    def g_dphi(y, lim=dphi_limit):
        try:
            return lim - abs(f(0.0, y)[2])
        except CatenaryError:
            return -1.0

    events.append(_Event("blow_up", None, g_dphi))

    y0 = (start.u, start.v, start.phi)
    segments, termination, flag, stats, t_final, y_final = _drive(
        f, start.s, y0, start.s + s_max, tol, max_step, events
    )

    samples = [_flow_sample(spec, alpha, start.s, y0)]
    for seg in segments[:-1]:
        samples.append(_flow_sample(spec, alpha, seg[3], seg[4]))
    if segments:
        samples.append(_flow_sample(spec, alpha, t_final, y_final))
    stats["max_residual"] = max(abs(smp.residual) for smp in samples)
    if flag:
        stats[flag] = True
    return Trace(spec=spec, alpha=alpha, samples=samples, termination=termination,
                 stats=stats, mode="arclength", _segments=segments, _t_final=t_final)


# --------------------------------------------------------------------------
# graph formulation u = u(v)
# --------------------------------------------------------------------------

def _graph_f(spec: SurfaceSpec, alpha: float):
    evaluate = spec.patch.evaluate

    def f(v, y):
        u, w, _ = y
        g, gu, gv = evaluate(u, v)
        ddu = ((alpha * g / u) * (w * w + g * g) + gv * w + 2.0 * gu * w * w
               + g * g * gu) / g
        return (w, ddu, math.sqrt(w * w + g * g))

    return f


def _graph_sample(spec: SurfaceSpec, alpha: float, v: float, y: tuple) -> TraceSample:
    u, w, s = y
    g, gu, gv = spec.patch.evaluate(u, v)
    ddu = ((alpha * g / u) * (w * w + g * g) + gv * w + 2.0 * gu * w * w
           + g * g * gu) / g
    jet = CurveJet2(u=u, v=v, du=w, dv=1.0, ddu=ddu, ddv=0.0)
    kappa = geodesic_curvature(spec, jet)
    residual = catenary_residual(spec, alpha, jet)
    phi = math.atan2(g, w)
    return TraceSample(s=s, u=u, v=v, phi=phi, kappa=kappa, residual=residual)


def trace_graph(spec: SurfaceSpec, alpha: float, u0: float, du0: float,
                v_span: tuple[float, float], tol: float = 1e-9, *,
                max_step: float = math.inf,
                blowup_factor: float = 1e6,
                lower_margin: float = 1e-9) -> Trace:
    """Integrate the graph equation u = u(v) over ``v_span``.

    The solver stops with termination "left_domain" and a "vertical_tangent"
    flag in the stats when |du/dv| exceeds 1/tol: past such a point the
    curve continues as a meridian-tangent arc, which is no longer a graph.
    """
    _check_tol(tol)
    if not math.isfinite(alpha):
        raise ConfigError(f"alpha={alpha!r} must be finite")
    v0, v1 = float(v_span[0]), float(v_span[1])
    if not v1 > v0:
        raise ConfigError(f"v_span={v_span!r} must be increasing")
    dom = spec.domain
    if not dom.contains(u0, v0) or u0 <= dom.u_min + lower_margin:
        raise DomainError(f"start (u={u0!r}, v={v0!r}) not strictly inside {tuple(dom)}")

    f = _graph_f(spec, alpha)
    events = _boundary_events(spec, lower_margin)
    events.append(_Event("blow_up", None, lambda y, m=blowup_factor * u0: m - y[0]))
    w_limit = 1.0 / tol
    events.append(
        _Event("left_domain", "vertical_tangent", lambda y, m=w_limit: m - abs(y[1]))
    )

    y0 = (float(u0), float(du0), 0.0)
    segments, termination, flag, stats, t_final, y_final = _drive(
        f, v0, y0, v1, tol, max_step, events
    )

    samples = [_graph_sample(spec, alpha, v0, y0)]
    for seg in segments[:-1]:
        samples.append(_graph_sample(spec, alpha, seg[3], seg[4]))
    if segments:
        samples.append(_graph_sample(spec, alpha, t_final, y_final))
    stats["max_residual"] = max(abs(smp.residual) for smp in samples)
    if flag:
        stats[flag] = True
    return Trace(spec=spec, alpha=alpha, samples=samples, termination=termination,
                 stats=stats, mode="graph", _segments=segments, _t_final=t_final)
