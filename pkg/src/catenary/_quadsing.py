"""Adaptive quadrature with square-root endpoint singularities.

The first-integral structure of the curve equations produces integrands of
the form q(t) = 1/(a(t)*sqrt(rho(t)^2/c^2 - 1)) that blow up like an
inverse square root at turning points rho(t) = c.  The substitution
t = endpoint +/- xi^2 removes these integrable singularities; improper
upper limits are delegated to the tail transformation built into QUADPACK.
"""

from __future__ import annotations

import math

from scipy.integrate import quad

_QUAD_OPTS = {"epsabs": 1e-12, "epsrel": 1e-11, "limit": 200}


def _quad(fn, lo, hi):
    result = quad(fn, lo, hi, full_output=1, **_QUAD_OPTS)
    return result[0]


def integrate_with_endpoints(q, lo: float, hi: float) -> float:
    """Integrate q over (lo, hi) with xi^2 substitution at finite endpoints.

    q may diverge like 1/sqrt(t - lo) or 1/sqrt(hi - t); q must return 0.0
    where its radicand rounds to a non-positive value.
    """
    if hi == lo:
        return 0.0
    finite_hi = math.isfinite(hi)
    span = (hi - lo) if finite_hi else math.inf
    w_lo = min(span / 3.0, 1.0)

    def f_lo(xi):
        return 2.0 * xi * q(lo + xi * xi)

    total = _quad(f_lo, 0.0, math.sqrt(w_lo))

    if finite_hi:
        w_hi = min(span / 3.0, 1.0)

        def f_hi(xi):
            return 2.0 * xi * q(hi - xi * xi)

        total += _quad(f_hi, 0.0, math.sqrt(w_hi))
        if lo + w_lo < hi - w_hi:
            total += _quad(q, lo + w_lo, hi - w_hi)
    else:
        total += _quad(q, lo + w_lo, math.inf)
    return total
