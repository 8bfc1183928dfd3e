"""Slow, independent evaluation of K0, K1, K2 for cross-checking.

Uses the substitution z**2/(4 beta) = sinh(r/2)**2, which maps the integral
onto a Gaussian weight,

    exp(beta) K_j(beta) = beta**-1/2 int_0^inf cosh(j r(z)) exp(-z**2/2) / sqrt(1 + z**2/(4 beta)) dz,
    cosh r(z) = 1 + z**2/(2 beta),

and integrates it with mpmath's tanh-sinh rule in extended precision.  No
code is shared with :mod:`juttner_eos.bessel`.
"""

from __future__ import annotations

import mpmath

from .errors import AccuracyError, DomainError

# exp(-z**2/2) < 1e-300 past this point
_Z_CUT = 38


def _breakpoints(beta):
    # integrand varies on the scale 2*sqrt(beta) near the branch point z = 2i*sqrt(beta)
    pts = {mpmath.mpf(0), mpmath.mpf(_Z_CUT)}
    scale = 2 * mpmath.sqrt(beta)
    while scale < _Z_CUT:
        pts.add(scale)
        scale *= 4
    for p in (0.5, 1, 2, 4, 8, 16):
        pts.add(mpmath.mpf(p))
    return sorted(pts)


def substitution_scaled_besselK(order: int, beta: float, dps: int = 30) -> float:
    """exp(beta) * K_order(beta) via the Gaussian-weight substitution."""
    if order not in (0, 1, 2):
        raise DomainError(f"order must be 0, 1 or 2, got {order!r}")
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta!r}")
    with mpmath.workdps(dps):
        b = mpmath.mpf(beta)

        def f(z):
            z2 = z * z
            c = 1 + z2 / (2 * b)
            weight = mpmath.exp(-z2 / 2) / mpmath.sqrt(1 + z2 / (4 * b))
            if order == 0:
                return weight
            if order == 1:
                return c * weight
            return (2 * c * c - 1) * weight

        val, err = mpmath.quad(f, _breakpoints(b), error=True, maxdegree=10)
        val = val / mpmath.sqrt(b)
        if abs(err / mpmath.sqrt(b)) > mpmath.mpf(10) ** (-(dps // 2)) * abs(val):
            raise AccuracyError(f"oracle quadrature error {err} too large at beta={beta}")
        return float(val)


def substitution_besselK(order: int, beta: float, dps: int = 30) -> float:
    with mpmath.workdps(dps):
        return float(mpmath.mpf(substitution_scaled_besselK(order, beta, dps)) * mpmath.exp(-mpmath.mpf(beta)))
