"""Modified Bessel functions K0, K1, K2 of real positive argument.

All three orders are obtained from one adaptive Gauss-Legendre quadrature of

    K_j(beta) = int_0^inf cosh(j r) exp(-beta cosh r) dr

carried out in exponentially scaled form, exp(beta) K_j(beta), so that the
integrand peaks at O(1) values for every beta.  The scaled and log forms are
canonical; the plain value is allowed to underflow for large beta.

The module also exposes the closed-form rational bounds on K1/K2, the
asymptotic envelopes of K0 and K0 + K1 and the truncated binomial bounds they
are built from.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError

__all__ = [
    "BesselValue",
    "RatioValue",
    "reference_besselK",
    "besselK",
    "bessel_triple",
    "scaled_integrals",
    "ratio12",
    "ratio_bounds",
    "envelope_K0",
    "envelope_K0_plus_K1",
    "envelope_K2",
    "taylor_sandwich_invsqrt",
    "taylor_sandwich_sqrt",
    "taylor_slacks",
    "truncation_radius",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-13
MIN_TOL = 1e-15
# scaled integrand is cut where it falls below 10**-TAIL_DECADES of its value at r = 0
TAIL_DECADES = 40
_TAIL_LOG = TAIL_DECADES * math.log(10.0)

_GL_ORDER = 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
_INITIAL_PANELS = 8
_MAX_PANELS = 50_000
_EPS = np.finfo(float).eps

_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class BesselValue:
    order: int
    argument: float
    value: float
    scaled_value: float
    log_value: float


@dataclass(frozen=True)
class RatioValue:
    """K1/K2 at ``argument`` and its beta-derivative r' = r**2 + 3r/beta - 1."""

    argument: float
    ratio: float
    derivative: float


def _check_beta(beta) -> float:
    try:
        beta = float(beta)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"beta must be a real number, got {beta!r}") from exc
    if not math.isfinite(beta) or beta <= 0.0:
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")
    return beta


def _check_order(order) -> int:
    if order not in (0, 1, 2) or isinstance(order, bool):
        raise DomainError(f"order must be 0, 1 or 2, got {order!r}")
    return int(order)


def truncation_radius(beta: float, order: int = 2) -> float:
    """Radius r_max solving beta*(cosh r - 1) = TAIL_DECADES*ln(10) + order*r.

    Past r_max the scaled integrand cosh(order*r)*exp(-beta*(cosh r - 1)) is
    below 10**-TAIL_DECADES and decays faster than exp(-beta*sinh(r_max)*(r - r_max)),
    so the discarded tail is negligible against any admissible tolerance.
    """
    beta = _check_beta(beta)
    r = math.acosh(1.0 + _TAIL_LOG / beta)
    # the map r -> acosh(1 + (L + j r)/beta) is a contraction for every beta > 0
    for _ in range(200):
        # cosh r - 1 = 2 sinh(r/2)**2; solve for r in the stable half-angle form
        r_new = 2.0 * math.asinh(math.sqrt((_TAIL_LOG + order * r) / (2.0 * beta)))
        if abs(r_new - r) <= 4.0 * _EPS * r_new:
            return r_new
        r = r_new
    return r


def _panel_rule(a: np.ndarray, b: np.ndarray, beta: float) -> np.ndarray:
    """Gauss-Legendre estimates of scaled K0, K1, K2, K2 - K1 on [a, b]; shape (4, m)."""
    half = 0.5 * (b - a)
    r = (0.5 * (a + b))[:, None] + half[:, None] * _GL_X[None, :]
    s = np.sinh(0.5 * r)
    w = np.exp(-2.0 * beta * s * s)
    c1 = np.cosh(r)
    c2 = np.cosh(2.0 * r)
    # cosh 2r - cosh r, written without cancellation near r = 0
    f = np.stack([w, w * c1, w * c2, w * (2.0 * np.sinh(1.5 * r) * s)])
    # plain reductions rather than BLAS so results are bit-reproducible
    return (f * _GL_W).sum(axis=2) * half


def _adaptive_scaled_integrals(beta: float, tol: float) -> np.ndarray:
    r_max = truncation_radius(beta, 2)
    edges = np.linspace(0.0, r_max, _INITIAL_PANELS + 1)
    a, b = edges[:-1], edges[1:]
    coarse = _panel_rule(a, b, beta)
    done: list[np.ndarray] = []
    done_total = np.zeros(4)
    n_panels = len(a)

    with np.errstate(over="raise", invalid="raise"):
        while a.size:
            mid = 0.5 * (a + b)
            left = _panel_rule(a, mid, beta)
            right = _panel_rule(mid, b, beta)
            fine = left + right
            estimate = done_total + fine.sum(axis=1)
            err = np.abs(fine - coarse)
            share = (b - a) / r_max
            # cosh(2r) at abscissa r carries a rounding error of about 2r*eps
            noise = 8.0 * _EPS * np.maximum(1.0, 4.0 * b)
            ok = np.all(
                (err <= tol * estimate[:, None] * share[None, :])
                | (err <= noise[None, :] * np.abs(fine)),
                axis=0,
            )
            if ok.any():
                done.append(fine[:, ok])
                done_total = done_total + fine[:, ok].sum(axis=1)
            keep = ~ok
            if not keep.any():
                break
            n_panels += int(keep.sum())
            if n_panels > _MAX_PANELS:
                raise AccuracyError(
                    f"quadrature for beta={beta!r} did not reach rel. tol {tol:g} "
                    f"within {_MAX_PANELS} panels"
                )
            a = np.concatenate([a[keep], mid[keep]])
            b = np.concatenate([mid[keep], b[keep]])
            coarse = np.concatenate([left[:, keep], right[:, keep]], axis=1)

    parts = np.concatenate(done, axis=1)
    return np.array([math.fsum(row) for row in parts])


def scaled_integrals(beta: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """exp(beta) * (K0, K1, K2, K2 - K1)(beta) from the shared node set.

    The fourth entry is integrated directly so that 1 - K1/K2 keeps full
    relative precision when beta is large.
    """
    beta = _check_beta(beta)
    if not (tol >= MIN_TOL):
        raise DomainError(f"target_rel_err must be >= {MIN_TOL:g}, got {tol!r}")
    try:
        out = _adaptive_scaled_integrals(beta, tol)
    except FloatingPointError as exc:
        raise AccuracyError(f"overflow while integrating at beta={beta!r}") from exc
    if not np.all(np.isfinite(out)) or np.any(out <= 0.0):
        raise AccuracyError(f"non-finite quadrature result at beta={beta!r}")
    return out


def _make_value(order: int, beta: float, scaled: float) -> BesselValue:
    return BesselValue(
        order=order,
        argument=beta,
        value=scaled * math.exp(-beta),
        scaled_value=scaled,
        log_value=math.log(scaled) - beta,
    )


def reference_besselK(order: int, beta: float, target_rel_err: float = MIN_TOL) -> BesselValue:
    """K_order(beta) by truncated adaptive quadrature at the requested relative error."""
    order = _check_order(order)
    beta = _check_beta(beta)
    return _make_value(order, beta, float(scaled_integrals(beta, target_rel_err)[order]))


@lru_cache(maxsize=65536)
def _cached_triple(bits: int) -> tuple[float, float, float, float]:
    beta = struct.unpack("<d", struct.pack("<Q", bits))[0]
    return tuple(float(v) for v in scaled_integrals(beta, DEFAULT_TOL))


def _triple(beta: float) -> tuple[float, float, float, float]:
    beta = _check_beta(beta)
    return _cached_triple(struct.unpack("<Q", struct.pack("<d", beta))[0])


def bessel_triple(beta: float) -> tuple[BesselValue, BesselValue, BesselValue]:
    """(K0, K1, K2) at beta, memoized on the bit pattern of beta."""
    beta = _check_beta(beta)
    s = _triple(beta)
    return tuple(_make_value(j, beta, s[j]) for j in range(3))


def besselK(order: int, beta: float) -> BesselValue:
    order = _check_order(order)
    return bessel_triple(beta)[order]


def ratio12(beta: float) -> RatioValue:
    beta = _check_beta(beta)
    _, s1, s2, _ = _triple(beta)
    r = s1 / s2
    return RatioValue(argument=beta, ratio=r, derivative=r * r + 3.0 * r / beta - 1.0)


def _horner(coeffs, x):
    acc = 0 * x
    for c in coeffs:
        acc = acc * x + c
    return acc


_LOWER_NUM = (128, 48, -15, 0)
_LOWER_DEN = (128, 240, 105, -30)
_UPPER_NUM = (8, 3, 0)  # 2 * (4 b^2 + 3b/2)
_UPPER_DEN = (8, 15, 6)  # 2 * (4 b^2 + 15b/2 + 3)


def ratio_bounds(beta, exact: bool = False):
    """Rational lower and upper bounds on K1/K2, valid for beta >= 1/2.

    With ``exact=True`` the bounds are returned as :class:`fractions.Fraction`
    evaluated at the exact binary value of ``beta``.
    """
    if isinstance(beta, Fraction):
        x = beta
    else:
        x = _check_beta(beta)
    if x < Fraction(1, 2):
        raise DomainError(f"ratio bounds need beta >= 1/2, got {beta!r}")
    if exact:
        x = Fraction(x)
    lower = _horner(_LOWER_NUM, x) / _horner(_LOWER_DEN, x)
    upper = _horner(_UPPER_NUM, x) / _horner(_UPPER_DEN, x)
    return lower, upper


def _prefactor(beta: float, scaled: bool) -> float:
    pref = _SQRT_HALF_PI / math.sqrt(beta)
    return pref if scaled else pref * math.exp(-beta)


def envelope_K0(beta: float, scaled: bool = False) -> tuple[float, float]:
    """Lower/upper bounds on K0 from the truncated binomial series (all beta > 0)."""
    beta = _check_beta(beta)
    x = 1.0 / beta
    pref = _prefactor(beta, scaled)
    lower = pref * (1.0 - x / 8.0)
    upper = pref * (1.0 - x / 8.0 + 9.0 * x * x / 128.0)
    return lower, upper


def envelope_K0_plus_K1(beta: float, scaled: bool = False) -> tuple[float, float]:
    beta = _check_beta(beta)
    x = 1.0 / beta
    pref = 2.0 * _prefactor(beta, scaled)
    lower = pref * (1.0 + x / 8.0 - 3.0 * x * x / 128.0)
    upper = pref * (1.0 + x / 8.0)
    return lower, upper


def envelope_K2(beta: float, scaled: bool = False) -> tuple[float, float]:
    """Bounds on K2 implied by the K0 and K0 + K1 envelopes via K2 = K0 + (2/beta) K1."""
    k0_lo, k0_hi = envelope_K0(beta, scaled)
    s_lo, s_hi = envelope_K0_plus_K1(beta, scaled)
    beta = float(beta)
    lower = k0_lo + 2.0 / beta * (s_lo - k0_hi)
    upper = k0_hi + 2.0 / beta * (s_hi - k0_lo)
    return lower, upper


def _check_x(x) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"x must be finite and > 0, got {x!r}")
    return x


def taylor_sandwich_invsqrt(x: float) -> tuple[float, float, float]:
    """(1 - x^2/2, 1/sqrt(1 + x^2), 1 - x^2/2 + 3x^4/8)."""
    x = _check_x(x)
    q = x * x
    return 1.0 - q / 2.0, 1.0 / math.sqrt(1.0 + q), 1.0 - q / 2.0 + 3.0 * q * q / 8.0


def taylor_sandwich_sqrt(x: float) -> tuple[float, float, float]:
    """(1 + x^2/2 - x^4/8, sqrt(1 + x^2), 1 + x^2/2)."""
    x = _check_x(x)
    q = x * x
    return 1.0 + q / 2.0 - q * q / 8.0, math.sqrt(1.0 + q), 1.0 + q / 2.0


def taylor_slacks(x: float) -> tuple[float, float, float, float]:
    """Gaps (mid - lower, upper - mid) of both sandwiches, free of cancellation.

    Order: invsqrt lower, invsqrt upper, sqrt lower, sqrt upper.  Each gap is
    rewritten as q**2 times a positive rational function of t = sqrt(1 + q),
    q = x**2, so tiny gaps at small x are resolved to full relative precision.
    """
    x = _check_x(x)
    q = x * x
    t = math.sqrt(1.0 + q)
    tm1 = q / (1.0 + t)  # t - 1
    p1 = (1.0 + t) ** 2
    inv_lo = q * tm1 * (t + 2.0) / (2.0 * t * (1.0 + t))
    inv_hi = q * q * tm1 * (3.0 * t * t + 9.0 * t + 8.0) / (8.0 * t * p1)
    sq_lo = q * q * tm1 * (t + 3.0) / (8.0 * p1)
    sq_hi = q * q / (2.0 * p1)
    return inv_lo, inv_hi, sq_lo, sq_hi
