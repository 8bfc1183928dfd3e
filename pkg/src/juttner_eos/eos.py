"""Kinetic equation of state of a Juttner gas.

Forward relations, with r = K1/K2 evaluated at beta = m0 c^2 / (kB theta):

    p   = m0 c^2 n / beta
    rho = m0 c^2 n r + 3 p
    n   = 4 pi e^4 (m0 c / h)^3 exp(-eta / kB) (K2 / beta) exp(beta r)

``e`` above is Euler's number.  The entropy relation is always handled in
log form so that the product exp(beta r) K2 never over- or underflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bessel
from .bessel import _check_beta
from .errors import AccuracyError, BracketError, DomainError, InvariantViolation

__all__ = [
    "PhysicalConstants",
    "NONDIMENSIONAL",
    "ThermoState",
    "InversionResult",
    "pressure",
    "energy_density",
    "entropy_per_particle",
    "specific_energy",
    "forward_map",
    "invert_map",
    "f_kinetic",
    "sound_speed_squared",
    "sound_speed_inverse",
    "jacobian",
    "thermo_state",
]

MIN_INVERSION_TOL = 1e-13
_EPS = float(np.finfo(float).eps)
MAX_ITERATIONS = 100
# bracket search limits for ln(beta)
# (the scaled quadrature overflows below ~1e-150 and K2 - K1 underflows above ~1e200)
LN_BETA_MIN = math.log(1e-140)
LN_BETA_MAX = math.log(1e150)


@dataclass(frozen=True)
class PhysicalConstants:
    m0: float = 1.0
    c: float = 1.0
    kB: float = 1.0
    h: float = 1.0

    def __post_init__(self):
        for name in ("m0", "c", "kB", "h"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"constant {name} must be finite and > 0, got {v!r}")

    @property
    def rest_energy(self) -> float:
        return self.m0 * self.c**2

    @property
    def log_entropy_constant(self) -> float:
        """ln(4 pi e^4 m0^3 c^3 / h^3)."""
        return math.log(4.0 * math.pi) + 4.0 + 3.0 * (math.log(self.m0) + math.log(self.c) - math.log(self.h))


NONDIMENSIONAL = PhysicalConstants()


@dataclass(frozen=True)
class ThermoState:
    n: float
    beta: float
    theta: float
    p: float
    rho: float
    eta: float
    psi: float
    cs2: float


@dataclass(frozen=True)
class InversionResult:
    n: float
    beta: float
    residual_eta: float
    residual_rho: float
    iterations: int
    # True when at least one bisection fallback step was taken
    bracket_used: bool
    history: list = field(default_factory=list, repr=False, compare=False)


def _check_positive(name, v) -> float:
    try:
        v = float(v)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real number, got {v!r}") from exc
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {v!r}")
    return v


def _check_finite(name, v) -> float:
    try:
        v = float(v)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real number, got {v!r}") from exc
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v!r}")
    return v


def pressure(n, beta, constants: PhysicalConstants = NONDIMENSIONAL) -> float:
    n = _check_positive("n", n)
    beta = _check_beta(beta)
    return constants.rest_energy * n / beta


def specific_energy(beta) -> float:
    """Dimensionless energy per particle, 3/beta + K1/K2."""
    beta = _check_beta(beta)
    return 3.0 / beta + bessel.ratio12(beta).ratio


def energy_density(n, beta, constants: PhysicalConstants = NONDIMENSIONAL) -> float:
    n = _check_positive("n", n)
    beta = _check_beta(beta)
    r = bessel.ratio12(beta).ratio
    return constants.rest_energy * n * r + 3.0 * pressure(n, beta, constants)


def _log_density_factor(beta: float) -> float:
    """ln(K2(beta)/beta) + beta*K1/K2, from the scaled triple."""
    _, _, s2, d21 = bessel._triple(beta)
    # ln K2 + beta r = ln(e^beta K2) - beta (K2 - K1)/K2
    return math.log(s2) - beta * d21 / s2 - math.log(beta)


def entropy_per_particle(n, beta, constants: PhysicalConstants = NONDIMENSIONAL) -> float:
    n = _check_positive("n", n)
    beta = _check_beta(beta)
    return constants.kB * (constants.log_entropy_constant + _log_density_factor(beta) - math.log(n))


def forward_map(n, beta, constants: PhysicalConstants = NONDIMENSIONAL) -> tuple[float, float]:
    """(eta, rho) as functions of (n, beta)."""
    return entropy_per_particle(n, beta, constants), energy_density(n, beta, constants)


def _ratio_parts(beta: float) -> tuple[float, float]:
    rv = bessel.ratio12(beta)
    return rv.ratio, rv.derivative


def sound_speed_inverse(beta) -> float:
    """M(beta) = (dp/drho at fixed eta)**-1; bounded below by 3."""
    beta = _check_beta(beta)
    r, _ = _ratio_parts(beta)
    den = 3.0 * r + beta * r * r - beta - 4.0 / beta
    if not den < 0.0:
        raise InvariantViolation(
            f"M(beta) denominator is {den!r} >= 0 at beta={beta!r}; Bessel ratio inaccurate"
        )
    num = 4.0 * r + beta * r * r - beta
    return 3.0 + beta * r + num / den


def sound_speed_squared(beta) -> float:
    """(c_S / c)**2 = 1 / M(beta)."""
    return 1.0 / sound_speed_inverse(beta)


def jacobian(n, beta, constants: PhysicalConstants = NONDIMENSIONAL) -> np.ndarray:
    """d(eta, rho)/d(n, beta) as [[deta/dn, deta/dbeta], [drho/dn, drho/dbeta]].

    Uses d ln K2/dbeta = -K1/K2 - 2/beta (from the recurrence) together with
    the Riccati identity for (K1/K2)'.
    """
    n = _check_positive("n", n)
    beta = _check_beta(beta)
    r, dr = _ratio_parts(beta)
    kB, e0 = constants.kB, constants.rest_energy
    return np.array(
        [
            [-kB / n, kB * (beta * dr - 3.0 / beta)],
            [e0 * (r + 3.0 / beta), e0 * n * (dr - 3.0 / beta**2)],
        ]
    )


def thermo_state(n, beta, constants: PhysicalConstants = NONDIMENSIONAL) -> ThermoState:
    n = _check_positive("n", n)
    beta = _check_beta(beta)
    eta, rho = forward_map(n, beta, constants)
    return ThermoState(
        n=n,
        beta=beta,
        theta=constants.rest_energy / (constants.kB * beta),
        p=pressure(n, beta, constants),
        rho=rho,
        eta=eta,
        psi=specific_energy(beta),
        cs2=sound_speed_squared(beta),
    )


class _ReducedResidual:
    """ln(rho(n(beta; eta), beta)) - ln(rho_target) as a function of x = ln beta.

    n is eliminated exactly through the entropy relation, so the residual is a
    scalar function of x; it is strictly decreasing because d rho/d beta at
    fixed eta has the sign of -M(beta) times the (negative) Conjecture-1
    expression.
    """

    def __init__(self, eta, rho, constants):
        self.constants = constants
        self.eta_over_kB = eta / constants.kB
        self.offset = (
            math.log(constants.rest_energy) + constants.log_entropy_constant - self.eta_over_kB - math.log(rho)
        )
        self.evaluations = 0

    def log_n(self, beta: float) -> float:
        return self.constants.log_entropy_constant + _log_density_factor(beta) - self.eta_over_kB

    def __call__(self, x: float) -> tuple[float, float]:
        self.evaluations += 1
        beta = math.exp(x)
        r = bessel.ratio12(beta).ratio
        psi = 3.0 / beta + r
        log_factor = _log_density_factor(beta)
        g = self.offset + log_factor + math.log(psi)
        self.scale = abs(self.offset) + abs(log_factor) + 2.0 * abs(x) + abs(math.log(psi))
        q = _scaled_ratio_slope(beta, r)
        # d(ln n)/d(ln beta) = q - 3 and d(ln psi)/d(ln beta) = (q - 3)/(beta psi)
        dg = (q - 3.0) * (1.0 + 1.0 / (3.0 + beta * r))
        return g, dg


_SLOPE_SERIES_BETA = 1e4


def _scaled_ratio_slope(beta: float, r: float) -> float:
    """beta**2 * d(K1/K2)/dbeta.

    The closed form r**2 + 3r/beta - 1 cancels catastrophically once
    beta >> 1, so the two-term large-beta expansion is used past 1e4
    (relative error below 1e-7 there).
    """
    if beta <= _SLOPE_SERIES_BETA:
        return beta * beta * (r * r + 3.0 * r / beta - 1.0)
    return 1.5 - 3.75 / beta


def _expand_bracket(fun, x0: float, g0: float):
    """Grow [lo, hi] around x0 with doubling log-steps until fun changes sign."""
    step = math.log(2.0)
    x, g = x0, g0
    # decreasing residual: positive g means the root lies at larger beta
    direction = 1.0 if g0 > 0 else -1.0
    while True:
        x_new = x0 + direction * step
        if not (LN_BETA_MIN <= x_new <= LN_BETA_MAX):
            x_new = LN_BETA_MAX if direction > 0 else LN_BETA_MIN
        g_new, _ = fun(x_new)
        if (g_new > 0) != (g0 > 0) or g_new == 0.0:
            if direction > 0:
                return (x, g), (x_new, g_new)
            return (x_new, g_new), (x, g)
        if x_new in (LN_BETA_MIN, LN_BETA_MAX):
            lo, hi = sorted((x0, x_new))
            raise BracketError(
                f"no sign change of the inversion residual for beta in "
                f"[{math.exp(lo):.3g}, {math.exp(hi):.3g}]",
                math.exp(lo),
                math.exp(hi),
            )
        x, g = x_new, g_new
        step *= 2.0


def invert_map(eta, rho, constants: PhysicalConstants = NONDIMENSIONAL, tol: float = MIN_INVERSION_TOL) -> InversionResult:
    """Recover (n, beta) from (eta, rho).

    Safeguarded Newton iteration on ln(beta) for the scalar residual obtained
    after eliminating n; steps that leave the current sign-change bracket or
    fail to halve the residual are replaced by bisection.  Convergence is
    declared once |ln rho(beta) - ln rho| <= max(tol, 8 eps * S), where S is
    the magnitude of the summed log terms (for |eta/kB| of a few hundred the
    rounding floor exceeds 1e-13).
    """
    eta = _check_finite("eta", eta)
    rho = _check_positive("rho", rho)
    tol = float(tol)
    if not tol >= MIN_INVERSION_TOL:
        raise DomainError(f"tol must be >= {MIN_INVERSION_TOL:g}, got {tol!r}")

    fun = _ReducedResidual(eta, rho, constants)
    x, (g, dg) = 0.0, fun(0.0)
    history = [(x, g)]
    used_bisection = False
    iterations = 0

    if g != 0.0:
        (lo, g_lo), (hi, g_hi) = _expand_bracket(fun, x, g)
        # start Newton from the bracket end with the smaller residual
        if abs(g_lo) <= abs(g_hi):
            x, g = lo, g_lo
        else:
            x, g = hi, g_hi
        _, dg = fun(x)
        dx_old = hi - lo
        while abs(g) > max(tol, 8.0 * _EPS * fun.scale):
            iterations += 1
            if iterations > MAX_ITERATIONS:
                raise AccuracyError(f"inversion did not converge in {MAX_ITERATIONS} iterations")
            # Newton only while it stays inside the bracket and shrinks the step
            if dg != 0.0 and lo < x - g / dg < hi and abs(2.0 * g) <= abs(dx_old * dg):
                x_new = x - g / dg
            else:
                x_new = 0.5 * (lo + hi)
                used_bisection = True
            dx_old = abs(x_new - x)
            if x_new == x or hi - lo <= 4.0 * np.spacing(max(abs(lo), abs(hi), 1.0)):
                # bracket collapsed to rounding level
                if abs(g) > max(tol, 8.0 * _EPS * fun.scale):
                    raise AccuracyError(
                        f"inversion residual {g:.3g} cannot reach tol {tol:g} in double precision"
                    )
                break
            x = x_new
            g, dg = fun(x)
            history.append((x, g))
            if g > 0:
                lo = x
            elif g < 0:
                hi = x
            else:
                break

    beta = math.exp(x)
    n = math.exp(fun.log_n(beta))
    eta_back, rho_back = forward_map(n, beta, constants)
    return InversionResult(
        n=n,
        beta=beta,
        residual_eta=(eta_back - eta) / constants.kB,
        residual_rho=rho_back / rho - 1.0,
        iterations=iterations,
        bracket_used=used_bisection,
        history=history,
    )


def f_kinetic(eta, rho, constants: PhysicalConstants = NONDIMENSIONAL, tol: float = MIN_INVERSION_TOL) -> float:
    """Pressure as a function of (eta, rho)."""
    res = invert_map(eta, rho, constants, tol)
    return pressure(res.n, res.beta, constants)
