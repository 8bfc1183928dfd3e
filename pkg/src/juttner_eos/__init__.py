"""Kinetic (Juttner gas) equation of state, modified Bessel functions K0-K2
and numerical verification of the inequalities that make the EOS invertible,
hyperbolic and subluminal (c_S < c/sqrt(3))."""

from .bessel import (
    BesselValue,
    RatioValue,
    besselK,
    bessel_triple,
    envelope_K0,
    envelope_K0_plus_K1,
    envelope_K2,
    ratio12,
    ratio_bounds,
    reference_besselK,
    taylor_sandwich_invsqrt,
    taylor_sandwich_sqrt,
)
from .eos import (
    NONDIMENSIONAL,
    InversionResult,
    PhysicalConstants,
    ThermoState,
    energy_density,
    entropy_per_particle,
    f_kinetic,
    forward_map,
    invert_map,
    jacobian,
    pressure,
    sound_speed_squared,
    specific_energy,
    thermo_state,
)
from .errors import AccuracyError, BracketError, DomainError, InvariantViolation, JuttnerError
from .verify import CheckRecord, GridSpec, InequalityReport, sweep

__version__ = "0.1.0"
