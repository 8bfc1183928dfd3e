"""Grid verification of the Bessel-ratio inequalities behind the Juttner EOS.

Every check maps a grid value beta to a :class:`CheckRecord` carrying the
bounded quantity, a signed margin (positive means the inequality holds) and
an estimate of the floating-point error in that margin.  Margins are raw
slacks in the natural units of each inequality; only the envelope check is
relative, because K0 spans hundreds of decades over a typical grid.

A record whose |margin| is below ``INCONCLUSIVE_FACTOR`` times its error
estimate is flagged inconclusive: the double-precision evaluation cannot
decide the sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import bessel, eos
from .errors import DomainError, JuttnerError

# relative error budget of each scaled Bessel integral (quadrature target)
BESSEL_REL_ERR = bessel.DEFAULT_TOL
# K1/K2 inherits the errors of both integrals
RATIO_REL_ERR = 2.0 * BESSEL_REL_ERR
INCONCLUSIVE_FACTOR = 10.0
_EPS = float(np.finfo(float).eps)

# last-three-terms polynomial and the full sextic, highest degree first
POLY_COEFFS = (3072, 20992, 36936, 25107, 6150, -540, -360)
POLY_TAIL_COEFFS = (6150, -540, -360)


@dataclass(frozen=True)
class CheckRecord:
    beta: float
    check_name: str
    value: float
    margin: float
    error: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.margin > 0.0

    @property
    def inconclusive(self) -> bool:
        if not math.isfinite(self.margin):
            return False
        return abs(self.margin) < INCONCLUSIVE_FACTOR * self.error


def _record(beta, name, value, margin, error, note="") -> CheckRecord:
    return CheckRecord(
        beta=float(beta),
        check_name=name,
        value=float(value),
        margin=float(margin),
        error=float(error),
        note=note,
    )


def _ratio(beta: float) -> float:
    return bessel.ratio12(beta).ratio


def check_conjecture1(beta) -> CheckRecord:
    """3r + beta r^2 - beta - 4/beta < 0, with r = K1/K2."""
    beta = bessel._check_beta(beta)
    r = _ratio(beta)
    value = 3.0 * r + beta * r * r - beta - 4.0 / beta
    dr = RATIO_REL_ERR * r
    err = (3.0 + 2.0 * beta * r) * dr + 4.0 * _EPS * (3.0 * r + beta * r * r + beta + 4.0 / beta)
    return _record(beta, "conjecture1", value, -value, err)


def check_conjecture2(beta) -> CheckRecord:
    """The sound-speed middle term M(beta) is finite and exceeds 3."""
    beta = bessel._check_beta(beta)
    r = _ratio(beta)
    num = 4.0 * r + beta * r * r - beta
    den = 3.0 * r + beta * r * r - beta - 4.0 / beta
    if not den < 0.0:
        return _record(beta, "conjecture2", math.inf, -math.inf, 0.0, note=f"denominator {den!r} >= 0")
    m = 3.0 + beta * r + num / den
    dr = RATIO_REL_ERR * r
    dnum = 4.0 + 2.0 * beta * r
    dden = 3.0 + 2.0 * beta * r
    dm_dr = beta + (dnum * den - num * dden) / (den * den)
    e_num = 4.0 * _EPS * (4.0 * r + beta * r * r + beta)
    e_den = 4.0 * _EPS * (3.0 * r + beta * r * r + beta + 4.0 / beta)
    err = abs(dm_dr) * dr + (e_num + abs(num / den) * e_den) / abs(den) + 4.0 * _EPS * (3.0 + beta * r)
    return _record(beta, "conjecture2", m, m - 3.0, err)


def check_reformulation(beta) -> CheckRecord:
    """r^2 < 1 - 3/(4 + beta r); value is the slack RHS - LHS."""
    beta = bessel._check_beta(beta)
    r = _ratio(beta)
    d = 4.0 + beta * r
    value = 1.0 - 3.0 / d - r * r
    dr = RATIO_REL_ERR * r
    err = (3.0 * beta / (d * d) + 2.0 * r) * dr + 4.0 * _EPS * (1.0 + 3.0 / d + r * r)
    return _record(beta, "reformulation", value, value, err)


def check_kunik(beta) -> CheckRecord:
    """(K1/K2)' < 3/beta^2."""
    beta = bessel._check_beta(beta)
    rv = bessel.ratio12(beta)
    r = rv.ratio
    value = 3.0 / beta**2 - rv.derivative
    dr = RATIO_REL_ERR * r
    err = (2.0 * r + 3.0 / beta) * dr + 4.0 * _EPS * (3.0 / beta**2 + r * r + 3.0 * r / beta + 1.0)
    return _record(beta, "kunik", value, value, err)


def check_ratio_bound(beta) -> CheckRecord:
    """0 < K1/K2 < beta/2."""
    beta = bessel._check_beta(beta)
    r = _ratio(beta)
    margin = min(r, beta / 2.0 - r)
    err = RATIO_REL_ERR * r + 2.0 * _EPS * beta
    return _record(beta, "ratio_bound", r, margin, err)


def check_ratio_sandwich(beta) -> CheckRecord:
    """Rational lower/upper bounds on K1/K2 (beta >= 1/2); margin is the smaller gap."""
    beta = bessel._check_beta(beta)
    r = _ratio(beta)
    lower, upper = bessel.ratio_bounds(beta)
    margin = min(r - lower, upper - r)
    err = RATIO_REL_ERR * r + 16.0 * _EPS * max(abs(lower), abs(upper))
    return _record(beta, "ratio_sandwich", r, margin, err, note=f"gaps={r - lower!r},{upper - r!r}")


def check_envelopes(beta) -> CheckRecord:
    """K0 and K0 + K1 inside their asymptotic envelopes; margin is the smallest relative gap."""
    beta = bessel._check_beta(beta)
    s0, s1, _, _ = bessel._triple(beta)
    k0_lo, k0_hi = bessel.envelope_K0(beta, scaled=True)
    s_lo, s_hi = bessel.envelope_K0_plus_K1(beta, scaled=True)
    total = s0 + s1
    gaps = ((s0 - k0_lo) / s0, (k0_hi - s0) / s0, (total - s_lo) / total, (s_hi - total) / total)
    margin = min(gaps)
    err = 2.0 * BESSEL_REL_ERR + 16.0 * _EPS * (1.0 + 1.0 / beta**2)
    return _record(beta, "envelopes", s0, margin, err)


def polynomial_value(beta) -> Fraction:
    """(3/4) P(beta) in exact rational arithmetic at the binary value of beta."""
    x = Fraction(beta)
    acc = Fraction(0)
    for c in POLY_COEFFS:
        acc = acc * x + c
    return Fraction(3, 4) * acc


def polynomial_tail_value(beta) -> Fraction:
    x = Fraction(beta)
    acc = Fraction(0)
    for c in POLY_TAIL_COEFFS:
        acc = acc * x + c
    return acc


def check_polynomial_positivity(beta) -> CheckRecord:
    """(3/4) P(beta) > 0 and its last three terms alone > 0 (beta >= 1/2).

    Both evaluated exactly; margin is the smaller of the two.
    """
    beta = bessel._check_beta(beta)
    if beta < 0.5:
        raise DomainError(f"polynomial check needs beta >= 1/2, got {beta!r}")
    full = polynomial_value(beta)
    tail = polynomial_tail_value(beta)
    return _record(beta, "polynomial", float(full), float(min(full, tail)), 0.0, note=f"tail={float(tail)!r}")


def check_taylor(x) -> CheckRecord:
    """Both truncated-binomial sandwiches at x; margin is the smallest of four gaps."""
    slacks = bessel.taylor_slacks(x)
    margin = min(slacks)
    _, mid, _ = bessel.taylor_sandwich_invsqrt(x)
    return _record(x, "taylor", mid, margin, 16.0 * _EPS * abs(margin))


@dataclass(frozen=True)
class CheckSpec:
    name: str
    func: Callable[[float], CheckRecord]
    min_beta: float = 0.0


CHECKS: dict[str, CheckSpec] = {
    spec.name: spec
    for spec in (
        CheckSpec("conjecture1", check_conjecture1),
        CheckSpec("conjecture2", check_conjecture2),
        CheckSpec("reformulation", check_reformulation),
        CheckSpec("kunik", check_kunik),
        CheckSpec("ratio_bound", check_ratio_bound),
        CheckSpec("ratio_sandwich", check_ratio_sandwich, 0.5),
        CheckSpec("envelopes", check_envelopes),
        CheckSpec("polynomial", check_polynomial_positivity, 0.5),
        CheckSpec("taylor", check_taylor),
    )
}
CHECK_NAMES = tuple(CHECKS)


@dataclass(frozen=True)
class GridSpec:
    beta_min: float = 1e-3
    beta_max: float = 1e3
    points: int = 10_000
    spacing: str = "log"

    def __post_init__(self):
        lo, hi = self.beta_min, self.beta_max
        if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo <= hi):
            raise DomainError(f"grid needs 0 < beta_min <= beta_max < inf, got [{lo!r}, {hi!r}]")
        if not (isinstance(self.points, (int, np.integer)) and self.points >= 1):
            raise DomainError(f"points must be a positive integer, got {self.points!r}")
        if self.spacing not in ("log", "linear"):
            raise DomainError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.points > 1 and lo == hi:
            raise DomainError("a multi-point grid needs beta_min < beta_max")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.beta_min)])
        if self.spacing == "log":
            v = np.logspace(math.log10(self.beta_min), math.log10(self.beta_max), self.points)
            # pin the endpoints exactly
            v[0], v[-1] = self.beta_min, self.beta_max
            return v
        return np.linspace(self.beta_min, self.beta_max, self.points)


@dataclass
class InequalityReport:
    grid: list[float]
    records: list[CheckRecord]
    checks: tuple[str, ...] = ()
    worst_margin_per_check: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        order = {name: i for i, name in enumerate(CHECK_NAMES)}
        self.records = sorted(self.records, key=lambda rec: (order.get(rec.check_name, len(order)), rec.check_name, rec.beta))
        if not self.checks:
            self.checks = tuple(sorted({rec.check_name for rec in self.records}, key=lambda n: order.get(n, len(order))))
        worst: dict[str, tuple[float, float]] = {}
        for rec in self.records:
            m = rec.margin if not math.isnan(rec.margin) else -math.inf
            cur = worst.get(rec.check_name)
            if cur is None or m < cur[1]:
                worst[rec.check_name] = (rec.beta, m)
        self.worst_margin_per_check = worst

    @property
    def all_pass(self) -> bool:
        return all(rec.passed for rec in self.records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [rec for rec in self.records if not rec.passed and not rec.inconclusive]

    @property
    def inconclusive(self) -> list[CheckRecord]:
        return [rec for rec in self.records if rec.inconclusive]

    def by_check(self, name: str) -> list[CheckRecord]:
        return [rec for rec in self.records if rec.check_name == name]

    def summary(self) -> list[dict]:
        rows = []
        for name in self.checks:
            recs = self.by_check(name)
            beta_w, margin_w = self.worst_margin_per_check.get(name, (math.nan, math.nan))
            rows.append(
                {
                    "check": name,
                    "records": len(recs),
                    "passed": sum(rec.passed for rec in recs),
                    "failed": sum((not rec.passed) and not rec.inconclusive for rec in recs),
                    "inconclusive": sum(rec.inconclusive for rec in recs),
                    "worst_beta": beta_w,
                    "worst_margin": margin_w,
                }
            )
        return rows

    @classmethod
    def combine(cls, *reports: "InequalityReport") -> "InequalityReport":
        """Merge partial reports; the result does not depend on argument order."""
        grid = sorted({b for rep in reports for b in rep.grid})
        records = [rec for rep in reports for rec in rep.records]
        names = {n for rep in reports for n in rep.checks}
        order = {name: i for i, name in enumerate(CHECK_NAMES)}
        checks = tuple(sorted(names, key=lambda n: (order.get(n, len(order)), n)))
        return cls(grid=grid, records=records, checks=checks)


def _run_check(spec: CheckSpec, beta: float) -> CheckRecord:
    try:
        return spec.func(beta)
    except JuttnerError as exc:
        return CheckRecord(beta=float(beta), check_name=spec.name, value=math.nan, margin=math.nan, note=f"{type(exc).__name__}: {exc}")


def sweep(grid: GridSpec | Sequence[float] | None = None, checks: Iterable[str] | None = None) -> InequalityReport:
    """Run the selected checks over every grid point inside each check's domain."""
    if grid is None:
        grid = GridSpec()
    betas = grid.values() if isinstance(grid, GridSpec) else np.asarray(list(grid), dtype=float)
    for b in betas:
        bessel._check_beta(b)
    names = CHECK_NAMES if checks is None else tuple(checks)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise DomainError(f"unknown checks {unknown}; available: {', '.join(CHECK_NAMES)}")
    records = []
    for name in names:
        spec = CHECKS[name]
        for b in betas:
            if b >= spec.min_beta:
                records.append(_run_check(spec, float(b)))
    return InequalityReport(grid=[float(b) for b in betas], records=records, checks=names)


def jacobian_sign_scan(n_values, beta_values, constants: eos.PhysicalConstants = eos.NONDIMENSIONAL) -> np.ndarray:
    """det d(eta, rho)/d(n, beta) over an (n, beta) grid."""
    return np.array([[np.linalg.det(eos.jacobian(n, b, constants)) for b in beta_values] for n in n_values])
