"""Exit criteria; each test records one PASS/FAIL line in the terminal summary."""

import math
from pathlib import Path

import numpy as np
import pytest

from juttner_eos import bessel, eos, verify
from juttner_eos.cli import main
from juttner_eos.oracle import substitution_scaled_besselK

from test_cli import GOLDEN, GOLDEN_CASES


@pytest.fixture(scope="module")
def grid():
    return np.logspace(-3, 3, 10_000)


@pytest.fixture(scope="module")
def default_report(grid):
    return verify.sweep(list(grid))


def test_01_recurrence(grid, acceptance):
    worst = 0.0
    for b in grid:
        k0, k1, k2 = (v.scaled_value for v in bessel.bessel_triple(b))
        worst = max(worst, abs(k2 - 2.0 / b * k1 - k0) / k2)
    assert acceptance(1, "recurrence residual < 1e-12", worst < 1e-12, f"(worst {worst:.2e})")


def test_02_ratio_derivative(grid, acceptance):
    worst = 0.0
    for b in grid:
        h = max(b, 1.0) * 1e-5
        fd = (bessel.ratio12(b + h).ratio - bessel.ratio12(b - h).ratio) / (2 * h)
        exact = bessel.ratio12(b).derivative
        worst = max(worst, abs(fd - exact) / abs(exact))
    assert acceptance(2, "ratio ODE vs central differences, rel 1e-6", worst < 1e-6, f"(worst {worst:.2e})")


def test_03_conjecture1(default_report, acceptance):
    recs = default_report.by_check("conjecture1")
    failures = [r for r in recs if not r.passed]
    inconclusive_low = [r for r in recs if r.inconclusive and r.beta <= 100]
    ok = len(recs) == 10_000 and not failures and not inconclusive_low and all(r.value < 0 for r in recs)
    assert acceptance(3, "sound-speed denominator < 0 on the grid", ok, f"(failures {len(failures)}, inconclusive<=100 {len(inconclusive_low)})")


def test_04_conjecture2(grid, default_report, acceptance):
    recs = default_report.by_check("conjecture2")
    ok = all(math.isfinite(r.value) and r.value > 3 for r in recs)
    cs2 = np.array([eos.sound_speed_squared(b) for b in grid])
    ok = ok and len(recs) == 10_000 and bool(np.all((cs2 > 0) & (cs2 < 1 / 3)))
    assert acceptance(4, "3 < M(beta) < inf and 0 < cs2 < 1/3", ok)


def test_05_reformulation_copass(default_report, acceptance):
    c2 = default_report.by_check("conjecture2")
    ref = default_report.by_check("reformulation")
    ok = len(c2) == len(ref) == 10_000 and all(
        a.beta == b.beta and a.passed and b.passed for a, b in zip(c2, ref)
    )
    assert acceptance(5, "reformulation and conjecture2 co-pass", ok)


def test_06_ratio_bound(grid, acceptance):
    r = np.array([bessel.ratio12(b).ratio for b in grid])
    ok = bool(np.all((r > 0) & (r < grid / 2)))
    assert acceptance(6, "0 < K1/K2 < beta/2", ok)


def test_07_sandwich_and_envelopes(grid, acceptance):
    ok = True
    for b in grid:
        s0, s1, s2, _ = bessel._triple(b)
        if b >= 0.5:
            lo, hi = bessel.ratio_bounds(b)
            ok &= lo <= s1 / s2 <= hi
        k0_lo, k0_hi = bessel.envelope_K0(b, scaled=True)
        s_lo, s_hi = bessel.envelope_K0_plus_K1(b, scaled=True)
        ok &= k0_lo <= s0 <= k0_hi and s_lo <= s0 + s1 <= s_hi
    assert acceptance(7, "ratio sandwich (beta >= 1/2) and K0, K0+K1 envelopes", bool(ok))


def test_08_polynomial(acceptance):
    betas = np.logspace(math.log10(0.5), 3, 1000)
    betas[0], betas[-1] = 0.5, 1e3
    full = [verify.polynomial_value(b) for b in betas]
    tail = [verify.polynomial_tail_value(b) for b in betas]
    ok = all(v > 0 for v in full) and all(v > 0 for v in tail)
    assert acceptance(8, "(3/4) P(beta) > 0 and last three terms > 0 on [0.5, 1e3]", ok)


def test_09_inversion_and_jacobian(acceptance):
    worst = 0.0
    ns = np.logspace(-3, 3, 20)
    betas = np.logspace(math.log10(0.05), math.log10(50), 20)
    dets = []
    for n in ns:
        for b in betas:
            res = eos.invert_map(*eos.forward_map(n, b))
            worst = max(worst, abs(res.n / n - 1), abs(res.beta / b - 1))
            dets.append(np.linalg.det(eos.jacobian(n, b)))
    dets = np.array(dets)
    sign_ok = bool(np.all(dets > 0) or np.all(dets < 0))

    jac_worst = 0.0
    for n, b in [(1.0, 0.1), (1.0, 1.0), (1.0, 10.0)]:
        hn, hb = 1e-5 * n, 1e-5 * b
        col_n = (np.array(eos.forward_map(n + hn, b)) - np.array(eos.forward_map(n - hn, b))) / (2 * hn)
        col_b = (np.array(eos.forward_map(n, b + hb)) - np.array(eos.forward_map(n, b - hb))) / (2 * hb)
        fd = np.column_stack([col_n, col_b])
        jac_worst = max(jac_worst, float(np.max(np.abs(eos.jacobian(n, b) - fd) / np.abs(fd))))
    ok = worst < 1e-10 and sign_ok and jac_worst < 1e-6
    assert acceptance(
        9, "round trip 1e-10, det sign constant, Jacobian vs FD 1e-6", ok,
        f"(round trip {worst:.1e}, jacobian {jac_worst:.1e})",
    )


def test_10_limits(acceptance):
    ur = abs(eos.sound_speed_squared(0.01) - 1 / 3)
    nr = abs(100 * eos.sound_speed_squared(100.0) - 5 / 3)
    ok = ur < 0.01 and nr < 0.05
    assert acceptance(10, "|cs2(0.01) - 1/3| < 0.01 and |100 cs2(100) - 5/3| < 0.05", ok, f"(got {ur:.3g}, {nr:.4g})")


def test_11_two_quadrature_routes(acceptance):
    worst = 0.0
    for b in np.logspace(-3, 3, 50):
        direct = bessel.scaled_integrals(b)
        for j in range(3):
            other = substitution_scaled_besselK(j, b)
            worst = max(worst, abs(direct[j] / other - 1))
    assert acceptance(11, "direct vs substituted quadrature agree to 1e-12", worst < 1e-12, f"(worst {worst:.1e})")


def test_12_cli(capsys, acceptance):
    code = main(["verify"])
    capsys.readouterr()
    golden_ok = True
    for name, argv in GOLDEN_CASES.items():
        assert main(argv) == 0
        out = capsys.readouterr().out
        golden_ok &= out.encode("utf-8") == (GOLDEN / name).read_bytes()
    assert acceptance(12, "default verify exits 0 and golden files match", code == 0 and golden_ok, f"(exit {code})")
