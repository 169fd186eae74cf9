"""Acceptance gate for the link toolkit.

Each test checks one acceptance criterion at its stated tolerance and writes
a single ``ACCEPTANCE <n> PASS|FAIL`` line to the terminal, whether or not
output capture is on. Runtime budgets are asserted alongside the numbers.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import special
from scipy.signal import argrelmax

from linklab.atmosphere import AtmosphericState, GasMixture, load_catalog, molecular_absorption_kappa
from linklab.channel import PRESETS, FogFadingDist, ProductChannelDist, product_cdf
from linklab.cli import main, sweep
from linklab.config import load_config, preset_path
from linklab.montecarlo import OutageScenario, RandomStream, empirical_outage, quadrature_cdf_oracle
from linklab.performance import (
    HardwareProfile,
    db_to_linear,
    max_spectral_efficiency,
    outage_probability,
    throughput,
)

TESTS = Path(__file__).parent


@pytest.fixture
def report(pytestconfig):
    terminal = pytestconfig.pluginmanager.getplugin("terminalreporter")

    def write(criterion, ok, detail):
        line = f"ACCEPTANCE {criterion} {'PASS' if ok else 'FAIL'}: {detail}"
        if terminal is not None:
            terminal.write_line("")
            terminal.write_line(line)
        else:
            print(line)
        assert ok, line

    return write


def preset_dist(name, d, name2=None, d2=None):
    return ProductChannelDist.from_conditions(PRESETS[name], d, PRESETS[name2 or name], d2 or d)


def test_criterion_1_outage_vs_reported(report):
    start = time.perf_counter()
    reported = [("light", 30.0, 2.08e-5), ("light", 50.0, 7.63e-3),
                ("moderate", 30.0, 7.15e-3), ("thick", 30.0, 5.9e-1)]
    rho = float(db_to_linear(15.0))
    worst = 0.0
    parts = []
    for name, d, expected in reported:
        got = outage_probability(1.0, rho, preset_dist(name, d))
        worst = max(worst, abs(got / expected - 1.0))
        parts.append(f"{name}{d:g}m={got:.4g}")
    elapsed = time.perf_counter() - start
    ok = worst <= 0.03 and elapsed < 1.0
    report(1, ok, f"{', '.join(parts)}; worst rel dev {worst:.2%} (tol 3%); {elapsed:.3f} s (< 1 s)")


def test_criterion_2_closed_form_vs_monte_carlo(report):
    start = time.perf_counter()
    n = 10 ** 7
    failures = []
    worst = 0.0
    index = 0
    for name in ("light", "moderate", "thick", "dense"):
        for d in (30.0, 50.0):
            dist = preset_dist(name, d)
            for margin in (5.0, 10.0, 15.0, 20.0, 25.0):
                sc = OutageScenario(dist, float(db_to_linear(margin)), 1.0)
                closed = sc.analytic()
                est = empirical_outage(sc, RandomStream(2024, index), n)
                index += 1
                ratio = abs(est.value - closed) / est.half_width_95
                worst = max(worst, ratio)
                if not est.agrees_with(closed):
                    failures.append(f"{name}/{d:g}m/{margin:g}dB")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300.0
    detail = f"{index} cases at n=1e7, worst |diff|/CI = {worst:.2f} (tol 3); {elapsed:.1f} s (< 300 s)"
    if failures:
        detail += f"; failing: {', '.join(failures)}"
    report(2, ok, detail)


def test_criterion_3_oracle_equivalence(report):
    start = time.perf_counter()
    pairs = [("light", 30.0, "light", 30.0), ("moderate", 50.0, "moderate", 50.0),
             ("thick", 30.0, "thick", 30.0), ("dense", 50.0, "dense", 50.0),
             ("light", 30.0, "thick", 50.0), ("light", 50.0, "thick", 30.0)]
    grid = np.geomspace(1e-4, 0.999, 50)
    worst = 0.0
    for n1, d1, n2, d2 in pairs:
        dist = preset_dist(n1, d1, n2, d2)
        for x in grid:
            worst = max(worst, abs(product_cdf(dist, float(x)) - quadrature_cdf_oracle(dist, float(x))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-7 and elapsed < 60.0
    report(3, ok, f"{len(pairs)} pairings x 50 points, max abs dev {worst:.2e} (tol 1e-7); "
                  f"{elapsed:.1f} s (< 60 s)")


def test_criterion_4_gamma_sum_reduction(report):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        k1, k2 = rng.uniform(0.3, 40.0, size=2)
        zeta = rng.uniform(0.5, 40.0)
        x = rng.uniform(0.01, 0.99)
        dist = ProductChannelDist(FogFadingDist(k1, zeta), FogFadingDist(k2, zeta))
        expected = special.gammaincc(k1 + k2, zeta * math.log(1.0 / x))
        worst = max(worst, abs(product_cdf(dist, x) / expected - 1.0))
    report(4, worst <= 1e-8, f"100 random (k, zeta, x) triples, max rel dev {worst:.2e} (tol 1e-8)")


def test_criterion_5_hardware_ceiling(report):
    a = max_spectral_efficiency(1e5, HardwareProfile.from_total(0.07))
    b = max_spectral_efficiency(1e5, HardwareProfile.from_total(0.1))
    ok = abs(a - 7.68) <= 0.01 and abs(b - 6.66) <= 0.01
    report(5, ok, f"kappa 0.07 -> {a:.4f} (7.68), kappa 0.1 -> {b:.4f} (6.66), tol 0.01")


def test_criterion_6_throughput_points(report):
    thick = preset_dist("thick", 50.0)
    hw = HardwareProfile.from_total(0.07)
    checks = [(f"thick r_t={r_t:g}", throughput(1.0, r_t, 1e5, thick, hw), expected)
              for r_t, expected in ((5.5, 4.125), (4.0, 3.58), (7.0, 2.74))]
    checks.append(("light r_t=8", throughput(1.0, 8.0, 1e4, preset_dist("light", 50.0)), 7.96))
    worst = max(abs(got / expected - 1.0) for _, got, expected in checks)
    detail = ", ".join(f"{label} -> {got:.4f} ({expected})" for label, got, expected in checks)
    report(6, worst <= 0.02, f"{detail}; worst rel dev {worst:.2%} (tol 2%)")


def test_criterion_7_figure_regression(report):
    fig3 = sweep("pathloss-d1", load_config(preset_path("fig03")), "d1:1:50:50", "f_GHz:100")
    loss = {row["d1"]: row["loss_dB"] for row in fig3.rows}
    cfg11 = load_config(preset_path("fig11"))
    fig11 = sweep("throughput-d1", cfg11, "d1:50:50:1", "psi_deg:45")
    d_w = fig11.rows[0]["D_per_W"]
    ok = (abs(loss[1.0] - 21.72) <= 1.0 and abs(loss[50.0] - 49.76) <= 1.0
          and abs(d_w - 3.62) <= 0.1 and cfg11.hardware().kappa2 == 0.0)
    report(7, ok, f"100 GHz loss d1=1 -> {loss[1.0]:.3f} dB (21.72), d1=50 -> {loss[50.0]:.3f} dB "
                  f"(49.76), tol 1 dB, M={cfg11.M:g}; psi=45 D/W -> {d_w:.4f} (3.62 +/- 0.1)")


def test_criterion_8_property_suites(report, capsys):
    st = AtmosphericState(temperature=293.15, pressure=101300.0, water_vapor_density=7.5)
    f = np.arange(100e9, 800e9, 0.1e9)
    kappa = molecular_absorption_kappa(f, st, GasMixture.from_state(st), load_catalog())
    peaks = f[argrelmax(kappa)[0]] / 1e9
    offsets = [float(np.min(np.abs(peaks - line))) for line in (183.3, 325.2, 380.2, 448.0, 557.0, 752.0)]
    peaks_ok = max(offsets) <= 2.0

    modules = sorted(str(p) for p in TESTS.glob("test_*.py") if p.name != Path(__file__).name)
    suites = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *modules],
                            capture_output=True, text=True, cwd=TESTS.parent, timeout=900)
    summary = suites.stdout.strip().splitlines()[-1] if suites.stdout.strip() else suites.stderr[-200:]
    suites_ok = suites.returncode == 0

    status = main(["validate"])
    capsys.readouterr()
    validate_ok = status == 0

    ok = peaks_ok and suites_ok and validate_ok
    report(8, ok, f"(a) water-line maxima off by at most {max(offsets):.2f} GHz (tol 2); "
                  f"(b) invariant suites: {summary}; (c) validate exit {status}")
