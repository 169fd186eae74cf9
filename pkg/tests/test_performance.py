import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linklab.channel import PRESETS, ProductChannelDist, product_cdf
from linklab.errors import DomainError
from linklab.performance import (
    IDEAL,
    HardwareProfile,
    RadioState,
    db_to_linear,
    distortion_variances,
    linear_to_db,
    max_spectral_efficiency,
    optimal_spectral_efficiency,
    outage_probability,
    sdnr,
    sdnr_ceiling,
    throughput,
)


def preset_dist(name, d):
    return ProductChannelDist.from_conditions(PRESETS[name], d)


class TestTypes:
    def test_hardware_warns_above_range(self):
        with pytest.warns(UserWarning):
            HardwareProfile(0.5, 0.0)

    def test_hardware_quiet_in_range(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            HardwareProfile(0.4, 0.07)

    def test_hardware_rejects_negative(self):
        with pytest.raises(DomainError):
            HardwareProfile(-0.1, 0.0)

    def test_from_total(self):
        hw = HardwareProfile.from_total(0.07)
        assert hw.kappa_t == hw.kappa_r
        assert hw.kappa2 == pytest.approx(0.0049, rel=1e-14)

    def test_radio_state(self):
        rs = RadioState.from_rate(1e4, 3.0)
        assert rs.gamma_th == 7.0 and rs.r_t == 3.0
        assert RadioState(10.0, 7.0).r_t == pytest.approx(3.0)
        assert RadioState.from_db(30.0, 10.0).rho == pytest.approx(1000.0)
        with pytest.raises(DomainError):
            RadioState(0.0, 1.0)

    def test_compose_rho(self):
        assert RadioState.compose_rho(1.0, 1e-8, 1e-3) == pytest.approx(100.0)
        with pytest.raises(DomainError):
            RadioState.compose_rho(1.0, 0.0)

    def test_db_round_trip(self):
        assert db_to_linear(30.0) == pytest.approx(1000.0)
        assert linear_to_db(db_to_linear(-17.3)) == pytest.approx(-17.3)
        np.testing.assert_allclose(db_to_linear([0.0, 10.0]), [1.0, 10.0])


class TestSdnr:
    def test_ideal(self):
        assert sdnr(0.3, 500.0) == pytest.approx(500.0 * 0.09, rel=1e-15)

    def test_hand_value(self):
        assert sdnr(0.5, 1000.0, HardwareProfile(0.1, 0.1)) == pytest.approx(41.6667, rel=1e-5)

    def test_saturation(self):
        hw = HardwareProfile(0.05, 0.05)
        assert sdnr(1.0, 1e15, hw) == pytest.approx(1 / hw.kappa2, rel=1e-10)
        A = np.linspace(0.01, 1.0, 50)
        assert np.all(sdnr(A, 1e6, hw) < 1 / hw.kappa2)

    def test_ceiling(self):
        assert sdnr_ceiling(123.0) == 123.0
        hw = HardwareProfile(0.1, 0.1)
        assert sdnr_ceiling(1e15, hw) == pytest.approx(1 / (2 * 0.01), rel=1e-10)
        assert sdnr_ceiling(1e5, HardwareProfile.from_total(0.07)) == pytest.approx(1e5 / (0.0049e5 + 1))
        for rho in (1.0, 1e3, 1e8):
            assert rho / (hw.kappa2 * rho + 1) <= 1 / hw.kappa2
        with pytest.raises(DomainError):
            sdnr_ceiling(0.0)


class TestMaxSpectralEfficiency:
    def test_ideal(self):
        assert max_spectral_efficiency(1e3) == pytest.approx(math.log2(1001), rel=1e-15)
        assert max_spectral_efficiency(1e3) == pytest.approx(9.967, abs=1e-3)

    def test_hardware_limited(self):
        assert max_spectral_efficiency(1e5, HardwareProfile.from_total(0.07)) == pytest.approx(7.68, abs=0.01)
        assert max_spectral_efficiency(1e5, HardwareProfile.from_total(0.1)) == pytest.approx(6.66, abs=0.01)
        assert max_spectral_efficiency(1e15, HardwareProfile.from_total(0.1)) == pytest.approx(math.log2(101), rel=1e-9)


class TestOutage:
    @pytest.mark.parametrize("name,d,expected", [
        ("light", 30.0, 2.08e-5), ("light", 50.0, 7.63e-3),
        ("moderate", 30.0, 7.15e-3), ("thick", 30.0, 5.9e-1),
    ])
    def test_reported_points(self, name, d, expected):
        rho = db_to_linear(15.0)
        assert outage_probability(1.0, rho, preset_dist(name, d)) == pytest.approx(expected, rel=0.03)

    def test_matches_product_cdf(self):
        dist = preset_dist("moderate", 50.0)
        hw = HardwareProfile(0.05, 0.08)
        g, rho = 10.0, 3000.0
        x = math.sqrt(g / (rho * (1 - g * hw.kappa2)))
        assert outage_probability(g, rho, dist, hw) == product_cdf(dist, x)

    def test_above_ceiling(self):
        dist = preset_dist("light", 30.0)
        hw = HardwareProfile(0.1, 0.1)
        assert outage_probability(60.0, 1e9, dist, hw) == 1.0
        # kappa2 = 1/16 exactly, so gamma_th = 16 sits on the boundary: outage side
        assert outage_probability(16.0, 1e9, dist, HardwareProfile(0.25, 0.0)) == 1.0
        assert outage_probability(2000.0, 1000.0, dist) == 1.0

    def test_boundary_continuity(self):
        dist = preset_dist("moderate", 50.0)
        hw = HardwareProfile(0.05, 0.05)
        rho = 1e4
        ceiling = sdnr_ceiling(rho, hw)
        assert outage_probability(ceiling * (1 - 1e-6), rho, dist, hw) == pytest.approx(1.0, abs=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            outage_probability(0.0, 1.0, preset_dist("light", 30.0))
        with pytest.raises(DomainError):
            outage_probability(1.0, -1.0, preset_dist("light", 30.0))

    def test_monotone_in_rho_and_threshold(self):
        dist = preset_dist("thick", 50.0)
        hw = HardwareProfile(0.05, 0.03)
        rhos = np.geomspace(10.0, 1e6, 30)
        p = [outage_probability(5.0, r, dist, hw) for r in rhos]
        assert all(b <= a for a, b in zip(p, p[1:]))
        gammas = np.geomspace(0.1, 300.0, 30)
        p = [outage_probability(g, 1e4, dist, hw) for g in gammas]
        assert all(b >= a for a, b in zip(p, p[1:]))

    def test_monotone_in_kappa(self):
        dist = preset_dist("moderate", 30.0)
        kappas = np.linspace(0.0, 0.3, 16)
        p = [outage_probability(5.0, 1e3, dist, HardwareProfile(kt, 0.05)) for kt in kappas]
        assert all(b >= a for a, b in zip(p, p[1:]))
        p = [outage_probability(5.0, 1e3, dist, HardwareProfile(0.05, kr)) for kr in kappas]
        assert all(b >= a for a, b in zip(p, p[1:]))

    @pytest.mark.parametrize("d", [30.0, 50.0])
    @pytest.mark.parametrize("margin_dB", [5.0, 15.0, 25.0])
    def test_monotone_in_fog_severity(self, d, margin_dB):
        rho = db_to_linear(margin_dB)
        p = [outage_probability(1.0, rho, preset_dist(name, d)) for name in ("light", "moderate", "thick", "dense")]
        assert all(b >= a for a, b in zip(p, p[1:]))

    @settings(max_examples=100, deadline=None)
    @given(kt=st.floats(0.0, 0.4), kr=st.floats(0.0, 0.4), g_dB=st.floats(-5.0, 25.0),
           rho_dB=st.floats(0.0, 60.0))
    def test_kappa_permutation_bit_identical(self, kt, kr, g_dB, rho_dB):
        dist = preset_dist("moderate", 50.0)
        g, rho = float(db_to_linear(g_dB)), float(db_to_linear(rho_dB))
        a, b = HardwareProfile(kt, kr), HardwareProfile(kr, kt)
        assert outage_probability(g, rho, dist, a) == outage_probability(g, rho, dist, b)
        assert sdnr(0.37, rho, a) == sdnr(0.37, rho, b)
        assert sdnr_ceiling(rho, a) == sdnr_ceiling(rho, b)
        assert max_spectral_efficiency(rho, a) == max_spectral_efficiency(rho, b)
        r = 0.5 * max_spectral_efficiency(rho, a)
        assert throughput(1.0, r, rho, dist, a) == throughput(1.0, r, rho, dist, b)


class TestThroughput:
    thick = preset_dist("thick", 50.0)
    hw07 = HardwareProfile.from_total(0.07)

    @pytest.mark.parametrize("r_t,expected", [(5.5, 4.125), (4.0, 3.58), (7.0, 2.74)])
    def test_thick_fog_points(self, r_t, expected):
        assert throughput(1.0, r_t, 1e5, self.thick, self.hw07) == pytest.approx(expected, rel=0.02)

    def test_light_fog_point(self):
        assert throughput(1.0, 8.0, 1e4, preset_dist("light", 50.0)) == pytest.approx(7.96, rel=0.02)

    def test_scales_with_bandwidth(self):
        one = throughput(1.0, 5.0, 1e5, self.thick, self.hw07)
        assert throughput(2e9, 5.0, 1e5, self.thick, self.hw07) == pytest.approx(2e9 * one, rel=1e-15)

    def test_zero_beyond_bound(self):
        upper = max_spectral_efficiency(1e5, self.hw07)
        assert throughput(1.0, upper, 1e5, self.thick, self.hw07) == 0.0
        assert throughput(1.0, upper + 0.5, 1e5, self.thick, self.hw07) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            throughput(0.0, 1.0, 1e5, self.thick)
        with pytest.raises(DomainError):
            throughput(1.0, 0.0, 1e5, self.thick)

    @pytest.mark.parametrize("name,d,rho,kappa", [
        ("thick", 50.0, 1e5, 0.07), ("light", 50.0, 1e4, 0.0), ("moderate", 30.0, 1e3, 0.1),
        ("dense", 50.0, 1e6, 0.07), ("light", 100.0, 1e5, 0.2),
    ])
    def test_unimodal(self, name, d, rho, kappa):
        dist = preset_dist(name, d)
        hw = HardwareProfile.from_total(kappa)
        upper = max_spectral_efficiency(rho, hw)
        grid = np.linspace(0.01, upper, 400, endpoint=False)
        D = np.array([throughput(1.0, r, rho, dist, hw) for r in grid])
        peak = int(np.argmax(D))
        assert 0 < peak < len(grid) - 1
        assert np.all(np.diff(D[:peak + 1]) >= 0)
        assert np.all(np.diff(D[peak:]) <= 0)

    def test_optimum(self):
        r_opt, d_opt = optimal_spectral_efficiency(1e5, self.thick, self.hw07)
        assert r_opt == pytest.approx(5.468, abs=0.01)
        grid = np.linspace(0.1, 7.6, 300)
        assert d_opt >= max(throughput(1.0, r, 1e5, self.thick, self.hw07) for r in grid) - 1e-9

    def test_cutoff_independent_of_fog(self):
        upper = max_spectral_efficiency(1e5, self.hw07)
        for name in PRESETS:
            for d in (30.0, 100.0):
                dist = preset_dist(name, d)
                assert throughput(1.0, upper, 1e5, dist, self.hw07) == 0.0
                assert throughput(1.0, upper - 1e-6, 1e5, dist, self.hw07) >= 0.0


class TestDistortionVariances:
    def test_no_transmitter_distortion(self):
        assert distortion_variances(1.0, 0.01, 1.0, HardwareProfile(0.0, 0.1))[0] == 0.0

    def test_receiver_value(self):
        _, nr = distortion_variances(1.0, 0.01, 1.0, HardwareProfile(0.0, 0.1))
        assert nr == pytest.approx(1e-6, rel=1e-14)

    def test_rejects_power(self):
        with pytest.raises(DomainError):
            distortion_variances(0.0, 1.0, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(P_s=st.floats(1e-3, 1e3), h_g=st.floats(1e-6, 1.0), A=st.floats(1e-3, 1.0),
           kt=st.floats(0.0, 0.4), kr=st.floats(0.0, 0.4), noise=st.floats(1e-15, 1e-3))
    def test_composes_to_sdnr(self, P_s, h_g, A, kt, kr, noise):
        hw = HardwareProfile(kt, kr)
        nt, nr = distortion_variances(P_s, h_g, A, hw)
        signal = (h_g * A) ** 2 * P_s
        # transmitter distortion passes through the channel like the signal
        direct = signal / ((h_g * A) ** 2 * nt + nr + noise)
        rho = h_g ** 2 * P_s / noise
        assert sdnr(A, rho, hw) == pytest.approx(direct, rel=1e-12)

    def test_ideal_default(self):
        assert distortion_variances(2.0, 0.5, 0.5, IDEAL) == (0.0, 0.0)
