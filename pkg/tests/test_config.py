import math

import pytest

from linklab.channel import FogCondition
from linklab.config import PRESET_DIR, ScenarioConfig, load_config, parse_config, preset_path
from linklab.errors import ConfigError


class TestDefaults:
    def test_baseline(self):
        cfg = parse_config("")
        geom = cfg.geometry()
        assert (geom.G_t, geom.G_r) == pytest.approx((1e5, 1e5))
        assert (geom.l_h, geom.l_v) == (1.0, 1.0)
        assert geom.psi == pytest.approx(math.pi / 4)
        assert (geom.d1, geom.d2) == (50.0, 50.0)
        state = cfg.state()
        assert state.temperature == 293.15
        assert state.pressure == 101300.0
        assert state.water_vapor_density == 7.5

    def test_dense_preset(self):
        cfg = parse_config("[fog]\npreset = dense\n")
        assert cfg.fog_conditions() == (FogCondition(36.06, 11.91), FogCondition(36.06, 11.91))

    def test_explicit_hops(self):
        cfg = parse_config("[fog]\nhop1 = light\nk2 = 3.0\nbeta2 = 20.0\n")
        assert cfg.fog_conditions() == (FogCondition(2.32, 13.12), FogCondition(3.0, 20.0))

    def test_kappa_total(self):
        cfg = parse_config("[hardware]\nkappa_total = 0.07\n")
        assert cfg.hardware().kappa2 == pytest.approx(0.0049)


class TestRadio:
    def test_normalized(self):
        cfg = parse_config("[radio]\nrho_dB = 30\ngamma_th_dB = 10\n")
        assert not cfg.physical
        assert cfg.rho(1e-3) == pytest.approx(1000.0)
        assert cfg.gamma_th() == pytest.approx(10.0)
        assert cfg.rate() == pytest.approx(math.log2(11.0))

    def test_physical(self):
        cfg = parse_config("[radio]\nP_s_dBW = 0\nnoise_dBW = -90\nr_t = 5\n")
        assert cfg.physical
        assert cfg.rho(1e-3) == pytest.approx(1e9 * 1e-6)
        assert cfg.gamma_th() == 31.0

    def test_both_snr_forms(self):
        with pytest.raises(ConfigError, match=r"rho_dB=10.0.*P_s_dBW=0.0"):
            parse_config("[radio]\nrho_dB = 10\nP_s_dBW = 0\nnoise_dBW = -90\n")

    def test_both_threshold_forms(self):
        with pytest.raises(ConfigError, match=r"r_t=5.0.*gamma_th_dB=3.0"):
            parse_config("[radio]\nr_t = 5\ngamma_th_dB = 3\n")

    def test_power_without_noise(self):
        with pytest.raises(ConfigError, match="together"):
            parse_config("[radio]\nP_s_dBW = 0\n")

    def test_missing_values_reported_on_use(self):
        cfg = parse_config("")
        with pytest.raises(ConfigError):
            cfg.rho(1.0)
        with pytest.raises(ConfigError):
            cfg.gamma_th()


class TestSchema:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="'d3'"):
            parse_config("[geometry]\nd3 = 10\n")

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match=r"\[antenna\]"):
            parse_config("[antenna]\ngain = 3\n")

    def test_bad_number(self):
        with pytest.raises(ConfigError, match="f_GHz"):
            parse_config("[geometry]\nf_GHz = fast\n")

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="smog"):
            parse_config("[fog]\npreset = smog\n")

    def test_preset_and_hops(self):
        with pytest.raises(ConfigError):
            parse_config("[fog]\npreset = light\nhop1 = thick\n")

    def test_half_pair(self):
        with pytest.raises(ConfigError, match="k1"):
            parse_config("[fog]\nk1 = 2.0\n")

    def test_kappa_total_conflict(self):
        with pytest.raises(ConfigError):
            parse_config("[hardware]\nkappa_total = 0.1\nkappa_t = 0.05\n")

    def test_component_invariant(self):
        with pytest.raises(ConfigError, match="psi"):
            parse_config("[geometry]\npsi_deg = 90\n")

    def test_malformed(self):
        with pytest.raises(ConfigError):
            parse_config("d1 = 3\n")


class TestFiles:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")

    def test_catalog_relative_to_file(self, tmp_path):
        (tmp_path / "sub").mkdir()
        path = tmp_path / "sub" / "s.cfg"
        path.write_text("[atmosphere]\ncatalog = ../lines\n")
        assert load_config(path).catalog_path() == str((tmp_path / "lines").resolve())

    def test_catalog_environment(self, monkeypatch):
        monkeypatch.setenv("LINKLAB_CATALOG_DIR", "/somewhere")
        assert ScenarioConfig().catalog_path() == "/somewhere"

    @pytest.mark.parametrize("path", sorted(PRESET_DIR.glob("fig*.cfg")), ids=lambda p: p.stem)
    def test_presets_load(self, path):
        cfg = load_config(path)
        assert cfg.sweep
        assert "Command: linklab" in path.read_text()

    def test_preset_lookup(self):
        assert preset_path("fig05") == preset_path("fig05.cfg")
        with pytest.raises(ConfigError, match="fig02"):
            preset_path("fig99")

    def test_calibrated_presets_document_m(self):
        for name in ("fig02", "fig03", "fig04", "fig10", "fig11"):
            text = preset_path(name).read_text()
            assert load_config(preset_path(name)).M == 15.1713
            assert "calibration" in text
