"""Scenario configuration files.

A scenario is an INI file with the sections ``[geometry]``, ``[atmosphere]``,
``[fog]``, ``[hardware]``, ``[radio]`` and an optional ``[sweep]``. Every key
is optional; omitted keys take the defaults below. Unknown sections or keys
are errors.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import os
from dataclasses import dataclass
from pathlib import Path

from .atmosphere import CATALOG_ENV, AtmosphericState
from .channel import PRESETS, FogCondition, LinkGeometry, ProductChannelDist
from .errors import ConfigError, DomainError
from .performance import HardwareProfile, db_to_linear

__all__ = ["ScenarioConfig", "load_config", "parse_config", "PRESET_DIR", "preset_path"]

PRESET_DIR = Path(__file__).with_name("presets")

# section -> {key: type}; the ScenarioConfig field has the same name as the key
SCHEMA = {
    "geometry": {
        "f_GHz": float, "d1": float, "d2": float, "psi_deg": float,
        "l_h": float, "l_v": float, "G_t_dBi": float, "G_r_dBi": float,
    },
    "atmosphere": {
        "temperature_K": float, "pressure_Pa": float, "vapor_density": float,
        "M": float, "catalog": str,
    },
    "fog": {
        "preset": str, "hop1": str, "hop2": str,
        "k1": float, "beta1": float, "k2": float, "beta2": float,
    },
    "hardware": {"kappa_t": float, "kappa_r": float, "kappa_total": float},
    "radio": {
        "rho_dB": float, "P_s_dBW": float, "noise_dBW": float, "W": float,
        "r_t": float, "gamma_th_dB": float,
    },
    "sweep": {"sweep": str, "family": str},
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario.

    Geometry defaults are the baseline link: 50 dBi antennas, a 1 m x 1 m
    surface at 45 degrees incidence, 100 GHz and 50 m hops. The atmosphere
    defaults to 20 C, 101300 Pa and 7.5 g/m^3 of water vapour without liquid
    water (``M = 0``).

    The radio section takes either ``rho_dB`` (normalized SNR, the
    deterministic gain is not applied) or ``P_s_dBW`` and ``noise_dBW``
    (physical SNR ``h_g^2 P_s / sigma_n^2``), and either ``r_t`` or
    ``gamma_th_dB``.
    """

    f_GHz: float = 100.0
    d1: float = 50.0
    d2: float = 50.0
    psi_deg: float = 45.0
    l_h: float = 1.0
    l_v: float = 1.0
    G_t_dBi: float = 50.0
    G_r_dBi: float = 50.0

    temperature_K: float = 293.15
    pressure_Pa: float = 101300.0
    vapor_density: float = 7.5
    M: float = 0.0
    catalog: str | None = None

    hop1: str | None = "moderate"
    hop2: str | None = "moderate"
    k1: float | None = None
    beta1: float | None = None
    k2: float | None = None
    beta2: float | None = None

    kappa_t: float = 0.0
    kappa_r: float = 0.0

    rho_dB: float | None = None
    P_s_dBW: float | None = None
    noise_dBW: float | None = None
    W: float = 1.0
    r_t: float | None = None
    gamma_th_dB: float | None = None

    sweep: str | None = None
    family: str | None = None

    def __post_init__(self):
        for name in ("hop1", "hop2"):
            value = getattr(self, name)
            if value is not None and value not in PRESETS:
                raise ConfigError(f"{name}: unknown fog preset {value!r}; choose from {sorted(PRESETS)}")
        for i in (1, 2):
            name = getattr(self, f"hop{i}")
            k, beta = getattr(self, f"k{i}"), getattr(self, f"beta{i}")
            if (k is None) != (beta is None):
                raise ConfigError(f"k{i} and beta{i} must be given together (k{i}={k}, beta{i}={beta})")
            if (name is None) == (k is None):
                raise ConfigError(
                    f"hop {i} needs exactly one of a preset or (k{i}, beta{i}); got hop{i}={name}, k{i}={k}"
                )
        if self.rho_dB is not None and (self.P_s_dBW is not None or self.noise_dBW is not None):
            raise ConfigError(
                f"give either rho_dB or P_s_dBW + noise_dBW, not both "
                f"(rho_dB={self.rho_dB}, P_s_dBW={self.P_s_dBW}, noise_dBW={self.noise_dBW})"
            )
        if (self.P_s_dBW is None) != (self.noise_dBW is None):
            raise ConfigError(
                f"P_s_dBW and noise_dBW must be given together (P_s_dBW={self.P_s_dBW}, noise_dBW={self.noise_dBW})"
            )
        if self.r_t is not None and self.gamma_th_dB is not None:
            raise ConfigError(
                f"give either r_t or gamma_th_dB, not both (r_t={self.r_t}, gamma_th_dB={self.gamma_th_dB})"
            )
        if not self.W > 0:
            raise ConfigError(f"W must be positive, got {self.W}")
        if self.r_t is not None and not self.r_t > 0:
            raise ConfigError(f"r_t must be positive, got {self.r_t}")
        try:
            self.geometry()
            self.state()
            self.fog_conditions()
            self.hardware()
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def geometry(self) -> LinkGeometry:
        return LinkGeometry(
            d1=self.d1, d2=self.d2, f=self.f_GHz * 1e9, psi=math.radians(self.psi_deg),
            l_h=self.l_h, l_v=self.l_v,
            G_t=float(db_to_linear(self.G_t_dBi)), G_r=float(db_to_linear(self.G_r_dBi)),
        )

    def state(self) -> AtmosphericState:
        return AtmosphericState(self.temperature_K, self.pressure_Pa, self.vapor_density, self.M)

    def fog_conditions(self) -> tuple[FogCondition, FogCondition]:
        conds = []
        for i in (1, 2):
            name = getattr(self, f"hop{i}")
            if name is not None:
                conds.append(PRESETS[name])
            else:
                conds.append(FogCondition(getattr(self, f"k{i}"), getattr(self, f"beta{i}")))
        return conds[0], conds[1]

    def channel_dist(self) -> ProductChannelDist:
        c1, c2 = self.fog_conditions()
        return ProductChannelDist.from_conditions(c1, self.d1, c2, self.d2)

    def hardware(self) -> HardwareProfile:
        return HardwareProfile(self.kappa_t, self.kappa_r)

    @property
    def physical(self) -> bool:
        """True when the SNR is built from P_s, noise power and the path gain."""
        return self.P_s_dBW is not None

    def rho(self, h_g: float) -> float:
        """Linear SNR; ``h_g`` is only used in physical mode."""
        if self.physical:
            return h_g ** 2 * float(db_to_linear(self.P_s_dBW - self.noise_dBW))
        if self.rho_dB is None:
            raise ConfigError("radio: one of rho_dB or P_s_dBW + noise_dBW is required")
        return float(db_to_linear(self.rho_dB))

    def gamma_th(self) -> float:
        if self.r_t is not None:
            return 2.0 ** self.r_t - 1.0
        if self.gamma_th_dB is None:
            raise ConfigError("radio: one of r_t or gamma_th_dB is required")
        return float(db_to_linear(self.gamma_th_dB))

    def rate(self) -> float:
        if self.r_t is not None:
            return self.r_t
        return math.log2(1.0 + self.gamma_th())

    def catalog_path(self) -> str | None:
        """Catalog location: config key, then the environment, then bundled."""
        return self.catalog or os.environ.get(CATALOG_ENV) or None


def _convert(section, key, kind, raw):
    if kind is str:
        return raw.strip()
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot read {raw!r} as a number") from None


def parse_config(text: str, base_dir: Path | None = None) -> ScenarioConfig:
    """Build a :class:`ScenarioConfig` from INI text."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"[{section}] unknown key {key!r}")
            values[(section, key)] = _convert(section, key, SCHEMA[section][key], raw)

    fields = {}
    for (section, key), value in values.items():
        if key == "preset":
            fields["hop1"] = fields["hop2"] = value
        elif key == "kappa_total":
            if ("hardware", "kappa_t") in values or ("hardware", "kappa_r") in values:
                raise ConfigError("[hardware] kappa_total excludes kappa_t and kappa_r")
            fields["kappa_t"] = fields["kappa_r"] = value / math.sqrt(2.0)
        elif key == "catalog" and base_dir is not None:
            fields[key] = str((base_dir / value).resolve())
        else:
            fields[key] = value
    if ("fog", "preset") in values and (("fog", "hop1") in values or ("fog", "hop2") in values):
        raise ConfigError("[fog] preset excludes hop1/hop2")
    # an explicit (k, beta) pair replaces the default preset of that hop
    for i in (1, 2):
        if f"k{i}" in fields and f"hop{i}" not in fields:
            fields[f"hop{i}"] = None
    return ScenarioConfig(**fields)


def load_config(path: str | os.PathLike) -> ScenarioConfig:
    """Read and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, path.parent)


def preset_path(name: str) -> Path:
    """Bundled figure preset, e.g. ``fig05`` or ``fig05.cfg``."""
    stem = name[:-4] if name.endswith(".cfg") else name
    path = PRESET_DIR / f"{stem}.cfg"
    if not path.exists():
        known = sorted(p.stem for p in PRESET_DIR.glob("*.cfg"))
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(known)}")
    return path
