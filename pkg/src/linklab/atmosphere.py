"""Atmospheric attenuation: line-by-line molecular absorption and fog.

The molecular part reads HITRAN 2004 fixed-width records and sums
Van Vleck-Weisskopf lines. The fog part uses the double-Debye permittivity of
liquid water from ITU-R P.840.

Units follow the HITRAN conventions on the catalog side (wavenumbers in cm^-1,
intensities in cm^-1/(molecule cm^-2), half-widths in cm^-1/atm) and SI
everywhere else, except where a name carries an explicit unit suffix.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from scipy import constants

from .errors import CatalogParseError, DomainError

__all__ = [
    "P_REF",
    "T_REF",
    "H2O",
    "O2",
    "CATALOG_ENV",
    "SpectralLine",
    "GasMixture",
    "AtmosphericState",
    "parse_line_catalog",
    "load_catalog",
    "lorentz_halfwidth",
    "vvw_line_shape",
    "molecular_absorption_kappa",
    "water_dielectric",
    "fog_specific_attenuation",
    "fog_gain",
    "saturation_vapor_pressure",
    "vapor_density_from_rh",
    "rh_from_vapor_density",
]

P_REF = 101325.0  # Pa
T_REF = 296.0  # K

# HITRAN molecule numbers
H2O = 1
O2 = 7

CATALOG_ENV = "LINKLAB_CATALOG_DIR"
DATA_DIR = Path(__file__).with_name("data")

# lines farther than this from the evaluation frequency are dropped
LINE_CUTOFF_HZ = 3e12
KAPPA_F_RANGE_HZ = (0.05e12, 2e12)

_C = constants.c
_H = constants.h
_K_B = constants.k
_N_A = constants.N_A
_R = constants.R
_WAVENUMBER_TO_HZ = 100.0 * _C

# O2 volume fraction in dry air
_O2_DRY_FRACTION = 0.2095
# g/m^3 of water vapour per hPa of partial pressure per kelvin
_VAPOR_DENSITY_CONST = 216.7


@dataclass(frozen=True)
class SpectralLine:
    """One record of a HITRAN line catalog.

    Attributes
    ----------
    molecule_id, isotopologue_id : int
        HITRAN molecule and isotopologue numbers.
    nu : float
        Line-centre wavenumber in cm^-1.
    strength : float
        Intensity at 296 K in cm^-1/(molecule cm^-2).
    gamma_air, gamma_self : float
        Air- and self-broadened Lorentz half-widths in cm^-1/atm.
    n_air : float
        Temperature exponent of the air-broadened width.
    """

    molecule_id: int
    isotopologue_id: int
    nu: float
    strength: float
    gamma_air: float
    gamma_self: float
    n_air: float

    def __post_init__(self):
        if not self.nu > 0:
            raise DomainError(f"nu must be positive, got {self.nu}")
        if not self.strength >= 0:
            raise DomainError(f"strength must be nonnegative, got {self.strength}")
        if not (self.gamma_air > 0 and self.gamma_self > 0):
            raise DomainError(
                f"half-widths must be positive, got {self.gamma_air}, {self.gamma_self}"
            )

    @property
    def f_line(self) -> float:
        """Line-centre frequency in Hz."""
        return self.nu * _WAVENUMBER_TO_HZ


@dataclass(frozen=True)
class GasMixture:
    """Mole fractions keyed by HITRAN molecule number."""

    fractions: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for mol, q in self.fractions.items():
            if not 0.0 <= q <= 1.0:
                raise DomainError(f"mole fraction of molecule {mol} outside [0, 1]: {q}")
        if sum(self.fractions.values()) > 1.0 + 1e-12:
            raise DomainError("mole fractions sum to more than 1")

    def q(self, molecule_id: int) -> float:
        return float(self.fractions.get(molecule_id, 0.0))

    @classmethod
    def from_state(cls, state: "AtmosphericState") -> "GasMixture":
        """Water vapour and oxygen fractions implied by an atmospheric state."""
        e_hpa = state.water_vapor_density * state.temperature / _VAPOR_DENSITY_CONST
        q_h2o = min(e_hpa * 100.0 / state.pressure, 1.0)
        return cls({H2O: q_h2o, O2: _O2_DRY_FRACTION * (1.0 - q_h2o)})


@dataclass(frozen=True)
class AtmosphericState:
    """Bulk state of the propagation medium.

    Attributes
    ----------
    temperature : float
        K, within [200, 350].
    pressure : float
        Pa.
    water_vapor_density : float
        g/m^3.
    liquid_water_density : float
        Fog liquid water content M in g/m^3.
    """

    temperature: float = 293.15
    pressure: float = 101300.0
    water_vapor_density: float = 7.5
    liquid_water_density: float = 0.0

    def __post_init__(self):
        if not 200.0 <= self.temperature <= 350.0:
            raise DomainError(f"temperature must be in [200, 350] K, got {self.temperature}")
        if not self.pressure > 0:
            raise DomainError(f"pressure must be positive, got {self.pressure}")
        if self.water_vapor_density < 0 or self.liquid_water_density < 0:
            raise DomainError("densities must be nonnegative")

    @classmethod
    def from_relative_humidity(cls, temperature: float, pressure: float, rh: float,
                               liquid_water_density: float = 0.0) -> "AtmosphericState":
        return cls(temperature, pressure, vapor_density_from_rh(rh, temperature),
                   liquid_water_density)


def saturation_vapor_pressure(temperature: float) -> float:
    """Saturation vapour pressure over water in hPa (Buck equation)."""
    t_c = temperature - 273.15
    return 6.1121 * math.exp((18.678 - t_c / 234.5) * (t_c / (257.14 + t_c)))


def vapor_density_from_rh(rh: float, temperature: float) -> float:
    """Water vapour density in g/m^3 for relative humidity ``rh`` in [0, 1]."""
    if not 0.0 <= rh <= 1.0:
        raise DomainError(f"relative humidity must be in [0, 1], got {rh}")
    return rh * saturation_vapor_pressure(temperature) * _VAPOR_DENSITY_CONST / temperature


def rh_from_vapor_density(density: float, temperature: float) -> float:
    """Inverse of :func:`vapor_density_from_rh`."""
    return density * temperature / (_VAPOR_DENSITY_CONST * saturation_vapor_pressure(temperature))


# (name, start column, end column) with 1-based inclusive columns
_FIELDS = (
    ("molecule_id", 1, 2, int),
    ("isotopologue_id", 3, 3, int),
    ("nu", 4, 15, float),
    ("strength", 16, 25, float),
    ("gamma_air", 36, 40, float),
    ("gamma_self", 41, 45, float),
    ("n_air", 56, 59, float),
)
RECORD_LENGTH = 160


def _parse_record(text: str, lineno: int) -> SpectralLine:
    if len(text) != RECORD_LENGTH:
        raise CatalogParseError(lineno, f"expected {RECORD_LENGTH} characters, got {len(text)}")
    values = {}
    for name, start, stop, kind in _FIELDS:
        raw = text[start - 1:stop].strip()
        try:
            values[name] = kind(raw)
        except ValueError:
            raise CatalogParseError(lineno, f"bad {name} field {raw!r}") from None
    try:
        return SpectralLine(**values)
    except DomainError as exc:
        raise CatalogParseError(lineno, str(exc)) from None


def parse_line_catalog(stream) -> list[SpectralLine]:
    """Parse HITRAN 2004 ``.par`` records.

    Parameters
    ----------
    stream : bytes, str, binary/text file object or iterable of lines
        Newline-separated 160-character records. Blank lines are skipped.

    Returns
    -------
    list of SpectralLine
        In catalog order.

    Raises
    ------
    CatalogParseError
        On a record of the wrong width or with a non-numeric field.
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = []
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, (bytes, bytearray)):
            try:
                raw = raw.decode("ascii")
            except UnicodeDecodeError:
                raise CatalogParseError(lineno, "non-ASCII content") from None
        text = raw.rstrip("\r\n")
        if not text.strip():
            continue
        lines.append(_parse_record(text, lineno))
    return lines


def load_catalog(path: str | os.PathLike | None = None) -> list[SpectralLine]:
    """Load a catalog file or every ``*.par`` file of a directory.

    Without ``path`` the directory named by ``LINKLAB_CATALOG_DIR`` is used,
    falling back to the bundled H2O/O2 catalog.
    """
    if path is None:
        path = os.environ.get(CATALOG_ENV) or DATA_DIR
    path = Path(path)
    files = sorted(path.glob("*.par")) if path.is_dir() else [path]
    catalog = []
    for file in files:
        with open(file, "rb") as fh:
            catalog.extend(parse_line_catalog(fh))
    return catalog


def lorentz_halfwidth(line: SpectralLine, q: float, state: AtmosphericState) -> float:
    """Pressure-broadened Lorentz half-width in Hz.

    ``q`` is the mole fraction of the absorbing gas.
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"mole fraction must be in [0, 1], got {q}")
    gamma = (1.0 - q) * line.gamma_air + q * line.gamma_self
    scale = (state.pressure / P_REF) * (T_REF / state.temperature) ** line.n_air
    return gamma * scale * _WAVENUMBER_TO_HZ


def vvw_line_shape(f, line: SpectralLine, alpha: float):
    """Van Vleck-Weisskopf line shape in 1/Hz.

    ``F = (alpha/pi) (f/f0) [1/((f-f0)^2 + alpha^2) + 1/((f+f0)^2 + alpha^2)]``
    with ``f0`` the line centre in Hz and ``alpha`` the half-width in Hz.
    """
    return _vvw(np.asarray(f, dtype=float), line.f_line, alpha)


def _vvw(f, f0, alpha):
    a2 = alpha * alpha
    return (alpha / np.pi) * (f / f0) * (1.0 / ((f - f0) ** 2 + a2) + 1.0 / ((f + f0) ** 2 + a2))


def molecular_absorption_kappa(f, state: AtmosphericState, mix: GasMixture,
                               catalog: Iterable[SpectralLine],
                               cutoff: float = LINE_CUTOFF_HZ):
    """Molecular absorption coefficient in 1/m (power attenuation per metre).

    Parameters
    ----------
    f : float or array_like
        Frequency in Hz, within [0.05, 2] THz.
    state : AtmosphericState
    mix : GasMixture
        Mole fractions of the absorbers; lines of gases absent from the
        mixture contribute nothing.
    catalog : iterable of SpectralLine
        An empty catalog yields zero absorption.
    cutoff : float
        Lines with ``|f - f_line| > cutoff`` (Hz) are skipped.

    Returns
    -------
    float or ndarray
        Same shape as ``f``.
    """
    f_arr = np.asarray(f, dtype=float)
    lo, hi = KAPPA_F_RANGE_HZ
    if np.any((f_arr < lo) | (f_arr > hi)):
        raise DomainError(f"frequency outside [{lo:g}, {hi:g}] Hz")
    catalog = [ln for ln in catalog if mix.q(ln.molecule_id) > 0.0]
    if not catalog:
        out = np.zeros_like(f_arr)
        return float(out) if out.ndim == 0 else out

    T, p = state.temperature, state.pressure
    f0 = np.array([ln.f_line for ln in catalog])
    q = np.array([mix.q(ln.molecule_id) for ln in catalog])
    alpha = np.array([lorentz_halfwidth(ln, mix.q(ln.molecule_id), state) for ln in catalog])
    strength_si = np.array([ln.strength for ln in catalog]) * 1e-2  # m / molecule

    number_density = p * q / (_R * T) * _N_A
    fc = f_arr[..., None]
    beta = _H / (2.0 * _K_B * T)
    G = (fc / f0) * np.tanh(beta * fc) / np.tanh(beta * f0) * _vvw(fc, f0, alpha)
    sigma = strength_si * _C * G
    contrib = (p / P_REF) * (T_REF / T) * number_density * sigma
    contrib = np.where(np.abs(fc - f0) <= cutoff, contrib, 0.0)
    out = contrib.sum(axis=-1)
    return float(out) if out.ndim == 0 else out


_DIELECTRIC_F_RANGE_GHZ = (1.0, 1000.0)
_DIELECTRIC_T_RANGE = (253.0, 323.0)


def _check_dielectric_domain(f_ghz, T):
    lo, hi = _DIELECTRIC_F_RANGE_GHZ
    if np.any((f_ghz < lo) | (f_ghz > hi)):
        raise DomainError(f"frequency must be within [{lo:g}, {hi:g}] GHz")
    if not _DIELECTRIC_T_RANGE[0] <= T <= _DIELECTRIC_T_RANGE[1]:
        raise DomainError(f"temperature must be within {_DIELECTRIC_T_RANGE} K, got {T}")


def water_dielectric(f, T: float):
    """Double-Debye complex permittivity of liquid water.

    Parameters
    ----------
    f : float or array_like
        Frequency in Hz, within [1, 1000] GHz.
    T : float
        Temperature in K, within [253, 323].

    Returns
    -------
    (eps_real, eps_imag)
        Real part and (positive) imaginary part.
    """
    f_ghz = np.asarray(f, dtype=float) / 1e9
    _check_dielectric_domain(f_ghz, T)
    theta = 300.0 / T
    eps0 = 77.66 + 103.3 * (theta - 1.0)
    eps1 = 0.0671 * eps0
    eps2 = 3.52
    fp = 20.20 - 146.0 * (theta - 1.0) + 316.0 * (theta - 1.0) ** 2
    fs = 39.8 * fp
    rp = 1.0 + (f_ghz / fp) ** 2
    rs = 1.0 + (f_ghz / fs) ** 2
    eps_r = (eps0 - eps1) / rp + (eps1 - eps2) / rs + eps2
    eps_i = f_ghz * (eps0 - eps1) / (fp * rp) + f_ghz * (eps1 - eps2) / (fs * rs)
    if np.ndim(eps_r) == 0:
        return float(eps_r), float(eps_i)
    return eps_r, eps_i


def fog_specific_attenuation(f, T: float):
    """Fog specific attenuation coefficient in (dB/km)/(g/m^3)."""
    eps_r, eps_i = water_dielectric(f, T)
    eta = (2.0 + eps_r) / eps_i
    return 0.819 * (np.asarray(f, dtype=float) / 1e9) / (eps_i * (1.0 + eta ** 2))


def fog_gain(f, state: AtmosphericState, d_total: float):
    """Amplitude gain of fog over ``d_total`` metres.

    The power loss is ``kappa_f * M * d_total / 1000`` dB, so the amplitude gain
    is ``10**(-loss_dB / 20)``.
    """
    if not d_total > 0:
        raise DomainError(f"d_total must be positive, got {d_total}")
    if state.liquid_water_density == 0.0:
        return 1.0 if np.ndim(f) == 0 else np.ones(np.shape(f))
    loss_db = fog_specific_attenuation(f, state.temperature) * state.liquid_water_density * d_total / 1e3
    return 10.0 ** (-loss_db / 20.0)
