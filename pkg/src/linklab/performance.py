"""Outage probability and throughput under transceiver hardware distortion.

Hardware imperfections add distortion noise proportional to the signal power
at the transmitter (``kappa_t``) and receiver (``kappa_r``). They enter the
signal-to-distortion-plus-noise ratio only through ``kappa_t^2 + kappa_r^2``
and cap it at ``1 / (kappa_t^2 + kappa_r^2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .channel import ProductChannelDist, product_cdf
from .errors import DomainError
from .specfun import DEFAULT_CONTROL, SeriesControl

__all__ = [
    "HardwareProfile",
    "RadioState",
    "db_to_linear",
    "linear_to_db",
    "sdnr",
    "sdnr_ceiling",
    "outage_probability",
    "throughput",
    "max_spectral_efficiency",
    "optimal_spectral_efficiency",
    "distortion_variances",
]

# upper end of the EVM range considered realistic; larger values only warn
EVM_WARN = 0.4


def db_to_linear(value_dB):
    """Power ratio from decibels."""
    return 10.0 ** (np.asarray(value_dB, dtype=float) / 10.0)[()]


def linear_to_db(value):
    """Decibels from a power ratio."""
    return 10.0 * np.log10(np.asarray(value, dtype=float))[()]


@dataclass(frozen=True)
class HardwareProfile:
    """Error-vector magnitudes of the transmitter and receiver.

    Values above 0.4 are accepted with a warning; negative values are rejected.
    """

    kappa_t: float = 0.0
    kappa_r: float = 0.0

    def __post_init__(self):
        for name in ("kappa_t", "kappa_r"):
            value = getattr(self, name)
            if not value >= 0:
                raise DomainError(f"{name} must be nonnegative, got {value}")
            if value > EVM_WARN:
                warnings.warn(f"{name}={value} exceeds the usual EVM range [0, {EVM_WARN}]",
                              stacklevel=3)

    @classmethod
    def from_total(cls, kappa_total: float) -> "HardwareProfile":
        """Equal split of ``kappa_total = sqrt(kappa_t^2 + kappa_r^2)``."""
        each = kappa_total / math.sqrt(2.0)
        return cls(each, each)

    @property
    def kappa2(self) -> float:
        """Aggregate distortion power ``kappa_t^2 + kappa_r^2``."""
        return self.kappa_t ** 2 + self.kappa_r ** 2


IDEAL = HardwareProfile()


@dataclass(frozen=True)
class RadioState:
    """Operating point of the link.

    Attributes
    ----------
    rho : float
        Linear transmit SNR ``h_g^2 P_s / sigma_n^2``.
    gamma_th : float
        Linear SDNR threshold.
    W : float
        Bandwidth in Hz.
    r_t : float
        Transmission spectral efficiency in bit/s/Hz, ``log2(1 + gamma_th)``.
    """

    rho: float
    gamma_th: float
    W: float = 1.0
    r_t: float | None = None

    def __post_init__(self):
        if self.r_t is None:
            object.__setattr__(self, "r_t", math.log2(1.0 + self.gamma_th))
        for name in ("rho", "gamma_th", "W", "r_t"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_rate(cls, rho: float, r_t: float, W: float = 1.0) -> "RadioState":
        return cls(rho, 2.0 ** r_t - 1.0, W, r_t)

    @classmethod
    def from_db(cls, rho_dB: float, gamma_th_dB: float, W: float = 1.0) -> "RadioState":
        return cls(float(db_to_linear(rho_dB)), float(db_to_linear(gamma_th_dB)), W)

    @staticmethod
    def compose_rho(P_s: float, noise_power: float, h_g: float = 1.0) -> float:
        """``h_g^2 P_s / sigma_n^2`` from physical quantities."""
        if not (P_s > 0 and noise_power > 0 and h_g > 0):
            raise DomainError("P_s, noise power and h_g must be positive")
        return h_g ** 2 * P_s / noise_power


def sdnr(A, rho: float, hw: HardwareProfile = IDEAL):
    """SDNR ``A^2 / (A^2 (kappa_t^2 + kappa_r^2) + 1/rho)``; accepts arrays."""
    A2 = np.square(A)
    return A2 / (A2 * hw.kappa2 + 1.0 / rho)


def sdnr_ceiling(rho: float, hw: HardwareProfile = IDEAL) -> float:
    """Largest threshold with an outage probability below one.

    ``min(1/kappa2, rho/(kappa2 rho + 1))``; the second term is the binding one
    for finite ``rho``.
    """
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    k2 = hw.kappa2
    first = math.inf if k2 == 0.0 else 1.0 / k2
    return min(first, rho / (k2 * rho + 1.0))


def outage_probability(gamma_th: float, rho: float, dist: ProductChannelDist,
                       hw: HardwareProfile = IDEAL,
                       ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Probability that the SDNR does not exceed ``gamma_th``.

    Equal to ``F_A(sqrt(gamma_th / (rho (1 - gamma_th kappa2))))`` while
    ``1 - gamma_th kappa2 > 0`` and that argument is below one; otherwise the
    link is always in outage and 1 is returned.
    """
    if not gamma_th > 0:
        raise DomainError(f"gamma_th must be positive, got {gamma_th}")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    margin = 1.0 - gamma_th * hw.kappa2
    if margin <= 0.0:
        return 1.0
    x_star = math.sqrt(gamma_th / (rho * margin))
    if x_star >= 1.0:
        return 1.0
    return product_cdf(dist, x_star, ctl)


def max_spectral_efficiency(rho: float, hw: HardwareProfile = IDEAL) -> float:
    """Largest spectral efficiency with nonzero throughput, in bit/s/Hz."""
    return math.log2(1.0 + sdnr_ceiling(rho, hw))


def throughput(W: float, r_t: float, rho: float, dist: ProductChannelDist,
               hw: HardwareProfile = IDEAL,
               ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Throughput ``W r_t (1 - P_o(2^r_t - 1))`` in bit/s.

    Zero when ``r_t`` is at or above :func:`max_spectral_efficiency`.
    """
    if not (W > 0 and r_t > 0):
        raise DomainError(f"W and r_t must be positive, got {W}, {r_t}")
    if r_t >= max_spectral_efficiency(rho, hw):
        return 0.0
    gamma_th = 2.0 ** r_t - 1.0
    return W * r_t * (1.0 - outage_probability(gamma_th, rho, dist, hw, ctl))


def optimal_spectral_efficiency(rho: float, dist: ProductChannelDist,
                                hw: HardwareProfile = IDEAL, W: float = 1.0,
                                ctl: SeriesControl = DEFAULT_CONTROL,
                                xatol: float = 1e-6) -> tuple[float, float]:
    """Spectral efficiency maximizing the throughput, and that throughput.

    Bounded Brent search (golden-section steps with parabolic acceleration)
    over ``(0, max_spectral_efficiency)``, relying on unimodality of the
    throughput curve.
    """
    upper = max_spectral_efficiency(rho, hw)
    res = optimize.minimize_scalar(
        lambda r: -throughput(W, r, rho, dist, hw, ctl),
        bounds=(xatol, upper * (1.0 - 1e-12)),
        method="bounded",
        options={"xatol": xatol},
    )
    return float(res.x), float(-res.fun)


def distortion_variances(P_s: float, h_g: float, A, hw: HardwareProfile = IDEAL):
    """Transmitter and receiver distortion powers.

    Returns
    -------
    (sigma2_nt, sigma2_nr)
        ``kappa_t^2 P_s`` and ``kappa_r^2 h_g^2 A^2 P_s``.
    """
    if not P_s > 0:
        raise DomainError(f"P_s must be positive, got {P_s}")
    return hw.kappa_t ** 2 * P_s, hw.kappa_r ** 2 * h_g ** 2 * np.square(A) * P_s
