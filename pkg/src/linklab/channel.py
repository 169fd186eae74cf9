"""Deterministic path gain and fog-fading statistics of the relayed link.

The link is TX -> surface -> RX. Its amplitude gain factors into a
deterministic part ``h_g`` (free space, molecular absorption, fog attenuation)
and a random part ``A = h1 h2``, one fog-fading factor per hop. For each hop
``-ln h_i`` is Gamma distributed with shape ``k_i`` and rate ``zeta_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy import constants

from . import specfun
from .atmosphere import (
    AtmosphericState,
    GasMixture,
    SpectralLine,
    fog_gain,
    load_catalog,
    molecular_absorption_kappa,
)
from .errors import ConsistencyError, DomainError
from .specfun import DEFAULT_CONTROL, SeriesControl

__all__ = [
    "LinkGeometry",
    "FogCondition",
    "PRESETS",
    "FogFadingDist",
    "ProductChannelDist",
    "GainBreakdown",
    "free_space_gain",
    "molecular_gain",
    "end_to_end_gain",
    "fading_from_condition",
    "fading_pdf",
    "fading_cdf",
    "product_pdf",
    "product_cdf",
    "end_to_end_pdf",
    "end_to_end_cdf",
]

# dB per neper of power, as used in the fog fading rate
DB_PER_NEPER = 4.343

# below this value product_cdf is taken from the positive-term mixture sum
TAIL_SWITCH = 1e-5

# above this value of zeta_max * (-ln x) the double series needs too many terms
# and product_cdf uses the mixture sum throughout
SERIES_LIMIT = 100.0

# tolerance for clamping a computed probability back into [0, 1]
CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class LinkGeometry:
    """Placement and hardware of the surface-assisted link.

    Attributes
    ----------
    d1, d2 : float
        TX-surface and surface-RX distances in m.
    psi : float
        Incidence angle in rad, in [0, pi/2).
    l_h, l_v : float
        Surface width and height in m.
    G_t, G_r : float
        Linear antenna power gains (>= 1).
    f : float
        Carrier frequency in Hz.
    """

    d1: float
    d2: float
    f: float
    psi: float = math.pi / 4
    l_h: float = 1.0
    l_v: float = 1.0
    G_t: float = 1e5
    G_r: float = 1e5

    def __post_init__(self):
        for name in ("d1", "d2", "l_h", "l_v", "f"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.psi < math.pi / 2:
            raise DomainError(f"psi must be in [0, pi/2), got {self.psi}")
        if not (self.G_t >= 1 and self.G_r >= 1):
            raise DomainError(f"antenna gains must be >= 1, got {self.G_t}, {self.G_r}")

    @property
    def d_total(self) -> float:
        return self.d1 + self.d2


@dataclass(frozen=True)
class FogCondition:
    """Fog fading class: shape ``k`` and attenuation parameter ``beta`` in dB/km."""

    k: float
    beta: float

    def __post_init__(self):
        if not (self.k > 0 and self.beta > 0):
            raise DomainError(f"k and beta must be positive, got {self.k}, {self.beta}")

    @classmethod
    def preset(cls, name: str) -> "FogCondition":
        try:
            return PRESETS[name]
        except KeyError:
            raise DomainError(f"unknown fog preset {name!r}; choose from {sorted(PRESETS)}") from None


PRESETS = {
    "light": FogCondition(2.32, 13.12),
    "moderate": FogCondition(5.49, 12.06),
    "thick": FogCondition(6.0, 23.0),
    "dense": FogCondition(36.06, 11.91),
}


@dataclass(frozen=True)
class FogFadingDist:
    """Fading law of one hop: ``-ln h ~ Gamma(shape=k, rate=zeta)``."""

    k: float
    zeta: float

    def __post_init__(self):
        if not (self.k > 0 and self.zeta > 0):
            raise DomainError(f"k and zeta must be positive, got {self.k}, {self.zeta}")


@dataclass(frozen=True)
class ProductChannelDist:
    """Law of ``A = h1 h2`` for independent hops."""

    hop1: FogFadingDist
    hop2: FogFadingDist

    @classmethod
    def from_conditions(cls, cond1: FogCondition, d1: float,
                        cond2: FogCondition | None = None,
                        d2: float | None = None) -> "ProductChannelDist":
        """Both hops from fog conditions; the second defaults to the first."""
        cond2 = cond1 if cond2 is None else cond2
        d2 = d1 if d2 is None else d2
        return cls(fading_from_condition(cond1, d1), fading_from_condition(cond2, d2))

    def swapped(self) -> "ProductChannelDist":
        return ProductChannelDist(self.hop2, self.hop1)


@dataclass(frozen=True)
class GainBreakdown:
    """Deterministic amplitude gains and the resulting power loss."""

    free_space: float
    molecular: float
    fog: float

    @property
    def h_g(self) -> float:
        return self.free_space * self.molecular * self.fog

    @property
    def loss_dB(self) -> float:
        return -20.0 * math.log10(self.h_g)

    @property
    def free_space_loss_dB(self) -> float:
        return -20.0 * math.log10(self.free_space)

    @property
    def molecular_loss_dB(self) -> float:
        return -20.0 * math.log10(self.molecular)

    @property
    def fog_loss_dB(self) -> float:
        return -20.0 * math.log10(self.fog)


def free_space_gain(geom: LinkGeometry) -> float:
    """Free-space amplitude gain of the surface-reflected path.

    ``c sqrt(G_t G_r) l_h l_v cos(psi) / (4 pi f d1 d2)``. Not clamped: large
    apertures at short range give values above one.
    """
    return (constants.c * math.sqrt(geom.G_t * geom.G_r) * geom.l_h * geom.l_v
            * math.cos(geom.psi) / (4.0 * math.pi * geom.f * geom.d1 * geom.d2))


def molecular_gain(kappa_m: float, d_total: float) -> float:
    """Amplitude gain ``exp(-kappa_m d_total / 2)`` of molecular absorption."""
    if kappa_m < 0:
        raise DomainError(f"kappa_m must be nonnegative, got {kappa_m}")
    return math.exp(-0.5 * kappa_m * d_total)


def end_to_end_gain(geom: LinkGeometry, state: AtmosphericState,
                    mix: GasMixture | None = None,
                    catalog: Sequence[SpectralLine] | None = None) -> GainBreakdown:
    """Deterministic gain ``h_g`` with its free-space, molecular and fog factors.

    ``mix`` defaults to the H2O/O2 fractions implied by ``state`` and
    ``catalog`` to the bundled line list.
    """
    if mix is None:
        mix = GasMixture.from_state(state)
    if catalog is None:
        catalog = load_catalog()
    kappa_m = molecular_absorption_kappa(geom.f, state, mix, catalog)
    return GainBreakdown(
        free_space=free_space_gain(geom),
        molecular=molecular_gain(kappa_m, geom.d_total),
        fog=float(fog_gain(geom.f, state, geom.d_total)),
    )


def fading_from_condition(cond: FogCondition, d: float) -> FogFadingDist:
    """Hop fading law for fog ``cond`` over ``d`` metres.

    ``zeta = 4.343 / (beta d_km)``: ``beta`` is in dB/km, so the distance
    enters in kilometres.
    """
    if not d > 0:
        raise DomainError(f"d must be positive, got {d}")
    return FogFadingDist(cond.k, DB_PER_NEPER / (cond.beta * d / 1e3))


def _check_unit_interval(x):
    if not 0.0 < x <= 1.0:
        raise DomainError(f"x must lie in (0, 1], got {x}")


def fading_pdf(dist: FogFadingDist, x: float) -> float:
    """Density of one hop, ``zeta^k / Gamma(k) x^(zeta-1) (-ln x)^(k-1)``."""
    _check_unit_interval(x)
    k, zeta = dist.k, dist.zeta
    if x == 1.0:
        if k > 1:
            return 0.0
        return zeta if k == 1 else math.inf
    y = -math.log(x)
    return math.exp(k * math.log(zeta) - math.lgamma(k) + (zeta - 1.0) * math.log(x)
                    + (k - 1.0) * math.log(y))


def fading_cdf(dist: FogFadingDist, x: float) -> float:
    """CDF of one hop, ``Q(k, zeta ln(1/x))``."""
    _check_unit_interval(x)
    if x == 1.0:
        return 1.0
    return specfun.reg_upper_gamma(dist.k, dist.zeta * -math.log(x))


def _ordered(dist: ProductChannelDist):
    # hop with the smaller rate first, so the series arguments have fixed signs
    h1, h2 = dist.hop1, dist.hop2
    if h1.zeta > h2.zeta:
        h1, h2 = h2, h1
    return h1.k, h1.zeta, h2.k, h2.zeta


def product_pdf(dist: ProductChannelDist, x: float,
                ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Density of ``A = h1 h2``.

    ``zeta1^k1 zeta2^k2 / Gamma(k1+k2) x^(zeta2-1) (-ln x)^(k1+k2-1)
    1F1(k1; k1+k2; (zeta1-zeta2) ln x)``, evaluated in logarithms with the
    hops ordered so that the 1F1 argument is nonnegative.
    """
    _check_unit_interval(x)
    k1, z1, k2, z2 = _ordered(dist)
    K = k1 + k2
    if x == 1.0:
        if K > 1:
            return 0.0
        return z1 ** k1 * z2 ** k2 if K == 1 else math.inf
    ln_x = math.log(x)
    y = -ln_x
    log_f = (k1 * math.log(z1) + k2 * math.log(z2) - math.lgamma(K)
             + (z2 - 1.0) * ln_x + (K - 1.0) * math.log(y)
             + specfun.log_kummer_1f1(k1, K, (z1 - z2) * ln_x, ctl))
    return math.exp(log_f)


def _clamp_probability(p):
    if -CLAMP_TOL <= p <= 1.0 + CLAMP_TOL:
        return min(1.0, max(0.0, p))
    raise ConsistencyError(f"probability {p!r} outside [0, 1]")


def product_cdf(dist: ProductChannelDist, x: float,
                ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """CDF of ``A = h1 h2``.

    With the hops ordered so that ``zeta1 <= zeta2``, ``y = -ln x`` and
    ``K = k1 + k2``::

        F_A(x) = 1 - zeta1^k1 zeta2^k2 / Gamma(K) * y^K * L(u, v)

    where ``L`` is :func:`linklab.specfun.lauricella_ha_series` at
    ``u = (zeta1 - zeta2) ln x`` and ``v = zeta2 ln x``. The second term is the
    probability that ``-ln h1 - ln h2 < y``. When the result would fall below
    ``TAIL_SWITCH`` the complement loses relative accuracy, so the value is
    taken from :func:`linklab.specfun.gamma_sum_sf` instead. The same sum is
    used when ``zeta2 y`` exceeds ``SERIES_LIMIT``: the double series then
    needs a number of terms growing with the square of its arguments, while
    the mixture grows linearly.

    Raises
    ------
    ConsistencyError
        If the value falls outside [0, 1] by more than 1e-9.
    """
    _check_unit_interval(x)
    if x == 1.0:
        return 1.0
    k1, z1, k2, z2 = _ordered(dist)
    K = k1 + k2
    y = -math.log(x)
    large = z2 * y > SERIES_LIMIT
    if large or y > k1 / z1 + k2 / z2:
        # beyond the mean of -ln A the lower tail of A can be deep
        tail = specfun.gamma_sum_sf(k1, z1, k2, z2, y, ctl)
        if large or tail < TAIL_SWITCH:
            return _clamp_probability(tail)
    log_scale, s = specfun.lauricella_ha_scaled(k1, k2, (z1 - z2) * -y, z2 * -y, ctl)
    log_pref = k1 * math.log(z1) + k2 * math.log(z2) - math.lgamma(K) + K * math.log(y)
    return _clamp_probability(1.0 - math.exp(log_pref + log_scale) * s)


def _check_end_to_end(h_g, x):
    if not h_g > 0:
        raise DomainError(f"h_g must be positive, got {h_g}")
    if not 0.0 < x <= h_g:
        raise DomainError(f"x must lie in (0, h_g] = (0, {h_g}], got {x}")


def end_to_end_pdf(h_g: float, dist: ProductChannelDist, x: float,
                   ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Density of ``A_t = h_g A``."""
    _check_end_to_end(h_g, x)
    return product_pdf(dist, min(x / h_g, 1.0), ctl) / h_g


def end_to_end_cdf(h_g: float, dist: ProductChannelDist, x: float,
                   ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """CDF of ``A_t = h_g A``."""
    _check_end_to_end(h_g, x)
    return product_cdf(dist, min(x / h_g, 1.0), ctl)
