"""Monte Carlo and quadrature cross-checks of the closed forms.

Randomness comes from numpy's counter-based Philox generator. A
:class:`RandomStream` is keyed by ``(seed, stream_id)`` and hands out one
generator per chunk index, so a sample plan gives the same numbers however
the chunks are scheduled. Counts are merged as integers, which is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from .channel import FogFadingDist, ProductChannelDist
from .errors import ConvergenceError, DomainError
from .performance import IDEAL, HardwareProfile, outage_probability, sdnr

__all__ = [
    "RandomStream",
    "EstimateWithCI",
    "OutageScenario",
    "wilson_interval",
    "sample_fading",
    "sample_product",
    "empirical_outage",
    "quadrature_cdf_oracle",
    "block_sdnr",
    "signal_level_validator",
    "ValidationCase",
    "ValidationResult",
    "run_validation",
]

Z95 = 1.959963984540054
DEFAULT_CHUNK = 1 << 20


@dataclass(frozen=True)
class RandomStream:
    """Reproducible substream of a counter-based generator.

    Distinct ``(seed, stream_id)`` pairs use distinct Philox keys; distinct
    chunks of one stream start 2**128 blocks apart in counter space.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= value < 2 ** 64:
                raise DomainError(f"{name} must be an unsigned 64-bit integer, got {value}")

    def generator(self, chunk: int = 0) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        counter = np.array([0, 0, chunk, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))


@dataclass(frozen=True)
class EstimateWithCI:
    """Point estimate with a 95% confidence half-width."""

    value: float
    half_width_95: float
    n_samples: int

    def agrees_with(self, reference: float, factor: float = 3.0) -> bool:
        """True when ``|reference - value| <= factor * half_width_95``."""
        return abs(reference - self.value) <= factor * self.half_width_95


def wilson_interval(successes: int, n: int, z: float = Z95) -> tuple[float, float]:
    """Centre and half-width of the Wilson score interval."""
    if n <= 0:
        raise DomainError(f"n must be positive, got {n}")
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    return centre, half


def _proportion(successes: int, n: int) -> EstimateWithCI:
    _, half = wilson_interval(successes, n)
    return EstimateWithCI(successes / n, half, n)


def sample_fading(dist: FogFadingDist, stream: RandomStream | np.random.Generator,
                  n: int) -> np.ndarray:
    """Draw ``n`` hop gains ``exp(-Y)`` with ``Y ~ Gamma(k, rate zeta)``."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    gen = stream.generator() if isinstance(stream, RandomStream) else stream
    return np.exp(-gen.standard_gamma(dist.k, size=n) / dist.zeta)


def sample_product(dist: ProductChannelDist, gen: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` values of ``A = h1 h2``."""
    return sample_fading(dist.hop1, gen, n) * sample_fading(dist.hop2, gen, n)


@dataclass(frozen=True)
class OutageScenario:
    """Everything needed to draw SDNR samples at one operating point."""

    dist: ProductChannelDist
    rho: float
    gamma_th: float
    hw: HardwareProfile = field(default_factory=lambda: IDEAL)

    def analytic(self) -> float:
        return outage_probability(self.gamma_th, self.rho, self.dist, self.hw)


def _chunks(n, chunk_size):
    start = 0
    index = 0
    while start < n:
        size = min(chunk_size, n - start)
        yield index, size
        start += size
        index += 1


def empirical_outage(scenario: OutageScenario, stream: RandomStream, n: int,
                     chunk_size: int = DEFAULT_CHUNK) -> EstimateWithCI:
    """Fraction of sampled channels whose SDNR is at or below the threshold."""
    if n < 1000:
        raise DomainError(f"n must be at least 1000, got {n}")
    hits = 0
    for index, size in _chunks(n, chunk_size):
        A = sample_product(scenario.dist, stream.generator(index), size)
        hits += int(np.count_nonzero(sdnr(A, scenario.rho, scenario.hw) <= scenario.gamma_th))
    return _proportion(hits, n)


def _gamma_logpdf(t, k, rate):
    return k * math.log(rate) - math.lgamma(k) + (k - 1.0) * math.log(t) - rate * t


def quadrature_cdf_oracle(dist: ProductChannelDist, x: float, epsabs: float = 1e-12) -> float:
    """CDF of ``A = h1 h2`` by nested adaptive quadrature.

    With ``Y_i = -ln h_i`` the density of ``S = Y1 + Y2`` is the convolution of
    two Gamma densities; ``F_A(x) = Pr(S >= -ln x)`` is integrated over
    whichever tail of ``S`` is smaller. No series code is involved.
    """
    if not 0.0 < x <= 1.0:
        raise DomainError(f"x must lie in (0, 1], got {x}")
    if x == 1.0:
        return 1.0
    k1, z1 = dist.hop1.k, dist.hop1.zeta
    k2, z2 = dist.hop2.k, dist.hop2.zeta

    def integrand(t, s):
        return math.exp(_gamma_logpdf(t, k1, z1) + _gamma_logpdf(s - t, k2, z2))

    def density(s):
        if s <= 0.0:
            return 0.0
        # split at the mode of the first factor so quad sees the peak
        mode = min(max((k1 - 1.0) / z1, 0.0), s)
        pieces = [(0.0, mode), (mode, s)] if 0.0 < mode < s else [(0.0, s)]
        total = 0.0
        for a, b in pieces:
            val, _ = integrate.quad(integrand, a, b, args=(s,), epsabs=epsabs * 1e-2,
                                    epsrel=1e-12, limit=200)
            total += val
        return total

    y = -math.log(x)
    mean = k1 / z1 + k2 / z2
    sd = math.sqrt(k1 / z1 ** 2 + k2 / z2 ** 2)
    if y < mean:
        lower, err = integrate.quad(density, 0.0, y, epsabs=epsabs, epsrel=1e-12, limit=200)
        value = 1.0 - lower
    else:
        # finite tail end far beyond any mass that matters at epsabs
        upper = y + 60.0 * sd + 60.0 / min(z1, z2)
        value, err = integrate.quad(density, y, upper, epsabs=epsabs, epsrel=1e-12, limit=200)
    if err > 1e-9:
        raise ConvergenceError(f"quadrature error estimate {err:.2e} above 1e-9")
    return min(1.0, max(0.0, value))


def block_sdnr(A: np.ndarray, rho: float, hw: HardwareProfile, gen: np.random.Generator,
               block_length: int, P_s: float = 1.0, h_g: float = 1.0) -> np.ndarray:
    """Measured SDNR of one block of QPSK symbols per channel realization.

    Each block carries ``y = h_g A (s + n_t) + n_r + n`` with circular Gaussian
    transmitter distortion, receiver distortion and thermal noise. The SDNR
    is the known useful power divided by the measured power of
    ``y - h_g A s``.
    """
    m = A.shape[0]
    L = block_length
    gain = (h_g * A)[:, None]
    bits = gen.integers(0, 2, size=(m, L, 2))
    s = math.sqrt(P_s / 2.0) * ((2 * bits[..., 0] - 1) + 1j * (2 * bits[..., 1] - 1))

    def cgauss(var):
        scale = np.sqrt(np.asarray(var, dtype=float) / 2.0)
        return scale * (gen.standard_normal((m, L)) + 1j * gen.standard_normal((m, L)))

    noise_var = h_g ** 2 * P_s / rho
    n_t = cgauss(hw.kappa_t ** 2 * P_s)
    n_r = cgauss((hw.kappa_r ** 2 * P_s) * np.abs(gain) ** 2)
    noise = cgauss(noise_var)
    y = gain * (s + n_t) + n_r + noise
    residual = np.mean(np.abs(y - gain * s) ** 2, axis=1)
    return np.abs(gain[:, 0]) ** 2 * P_s / residual


def signal_level_validator(scenario: OutageScenario, stream: RandomStream, n: int,
                           block_length: int = 1024, chunk_size: int = 256,
                           P_s: float = 1.0, h_g: float = 1.0) -> EstimateWithCI:
    """Outage estimate from SDNR measured on simulated received blocks.

    Unlike :func:`empirical_outage` this does not evaluate the SDNR formula;
    it builds the received signal sample by sample. Block-level measurement
    noise of order ``1/sqrt(block_length)`` blurs the threshold slightly.
    """
    if n < 10_000:
        raise DomainError(f"n must be at least 10000, got {n}")
    hits = 0
    for index, size in _chunks(n, chunk_size):
        gen = stream.generator(index)
        A = sample_product(scenario.dist, gen, size)
        est = block_sdnr(A, scenario.rho, scenario.hw, gen, block_length, P_s, h_g)
        hits += int(np.count_nonzero(est <= scenario.gamma_th))
    return _proportion(hits, n)


@dataclass(frozen=True)
class ValidationCase:
    """One closed-form versus simulation comparison.

    ``analytic`` feeds the closed form and ``sampled`` the simulation; they
    are the same law except in deliberate negative controls.
    """

    label: str
    analytic: ProductChannelDist
    sampled: ProductChannelDist
    rho: float
    gamma_th: float
    hw: HardwareProfile = field(default_factory=lambda: IDEAL)


@dataclass(frozen=True)
class ValidationResult:
    case: ValidationCase
    closed_form: float
    estimate: EstimateWithCI
    passed: bool


def run_validation(cases: Sequence[ValidationCase], n: int, seed: int,
                   factor: float = 3.0) -> list[ValidationResult]:
    """Compare closed-form outage with Monte Carlo for each case.

    Case ``i`` draws from ``RandomStream(seed, i)``.
    """
    results = []
    for i, case in enumerate(cases):
        closed = outage_probability(case.gamma_th, case.rho, case.analytic, case.hw)
        scenario = OutageScenario(case.sampled, case.rho, case.gamma_th, case.hw)
        est = empirical_outage(scenario, RandomStream(seed, i), n)
        results.append(ValidationResult(case, closed, est, est.agrees_with(closed, factor)))
    return results
