"""Special-function kernel.

Gamma family, Kummer's confluent hypergeometric function and the two-variable
hypergeometric double series behind the product-channel CDF. Everything here
is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _special

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "ln_gamma",
    "pochhammer",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "kummer_1f1",
    "log_kummer_1f1",
    "lauricella_ha_series",
    "lauricella_ha_scaled",
    "gamma_sum_sf",
]

# below this argument kummer_1f1 switches to e^z 1F1(b-a; b; -z)
KUMMER_SWITCH = -30.0

_FPMIN = 1e-300
_RESCALE = 1e250


@dataclass(frozen=True)
class SeriesControl:
    """Convergence control shared by the series evaluators.

    Parameters
    ----------
    rel_tol : float
        Relative tolerance on the truncation error, in (0, 1e-3].
    max_terms : int
        Cap on the summation index (per index for the double series).
    """

    rel_tol: float = 1e-15
    max_terms: int = 5000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise DomainError(f"rel_tol must be in (0, 1e-3], got {self.rel_tol}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 64:
            raise DomainError(f"max_terms must be an integer >= 64, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def ln_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1."""
    if n < 0 or int(n) != n:
        raise DomainError(f"pochhammer requires a nonnegative integer n, got {n}")
    out = 1.0
    for i in range(int(n)):
        out *= a + i
    return out


def _check_gamma_args(a, x):
    if not a > 0:
        raise DomainError(f"incomplete gamma requires a > 0, got {a}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x}")


def _gamma_series(a, x, max_iter=100000):
    # P(a, x) by the power series, for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    else:
        raise ConvergenceError(f"incomplete gamma series did not converge (a={a}, x={x})")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a, x, max_iter=100000):
    # Q(a, x) by the modified Lentz continued fraction, for x >= a + 1
    return math.exp(_log_gamma_cf(a, x, max_iter))


def _log_gamma_cf(a, x, max_iter=100000):
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:
        raise ConvergenceError(f"incomplete gamma fraction did not converge (a={a}, x={x})")
    return -x + a * math.log(x) - math.lgamma(a) + math.log(h)


def _log_reg_upper_gamma(a, x):
    # log Q(a, x), finite even where Q(a, x) underflows
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return math.log1p(-min(_gamma_series(a, x), 1.0))
    return min(0.0, _log_gamma_cf(a, x))


def reg_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_series(a, x)))
    return min(1.0, _gamma_cf(a, x))


def reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return min(1.0, max(0.0, 1.0 - _gamma_cf(a, x)))


def _is_nonpositive_integer(b):
    return b <= 0 and float(b).is_integer()


def _kummer_series(a, b, z, ctl):
    terms = [1.0]
    term = 1.0
    n = 0
    while True:
        ratio = (a + n) * z / ((b + n) * (n + 1))
        term *= ratio
        n += 1
        if term == 0.0:
            break
        terms.append(term)
        if n > abs(z) and abs(ratio) < 1.0:
            tail = abs(term) * abs(ratio) / (1.0 - abs(ratio))
            if tail <= ctl.rel_tol * abs(math.fsum(terms)):
                break
        if n >= ctl.max_terms:
            raise ConvergenceError(
                f"1F1({a}; {b}; {z}) did not converge in {ctl.max_terms} terms"
            )
    return math.fsum(terms)


def kummer_1f1(a: float, b: float, z: float, ctl: SeriesControl = DEFAULT_CONTROL,
               transform: bool | None = None) -> float:
    """Kummer's confluent hypergeometric function 1F1(a; b; z).

    Summed as a power series with compensated accumulation. For
    ``z < -30`` the Kummer transformation ``e^z 1F1(b-a; b; -z)`` is applied
    so that the series has positive terms; pass ``transform`` to force the
    choice either way.
    """
    if _is_nonpositive_integer(b):
        raise DomainError(f"1F1 undefined for b = {b}")
    if z == 0.0:
        return 1.0
    use_transform = z < KUMMER_SWITCH if transform is None else transform
    if use_transform:
        return math.exp(z) * _kummer_series(b - a, b, -z, ctl)
    return _kummer_series(a, b, z, ctl)


def log_kummer_1f1(a: float, b: float, z: float,
                   ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Natural logarithm of 1F1(a; b; z) for a, b > 0 and z >= 0.

    The terms are accumulated relative to the largest one so that arguments
    far beyond the overflow point of ``exp`` are handled.
    """
    if not (a > 0 and b > 0 and z >= 0):
        raise DomainError("log_kummer_1f1 requires a, b > 0 and z >= 0")
    if z == 0.0:
        return 0.0
    log_terms = [0.0]
    log_z = math.log(z)
    lt = 0.0
    n = 0
    while True:
        lt += math.log(a + n) + log_z - math.log(b + n) - math.log(n + 1)
        n += 1
        log_terms.append(lt)
        ratio = (a + n) * z / ((b + n) * (n + 1))
        if n > z and ratio < 1.0:
            peak = max(log_terms)
            if lt + math.log(ratio / (1.0 - ratio)) - peak < math.log(ctl.rel_tol):
                break
        if n >= ctl.max_terms:
            raise ConvergenceError(
                f"1F1({a}; {b}; {z}) did not converge in {ctl.max_terms} terms"
            )
    peak = max(log_terms)
    return peak + math.log(math.fsum(math.exp(t - peak) for t in log_terms))


def _converged(recent, total, rel_tol):
    return len(recent) == 3 and all(abs(t) <= rel_tol * abs(total) for t in recent)


def _ha_direct(k1, k2, u, v, ctl):
    # anti-diagonal N = n + m of sum (k1)_n / (K)_n * u^n v^m / (n! m! (K + N))
    K = k1 + k2
    a = [1.0]   # (k1)_n u^n / ((K)_n n!)
    b = [1.0]   # v^m / m!
    diagonals = []
    recent = []
    N = 0
    while True:
        if N > 0:
            a.append(a[-1] * (k1 + N - 1) * u / ((K + N - 1) * N))
            b.append(b[-1] * v / N)
        diag = math.fsum(a[n] * b[N - n] for n in range(N + 1)) / (K + N)
        diagonals.append(diag)
        total = math.fsum(diagonals)
        recent = (recent + [diag])[-3:]
        if N > abs(u) + abs(v) and _converged(recent, total, ctl.rel_tol):
            return 0.0, total
        N += 1
        if N > ctl.max_terms:
            raise ConvergenceError(
                f"double series did not converge within {ctl.max_terms} anti-diagonals"
            )


def _ha_transformed(k1, k2, u, v, ctl):
    # Summing over m first gives e^v / (K+n) * 1F1(1; K+n+1; -v); collecting
    # anti-diagonals then yields L = e^v / K * sum_N g_N with
    #   g_N = (-v) g_{N-1} / (K + N) + w_N,
    #   w_N = w_{N-1} (k1 + N - 1) u / (N (K + N)),  g_0 = w_0 = 1.
    # All terms are positive when u >= 0 and v <= 0.
    K = k1 + k2
    log_scale = v - math.log(K)
    w = 1.0
    g = 1.0
    diagonals = [g]
    recent = [g]
    N = 0
    while True:
        N += 1
        if N > ctl.max_terms:
            raise ConvergenceError(
                f"double series did not converge within {ctl.max_terms} anti-diagonals"
            )
        w *= (k1 + N - 1) * u / (N * (K + N))
        g = -v * g / (K + N) + w
        diagonals.append(g)
        if abs(g) > _RESCALE:
            diagonals = [d / _RESCALE for d in diagonals]
            w /= _RESCALE
            g /= _RESCALE
            log_scale += math.log(_RESCALE)
        total = math.fsum(diagonals)
        recent = (recent + [g])[-3:]
        if N > abs(u) + abs(v) and _converged(recent, total, ctl.rel_tol):
            return log_scale, total


def lauricella_ha_scaled(k1, k2, u, v, ctl=DEFAULT_CONTROL, transform=None):
    """Return (log_scale, s) with the double series equal to exp(log_scale) * s."""
    if not (k1 > 0 and k2 > 0):
        raise DomainError(f"k1, k2 must be positive, got {k1}, {k2}")
    if not (math.isfinite(u) and math.isfinite(v)):
        raise DomainError("series arguments must be finite")
    use_transform = v < 0 if transform is None else transform
    if use_transform:
        return _ha_transformed(k1, k2, u, v, ctl)
    return _ha_direct(k1, k2, u, v, ctl)


def lauricella_ha_series(k1: float, k2: float, u: float, v: float,
                         ctl: SeriesControl = DEFAULT_CONTROL,
                         transform: bool | None = None) -> float:
    """Double series of the product-channel CDF.

    Computes::

        L = 1/(k1+k2) * sum_{n,m} (k1+k2)_{n+m} / (k1+k2+1)_{n+m}
                        * (k1)_n / (k1+k2)_n * u^n v^m / (n! m!)

    i.e. H_A(k1+k2, k1; k1+k2+1; u, v) / (k1+k2). The sum runs over
    anti-diagonals ``n + m = N`` until three consecutive diagonals fall
    below ``rel_tol`` of the running total.

    For ``v < 0`` the inner sum over ``m`` is Kummer-transformed, which makes
    every term positive when ``u >= 0`` (the configuration used by
    :func:`linklab.channel.product_cdf`). With ``u < 0`` the terms alternate
    in ``n`` and large ``|u|`` loses precision.
    """
    log_scale, s = lauricella_ha_scaled(k1, k2, u, v, ctl, transform)
    return math.exp(log_scale) * s


def _logaddexp(a, b):
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def gamma_sum_sf(k1: float, rate1: float, k2: float, rate2: float, y: float,
                 ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Pr(Y1 + Y2 > y) for independent Y_i ~ Gamma(shape k_i, rate rate_i).

    Written as a negative-binomial mixture of upper regularized gammas with the
    larger rate, ``sum_n w_n Q(k1+k2+n, r_max y)``. Every term is positive, so
    the result keeps full relative precision deep in the tail. Weights and
    gamma tails are carried as logarithms because either can underflow on its
    own when the two rates differ by orders of magnitude.

    Since ``Q`` increases with ``n``, the remainder after term ``n`` lies
    between ``Q_n S_n`` and ``S_n``, where ``S_n`` is the negative-binomial
    survival function. The sum stops once that bracket is within ``rel_tol``
    and adds its midpoint. ``ctl.max_terms`` counts terms beyond the index
    ``r_max y``, below which the terms are still rising.
    """
    if not (k1 > 0 and k2 > 0 and rate1 > 0 and rate2 > 0):
        raise DomainError("shapes and rates must be positive")
    if y <= 0:
        return 1.0
    if rate1 > rate2:
        k1, rate1, k2, rate2 = k2, rate2, k1, rate1
    K = k1 + k2
    z = rate2 * y
    if rate1 == rate2:
        return reg_upper_gamma(K, z)
    ratio = rate1 / rate2
    log_z = math.log(z)
    log_rest = math.log1p(-ratio)
    # log Q(K + n, z), raised by Q(a+1, z) - Q(a, z) = z^a e^{-z} / Gamma(a+1)
    log_q = _log_reg_upper_gamma(K, z)
    log_w = k1 * math.log(ratio)
    log_terms = [log_w + log_q]
    log_total = log_terms[0]
    limit = ctl.max_terms + int(z)
    n = 0
    while True:
        n += 1
        if n > limit:
            raise ConvergenceError(f"gamma-sum mixture did not converge in {limit} terms")
        a = K + n - 1
        log_q = min(0.0, _logaddexp(log_q, a * log_z - z - math.lgamma(a + 1.0)))
        log_w += math.log((k1 + n - 1) / n) + log_rest
        log_terms.append(log_w + log_q)
        log_total = _logaddexp(log_total, log_terms[-1])
        if log_terms[-1] >= log_terms[-2]:
            continue
        survival = float(_special.betainc(n + 1.0, k1, 1.0 - ratio))
        gap = -math.expm1(log_q)
        if survival * gap <= 2.0 * ctl.rel_tol * math.exp(log_total):
            break
    top = max(log_terms)
    total = math.exp(top) * math.fsum(math.exp(t - top) for t in log_terms)
    return min(1.0, total + survival * (1.0 - 0.5 * gap))