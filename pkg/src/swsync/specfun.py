"""Log-scale special functions for density and error-bound evaluation.

The received-signal densities multiply astronomically large Bessel factors
by astronomically small exponentials, and the high-SNR error bounds need
Gaussian tail probabilities far below double-precision linear range.  All
of that composes safely only on the natural-log scale, so every function
here returns logs (or a :class:`LogValue`) and the callers combine them
before a single final exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

__all__ = [
    "LogValue",
    "log_bessel_i",
    "log_bessel_i_array",
    "log_gamma",
    "q_func",
    "log_q_func",
]


@dataclass(frozen=True)
class LogValue:
    """A real number stored as (sign, ln|value|).

    ``sign == 0`` encodes an exact zero; ``log_magnitude`` is then
    meaningless (kept at ``-inf`` by convention).  The log scale covers
    exponents far beyond what a linear double can hold.
    """

    log_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(float("-inf"), 0)

    def to_float(self) -> float:
        """Linear value; may over/underflow for extreme magnitudes."""
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


# ----------------------------------------------------------------------
# Modified Bessel function of the first kind, ln I_nu(x)
#
# Three regimes:
#   1. scipy's exponentially scaled ive() wherever it does not underflow
#      (verified at <=1e-11 absolute error on the log over the supported
#      order/argument range);
#   2. a log-domain power series where ive underflows at moderate order
#      (there the series peak index is small, so it converges quickly);
#   3. the uniform large-order expansion for huge orders.
# ----------------------------------------------------------------------

_DEBYE_MIN_ORDER = 1000.0
_DEBYE_TERMS = 8


def _debye_polynomials(count: int) -> list[np.ndarray]:
    """Coefficients (ascending powers) of the large-order expansion polynomials.

    Built from the exact rational recurrence
    ``U_{k+1}(p) = p^2 (1 - p^2) U_k'(p) / 2 + (1/8) int_0^p (1 - 5 t^2) U_k(t) dt``
    to avoid transcription errors in the published tables.
    """
    polys = [[Fraction(1)]]
    while len(polys) < count:
        u = polys[-1]
        deg = len(u) - 1
        nxt = [Fraction(0)] * (deg + 4)
        # p^2 (1 - p^2) u'(p) / 2
        for j in range(1, deg + 1):
            d = j * u[j]
            nxt[j + 1] += d / 2
            nxt[j + 3] -= d / 2
        # (1/8) * int_0^p (1 - 5 t^2) u(t) dt
        for j in range(deg + 1):
            nxt[j + 1] += u[j] / Fraction(8 * (j + 1))
            nxt[j + 3] -= 5 * u[j] / Fraction(8 * (j + 3))
        polys.append(nxt)
    return [np.array([float(c) for c in p]) for p in polys]


_DEBYE_POLYS = _debye_polynomials(_DEBYE_TERMS)


def _log_besseli_debye(order: float, x: float) -> float:
    """Uniform large-order expansion of ln I_order(x), order >= ~1e3."""
    z = x / order
    root = math.sqrt(1.0 + z * z)
    p = 1.0 / root
    eta = root + math.log(z / (1.0 + root))
    s = 0.0
    for k, poly in enumerate(_DEBYE_POLYS):
        s += float(np.polynomial.polynomial.polyval(p, poly)) / order**k
    return order * eta - 0.5 * math.log(2.0 * math.pi * order) - 0.5 * math.log(root) + math.log(s)


def _log_besseli_series(order: float, x: float) -> float:
    """Log-domain ascending series of ln I_order(x).

    Terms t_m = (x/2)^(2m+order) / (m! Gamma(order+m+1)) are all positive;
    successive log-ratios accumulate by cumsum and the total comes out of a
    single logsumexp.  Used where the scaled Bessel underflows, which keeps
    the peak index (and hence the term count) moderate.
    """
    lx = math.log(0.5 * x)
    peak = 0.5 * (math.sqrt((order + 1.0) ** 2 + x * x) - (order + 1.0))
    t0 = order * lx - special.gammaln(order + 1.0)
    m_hi = int(peak + 12.0 * math.sqrt(peak + 1.0)) + 60
    while True:
        m = np.arange(1.0, m_hi + 1.0)
        terms = np.concatenate(([t0], t0 + np.cumsum(2.0 * lx - np.log(m) - np.log(order + m))))
        ratio = (0.5 * x) ** 2 / (m_hi * (order + m_hi))
        if ratio < 0.9 and terms[-1] < terms.max() - 45.0:
            return float(special.logsumexp(terms))
        m_hi *= 2


def _log_besseli_scalar(order: float, x: float) -> float:
    if x == 0.0:
        return 0.0 if order == 0.0 else float("-inf")
    scaled = float(special.ive(order, x))
    if scaled > 0.0 and math.isfinite(scaled):
        return math.log(scaled) + x
    if order >= _DEBYE_MIN_ORDER:
        return _log_besseli_debye(order, x)
    return _log_besseli_series(order, x)


def log_bessel_i(order: float, x: float) -> LogValue:
    """ln I_order(x) for order >= 0, x >= 0.

    Returns a :class:`LogValue`; the result is an exact zero (sign 0) only
    for x == 0 with order > 0.

    Raises:
        ValueError: on negative order or argument.
    """
    if not (order >= 0.0):
        raise ValueError(f"Bessel order must be >= 0, got {order}")
    if not (x >= 0.0):
        raise ValueError(f"Bessel argument must be >= 0, got {x}")
    lv = _log_besseli_scalar(float(order), float(x))
    if lv == float("-inf"):
        return LogValue.zero()
    return LogValue(lv, 1)


def log_bessel_i_array(order: float, x: np.ndarray) -> np.ndarray:
    """Vectorized ln I_order over an array of nonnegative arguments.

    Entries where I_order(x) == 0 (x == 0 with order > 0) come back as -inf.
    """
    if not (order >= 0.0):
        raise ValueError(f"Bessel order must be >= 0, got {order}")
    x = np.asarray(x, dtype=float)
    if x.size and x.min() < 0.0:
        raise ValueError("Bessel argument must be >= 0")
    out = np.full(x.shape, -np.inf)
    zero = x == 0.0
    if order == 0.0:
        out[zero] = 0.0
    pos = np.nonzero(~zero)[0] if x.ndim == 1 else np.nonzero(~zero)
    xp = x[pos]
    scaled = special.ive(order, xp)
    ok = scaled > 0.0
    vals = np.empty(xp.shape)
    vals[ok] = np.log(scaled[ok]) + xp[ok]
    if not ok.all():
        bad = np.nonzero(~ok)[0]
        vals[bad] = [_log_besseli_scalar(order, float(xi)) for xi in xp[bad]]
    out[pos] = vals
    return out


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Raises:
        ValueError: for x <= 0 (poles and the reflection branch are outside
            what the densities need).
    """
    if not (x > 0.0):
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def q_func(x: float) -> float:
    """Standard-normal tail probability Q(x) = Pr{N(0,1) > x}.

    Evaluated through the scaled complementary error function (never as
    1 - CDF), so the relative accuracy holds deep into the tail.
    """
    return float(special.ndtr(-x))


def log_q_func(x: float) -> float:
    """ln Q(x), exact far beyond the linear underflow point of Q itself."""
    return float(special.log_ndtr(-x))
