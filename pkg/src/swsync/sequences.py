"""Synchronization words: Zadoff-Chu construction, shifts and correlation.

The detector works on the correlation metric f(z, tau) = Re{s_tau^H z},
where s_tau is the right circular shift of the sync word by tau positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

__all__ = [
    "SyncWord",
    "zadoff_chu",
    "scale_to_energy",
    "circular_shift",
    "correlation_metric",
    "correlation_profile",
    "cross_shift_correlation",
]

_ENERGY_RTOL = 1e-10


@dataclass(frozen=True)
class SyncWord:
    """Immutable complex sequence with total energy n * rho_s.

    ``rho_s`` is the average per-symbol energy; construction checks that it
    is consistent with the stored symbols to 1e-10 relative.
    """

    symbols: np.ndarray
    rho_s: float = field(default=-1.0)

    def __post_init__(self):
        sym = np.array(self.symbols, dtype=np.complex128)
        if sym.ndim != 1 or sym.size < 1:
            raise ValueError("sync word must be a nonempty 1-D sequence")
        energy = float(np.vdot(sym, sym).real)
        rho_s = self.rho_s
        if rho_s < 0.0:
            rho_s = energy / sym.size
        scale = max(sym.size * rho_s, energy)
        if abs(energy - sym.size * rho_s) > _ENERGY_RTOL * max(scale, 1e-300):
            raise ValueError(
                f"symbol energy {energy} inconsistent with n*rho_s = {sym.size * rho_s}"
            )
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)
        object.__setattr__(self, "rho_s", float(rho_s))

    @property
    def n(self) -> int:
        return self.symbols.size

    @property
    def energy(self) -> float:
        return self.n * self.rho_s


def zadoff_chu(n: int, root: int = 1) -> SyncWord:
    """Zadoff-Chu word of odd length ``n`` with unit symbol energy.

    Symbol k is exp(-j pi root k (k+1) / n).  The phase integers are
    reduced exactly (k(k+1) is even, so the phase is a multiple of 2 pi/n),
    which keeps the zero-autocorrelation property at machine precision.

    Parameters
    ----------
    n : odd positive length.
    root : sequence root, must be coprime to n.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Zadoff-Chu length must be odd and positive, got {n}")
    if math.gcd(root, n) != 1:
        raise ValueError(f"root {root} is not coprime to length {n}")
    u = root % n
    m = np.array([(u * k * (k + 1) // 2) % n for k in range(n)], dtype=float)
    return SyncWord(np.exp(-2j * np.pi * m / n), rho_s=1.0)


def scale_to_energy(word: SyncWord, rho_s: float) -> SyncWord:
    """Rescale a word to average symbol energy ``rho_s``, keeping directions."""
    if rho_s < 0.0:
        raise ValueError(f"rho_s must be >= 0, got {rho_s}")
    if rho_s == 0.0:
        return SyncWord(np.zeros(word.n, dtype=np.complex128), rho_s=0.0)
    if word.rho_s <= 0.0:
        raise ValueError("cannot scale a zero-energy word to positive energy")
    return SyncWord(word.symbols * math.sqrt(rho_s / word.rho_s), rho_s=rho_s)


def circular_shift(word: SyncWord, tau: int) -> SyncWord:
    """Right circular shift by ``tau``: output[i] = input[(i - tau) mod n]."""
    return SyncWord(np.roll(word.symbols, tau % word.n), rho_s=word.rho_s)


def correlation_metric(z, word: SyncWord, tau: int) -> float:
    """Decision metric f(z, tau) = Re{s_tau^H z} (conjugate-linear in s)."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (word.n,):
        raise ValueError(f"buffer shape {z.shape} does not match word length {word.n}")
    shifted = np.roll(word.symbols, tau % word.n)
    return float(np.vdot(shifted, z).real)


def correlation_profile(z, word: SyncWord) -> np.ndarray:
    """f(z, tau) for every shift tau in [0, n), via circular correlation.

    Accepts a single buffer (n,) or a batch (..., n); the profile is along
    the last axis.  scipy's FFT is used sequentially so results are
    bit-reproducible regardless of threading in the caller.
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.shape[-1] != word.n:
        raise ValueError(f"buffer length {z.shape[-1]} does not match word length {word.n}")
    spec = scipy.fft.fft(z, axis=-1) * np.conj(scipy.fft.fft(word.symbols))
    return scipy.fft.ifft(spec, axis=-1).real


def cross_shift_correlation(word: SyncWord, mu: int, tau: int) -> tuple[float, float]:
    """(Re{s_tau^H s_mu}, ||s_mu - s_tau||^2) for two shifts of one word."""
    s_mu = np.roll(word.symbols, mu % word.n)
    s_tau = np.roll(word.symbols, tau % word.n)
    corr = float(np.vdot(s_tau, s_mu).real)
    diff = s_mu - s_tau
    return corr, float(np.vdot(diff, diff).real)
