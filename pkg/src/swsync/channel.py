"""Continuous-transmission AWGN simulator with a superimposed sync word.

A receive buffer of n symbols straddles two consecutive frames: it carries
the tail of the previous frame and the head of the frame that starts at
offset mu, each being a spherical-uniform codeword plus the circularly
shifted sync word, and unit-variance circular complex noise on top.  The
synchronizer picks the shift maximizing the correlation metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .sequences import SyncWord, correlation_profile, scale_to_energy
from .streams import blocks, map_blocks, substream

__all__ = [
    "FrameConfig",
    "ReceiveBuffer",
    "McEstimate",
    "sample_spherical_codeword",
    "build_buffer",
    "synchronize",
    "mc_sync_error",
]


@dataclass(frozen=True)
class FrameConfig:
    """Frame of n symbols carrying k information bits at total symbol
    energy rho_tot, with fraction alpha of it allocated to the sync word."""

    n: int
    k: int
    rho_tot: float
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not (self.rho_tot >= 0.0 and math.isfinite(self.rho_tot)):
            raise ValueError(f"rho_tot must be finite and >= 0, got {self.rho_tot}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def rho_s(self) -> float:
        """Sync-word average symbol energy."""
        return self.alpha * self.rho_tot

    @property
    def rho(self) -> float:
        """Data average symbol energy."""
        return (1.0 - self.alpha) * self.rho_tot


@dataclass(frozen=True)
class ReceiveBuffer:
    """n received symbols with the true frame start at offset mu."""

    z: np.ndarray
    mu: int

    def __post_init__(self):
        z = np.array(self.z, dtype=np.complex128)
        z.setflags(write=False)
        object.__setattr__(self, "z", z)
        if not 0 <= self.mu < z.size:
            raise ValueError(f"mu must lie in [0, {z.size}), got {self.mu}")


@dataclass(frozen=True)
class McEstimate:
    """Monte-Carlo probability estimate with a 95% normal half-width."""

    p_hat: float
    trials: int
    errors_observed: int
    ci_half_width: float

    @classmethod
    def from_counts(cls, errors: int, trials: int) -> "McEstimate":
        p = errors / trials
        half = 1.96 * math.sqrt(p * (1.0 - p) / trials)
        return cls(p_hat=p, trials=trials, errors_observed=errors, ci_half_width=half)


def sample_spherical_codeword(n: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Codeword uniform on the complex sphere with ||d||^2 = n*rho.

    Drawn as i.i.d. circular Gaussians normalized to the target radius;
    rho == 0 returns the zero vector without consuming the stream.
    """
    if rho < 0.0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    if rho == 0.0:
        return np.zeros(n, dtype=np.complex128)
    for _ in range(100):
        g = rng.standard_normal(2 * n).view(np.complex128)
        norm = np.linalg.norm(g)
        if norm > 0.0:
            return g * (math.sqrt(n * rho) / norm)
    raise ValueError("random source keeps returning zero vectors")


def build_buffer(
    config: FrameConfig, word: SyncWord, mu: int, rng: np.random.Generator
) -> ReceiveBuffer:
    """Assemble one receive buffer with the frame start at offset mu.

    Buffer positions [0, mu) hold the last mu data symbols of the previous
    frame, positions [mu, n) the first n-mu data symbols of the frame being
    synchronized; the shifted sync word and unit-variance circular complex
    noise are added on top.  Draw order (current codeword, previous
    codeword, noise) is fixed so runs reproduce.

    Args:
        config: frame parameters; data energy rho = (1-alpha)*rho_tot.
        word: sync word already scaled to rho_s = alpha*rho_tot.
        mu: true offset in [0, n).
        rng: source for this buffer's draws.
    """
    n = config.n
    if word.n != n:
        raise ValueError(f"word length {word.n} does not match frame length {n}")
    if not math.isclose(word.rho_s, config.rho_s, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(
            f"word energy rho_s={word.rho_s} does not match config rho_s={config.rho_s}"
        )
    if not 0 <= mu < n:
        raise ValueError(f"mu must lie in [0, {n}), got {mu}")
    d_cur = sample_spherical_codeword(n, config.rho, rng)
    d_prev = sample_spherical_codeword(n, config.rho, rng)
    noise = rng.standard_normal(2 * n).view(np.complex128) * math.sqrt(0.5)
    z = np.roll(word.symbols, mu)
    z = z + noise
    z[:mu] += d_prev[n - mu :]
    z[mu:] += d_cur[: n - mu]
    return ReceiveBuffer(z=z, mu=mu)


def synchronize(buffer: ReceiveBuffer, word: SyncWord) -> int:
    """Estimated offset: the smallest tau maximizing the correlation metric."""
    profile = correlation_profile(buffer.z, word)
    return int(np.argmax(profile))


def _assemble_block(symbols: np.ndarray, mu: np.ndarray, d_cur, d_prev, noise) -> np.ndarray:
    """Vectorized buffer assembly for a block of trials (rows)."""
    n = symbols.size
    idx = np.arange(n)[None, :]
    straddle = np.concatenate([d_prev, d_cur], axis=1)
    z = np.take_along_axis(straddle, n + idx - mu[:, None], axis=1)
    return z + noise + symbols[(idx - mu[:, None]) % n]


def _sync_block_errors(
    config: FrameConfig,
    symbols: np.ndarray,
    word_spec: np.ndarray,
    count: int,
    rng: np.random.Generator,
    fixed_mu: int | None,
) -> int:
    n, rho = config.n, config.rho
    if fixed_mu is None:
        mu = rng.integers(0, n, size=count)
    else:
        mu = np.full(count, fixed_mu, dtype=np.int64)
    if rho > 0.0:
        g = rng.standard_normal((count, 2 * n)).view(np.complex128)
        d_cur = g * (math.sqrt(n * rho) / np.linalg.norm(g, axis=1))[:, None]
        g = rng.standard_normal((count, 2 * n)).view(np.complex128)
        d_prev = g * (math.sqrt(n * rho) / np.linalg.norm(g, axis=1))[:, None]
    else:
        d_cur = d_prev = np.zeros((count, n), dtype=np.complex128)
    noise = rng.standard_normal((count, 2 * n)).view(np.complex128) * math.sqrt(0.5)
    z = _assemble_block(symbols, mu, d_cur, d_prev, noise)
    profile = scipy.fft.ifft(scipy.fft.fft(z, axis=1) * word_spec[None, :], axis=1).real
    tau_hat = np.argmax(profile, axis=1)
    return int(np.sum(tau_hat != mu))


def mc_sync_error(
    config: FrameConfig,
    word: SyncWord,
    trials: int,
    master_seed,
    *,
    fixed_mu: int | None = None,
    threads: int = 1,
) -> McEstimate:
    """Monte-Carlo sync-error probability Pr{tau_hat != mu}.

    Per trial: draw mu uniformly on [0, n) (or use ``fixed_mu``), assemble
    a buffer, synchronize, count mismatches.  Trials are partitioned into
    blocks of BLOCK_SIZE with one substream per block, so the estimate is
    bit-identical for a given master_seed at any thread count.

    Args:
        config: frame parameters.
        word: sync-word shape; it is rescaled to the config's rho_s here.
        trials: number of Monte-Carlo trials (>= 1).
        master_seed: int or tuple of ints keying the substreams.
        fixed_mu: pin the true offset instead of randomizing (debug aid).
        threads: worker threads over blocks; does not affect the numbers.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if fixed_mu is not None and not 0 <= fixed_mu < config.n:
        raise ValueError(f"fixed_mu must lie in [0, {config.n}), got {fixed_mu}")
    scaled = scale_to_energy(word, config.rho_s)
    word_spec = np.conj(scipy.fft.fft(scaled.symbols))

    def run(item):
        index, count = item
        rng = substream(master_seed, index)
        return _sync_block_errors(config, scaled.symbols, word_spec, count, rng, fixed_mu)

    counts = map_blocks(run, blocks(trials), threads=threads)
    return McEstimate.from_counts(int(sum(counts)), trials)
