"""Superimposed sync-word frame synchronization for short packets.

A library plus CLI covering the full chain: Zadoff-Chu sync words, an AWGN
continuous-transmission simulator with a correlation synchronizer, exact
and Gaussian-approximated received-signal statistics, analytic sync/frame
error bounds, and optimization of the sync-word power overhead.
"""

__version__ = "0.1.0"

from .analysis import (
    BoundReport,
    GaussianApprox,
    KlEstimate,
    channel_capacity,
    channel_dispersion,
    epsilon_star,
    frame_error_upper,
    gaussian_approx,
    kl_divergence,
    optimize_alpha,
    pairwise_sync_error,
    pdf_y_complex,
    pdf_y_real,
    union_bound,
)
from .channel import (
    FrameConfig,
    McEstimate,
    ReceiveBuffer,
    build_buffer,
    mc_sync_error,
    sample_spherical_codeword,
    synchronize,
)
from .sequences import (
    SyncWord,
    circular_shift,
    correlation_metric,
    correlation_profile,
    cross_shift_correlation,
    scale_to_energy,
    zadoff_chu,
)
from .specfun import LogValue, log_bessel_i, log_gamma, log_q_func, q_func

__all__ = [
    "__version__",
    "BoundReport",
    "FrameConfig",
    "GaussianApprox",
    "KlEstimate",
    "LogValue",
    "McEstimate",
    "ReceiveBuffer",
    "SyncWord",
    "build_buffer",
    "channel_capacity",
    "channel_dispersion",
    "circular_shift",
    "correlation_metric",
    "correlation_profile",
    "cross_shift_correlation",
    "epsilon_star",
    "frame_error_upper",
    "gaussian_approx",
    "kl_divergence",
    "log_bessel_i",
    "log_gamma",
    "log_q_func",
    "mc_sync_error",
    "optimize_alpha",
    "pairwise_sync_error",
    "pdf_y_complex",
    "pdf_y_real",
    "q_func",
    "sample_spherical_codeword",
    "scale_to_energy",
    "synchronize",
    "union_bound",
    "zadoff_chu",
]
