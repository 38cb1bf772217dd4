"""Figure rendering for the CLI report path.

Each renderer takes the numeric rows a command just wrote to CSV and saves
a companion PNG next to it.  Figures are a convenience view of the CSV;
the delimited output stays the machine-readable contract.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sync_error_sweep(rows, path) -> None:
    """Sync-error probability vs total SNR, one series per frame length."""
    fig, ax = plt.subplots(figsize=(7, 5))
    lengths = sorted({int(r[0]) for r in rows})
    for n in lengths:
        sub = [r for r in rows if int(r[0]) == n]
        dbs = [r[1] for r in sub]
        ax.semilogy(dbs, [r[4] for r in sub], "-", label=f"bound, n={n}")
        mc = [(db, p, ci) for db, p, ci in ((r[1], r[2], r[3]) for r in sub) if p > 0]
        if mc:
            ax.errorbar(
                [m[0] for m in mc], [m[1] for m in mc], yerr=[m[2] for m in mc],
                fmt="o", capsize=3, label=f"Monte-Carlo, n={n}",
            )
    ax.set_xlabel("total SNR [dB]")
    ax.set_ylabel("sync-error probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_kl_sweep(rows, path) -> None:
    """Divergence to the Gaussian surrogate vs frame length, per SNR."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for db in sorted({r[1] for r in rows}):
        sub = [r for r in rows if r[1] == db]
        ax.errorbar(
            [r[0] for r in sub], [r[2] for r in sub], yerr=[r[3] for r in sub],
            fmt="o-", capsize=3, label=f"{db:g} dB",
        )
    ax.set_xlabel("symbols per frame")
    ax.set_ylabel("KL divergence [nats]")
    ax.grid(True, alpha=0.3)
    ax.legend(title="data SNR")
    _save(fig, path)


def plot_alpha_sweep(rows, path) -> None:
    """Frame-error bound (and optional MC points) vs overhead, per SNR."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for db in sorted({r[0] for r in rows}):
        sub = [r for r in rows if r[0] == db]
        ax.semilogy([r[1] for r in sub], [r[2] for r in sub], "-", label=f"bound, {db:g} dB")
        mc = [(r[1], r[3], r[4]) for r in sub if r[3] is not None and r[3] > 0]
        if mc:
            ax.errorbar(
                [m[0] for m in mc], [m[1] for m in mc], yerr=[m[2] for m in mc],
                fmt="o", capsize=3, label=f"Monte-Carlo, {db:g} dB",
            )
    ax.set_xlabel("sync-word power overhead")
    ax.set_ylabel("frame-error probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_optimize(curves, rows, path) -> None:
    """Bound vs overhead with the located optimum marked, per SNR."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for (db, alphas, values), row in zip(curves, rows):
        line = ax.semilogy(alphas, values, "-", label=f"{db:g} dB")[0]
        ax.plot(row[1], row[2], "v", color=line.get_color(), markersize=9)
    ax.set_xlabel("sync-word power overhead")
    ax.set_ylabel("frame-error upper bound")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(title="total SNR")
    _save(fig, path)
