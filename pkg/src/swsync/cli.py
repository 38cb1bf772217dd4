"""Command-line driver: sweep, divergence, trade-off and optimizer reports.

Every command emits CSV (stdout by default, a file with --out).  File
outputs are accompanied by a JSON run manifest, and --plot additionally
renders a PNG view of the same rows.  dB-to-linear conversion happens here
and only here; the library modules work in linear energies throughout.
Output bytes are a pure function of (flags, seed).
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click

from . import __version__, analysis, channel, plotting
from .sequences import scale_to_energy, zadoff_chu

EXIT_NUMERIC_FAILURE = 3


@dataclass
class RunManifest:
    """Reproducibility record accompanying every file output."""

    command: str
    parameters: dict
    seed: int
    version: str = __version__
    duration_seconds: float = 0.0
    outputs: list = field(default_factory=list)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.12e}"


def _render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(header, rows, out: Path | None, manifest: RunManifest, render=None) -> None:
    text = _render_csv(header, rows)
    if out is None:
        click.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    manifest.outputs.append(out.name)
    if render is not None:
        png = out.with_suffix(".png")
        render(png)
        manifest.outputs.append(png.name)
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest_path.write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")


def _parse_alpha_grid(text: str) -> list[float]:
    """Grid from 'start:stop:step' or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            values = []
            v = start
            while v <= stop + 1e-12:
                values.append(round(v, 12))
                v += step
        else:
            values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise click.BadParameter(
            f"expected 'start:stop:step' or comma-separated values, got {text!r}",
            param_hint="--alpha-grid",
        )
    if not values or any(not 0.0 <= a <= 1.0 for a in values):
        raise click.BadParameter(
            "overhead values must lie in [0, 1]", param_hint="--alpha-grid"
        )
    return values


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _numeric_guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC_FAILURE)


_out_option = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Write CSV here instead of stdout (adds a JSON manifest).",
)
_plot_option = click.option(
    "--plot", is_flag=True, help="Also render a PNG next to --out."
)
_seed_option = click.option("--seed", type=click.IntRange(min=0), default=1, show_default=True)
_threads_option = click.option(
    "--threads", type=click.IntRange(min=1), default=1, show_default=True,
    help="Worker threads for Monte-Carlo blocks (never changes the numbers).",
)
_root_option = click.option(
    "--root", type=int, default=1, show_default=True, help="Zadoff-Chu root index."
)


def _check_plot(plot: bool, out: Path | None) -> None:
    if plot and out is None:
        raise click.UsageError("--plot requires --out")


@click.group()
@click.version_option(__version__)
def main():
    """Frame synchronization with a superimposed sync word: Monte-Carlo
    simulation, analytic error bounds, and power-overhead optimization."""


@main.command("sync-error-sweep")
@click.option("--n", "lengths", type=int, multiple=True, required=True,
              help="Frame length in symbols (repeatable).")
@click.option("--alpha", type=click.FloatRange(0.0, 1.0), default=0.5, show_default=True,
              help="Fraction of total power on the sync word.")
@click.option("--rho-tot-db", "rho_tot_dbs", type=float, multiple=True, required=True,
              help="Total SNR in dB (repeatable).")
@click.option("--trials", type=click.IntRange(min=1), default=100000, show_default=True)
@_seed_option
@_root_option
@_threads_option
@_out_option
@_plot_option
def cmd_sync_error_sweep(lengths, alpha, rho_tot_dbs, trials, seed, root, threads, out, plot):
    """Monte-Carlo sync-error probability and its analytic union bound."""
    _check_plot(plot, out)
    started = time.perf_counter()
    rows = []

    def compute():
        row_index = 0
        for n in lengths:
            word = zadoff_chu(n, root)
            for db in rho_tot_dbs:
                config = channel.FrameConfig(n=n, k=1, rho_tot=_db_to_linear(db), alpha=alpha)
                est = channel.mc_sync_error(
                    config, word, trials, (seed, row_index), threads=threads
                )
                bound = analysis.union_bound(
                    scale_to_energy(word, config.rho_s), 0, config.rho
                )
                rows.append((n, db, est.p_hat, est.ci_half_width, bound))
                row_index += 1

    _numeric_guard(compute)
    manifest = RunManifest(
        command="sync-error-sweep",
        parameters={
            "n": list(lengths), "alpha": alpha, "rho_tot_db": list(rho_tot_dbs),
            "trials": trials, "root": root, "threads": threads,
        },
        seed=seed,
        duration_seconds=round(time.perf_counter() - started, 6),
    )
    render = (lambda path: plotting.plot_sync_error_sweep(rows, path)) if plot else None
    _emit(
        ["n", "rho_tot_db", "p_e_mc", "ci_half_width", "p_e_union_analytic"],
        rows, out, manifest, render,
    )


@main.command("kl-sweep")
@click.option("--n", "lengths", type=int, multiple=True, required=True,
              help="Number of symbols (repeatable).")
@click.option("--rho-db", "rho_dbs", type=float, multiple=True, required=True,
              help="Data SNR in dB (repeatable).")
@click.option("--samples", type=click.IntRange(min=1), default=100000, show_default=True)
@_seed_option
@_threads_option
@_out_option
@_plot_option
def cmd_kl_sweep(lengths, rho_dbs, samples, seed, threads, out, plot):
    """Divergence between the received-signal law and its Gaussian surrogate."""
    _check_plot(plot, out)
    started = time.perf_counter()
    rows = []

    def compute():
        row_index = 0
        for n in lengths:
            for db in rho_dbs:
                est = analysis.kl_divergence(
                    n, _db_to_linear(db), samples, (seed, row_index), threads=threads
                )
                rows.append((n, db, est.kl_nats, est.std_error))
                row_index += 1

    _numeric_guard(compute)
    manifest = RunManifest(
        command="kl-sweep",
        parameters={
            "n": list(lengths), "rho_db": list(rho_dbs),
            "samples": samples, "threads": threads,
        },
        seed=seed,
        duration_seconds=round(time.perf_counter() - started, 6),
    )
    render = (lambda path: plotting.plot_kl_sweep(rows, path)) if plot else None
    _emit(["n", "rho_db", "kl_nats", "mc_std_err"], rows, out, manifest, render)


@main.command("alpha-sweep")
@click.option("--n", type=int, required=True, help="Frame length in symbols.")
@click.option("--k", type=int, required=True, help="Information bits per frame.")
@click.option("--rho-tot-db", "rho_tot_dbs", type=float, multiple=True, required=True,
              help="Total SNR in dB (repeatable).")
@click.option("--alpha-grid", default="0.05:0.95:0.05", show_default=True,
              help="Overheads to evaluate: 'start:stop:step' or comma list.")
@click.option("--trials", type=click.IntRange(min=1), default=100000, show_default=True,
              help="Monte-Carlo trials per overhead (with --mc).")
@click.option("--mc/--no-mc", "with_mc", default=False, show_default=True,
              help="Add Monte-Carlo frame-error columns (slow).")
@_seed_option
@_root_option
@_threads_option
@_out_option
@_plot_option
def cmd_alpha_sweep(n, k, rho_tot_dbs, alpha_grid, trials, with_mc, seed, root,
                    threads, out, plot):
    """Frame-error upper bound (optionally with Monte-Carlo) over overheads."""
    _check_plot(plot, out)
    started = time.perf_counter()
    alphas = _parse_alpha_grid(alpha_grid)
    rows = []

    def compute():
        word = zadoff_chu(n, root)
        for rho_index, db in enumerate(rho_tot_dbs):
            rho_tot = _db_to_linear(db)
            for alpha in alphas:
                config = channel.FrameConfig(n=n, k=k, rho_tot=rho_tot, alpha=alpha)
                report = analysis.frame_error_upper(config, word)
                if with_mc:
                    # one seed per SNR: common randomness across the alpha
                    # axis keeps the empirical curve smooth in alpha
                    est = channel.mc_sync_error(
                        config, word, trials, (seed, rho_index), threads=threads
                    )
                    eps = report.epsilon_star
                    p_f_mc = est.p_hat + eps - est.p_hat * eps
                    ci = est.ci_half_width * (1.0 - eps)
                    rows.append((db, alpha, report.p_f_upper, p_f_mc, ci))
                else:
                    rows.append((db, alpha, report.p_f_upper, None, None))

    _numeric_guard(compute)
    manifest = RunManifest(
        command="alpha-sweep",
        parameters={
            "n": n, "k": k, "rho_tot_db": list(rho_tot_dbs), "alpha_grid": alphas,
            "trials": trials if with_mc else None, "mc": with_mc, "root": root,
            "threads": threads,
        },
        seed=seed,
        duration_seconds=round(time.perf_counter() - started, 6),
    )
    render = (lambda path: plotting.plot_alpha_sweep(rows, path)) if plot else None
    _emit(
        ["rho_tot_db", "alpha", "p_f_upper_analytic", "p_f_mc", "ci"],
        rows, out, manifest, render,
    )


@main.command("optimize")
@click.option("--n", type=int, required=True, help="Frame length in symbols.")
@click.option("--k", type=int, required=True, help="Information bits per frame.")
@click.option("--rho-tot-db", "rho_tot_dbs", type=float, multiple=True, required=True,
              help="Total SNR in dB (repeatable).")
@click.option("--grid-resolution", type=click.IntRange(min=2), default=201,
              show_default=True, help="Coarse-scan points before refinement.")
@_out_option
@_plot_option
def cmd_optimize(n, k, rho_tot_dbs, grid_resolution, out, plot):
    """Overhead minimizing the frame-error upper bound (no RNG involved)."""
    _check_plot(plot, out)
    started = time.perf_counter()
    rows = []
    curves = []
    report_lines = []

    def compute():
        for db in rho_tot_dbs:
            rho_tot = _db_to_linear(db)
            alpha_hat, p_f_min = analysis.optimize_alpha(n, k, rho_tot, grid_resolution)
            config = channel.FrameConfig(n=n, k=k, rho_tot=rho_tot, alpha=alpha_hat)
            report = analysis.frame_error_upper(config)
            rows.append((db, alpha_hat, p_f_min, report.p_e_union, report.epsilon_star))
            report_lines.append(
                f"rho_tot = {db:g} dB: alpha_hat = {alpha_hat:.6f}, "
                f"P_f_upper = {p_f_min:.6e} "
                f"(sync union bound {report.p_e_union:.6e}, "
                f"decoding error {report.epsilon_star:.6e})"
            )
            if plot:
                grid = [i / 400.0 for i in range(401)]
                values = [
                    analysis.frame_error_upper(
                        channel.FrameConfig(n=n, k=k, rho_tot=rho_tot, alpha=a)
                    ).p_f_upper
                    for a in grid
                ]
                curves.append((db, grid, values))

    _numeric_guard(compute)
    for line in report_lines:
        click.echo(line, err=out is None)
    manifest = RunManifest(
        command="optimize",
        parameters={
            "n": n, "k": k, "rho_tot_db": list(rho_tot_dbs),
            "grid_resolution": grid_resolution,
        },
        seed=0,
        duration_seconds=round(time.perf_counter() - started, 6),
    )
    render = (lambda path: plotting.plot_optimize(curves, rows, path)) if plot else None
    _emit(
        ["rho_tot_db", "alpha_hat", "p_f_upper_min", "p_e_union", "epsilon_star"],
        rows, out, manifest, render,
    )


if __name__ == "__main__":
    main()
