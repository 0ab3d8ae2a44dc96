"""
Start point for mallowscycles. Collect command line parameters using click.
Builds an ExperimentConfig per subcommand, runs the experiment, writes its CSV under an
output lock and exits with the acceptance verdict.
"""
import os
import sys
import logging
import traceback
import importlib.metadata
from pathlib import Path
from typing import Callable

import click
from click import version_option
import pandas as pd

import constants
from context import ExperimentConfig
from errors import MallowsError, OutputLockedError
from experiments.clt import run_clt_check, run_even_clt_check
from experiments.curves import run_ceco_curve, run_m1_curve, run_mu2_curve
from experiments.parity import run_odd_tightness, run_parity_tail
from experiments.plots import Figure, emit_plot_script
from experiments.runner import write_csv
from experiments.selftest import CONTROL_SIZE, run_selftest
from logger.logger import setup_logging, Logger
from qseries.limits import constants_table

NAME: str = "mallowscycles"
logger: Logger = logging.getLogger(NAME)

try:
    VERSION: str = importlib.metadata.version(NAME)
except importlib.metadata.PackageNotFoundError:
    VERSION = "unknown"

CONTEXT_SETTINGS: dict = {"help_option_names": ["-h", "--help"], "max_content_width": 120}

def parse_q_grid(_ctx: click.Context, _param: click.Parameter, value: str | None) -> list[float] | None:
    """
    Parse a comma separated list of q values
    """
    if value is None:
        return None
    try:
        grid = [float(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise click.BadParameter(f"'{value}' is not a comma separated list of numbers") from e
    if not grid:
        raise click.BadParameter("empty q grid")
    return grid

def experiment_options(default_grid: tuple[float, ...], default_n: int = constants.DEFAULT_N,
                       default_reps: int = constants.DEFAULT_REPLICATES) -> Callable:
    """
    Options shared by every experiment subcommand
    """
    def decorate(f: Callable) -> Callable:
        options = [
            click.option("--q", "q",
                         help="Single q value (overrides the default grid)",
                         type=click.FloatRange(min=0.0, min_open=True),
                         metavar="<q>"),
            click.option("--q-grid", "q_grid",
                         help="Comma separated q values "
                              f"(default: {','.join(f'{q:g}' for q in default_grid)})",
                         callback=parse_q_grid,
                         metavar="<q,q,...>"),
            click.option("--n", "n",
                         help="Permutation size",
                         type=click.IntRange(min=1),
                         metavar="<n>",
                         default=default_n,
                         show_default=True),
            click.option("--reps", "reps",
                         help="Number of replicates per q",
                         type=click.IntRange(min=1),
                         metavar="<replicates>",
                         default=default_reps,
                         show_default=True),
            click.option("--seed", "seed",
                         help="Root seed of every random stream",
                         type=click.IntRange(min=0, max=2 ** 64 - 1),
                         metavar="<seed>",
                         default=constants.DEFAULT_SEED,
                         show_default=True),
            click.option("--workers", "workers",
                         help="Number of worker processes",
                         type=click.IntRange(min=1),
                         metavar="<workers>",
                         default=os.cpu_count(),
                         show_default=True),
            click.option("--out", "out",
                         help="Output CSV filename (default: results/<subcommand>.csv)",
                         type=click.Path(dir_okay=False),
                         metavar="<filename>"),
            click.option("--tol", "tol",
                         help="Absolute tolerance of the exact series",
                         type=click.FloatRange(min=constants.MIN_TOL, max=1.0, max_open=True),
                         metavar="<tol>",
                         default=constants.DEFAULT_TOL,
                         show_default=True),
        ]
        for option in reversed(options):
            f = option(f)
        return f
    return decorate

plot_option = click.option("--plot", "plot",
                           help="Also write a gnuplot script next to the CSV",
                           is_flag=True,
                           default=False)
ell_option = click.option("--ell", "ell",
                          help="Number of cycle lengths in the joint statistic",
                          type=click.IntRange(min=1),
                          metavar="<ell>",
                          default=constants.DEFAULT_ELL,
                          show_default=True)
regen_option = click.option("--regen-steps", "regen_steps",
                            help="Length of the regeneration streams behind the renewal estimators",
                            type=click.IntRange(min=1),
                            metavar="<steps>",
                            default=constants.DEFAULT_REGEN_STEPS,
                            show_default=True)

def build_config(name: str, default_grid: tuple[float, ...], q: float | None, q_grid: list[float] | None,
                 n: int, reps: int, seed: int, workers: int, out: str | None, tol: float,
                 **extra) -> ExperimentConfig:
    """
    Build the ExperimentConfig of a subcommand; parameter errors become usage errors
    """
    if q is not None and q_grid is not None:
        raise click.UsageError("use either --q or --q-grid, not both")
    grid = [q] if q is not None else (q_grid if q_grid is not None else list(default_grid))
    output_path = Path(out) if out else Path("results").joinpath(f"{name}.csv")
    try:
        return ExperimentConfig(name=name, q_grid=grid, n=n, replicates=reps, seed=seed,
                                workers=workers, output_path=output_path, tol=tol,
                                logging_config=click.get_current_context().find_root().params.get(
                                    "logging_config", "logging-config.json"),
                                **extra)
    except MallowsError as e:
        raise click.UsageError(str(e)) from e

def execute(runner: Callable[[ExperimentConfig], pd.DataFrame], config: ExperimentConfig,
            figure: Figure | None = None) -> None:
    """
    Run one experiment, write its CSV (and plot script) and exit with the verdict
    """
    logger.info("%s: q grid %s, n=%d, replicates=%d, seed=%d, workers=%d", config.name,
                config.q_grid, config.n, config.replicates, config.seed, config.workers)
    try:
        frame = runner(config)
        write_csv(frame, config.output_path)
        if figure is not None and config.plot:
            emit_plot_script(config.output_path, figure)
    except OutputLockedError as e:
        logger.error("%s", e)
        sys.exit(constants.ExitCode.EXIT_FAILED_OUTPUT_LOCKED.value)
    except MallowsError as e:
        raise click.UsageError(str(e)) from e
    except Exception as e:
        logger.critical("exception in %s: %s %s", config.name, e.__class__.__name__, e)
        logger.critical(traceback.format_exc())
        raise

    if "pass" in frame.columns and not frame["pass"].astype(bool).all():
        logger.error("%s: %d of %d rows failed acceptance", config.name,
                     int((~frame["pass"].astype(bool)).sum()), len(frame))
        sys.exit(constants.ExitCode.EXIT_FAILED_ACCEPTANCE.value)
    logger.info("%s: all rows passed", config.name)
    sys.exit(constants.ExitCode.EXIT_NORMAL.value)

@click.group(context_settings=CONTEXT_SETTINGS, no_args_is_help=True)
@click.option("--logging-config",
              help="JSON logging config filename",
              metavar="<filename>",
              default="logging-config.json",
              show_default=True)
@version_option(version=VERSION)
def main(logging_config: str) -> None:
    """
    Sample Mallows permutations and check their cycle-count limit theorems
    """
    setup_logging(logging_config=Path(logging_config))
    logger.info("%s %s", NAME, VERSION)

@main.command("m1-curve", context_settings=CONTEXT_SETTINGS)
@experiment_options(constants.SUBCRITICAL_Q_GRID)
@plot_option
def m1_curve(plot: bool, **params) -> None:
    """
    Mean C_1(Pi_n)/n against the fixed-point density m_1(q), 0 < q < 1
    """
    execute(run_m1_curve, build_config("m1-curve", constants.SUBCRITICAL_Q_GRID, plot=plot, **params),
            Figure.M1)

@main.command("mu2-curve", context_settings=CONTEXT_SETTINGS)
@experiment_options(constants.SUPERCRITICAL_Q_GRID)
@plot_option
def mu2_curve(plot: bool, **params) -> None:
    """
    Mean C_2(Pi_n)/n against the 2-cycle density mu_2(q), q > 1
    """
    execute(run_mu2_curve,
            build_config("mu2-curve", constants.SUPERCRITICAL_Q_GRID, plot=plot, **params),
            Figure.MU2)

@main.command("ceco-curve", context_settings=CONTEXT_SETTINGS)
@experiment_options(constants.SUPERCRITICAL_Q_GRID)
@plot_option
def ceco_curve(plot: bool, **params) -> None:
    """
    Mean fixed points at even n and at n+1 against c_e(q) and c_o(q), q > 1
    """
    execute(run_ceco_curve,
            build_config("ceco-curve", constants.SUPERCRITICAL_Q_GRID, plot=plot, **params),
            Figure.CECO)

@main.command("clt", context_settings=CONTEXT_SETTINGS)
@experiment_options((0.5,), default_n=4000, default_reps=5000)
@ell_option
@regen_option
def clt(ell: int, regen_steps: int, **params) -> None:
    """
    Standardized moments of (C_i - m_i n)/sqrt(n), i <= ell, q < 1
    """
    execute(run_clt_check, build_config("clt", (0.5,), ell=ell, regen_steps=regen_steps, **params))

@main.command("even-clt", context_settings=CONTEXT_SETTINGS)
@experiment_options((2.0,), default_n=4000, default_reps=5000)
@ell_option
@regen_option
def even_clt(ell: int, regen_steps: int, **params) -> None:
    """
    Standardized moments of (C_2i - mu_2i n)/sqrt(n), i <= ell, q > 1
    """
    execute(run_even_clt_check, build_config("even-clt", (2.0,), ell=ell, regen_steps=regen_steps,
                                             **params))

@main.command("odd-tightness", context_settings=CONTEXT_SETTINGS)
@experiment_options((2.0,))
def odd_tightness(**params) -> None:
    """
    Law of the number of odd cycles at n/2, n and n+1, q > 1
    """
    execute(run_odd_tightness, build_config("odd-tightness", (2.0,), **params))

@main.command("parity-tail", context_settings=CONTEXT_SETTINGS)
@experiment_options((0.5,))
@click.option("--W", "window",
              help="Window half-width",
              type=click.IntRange(min=1),
              metavar="<W>",
              default=constants.DEFAULT_WINDOW,
              show_default=True)
@click.option("--kmax", "kmax",
              help="Largest k of the tails P[C_1 >= 2k] and P[C_1 >= 2k+1]",
              type=click.IntRange(min=1),
              metavar="<kmax>",
              default=constants.DEFAULT_KMAX,
              show_default=True)
def parity_tail(window: int, kmax: int, **params) -> None:
    """
    Tails of the fixed points of the two reflections of the bi-infinite model, q < 1
    """
    execute(run_parity_tail, build_config("parity-tail", (0.5,), W=window, kmax=kmax, **params))

@main.command("constants", context_settings=CONTEXT_SETTINGS)
@click.option("--q-grid", "q_grid",
              help="Comma separated q values (default: both curve grids)",
              callback=parse_q_grid,
              metavar="<q,q,...>")
@click.option("--tol", "tol",
              help="Absolute tolerance of the exact series",
              type=click.FloatRange(min=constants.MIN_TOL, max=1.0, max_open=True),
              metavar="<tol>",
              default=constants.DEFAULT_TOL,
              show_default=True)
@click.option("--out", "out",
              help="Output CSV filename",
              type=click.Path(dir_okay=False),
              metavar="<filename>",
              default="results/constants.csv",
              show_default=True)
def exact_constants_grid(q_grid: list[float] | None, tol: float, out: str) -> None:
    """
    Exact m_1, mu_2, c_e and c_o over a q grid
    """
    grid = q_grid if q_grid is not None else list(constants.SUBCRITICAL_Q_GRID
                                                   + constants.SUPERCRITICAL_Q_GRID)
    try:
        write_csv(constants_table(grid, tol), Path(out))
    except OutputLockedError as e:
        logger.error("%s", e)
        sys.exit(constants.ExitCode.EXIT_FAILED_OUTPUT_LOCKED.value)
    except MallowsError as e:
        raise click.UsageError(str(e)) from e
    sys.exit(constants.ExitCode.EXIT_NORMAL.value)

@main.command("selftest", context_settings=CONTEXT_SETTINGS)
@click.option("--reps", "reps",
              help="Draws per goodness-of-fit check and replicates of the q = 1 control",
              type=click.IntRange(min=1),
              metavar="<replicates>",
              default=100_000,
              show_default=True)
@click.option("--seed", "seed",
              help="Root seed of every random stream",
              type=click.IntRange(min=0, max=2 ** 64 - 1),
              metavar="<seed>",
              default=constants.DEFAULT_SEED,
              show_default=True)
@click.option("--workers", "workers",
              help="Number of worker processes",
              type=click.IntRange(min=1),
              metavar="<workers>",
              default=os.cpu_count(),
              show_default=True)
@click.option("--out", "out",
              help="Output CSV filename (default: results/selftest.csv)",
              type=click.Path(dir_okay=False),
              metavar="<filename>")
@click.option("--tol", "tol",
              help="Absolute tolerance of the exact series",
              type=click.FloatRange(min=constants.MIN_TOL, max=1.0, max_open=True),
              metavar="<tol>",
              default=constants.DEFAULT_TOL,
              show_default=True)
def selftest(**params) -> None:
    """
    Oracle suite: sampler goodness of fit, exact identities, series cross-checks, q = 1 control
    """
    execute(run_selftest, build_config("selftest", (1.0,), q=None, q_grid=None,
                                       n=CONTROL_SIZE, **params))

@main.command("plot", context_settings=CONTEXT_SETTINGS)
@click.argument("csv_path", type=click.Path(dir_okay=False), metavar="<csv>")
@click.option("--figure", "figure",
              help="Figure layout",
              type=click.Choice([f.name.lower() for f in Figure]),
              required=True)
def plot(csv_path: str, figure: str) -> None:
    """
    Write the gnuplot script for an existing curve CSV
    """
    try:
        emit_plot_script(Path(csv_path), Figure[figure.upper()])
    except MallowsError as e:
        raise click.UsageError(str(e)) from e
    sys.exit(constants.ExitCode.EXIT_NORMAL.value)

if __name__ == "__main__":
    main()
