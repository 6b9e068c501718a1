"""
Command-line interface for geodiscord.

Subcommands: decompose, bounds, measurement, oracle, sweep, monogamy.
Results go to stdout (text, or a ReportFile with --json); logs go to
stderr. Exit codes: 0 success, 1 physics or parameter error, 2 bad
invocation or I/O failure.
"""

import functools
import logging
import sys
from typing import Callable, List, Optional, Tuple

import click
import numpy as np
from pydantic import ValidationError

from . import __version__
from .config import DEFAULT_TOLERANCES, BoundsSettings, OracleConfig, SolverSettings
from .errors import PhysicsError, StateFileError
from .pipeline import BIPARTITE_FAMILIES, MULTIQUBIT_FAMILIES, SQUARE_FAMILIES, SWEEP_FAMILIES, DiscordPipeline
from .reports import ReportFile
from .states import BipartiteState
from .storage import StateStorage, state_digest

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
U64 = click.IntRange(0, 2**64 - 1)


class GridType(click.ParamType):
    """start:stop:count, evaluated like numpy.linspace."""

    name = "grid"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            start, stop, count = value.split(":")
            start, stop, count = float(start), float(stop), int(count)
        except ValueError:
            self.fail(f"{value!r} is not of the form start:stop:count", param, ctx)
        if count < 1:
            self.fail(f"grid {value!r} is empty (count must be >= 1)", param, ctx)
        return np.linspace(start, stop, count).tolist()


class CoefficientListType(click.ParamType):
    """Comma-separated real or complex numbers in Python notation, e.g. 0.6,0.8j or 0.6,0.48+0.64j."""

    name = "coefficients"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return [complex(v.strip()) for v in value.split(",") if v.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of numbers", param, ctx)


def setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def handle_errors(f: Callable) -> Callable:
    """Map library exceptions to exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except StateFileError as e:
            logger.error(f"Input error: {e}")
            click.echo(f"Error: {e}", err=True)
            raise click.exceptions.Exit(2)
        except ValidationError as e:
            click.echo(f"Error: invalid settings: {e}", err=True)
            raise click.exceptions.Exit(2)
        except PhysicsError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {type(e).__name__}: {e}", err=True)
            raise click.exceptions.Exit(1)

    return wrapper


def common_options(f: Callable) -> Callable:
    f = click.option("--quiet", "-q", is_flag=True, help="Only log warnings and errors.")(f)
    f = click.option("--verbose", "-v", is_flag=True, help="Log debug messages.")(f)
    f = click.option("--tol", type=float, default=None,
                     help="Override the hermiticity, trace and PSD validation tolerances.")(f)
    f = click.option("--seed", type=U64, default=0, show_default=True,
                     help="Seed for random families and the oracle.")(f)
    f = click.option("--json", "as_json", is_flag=True, help="Emit a JSON report.")(f)
    return f


def state_options(f: Callable) -> Callable:
    f = click.option("--rank", type=int, default=None, help="Rank of a random state.")(f)
    f = click.option("--z", type=float, default=None, help="Werner/isotropic parameter.")(f)
    f = click.option("--n", "n", type=int, default=None, help="Dimension of subsystem B (defaults to m).")(f)
    f = click.option("--m", "m", type=int, default=2, show_default=True, help="Dimension of subsystem A.")(f)
    f = click.option("--family", type=click.Choice(BIPARTITE_FAMILIES), default=None,
                     help="Named state family.")(f)
    f = click.option("--file", "file_path", type=click.Path(), default=None, help="StateFile JSON.")(f)
    return f


def solver_options(f: Callable) -> Callable:
    f = click.option("--completion", type=click.Choice(["helmert", "hadamard"]), default="helmert",
                     show_default=True, help="Orthogonal completion of the candidate measurement.")(f)
    f = click.option("--eigensolver", type=click.Choice(["jacobi", "lapack"]), default="jacobi",
                     show_default=True, help="Hermitian eigensolver.")(f)
    return f


def oracle_options(f: Callable) -> Callable:
    f = click.option("--iterations", type=int, default=400, show_default=True,
                     help="Hill-climbing steps per restart.")(f)
    f = click.option("--restarts", type=int, default=64, show_default=True, help="Oracle restarts.")(f)
    return f


def make_pipeline(seed: int, tol: Optional[float], eigensolver: str = "jacobi", completion: str = "helmert",
                  restarts: int = 64, iterations: int = 400) -> DiscordPipeline:
    tolerances = DEFAULT_TOLERANCES.with_validation(tol) if tol is not None else DEFAULT_TOLERANCES
    return DiscordPipeline(
        tol=tolerances,
        solver=SolverSettings(eigensolver=eigensolver),
        bounds_settings=BoundsSettings(orthogonal_completion=completion),
        oracle_config=OracleConfig(restarts=restarts, iterations=iterations, seed=seed),
    )


def load_state(pipeline: DiscordPipeline, file_path: Optional[str], family: Optional[str], m: int,
               n: Optional[int], z: Optional[float], rank: Optional[int], seed: int) -> Tuple[BipartiteState, str]:
    """Resolve --file or --family into a state and a description of where it came from."""
    if (file_path is None) == (family is None):
        raise click.UsageError("give exactly one of --file or --family")
    if file_path is not None:
        return StateStorage().load_state(file_path, pipeline.tol), f"file:{file_path}"
    if family in ("werner", "isotropic") and z is None:
        raise click.UsageError(f"--family {family} requires --z")
    if family in SQUARE_FAMILIES and n is not None and n != m:
        raise click.UsageError(f"--family {family} is an m x m state; --n {n} differs from --m {m}")
    state = pipeline.bipartite_family(family, m=m, n=n, z=z, rank=rank, seed=seed)
    source = f"family:{family} m={state.m} n={state.n}" + (f" z={z!r}" if z is not None else "")
    return state, source


def emit(report: ReportFile, as_json: bool, lines: List[str], output: Optional[str] = None) -> None:
    if output:
        StateStorage().write_report(report, output)
    if as_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        for line in lines:
            click.echo(line)


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else format(value, ".17g")


@click.group()
@click.version_option(__version__, prog_name="geodiscord")
def cli():
    """Geometric discord and measurement-induced nonlocality bounds."""


@cli.command()
@state_options
@common_options
@click.option("--output", "-o", type=click.Path(), default=None, help="Also write the JSON report here.")
@handle_errors
def decompose(file_path, family, m, n, z, rank, as_json, seed, tol, verbose, quiet, output):
    """Bloch decomposition (x, y, T) of a state."""
    setup_logging(verbose, quiet)
    pipeline = make_pipeline(seed, tol)
    state, source = load_state(pipeline, file_path, family, m, n, z, rank, seed)
    bloch = pipeline.decompose_state(state)
    report = ReportFile(command="decompose", input_digest=state_digest(state.rho), seed=seed,
                        state_source=source, bloch=bloch)
    lines = [f"state: {source}",
             f"x: {' '.join(_fmt(v) for v in bloch.x)}",
             f"y: {' '.join(_fmt(v) for v in bloch.y)}",
             "T:"] + ["  " + " ".join(_fmt(v) for v in row) for row in bloch.T] + [
             f"purity: {_fmt(bloch.purity)}",
             f"purity_residual: {bloch.purity_residual:.3e}",
             f"roundtrip_residual: {bloch.roundtrip_residual:.3e}"]
    emit(report, as_json, lines, output)


@cli.command()
@state_options
@common_options
@solver_options
@oracle_options
@click.option("--oracle", "with_oracle", is_flag=True, help="Also run the brute-force oracle and report gaps.")
@click.option("--output", "-o", type=click.Path(), default=None, help="Also write the JSON report here.")
@handle_errors
def bounds(file_path, family, m, n, z, rank, as_json, seed, tol, verbose, quiet, eigensolver, completion,
           restarts, iterations, with_oracle, output):
    """Lower bound on GD, upper bound on MIN, candidate measurement and saturation."""
    setup_logging(verbose, quiet)
    pipeline = make_pipeline(seed, tol, eigensolver, completion, restarts, iterations)
    state, source = load_state(pipeline, file_path, family, m, n, z, rank, seed)
    result, gap = pipeline.bounds(state, with_oracle)
    report = ReportFile(command="bounds", input_digest=state_digest(state.rho), seed=seed,
                        state_source=source, bounds=result, gap=gap)
    lines = [f"state: {source}",
             f"gd_lower: {_fmt(result.gd_lower)}",
             f"gd_isometry_lower: {_fmt(result.gd_isometry_lower)}",
             f"min_upper: {_fmt(result.min_upper)}",
             f"saturated: {result.saturated}",
             f"gd_exact: {_fmt(result.gd_exact)}",
             f"min_exact: {_fmt(result.min_exact)}",
             f"candidate_valid: {result.candidate.valid}"]
    if gap is not None:
        lines += [f"oracle_gd: {_fmt(gap.oracle_gd)}", f"oracle_min: {_fmt(gap.oracle_min)}",
                  f"gd_gap: {gap.gd_gap:.3e}", f"min_gap: {gap.min_gap:.3e}"]
    emit(report, as_json, lines, output)


@cli.command()
@state_options
@common_options
@solver_options
@click.option("--output", "-o", type=click.Path(), default=None, help="Also write the JSON report here.")
@handle_errors
def measurement(file_path, family, m, n, z, rank, as_json, seed, tol, verbose, quiet, eigensolver, completion,
                output):
    """Candidate measurement operators, their validity flags and their value."""
    setup_logging(verbose, quiet)
    pipeline = make_pipeline(seed, tol, eigensolver, completion)
    state, source = load_state(pipeline, file_path, family, m, n, z, rank, seed)
    record = pipeline.measurement(state)
    report = ReportFile(command="measurement", input_digest=state_digest(state.rho), seed=seed,
                        state_source=source, measurement=record)
    lines = [f"state: {source}", f"valid: {record.valid}", f"trace_one: {record.trace_one}",
             f"complete: {record.complete}", f"value: {_fmt(record.value)}"]
    for k, op in enumerate(record.operators, start=1):
        lines.append(f"operator {k}: psd={op.psd} idempotent={op.idempotent} "
                     f"min_eigenvalue={op.min_eigenvalue:.3e} idempotency_residual={op.idempotency_residual:.3e}")
    emit(report, as_json, lines, output)


@cli.command()
@state_options
@common_options
@oracle_options
@click.option("--output", "-o", type=click.Path(), default=None, help="Also write the JSON report here.")
@handle_errors
def oracle(file_path, family, m, n, z, rank, as_json, seed, tol, verbose, quiet, restarts, iterations, output):
    """Brute-force GD and MIN search compared with the bounds."""
    setup_logging(verbose, quiet)
    pipeline = make_pipeline(seed, tol, restarts=restarts, iterations=iterations)
    state, source = load_state(pipeline, file_path, family, m, n, z, rank, seed)
    gap, gd, mn = pipeline.oracle(state)
    report = ReportFile(command="oracle", input_digest=state_digest(state.rho), seed=seed, state_source=source,
                        gap=gap, oracle_gd=gd.to_record(), oracle_min=mn.to_record())
    lines = [f"state: {source}",
             f"gd_lower: {_fmt(gap.gd_lower)}", f"oracle_gd: {_fmt(gap.oracle_gd)}", f"gd_gap: {gap.gd_gap:.3e}",
             f"min_upper: {_fmt(gap.min_upper)}", f"oracle_min: {_fmt(gap.oracle_min)}",
             f"min_gap: {gap.min_gap:.3e}", f"min_constraint_residual: {_fmt(mn.constraint_residual)}"]
    emit(report, as_json, lines, output)


@cli.command()
@click.option("--family", type=click.Choice(SWEEP_FAMILIES), required=True, help="Family to sweep.")
@click.option("--grid", type=GridType(), required=True, help="start:stop:count.")
@click.option("--m", "m", type=int, default=2, show_default=True, help="Local dimension (werner, isotropic).")
@click.option("--N", "N", type=int, default=4, show_default=True, help="Qubits (counterexample).")
@click.option("--with-oracle", is_flag=True, help="Fill the oracle_gd column.")
@oracle_options
@common_options
@click.option("--output", "-o", type=click.Path(), default=None, help="CSV path (stdout when omitted).")
@handle_errors
def sweep(family, grid, m, N, with_oracle, restarts, iterations, as_json, seed, tol, verbose, quiet, output):
    """Evaluate a family over a parameter grid and write CSV rows."""
    setup_logging(verbose, quiet)
    pipeline = make_pipeline(seed, tol, restarts=restarts, iterations=iterations)
    rows = pipeline.sweep(family, grid, m=m, N=N, with_oracle=with_oracle)
    storage = StateStorage()
    if output:
        storage.write_sweep_csv(rows, output)
    if as_json:
        report = ReportFile(command="sweep", input_digest=state_digest(np.asarray(grid)), seed=seed,
                            state_source=f"sweep:{family}", sweep=rows)
        click.echo(report.model_dump_json(indent=2))
    elif not output:
        click.echo(storage.format_sweep_csv(rows), nl=False)


@cli.command()
@click.option("--file", "file_path", type=click.Path(), default=None, help="Amplitude file JSON.")
@click.option("--family", type=click.Choice(MULTIQUBIT_FAMILIES), default=None, help="Named N-qubit family.")
@click.option("--coeffs", type=CoefficientListType(), default=None,
              help="Comma-separated family coefficients; complex values (0.8j) are accepted for gghz.")
@click.option("--N", "N", type=int, default=None, help="Number of qubits.")
@click.option("--p", "p", type=float, default=None, help="Counterexample parameter.")
@click.option("--no-renormalize", is_flag=True, help="Reject unnormalized coefficients instead of rescaling.")
@common_options
@click.option("--output", "-o", type=click.Path(), default=None, help="Also write the JSON report here.")
@handle_errors
def monogamy(file_path, family, coeffs, N, p, no_renormalize, as_json, seed, tol, verbose, quiet, output):
    """Monogamy of GD anchored at qubit 1 for an N-qubit pure state."""
    setup_logging(verbose, quiet)
    pipeline = make_pipeline(seed, tol)
    if (file_path is None) == (family is None):
        raise click.UsageError("give exactly one of --file or --family")
    factor = None
    if file_path is not None:
        state, source = StateStorage().load_amplitudes(file_path, pipeline.tol), f"file:{file_path}"
    else:
        state, factor = pipeline.multiqubit_family(family, coeffs, N, p, renormalize=not no_renormalize)
        source = f"family:{family} N={state.N}"
    result = pipeline.monogamy(state)
    report = ReportFile(command="monogamy", input_digest=state_digest(state.amplitudes), seed=seed,
                        state_source=source, normalization_factor=factor, monogamy=result)
    lines = [f"state: {source}",
             f"pair_discords: {' '.join(_fmt(v) for v in result.pair_discords)}",
             f"lhs_sum: {_fmt(result.lhs_sum)}",
             f"cut_discord: {_fmt(result.cut_discord)}",
             f"deficit: {_fmt(result.deficit)}",
             f"satisfied: {result.satisfied}"]
    if factor is not None:
        lines.append(f"normalization_factor: {_fmt(factor)}")
    emit(report, as_json, lines, output)
