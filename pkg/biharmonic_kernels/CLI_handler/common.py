import sys
from typing import Callable

import click
import numpy as np

from biharmonic_kernels.geometry.points import Dimension
from biharmonic_kernels.reports.report import SuiteReport, default_report_path, emit_report
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.src.config import FORMATS, RunConfig, load_run_config
from biharmonic_kernels.src.exceptions import DomainError
from biharmonic_kernels.src.utils import parse_point

"""
Options and helpers shared by the evaluation and verification commands.

Every command takes --n, --seed, --workers, --config, --tol, -o/--output and --format. Flags win over
the config file, which wins over the defaults in setting.py.
"""


def common_options(func: Callable) -> Callable:
    '''
    Attach the shared run options to a click command.
    '''
    options = [
        click.option('--n', 'n', type=int, default=None, help='Boundary dimension n (ambient space R^{n+1}).'),
        click.option('--seed', type=int, default=None, help='Seed of the sampled points.'),
        click.option('--workers', type=int, default=None, help='Worker threads for quadrature and scans.'),
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
                     default=None, help='JSON run configuration.'),
        click.option('--tol', type=float, default=None, help='Target tolerance of the adaptive quadrature.'),
        click.option('-o', '--output', type=click.Path(writable=True, resolve_path=True), help='Output file'),
        click.option('--format', 'format', type=click.Choice(FORMATS), default=None, help='Report format.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def run_config(n, seed, workers, config_path, tol, output, format, **options) -> RunConfig:
    """Merge the shared flags over the config file."""
    overrides = {'n': n, 'seed': seed, 'workers': workers, 'tol': tol, 'output': output, 'format': format,
                 'options': {k: v for k, v in options.items() if v is not None}}
    return load_run_config(config_path, overrides)


def as_point(text: str | None, default: np.ndarray | None = None) -> np.ndarray:
    if text is None:
        if default is None:
            raise DomainError("A point is required")
        return default
    return np.asarray(parse_point(text), dtype=float)


def data_from_spec(text: str, dimension: Dimension | int, model: str = 'halfspace') -> BoundaryData:
    '''
    Boundary data from a short selector:

    - `zero`, `constant:<value>`
    - `bump:<radius>`, `gaussian:<width>`, `rational:<exponent>` (half-space, centred at 0)
    - `coordinate:<index>` (sphere)
    - `csv:<path>:<decay exponent>`

    Raises:
        DomainError: unknown selector or malformed argument.
    '''
    dim = Dimension.of(dimension)
    kind, _, argument = text.partition(':')
    try:
        if kind == 'zero':
            return BoundaryData.zero(dim, model)
        if kind == 'constant':
            return BoundaryData.constant(float(argument or 1.0), dim, model)
        if kind == 'bump':
            return BoundaryData.bump(np.zeros(dim.n), float(argument or 1.0), dim)
        if kind == 'gaussian':
            return BoundaryData.gaussian(np.zeros(dim.n), float(argument or 1.0), dim)
        if kind == 'rational':
            return BoundaryData.rational(np.zeros(dim.n), float(argument), dim)
        if kind == 'coordinate':
            return BoundaryData.coordinate(int(argument or 0), dim)
        if kind == 'csv':
            path, _, decay = argument.rpartition(':')
            return BoundaryData.from_csv(path, float(decay), dim)
    except ValueError as e:
        raise DomainError(f"Malformed data selector '{text}': {e}") from e
    raise DomainError(f"Unknown data selector '{text}'")


def finish(report: SuiteReport, config: RunConfig, write_default: bool = False) -> None:
    '''
    Print the summary, write the report when an output path is set (or `write_default` asks for
    the report directory), list failures and exit 1 when any check failed.
    '''
    print(report.summary())
    path = config.output or (default_report_path(report.suite, config.format) if write_default else None)
    if path is not None:
        emit_report(report, path, config.format)
    if report.failures:
        print('failing checks:')
        for record in report.failures:
            print(f"  {record.id}: value={record.value} tolerance={record.tolerance} ({record.paper_ref})")
        sys.exit(1)
