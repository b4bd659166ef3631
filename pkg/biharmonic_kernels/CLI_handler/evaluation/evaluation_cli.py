import dataclasses

import click
import numpy as np

from biharmonic_kernels.CLI_handler.common import as_point, common_options, data_from_spec, finish, run_config
from biharmonic_kernels.classification.bubbles import bubble_bvp_residual, random_boundary_points, random_half_space_points
from biharmonic_kernels.extremal.functions import RATIO_KINDS, T3_NORMALIZATIONS, sampled_inequality
from biharmonic_kernels.extremal.sharp_constants import constants_table, d_n_monotonicity
from biharmonic_kernels.geometry.points import BubbleParams, Dimension
from biharmonic_kernels.green.green_functions import GreenSpec, green_symmetry_residual, green_value
from biharmonic_kernels.kernels.poisson import KernelSpec, poisson_kernel
from biharmonic_kernels.ode.cylinder import OdeParams
from biharmonic_kernels.ode.shooting import free_datum_of_bubble, uniqueness_scan
from biharmonic_kernels.reports.report import CheckRecord, SuiteReport, save_table
from biharmonic_kernels.solver.asymptotics import KINDS, REGIMES, decay_asymptotics_fit
from biharmonic_kernels.solver.poisson_integrals import poisson_integral_result
from biharmonic_kernels.src.utils import handle_exception, parse_point
"""
# Evaluation CLI

Single evaluations of the closed forms and the numerical layers. Every command prints a summary
table, writes the report to -o/--output when given and exits 1 when one of its checks fails.

## Commands

- `kernel-eval`: Poisson kernel P_k at (p, q). `py main.py kernel-eval --k 0 --n 4 --point 0,0,0,0,1`
- `green-eval`: Green function G^(i,j)(P, Q) and its symmetry. `py main.py green-eval --pair 0,2 --point ... --source ...`
- `solve`: Poisson integral of boundary data. `py main.py solve --pair 0,2 --f-i constant:1 --point 0,0,0,0,1`
- `decay-fit`: far-field slope of the singular integrals. `py main.py decay-fit --kind lemma-2 --exponent 1`
- `bubble-check`: bubble residuals for a boundary pair. `py main.py bubble-check --pair 1,3`
- `constants`: d_n, e_n table. `py main.py constants --n 4 --n-max 8`
- `ode`: uniqueness scan of the cylinder ODE. `py main.py ode --boundary 1 --T 3 --T 5 --T 8`
- `inequality`: sampled sharp inequality. `py main.py inequality --kind isoperimetric`
"""

MODELS = ('halfspace', 'ball')


def _default_source(model: str, n: int) -> np.ndarray:
    """Origin of R^n for the half-space, the north pole for the ball."""
    return np.zeros(n) if model == 'halfspace' else np.eye(n + 1)[-1]


# _____________________________________________________kernel_eval_cli_section_________________________________________
@click.command(name='kernel-eval', help="Evaluate the Poisson kernel P_k at an interior point and a boundary point.")
@click.option('--model', type=click.Choice(MODELS), default='halfspace', show_default=True)
@click.option('--k', 'k', type=click.IntRange(0, 3), required=True, help='Kernel index.')
@click.option('--point', type=str, required=True, help='Interior point, comma separated.')
@click.option('--source', type=str, default=None, help='Boundary point; origin or north pole by default.')
@click.option('--log-constant', type=float, default=0.0, help='Free constant of the n = 3 kernel P_3.')
@common_options
@handle_exception
def kernel_eval(model, k, point, source, log_constant, **flags):
    """
        Prints P_k(p, q) for the selected model.

        Args:
            model (str): 'halfspace' or 'ball'.
            k (int): kernel index 0..3.
            point (str): interior point.
            source (str): boundary point.

        Returns:
            None
    """
    config = run_config(**flags)
    spec = KernelSpec(k, model, config.n, log_constant)
    p = as_point(point)
    q = as_point(source, _default_source(model, config.n))
    value = poisson_kernel(spec, p, q)
    report = SuiteReport('kernel-eval', config.seed, config.workers, config.as_dict(),
                         header={'model': model, 'k': k, 'point': p.tolist(), 'source': q.tolist()})
    report.add(CheckRecord.info(f'kernel.P{k}', f'P_{k}(p, q) on the {model}', value))
    finish(report, config)


# _____________________________________________________green_eval_cli_section__________________________________________
@click.command(name='green-eval', help="Evaluate the Green function G^(i,j)(P, Q) and check its symmetry.")
@click.option('--pair', type=str, required=True, help="Operator pair, e.g. '0,2'.")
@click.option('--model', type=click.Choice(MODELS), default='halfspace', show_default=True)
@click.option('--point', type=str, required=True, help='First point P.')
@click.option('--source', type=str, required=True, help='Second point Q.')
@click.option('--log-constant', type=float, default=0.0, help='Free constant of the n = 3 pairs (1,3), (2,3).')
@common_options
@handle_exception
def green_eval(pair, model, point, source, log_constant, **flags):
    config = run_config(**flags)
    spec = GreenSpec(pair, model, config.n, log_constant)
    P, Q = as_point(point), as_point(source)
    report = SuiteReport('green-eval', config.seed, config.workers, config.as_dict(),
                         header={'pair': str(spec.pair), 'model': model, 'point': P.tolist(), 'source': Q.tolist()})
    report.add(CheckRecord.info('green.value', f'G^{spec.pair}(P, Q)', green_value(spec, P, Q)))
    report.add(CheckRecord.within('green.symmetry', 'G(P, Q) = G(Q, P)', green_symmetry_residual(spec, P, Q), 1e-12))
    finish(report, config)


# _____________________________________________________solve_cli_section_______________________________________________
@click.command(name='solve', help="Evaluate the Poisson integral U = P_i * f_i + P_j * f_j at a point.")
@click.option('--pair', type=str, required=True, help="Operator pair, e.g. '0,2'.")
@click.option('--model', type=click.Choice(MODELS), default='halfspace', show_default=True)
@click.option('--point', type=str, required=True, help='Interior point.')
@click.option('--f-i', 'f_i', type=str, default='zero', show_default=True,
              help="Data for B_i: zero, constant:<v>, bump:<r>, gaussian:<w>, rational:<a>, coordinate:<i>, csv:<path>:<a>.")
@click.option('--f-j', 'f_j', type=str, default='zero', show_default=True, help='Data for B_j, same selectors.')
@click.option('--log-constant', type=float, default=0.0)
@common_options
@handle_exception
def solve(pair, model, point, f_i, f_j, log_constant, **flags):
    config = run_config(**flags)
    data_i, data_j = data_from_spec(f_i, config.n, model), data_from_spec(f_j, config.n, model)
    p = as_point(point)
    result = poisson_integral_result(pair, data_i, data_j, p, config.quadrature, log_constant)
    report = SuiteReport('solve', config.seed, config.workers, config.as_dict(),
                         header={'pair': pair, 'model': model, 'point': p.tolist(), 'f_i': f_i, 'f_j': f_j,
                                 'quadrature': result._asdict()})
    report.add(CheckRecord.info('solve.value', 'U(p) = (P_i * f_i + P_j * f_j)(p)', result.value))
    report.add(CheckRecord.info('solve.error_estimate', 'quadrature error estimate', result.error))
    finish(report, config)


# _____________________________________________________decay_fit_cli_section___________________________________________
@click.command(name='decay-fit', help="Fit the far-field slope of the singular integrals v and w.")
@click.option('--kind', type=click.Choice(KINDS), default='lemma-2', show_default=True)
@click.option('--exponent', type=float, required=True, help='alpha for lemma-1, beta for lemma-2.')
@click.option('--decay', type=float, default=None, help='Decay exponent of the data; 2n by default.')
@click.option('--data', type=str, default='gaussian:1', show_default=True, help='Half-space data selector.')
@click.option('--radii', type=str, default='10,30,100', show_default=True, help='Comma separated radii |X|.')
@click.option('--regime', type=click.Choice(tuple(REGIMES)), default='vertical', show_default=True)
@click.option('--slope-tol', type=float, default=0.1, show_default=True)
@common_options
@handle_exception
def decay_fit(kind, exponent, decay, data, radii, regime, slope_tol, **flags):
    config = run_config(**flags)
    n = config.n
    decay = 2.0 * n if decay is None else decay
    fit = decay_asymptotics_fit(kind, (exponent, decay, n), data_from_spec(data, n), parse_point(radii),
                                config.quadrature, regime)
    report = SuiteReport('decay-fit', config.seed, config.workers, config.as_dict(),
                         header={'kind': kind, 'exponent': exponent, 'decay': decay, 'data': data, 'regime': regime})
    report.add(CheckRecord.info('decay.fitted_slope', 'log-log slope', fit.fitted_slope))
    report.add(CheckRecord.info('decay.predicted_slope', 'predicted slope', fit.predicted_slope))
    report.add(CheckRecord.within('decay.slope_error', 'fitted slope matches the predicted one', fit.slope_error, slope_tol))
    if fit.log_coefficient is not None:
        report.add(CheckRecord.info('decay.log_coefficient', 'coefficient of the log |X| correction', fit.log_coefficient))
    finish(report, config)


# _____________________________________________________bubble_check_cli_section________________________________________
@click.command(name='bubble-check', help="Residuals of the bubble U_{x0,eps} for a boundary pair (i,j).")
@click.option('--pair', type=str, default='1,3', show_default=True, help="Pair (i,j) with 1 <= i < j <= 3.")
@click.option('--eps', type=float, default=1.0, show_default=True)
@click.option('--x0', type=str, default=None, help='Bubble centre in R^n; origin by default.')
@click.option('--samples', type=int, default=3, show_default=True, help='Interior and boundary samples.')
@click.option('--exact/--stencil', 'use_exact', default=True, help='Exact derivatives or difference stencils.')
@common_options
@handle_exception
def bubble_check(pair, eps, x0, samples, use_exact, **flags):
    config = run_config(**flags)
    dim = Dimension.of(config.n)
    i, j = (int(c) for c in pair if c.isdigit())
    params = BubbleParams.half_space(as_point(x0, np.zeros(dim.n)), eps, dim)
    rng = np.random.default_rng(config.seed)
    residuals = bubble_bvp_residual(i, j, params, random_half_space_points(dim, samples, rng),
                                    random_boundary_points(dim, samples, rng), config.stencil, use_exact)
    report = SuiteReport('bubble-check', config.seed, config.workers, config.as_dict(),
                         header={'pair': [i, j], 'eps': eps, 'x0': list(params.x0)})
    for name, r in zip(('interior', f'B{i}', f'B{j}'), residuals):
        report.add(CheckRecord.within(f'bubble.{name}', f'bubble solves the ({i},{j}) problem', r.value, r.tolerance))
    finish(report, config)


# _____________________________________________________constants_cli_section___________________________________________
@click.command(name='constants', help="Sharp constants d_n and e_n with the profile integral I(n).")
@click.option('--n-max', type=int, default=None, help='Tabulate n, n+1, ..., n-max.')
@common_options
@handle_exception
def constants(n_max, **flags):
    """
        Prints the rows (n, I, d_n, e_n, error); -o with a .csv or .json name exports the table.
    """
    config = run_config(**flags)
    rows = constants_table(n_max or config.n, config.n, config.quadrature)
    report = SuiteReport('constants', config.seed, config.workers, config.as_dict(), header={'rows': rows})
    for row in rows:
        report.add(CheckRecord.info(f"constants.I{row['n']}", 'I(n)', row['I']))
        report.add(CheckRecord.info(f"constants.d{row['n']}", 'd_n', row['d_n']))
        report.add(CheckRecord.info(f"constants.e{row['n']}", 'e_n', row['e_n']))
    report.add(CheckRecord.info('constants.d_n_monotonicity', 'd_n along n', d_n_monotonicity(rows)))
    print(report.summary())
    if config.output:
        save_table(rows, config.output)


# _____________________________________________________ode_cli_section_________________________________________________
@click.command(name='ode', help="Scan the free initial datum of the cylinder ODE for the transformed bubble data.")
@click.option('--boundary', 'i', type=click.IntRange(1, 2), default=1, show_default=True, help='Pair (i,3), i = 1 or 2.')
@click.option('--eps', type=float, default=1.0, show_default=True, help='Bubble scale giving the boundary values.')
@click.option('--T', 'heights', type=float, multiple=True, default=(3.0, 5.0, 8.0), show_default=True)
@click.option('--grid-size', type=int, default=41, show_default=True)
@click.option('--free-range', type=str, default=None, help="'lo,hi'; the true datum +- 1 by default.")
@common_options
@handle_exception
def ode(i, eps, heights, grid_size, free_range, **flags):
    """
        Runs one scan per T and checks that each admissible set contains the true datum. -o with a
        .csv or .json name exports the scan table.
    """
    config = run_config(**flags)
    params = OdeParams(config.n)
    boundary, state, truth = free_datum_of_bubble(params, i, eps)
    lo, hi = parse_point(free_range) if free_range else (truth - 1.0, truth + 1.0)
    report = SuiteReport('ode', config.seed, config.workers, config.as_dict(),
                         header={'boundary': dataclasses.asdict(boundary), 'true_free_datum': truth})
    rows = []
    for T in heights:
        scan = uniqueness_scan(params, boundary, (lo, hi), T, grid_size, reference=state, workers=config.workers)
        rows.extend({'T': T, **row} for row in scan.table())
        report.add(CheckRecord.info(f'ode.width_T{T:g}', 'admissible width', scan.width))
        report.add(CheckRecord.holds(f'ode.contains_T{T:g}', 'admissible set contains the true datum',
                                     scan.width, scan.contains(truth, 1e-6)))
    if config.output:
        save_table(rows, config.output)
        config = dataclasses.replace(config, output=None)
    finish(report, config)


# _____________________________________________________inequality_cli_section__________________________________________
@click.command(name='inequality', help="Compare the extremal ratio with seeded admissible competitors.")
@click.option('--kind', type=click.Choice(RATIO_KINDS), default='isoperimetric', show_default=True)
@click.option('--count', type=int, default=4, show_default=True)
@click.option('--amplitude', type=float, default=0.05, show_default=True)
@common_options
@handle_exception
def inequality(kind, count, amplitude, **flags):
    config = run_config(**flags)
    best, competitors = sampled_inequality(kind, config.n, count, config.quadrature, config.seed, amplitude)
    report = SuiteReport('inequality', config.seed, config.workers, config.as_dict(),
                         header={'kind': kind, 'normalizations': list(T3_NORMALIZATIONS)})
    report.add(CheckRecord.info('inequality.extremal', f'{kind} ratio of U_0', best))
    for index, ratio in enumerate(competitors):
        report.add(CheckRecord.holds(f'inequality.competitor_{index}', 'ratio(U) <= ratio(U_0)', ratio,
                                     ratio <= best * (1.0 + 1e-6)))
    finish(report, config)
