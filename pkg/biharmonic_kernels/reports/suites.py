"""
Named verification suites. Each suite composes module checks into `CheckRecord`s; `run_suite` wraps
them in a `SuiteReport`. Samples come from `numpy.random.default_rng(config.seed)` so a suite run is
reproducible from its config.
"""
from __future__ import annotations

import time
from typing import Callable

import numpy as np

from biharmonic_kernels.classification.bubbles import (
    bubble_bvp_residual, bubble_correspondence_residual, bubble_field, bubble_values, random_boundary_points,
    random_half_space_points)
from biharmonic_kernels.classification.families import SingularSolutionParams, homogeneous_family_check, singular_solution_check
from biharmonic_kernels.classification.profiles import ClassificationCase, classification_identity_check, m_profile_decay_fit
from biharmonic_kernels.extremal.functions import (
    ExtremalParams, extremal_eval_and_check, extremal_field, ratio_eval, transported_extremal_residual)
from biharmonic_kernels.extremal.sharp_constants import (
    constants_table, d_n_monotonicity, geodesic_ball_curvatures, q_curvature_sphere, sharp_constants)
from biharmonic_kernels.geometry.conformal import conformal_map_F, distance_identity_residual, kelvin_field
from biharmonic_kernels.geometry.points import BubbleParams, Dimension
from biharmonic_kernels.green.green_functions import (
    WELL_POSED_PAIRS, GreenSpec, boggio_integral_residual, conformal_correspondence_check, green_symmetry_residual,
    ordering_check, regular_part_bilaplacian, regular_part_residual)
from biharmonic_kernels.kernels.fundamental import kernel_branch_relations, kernel_operator_relation
from biharmonic_kernels.kernels.poisson import KernelSpec, halfspace_kernel, kernel_mass, poisson_kernel
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.ode.cylinder import OdeParams, explicit_state
from biharmonic_kernels.ode.integration import integrate_cascade, integrate_ode, normalization_scaling_residual
from biharmonic_kernels.ode.shooting import explicit_solution_check, free_datum_of_bubble, uniqueness_scan
from biharmonic_kernels.operators.boundary import BoundaryOperatorId, apply_operator, biharmonic_residual, boundary_residual, operator_values
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.reports.report import CheckRecord, SuiteReport
from biharmonic_kernels.solver.asymptotics import decay_asymptotics_fit
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.gjms import gjms_trace_check
from biharmonic_kernels.solver.green_formula import comparison_check, solve_and_roundtrip
from biharmonic_kernels.solver.limits import boundary_limit_check, hopf_probe
from biharmonic_kernels.solver.poisson_integrals import poisson_integral, transport_check
from biharmonic_kernels.src.config import RunConfig
from biharmonic_kernels.src.exceptions import DomainError

SUITE_NAMES = ('geometry', 'operators', 'kernels', 'green', 'solver', 'classification', 'extremal', 'ode')
ALL = 'all'
IDENTITY_TOL = 1e-10


def _ball_points(dim: Dimension, count: int, rng: np.random.Generator, radius: float = 0.9) -> np.ndarray:
    P = rng.standard_normal((count, dim.ambient))
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    return P * radius * rng.uniform(0.1, 1.0, count)[:, None]


def _skipped(suite: str, n: int, reason: str) -> list[CheckRecord]:
    return [CheckRecord.info(f'{suite}.skipped', reason, f'n = {n}')]


# ____________________________________________geometry_section____________________________________________________


def geometry_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    rng = np.random.default_rng(config.seed)
    xi, eta = _ball_points(dim, 20, rng), _ball_points(dim, 20, rng)
    residuals = np.array([distance_identity_residual(a, b) for a, b in zip(xi, eta)])
    images = conformal_map_F(_ball_points(dim, 20, rng))

    u = ScalarField.from_expression(lambda z: z[-1] * sum(s ** 2 for s in z), dim, 'halfspace', name='t|X|^2')
    kelvin = kelvin_field(u, dim)
    kelvin_residual = max((biharmonic_residual(kelvin, X) for X in random_half_space_points(dim, 3, rng)),
                          key=lambda r: abs(r.value) - r.tolerance)
    return [
        CheckRecord.within('geometry.conformal_distance', '|F(xi) - F(eta)| = 2|xi - eta|/(|xi + e||eta + e|)',
                           residuals[:, 0].max(), IDENTITY_TOL),
        CheckRecord.within('geometry.reflected_distance', '2|xi||xi* - eta| = |xi + e||eta + e||X-bar - Y|',
                           residuals[:, 1].max(), IDENTITY_TOL),
        CheckRecord.within('geometry.extended_distance', '|xi|^2|xi* - eta|^2 = |xi - eta|^2 + (1-|xi|^2)(1-|eta|^2)',
                           residuals[:, 2].max(), IDENTITY_TOL),
        CheckRecord.holds('geometry.F_into_halfspace', 'F maps the open ball into the open half-space',
                          images[:, -1].min(), bool(np.all(images[:, -1] > 0))),
        CheckRecord.within('geometry.kelvin_biharmonic', 'Kelvin transform preserves biharmonicity',
                           kelvin_residual.value, kelvin_residual.tolerance),
    ]


# ____________________________________________operators_section___________________________________________________


def operators_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    rng = np.random.default_rng(config.seed)
    s = config.stencil
    t = ScalarField.from_expression(lambda z: z[-1], dim, 'halfspace', name='t')
    records = [CheckRecord.within('operators.B1_of_t', 'B_1 t = -1', apply_operator(BoundaryOperatorId(1), t, np.zeros(dim.ambient)) + 1.0,
                                  1e-8)]

    quartic = ScalarField(lambda P: P[..., -1] * np.sum(P * P, axis=-1), dim, 'halfspace', name='t|X|^2')
    interior = max((biharmonic_residual(quartic, X, s, use_exact=False) for X in random_half_space_points(dim, 3, rng)),
                   key=lambda r: abs(r.value) - r.tolerance)
    records.append(CheckRecord.within('operators.stencil_bilaplacian', 'Delta^2 (t|X|^2) = 0',
                                      interior.value, interior.tolerance))

    if dim.n >= 4:
        params = BubbleParams.half_space(np.zeros(dim.n), 1.0, dim)
        exact = bubble_field(params)
        sampled = ScalarField(lambda P: bubble_values(params, P), dim, 'halfspace', name='bubble_samples')
        y = random_boundary_points(dim, 2, rng, spread=1.0)
        for k in (1, 2, 3):
            op = BoundaryOperatorId(k)
            worst = max((boundary_residual(op, sampled, p, float(operator_values(op, exact, p[None, :])[0]), s) for p in y),
                        key=lambda r: abs(r.value) - r.tolerance)
            records.append(CheckRecord.within(f'operators.stencil_B{k}', f'stencil B_{k} agrees with exact B_{k}',
                                              worst.value, worst.tolerance))
    return records


# ____________________________________________kernels_section_____________________________________________________


def kernels_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    n = dim.n
    rng = np.random.default_rng(config.seed)
    X = random_half_space_points(dim, 10, rng)
    y = random_boundary_points(dim, 10, rng)[:, :-1]
    records = []
    for k in range(4):
        worst = max(kernel_operator_relation(k, dim, a, b).residual for a, b in zip(X, y))
        records.append(CheckRecord.within(f'kernels.relation_B{k}', f'B_{k} Gamma(X - .) = +-P_{3 - k}/2 on the boundary',
                                          worst, IDENTITY_TOL))
    for name in ('dt_P3_equals_P2', 'B2_P3_equals_minus_P1', 'B3_P3_equals_P0'):
        worst = max(kernel_branch_relations(dim, a, b)[name].residual for a, b in zip(X, y))
        records.append(CheckRecord.within(f'kernels.{name}', name.replace('_', ' '), worst, IDENTITY_TOL))
    spec = KernelSpec(0, 'halfspace', dim)
    for height in (0.01, 1.0, 10.0):
        records.append(CheckRecord.within(f'kernels.P0_mass_t{height:g}', 'int P_0(x, t) dx = 1',
                                          kernel_mass(spec, height) - 1.0, 1e-8))
    for k in range(4):
        field = ScalarField(lambda P, k=k: halfspace_kernel(k, n, np.linalg.norm(P[..., :-1], axis=-1), P[..., -1]),
                            dim, 'halfspace', name=f'P{k}')
        worst = max((biharmonic_residual(field, point, config.stencil, use_exact=False) for point in X[:3]),
                    key=lambda r: abs(r.value) - r.tolerance)
        records.append(CheckRecord.within(f'kernels.P{k}_biharmonic', f'Delta^2 P_{k} = 0 in the half-space',
                                          worst.value, worst.tolerance))
    if n == 4:
        value = poisson_kernel(spec, [0, 0, 0, 0, 1.0], [0, 0, 0, 0])
        records.append(CheckRecord.within('kernels.P0_closed_form', 'P_0((0, 1)) = 2(n+1)/|S^n| at n = 4',
                                          value - 10.0 / (8.0 * np.pi ** 2 / 3.0), 1e-12))
    return records


# ____________________________________________green_section_______________________________________________________


def green_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    rng = np.random.default_rng(config.seed)
    P, Q = random_half_space_points(dim, 10, rng), random_half_space_points(dim, 10, rng)
    xi, eta = _ball_points(dim, 10, rng), _ball_points(dim, 10, rng)
    records = []
    for pair in WELL_POSED_PAIRS:
        label = f'{pair[0]}{pair[1]}'
        symmetric = max(max(green_symmetry_residual(GreenSpec(pair, 'halfspace', dim), a, b) for a, b in zip(P, Q)),
                        max(green_symmetry_residual(GreenSpec(pair, 'ball', dim), a, b) for a, b in zip(xi, eta)))
        records.append(CheckRecord.within(f'green.symmetry_{label}', 'G(X, Y) = G(Y, X)', symmetric, 1e-12))
        regular = regular_part_residual(GreenSpec(pair, 'halfspace', dim), Q[0], np.append(P[0][:-1], 0.0), config.stencil)
        for name, residual in zip(pair, regular):
            records.append(CheckRecord.within(f'green.regular_part_{label}_B{name}', f'B_{name}(Gamma + H) = 0 on the boundary',
                                              residual.value, residual.tolerance))
        biharmonic = regular_part_bilaplacian(GreenSpec(pair, 'halfspace', dim), Q[0], P[1], config.stencil)
        records.append(CheckRecord.within(f'green.regular_part_{label}_biharmonic', 'Delta^2 H = 0 in the interior',
                                          biharmonic.value, biharmonic.tolerance))
        if not dim.critical or pair[1] != 3:
            worst = max(conformal_correspondence_check(pair, a, b, dim).residual for a, b in zip(xi, eta))
            records.append(CheckRecord.within(f'green.conformal_{label}', 'ball Green function = transported half-space one',
                                              worst, 1e-9))
    boggio = max(boggio_integral_residual(a, b, dim).residual for a, b in zip(P, Q))
    records.append(CheckRecord.within('green.boggio_integral', 'G^(0,1) integral representation', boggio, 1e-9))
    if dim.n >= 4:
        results = [ordering_check(a, b, dim) for a, b in zip(P, Q)]
        records.append(CheckRecord.holds('green.ordering', '0 <= G01 <= G02 <= G13 <= G23',
                                         sum(r.ordered for r in results), all(r.ordered for r in results)))
    return records


# ____________________________________________solver_section______________________________________________________


def solver_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    n = dim.n
    q = config.quadrature
    records = []
    one = BoundaryData.constant(1.0, dim)
    value = poisson_integral((0, 2), one, BoundaryData.zero(dim), np.append(np.zeros(n), 1.0), q)
    records.append(CheckRecord.within('solver.constant_data', 'P_0 * 1 = 1', value - 1.0, 1e-5))

    bump = BoundaryData.bump(np.zeros(n), 1.0, dim)
    x = np.full(n, 0.2)
    limit = boundary_limit_check((0, 1), bump, BoundaryData.zero(dim), x, q=q)
    records.append(CheckRecord.within('solver.trace_B0', 'lim B_0 U = f_0', limit.trace_i.value - float(bump(x)), 1e-4))
    records.append(CheckRecord.within('solver.trace_B1', 'lim B_1 U = f_1 = 0', limit.trace_j.value, 1e-4))
    records.append(CheckRecord.within('solver.P0_derivative_limit', 'lim d/dt (P_0 * f) = 0', limit.derivative_probe.value, 1e-4))
    # outside the bump support the harmonic extension has a strictly positive normal derivative
    hopf = hopf_probe(bump, np.full(n, 2.0), q=q)
    records.append(CheckRecord.holds('solver.hopf_probe', 'lim d/dt (P * f) > 0 off the support of f >= 0',
                                     hopf.value, hopf.value > 0.0))

    fit = decay_asymptotics_fit('lemma-2', (1.0, 2.0 * n, n), BoundaryData.gaussian(np.zeros(n), 1.0, dim),
                                (10.0, 30.0, 100.0), q)
    records.append(CheckRecord.within('solver.decay_fit', 'w(X) = O(|X|^{-min(b, n)})', fit.slope_error, 0.1))

    if not dim.critical:
        gjms = gjms_trace_check(BoundaryData.coordinate(0, dim), np.eye(dim.ambient)[0], q)
        records.append(CheckRecord.within('solver.gjms_trace', 'trace of the (1,3) extension = P_3 * f3', gjms.residual, 1e-4))
        ball_one, ball_zero = BoundaryData.constant(1.0, dim, 'ball'), BoundaryData.zero(dim, 'ball')
        transport = transport_check((0, 2), ball_one, ball_zero, np.append(np.full(n, 0.3), 0.7), q)
        records.append(CheckRecord.within('solver.transport', 'ball Poisson integral = transported half-space one',
                                          transport.residual, 1e-5))
    if n >= 4:
        rng = np.random.default_rng(config.seed)
        minimum = comparison_check((0, 1), None, BoundaryData.constant(1.0, dim, 'ball'), BoundaryData.zero(dim, 'ball'),
                                   _ball_points(dim, 3, rng), q, seed=config.seed)
        records.append(CheckRecord.holds('solver.comparison', 'U >= 0 for data of the right signs', minimum, minimum >= -1e-6))
        manufactured = ScalarField.from_expression(lambda z: 1 + z[-1] + z[-1] ** 2, dim, 'ball', name='zonal_quadratic',
                                                   axis=np.eye(dim.ambient)[-1])
        roundtrip = solve_and_roundtrip((0, 2), manufactured, q, _ball_points(dim, 1, rng, 0.5))
        records.append(CheckRecord.within('solver.green_formula_roundtrip', 'U = G * Delta^2 U + P_0 * U + P_2 * B_2 U',
                                          roundtrip, 1e-4))
    return records


# ____________________________________________classification_section______________________________________________


def classification_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    if dim.n < 4:
        return _skipped('classification', dim.n, 'classification requires n >= 4')
    rng = np.random.default_rng(config.seed)
    n = dim.n
    params = BubbleParams.half_space(np.zeros(n), 1.0, dim)
    interior = random_half_space_points(dim, 3, rng, spread=1.0)
    boundary = random_boundary_points(dim, 3, rng, spread=1.0)
    records = []
    for i, j in ((1, 3), (1, 2), (2, 3)):
        residuals = bubble_bvp_residual(i, j, params, interior, boundary, config.stencil)
        for name, r in zip(('interior', f'B{i}', f'B{j}'), residuals):
            records.append(CheckRecord.within(f'classification.bubble_{i}{j}_{name}', f'bubble solves the ({i},{j}) problem',
                                              r.value, r.tolerance))
    ball = bubble_bvp_residual(1, 3, BubbleParams.ball(np.zeros(dim.ambient), dim), _ball_points(dim, 2, rng),
                               random_boundary_points(dim, 2, rng, 'ball'), config.stencil)
    records.append(CheckRecord.holds('classification.ball_bubble_centre', 'U_0 = 1 solves the ball problem',
                                     max(abs(r.value) for r in ball), ball.passed))
    correspondence = max(bubble_correspondence_residual(params, X) for X in interior)
    records.append(CheckRecord.within('classification.bubble_correspondence', 'U_0(X) U_xi0(F(X)) = U_{x0,eps}(X)',
                                      correspondence, IDENTITY_TOL))

    singular = singular_solution_check(SingularSolutionParams(1, 2, np.zeros(dim.ambient), 1.0, dim),
                                       _ball_points(dim, 2, rng, 0.5), [np.eye(dim.ambient)[0]], config.stencil)
    for name, r in zip(('interior', 'B1', 'B2'), singular):
        records.append(CheckRecord.within(f'classification.singular_12_{name}', 'boundary-singular family solves (1,2)',
                                          r.value, r.tolerance))
    for family in ('c1t', 'c2t2', 'c3t3', 'tP2'):
        result = homogeneous_family_check(family, dim, boundary, interior)
        records.append(CheckRecord.holds(f'classification.family_{family}', f'{family} solves {result.conditions} = 0',
                                         max(result.boundary), result.passed(1e-9)))
    case = ClassificationCase.critical('M1', params)
    deviation = classification_identity_check(case, interior[:2], config.quadrature)
    records.append(CheckRecord.within('classification.M1_identity', 'M1 = U_{x0,eps} at critical exponents', deviation, 1e-3))
    fit = m_profile_decay_fit(case, (20.0, 60.0, 200.0), config.quadrature)
    records.append(CheckRecord.within('classification.M1_decay', 'M1(0, R) = O(R^{3-n})', fit.slope_error, 0.1))
    return records


# ____________________________________________extremal_section____________________________________________________


def extremal_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    if dim.n < 4:
        return _skipped('extremal', dim.n, 'extremal functions require n >= 4')
    rng = np.random.default_rng(config.seed)
    q = config.quadrature
    constants = sharp_constants(dim, q)
    centre = ExtremalParams(np.zeros(dim.ambient), dim)
    U0 = extremal_field(centre)
    records = [
        CheckRecord.within('extremal.isoperimetric_U0', 'ratio(U_0) = d_n',
                           ratio_eval('isoperimetric', U0, q) - constants.d_n, 1e-4),
        CheckRecord.within('extremal.t3_operator_U0', 'T_3 ratio of U_0 = e_n with T_3 = B_3 U U^{-p3*}',
                           ratio_eval('t3ratio', U0, q, t3_normalization='operator') - constants.e_n, 1e-4),
        CheckRecord.info('extremal.t3_curvature_U0', 'T_3 ratio of U_0 with T_3 = 2/(n-3) B_3 U U^{-p3*}',
                         ratio_eval('t3ratio', U0, q, t3_normalization='curvature')),
    ]
    check = extremal_eval_and_check(centre, np.zeros(dim.ambient), s=config.stencil)
    records.append(CheckRecord.within('extremal.U0_value', 'U_0(0) = 1 + (n-3)/4', check.value - (1.0 + (dim.n - 3) / 4), 1e-12))
    records.append(CheckRecord.within('extremal.U0_B1', 'B_1 U_0 = 0', check.boundary.value, check.boundary.tolerance))
    a = _ball_points(dim, 1, rng, 0.5)[0]
    worst = max(transported_extremal_residual(ExtremalParams(a, dim), xi) for xi in _ball_points(dim, 5, rng))
    records.append(CheckRecord.within('extremal.transported', 'U_a = A^{(n-3)/2} U_0 o psi_a', worst, IDENTITY_TOL))
    rows = constants_table(min(dim.n + 2, 10), 4, q)
    records.append(CheckRecord.info('extremal.d_n_monotonicity', 'd_n along n', d_n_monotonicity(rows)))
    return records


# ____________________________________________ode_section_________________________________________________________

SCAN_HEIGHTS = (3.0, 5.0, 8.0)


def ode_suite(config: RunConfig) -> list[CheckRecord]:
    dim = Dimension.of(config.n)
    if dim.n < 4:
        return _skipped('ode', dim.n, 'the cylinder reduction requires n >= 4')
    n = dim.n
    params = OdeParams(n)
    bar = params.fixed_point
    records = []

    constant = integrate_ode(params, [bar, 0.0, 0.0, 0.0], 50.0)
    records.append(CheckRecord.within('ode.fixed_point', 'constant solution zerothCoeff V = V^{p*}',
                                      float(np.max(np.abs(constant.states - [bar, 0.0, 0.0, 0.0]))), 1e-9))

    grid = np.linspace(0.0, 4.0, 41)
    bubble = integrate_ode(params, explicit_state(params, 1.0, 0.0), 4.0, rtol=1e-12, atol=1e-12, t_eval=grid)
    closed = explicit_state(params, 1.0, bubble.t)[0]
    records.append(CheckRecord.within('ode.explicit_bubble', 'V = c sech(t + log eps)^{(n-3)/2}',
                                      float(np.max(np.abs(bubble.V - closed))), 1e-6))

    grid = np.linspace(0.0, 3.0, 31)
    start = explicit_state(params, 1.0, 0.0)
    direct = integrate_ode(params, start, 3.0, t_eval=grid)
    cascade = integrate_cascade(params, start, 3.0, t_eval=grid)
    records.append(CheckRecord.within('ode.cascade', '(d^2 - mu)(d^2 - lambda) V = V^{p*}',
                                      float(np.max(np.abs(direct.V - cascade.V))), 1e-6))
    records.append(CheckRecord.within('ode.normalization_scaling', 'kappa^{(n-3)/8} V solves the unit equation',
                                      normalization_scaling_residual(n), 1e-6))

    for eps in (1.0, 2.0):
        for i in (1, 2):
            report = explicit_solution_check(eps, n, i)
            tag = f'eps{eps:g}_i{i}'
            records.append(CheckRecord.within(f'ode.explicit_{tag}_pde', 'Delta^2 U = ((n-3)/2) Q U^{p*}',
                                              report.pde_residual, 1e-8 * max(1.0, _forcing_scale(n))))
            records.append(CheckRecord.within(f'ode.explicit_{tag}_c{i}', f'c_{i} closed form', report.boundary_residuals[0], 1e-8))
            records.append(CheckRecord.within(f'ode.explicit_{tag}_c3', 'c_3 closed form', report.boundary_residuals[1], 1e-8))
            records.append(CheckRecord.within(f'ode.explicit_{tag}_constraint', 'c3 relation', report.constraint_residual, 1e-8))
            if i == 2:
                records.append(CheckRecord.info(f'ode.explicit_{tag}_printed', 'c3^2 = (c2 - 1/2)(1 + c2)',
                                                report.printed_constraint_residual))
            records.append(CheckRecord.within(f'ode.explicit_{tag}_geodesic', 'geodesic ball T-curvatures',
                                              report.geodesic_residual, 1e-10))

    boundary, state, truth = free_datum_of_bubble(params, 1)
    widths, resolved = [], []
    for T in SCAN_HEIGHTS:
        scan = uniqueness_scan(params, boundary, (truth - 1.0, truth + 1.0), T, grid_size=21, reference=state,
                               workers=config.workers)
        widths.append(scan.width)
        resolved.append(scan.resolved)
        records.append(CheckRecord.holds(f'ode.scan_T{T:g}_contains', 'admissible set contains the true datum',
                                         scan.width, scan.contains(truth, 1e-6)))
    records.append(CheckRecord.holds('ode.scan_shrinks', 'admissible width decreases in T', widths[-1],
                                     all(resolved) and all(b <= a for a, b in zip(widths, widths[1:]))))
    records.append(CheckRecord.within('ode.scan_width_T8', 'admissible width at T = 8', widths[-1], 1e-3))
    return records


def _forcing_scale(n: int) -> float:
    """Size of ((n-3)/2) Q U^{p*} at the centre of the eps = 1 bubble."""
    return (n - 3) / 2 * q_curvature_sphere(n) * 2.0 ** ((n + 5) / 2)


SUITES: dict[str, Callable[[RunConfig], list[CheckRecord]]] = {
    'geometry': geometry_suite,
    'operators': operators_suite,
    'kernels': kernels_suite,
    'green': green_suite,
    'solver': solver_suite,
    'classification': classification_suite,
    'extremal': extremal_suite,
    'ode': ode_suite,
}


def run_suite(name: str, config: RunConfig | None = None) -> SuiteReport:
    """
    Run one suite, or every suite for 'all'.

    Raises:
        DomainError: unknown suite name.
    """
    config = config or RunConfig()
    if name != ALL and name not in SUITES:
        raise DomainError(f"Unknown suite '{name}', expected one of {SUITE_NAMES + (ALL,)}")
    names = SUITE_NAMES if name == ALL else (name,)
    report = SuiteReport(name, config.seed, config.workers, config.as_dict(), header={'suites': list(names)})
    start = time.perf_counter()
    for suite in names:
        logger.info({'suite_start': suite, 'n': config.n, 'seed': config.seed})
        records = SUITES[suite](config)
        report.extend(records)
        logger.info({'suite_finish': suite, 'records': len(records),
                     'failures': sum(r.status == 'fail' for r in records)})
    if 'ode' in names and config.n >= 4:
        report.header['geodesic_ball_curvatures'] = {
            f'r={r:g}': geodesic_ball_curvatures(config.n, r)._asdict() for r in (np.pi / 4, np.pi / 2)}
    report.wall_time = time.perf_counter() - start
    return report
