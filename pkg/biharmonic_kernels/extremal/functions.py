"""
Extremal functions U_a of the sharp inequalities and the two geometric ratios of a conformal metric
g = U^{4/(n-3)} |d xi|^2 on the ball.

    U_a(xi) = A^{(n-3)/2} + (n-3)/4 (1 - |xi|^2) A^{(n-1)/2},   A = (1 - |a|^2)/(|a|^2 |xi|^2 - 2 a.xi + 1)

Each U_a is biharmonic with B_1 U_a = 0 on the sphere, and U_a = A^{(n-3)/2} U_0(psi_a(xi)).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import sympy

from biharmonic_kernels.classification.bubbles import automorphism_factor, ball_automorphism
from biharmonic_kernels.geometry.conformal import sphere_area
from biharmonic_kernels.geometry.points import BallPoint, Dimension, as_coords
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.operators.boundary import (
    BoundaryOperatorId, biharmonic_residual, boundary_residual, operator_estimate, operator_values)
from biharmonic_kernels.operators.fields import ScalarField, coordinate_symbols
from biharmonic_kernels.operators.stencils import Residual, StencilConfig
from biharmonic_kernels.solver.quadrature import (
    QuadratureConfig, QuadratureResult, panel_rule, product_sphere_rule, refine, zonal_rule)
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import ContractError, DomainError

RATIO_KINDS = ('isoperimetric', 't3ratio')
T3_NORMALIZATIONS = ('curvature', 'operator')


@dataclass(frozen=True)
class ExtremalParams:
    """Centre a of the extremal function, |a| < 1."""
    a: tuple[float, ...]
    dimension: Dimension

    def __init__(self, a: Sequence[float], dimension: Dimension | int) -> None:
        dim = Dimension.of(dimension)
        dim.require_classification()
        point = BallPoint(a, dim)
        if point.norm >= 1.0:
            raise DomainError(f"Extremal centre must satisfy |a| < 1, got {point.norm}")
        object.__setattr__(self, 'a', point.xi)
        object.__setattr__(self, 'dimension', dim)


def extremal_field(params: ExtremalParams) -> ScalarField:
    dim = params.dimension
    n = dim.n
    z = coordinate_symbols(dim)
    a = [sympy.nsimplify(c) for c in params.a]
    a2 = sum(c ** 2 for c in a)
    r2 = sum(s ** 2 for s in z)
    A = (1 - a2) / (a2 * r2 - 2 * sum(c * s for c, s in zip(a, z)) + 1)
    expr = A ** sympy.Rational(n - 3, 2) + sympy.Rational(n - 3, 4) * (1 - r2) * A ** sympy.Rational(n - 1, 2)
    norm = float(np.linalg.norm(params.a))
    return ScalarField(None, dim, 'ball', expression=expr, symbols=z, name=f'U_a(|a|={norm:g})',
                       radial=norm == 0.0, axis=np.asarray(params.a) / norm if norm > 0 else None)


def extremal_values(params: ExtremalParams, points) -> np.ndarray | float:
    """Vectorised U_a."""
    n = params.dimension.n
    P = np.asarray(as_coords(points), dtype=float)
    A = automorphism_factor(params.a, P)
    return A ** ((n - 3) / 2) + (n - 3) / 4 * (1.0 - np.sum(P * P, axis=-1)) * A ** ((n - 1) / 2)


class ExtremalCheck(NamedTuple):
    value: float
    bilaplacian: Residual
    boundary: Residual


def extremal_eval_and_check(params: ExtremalParams, xi, boundary: Sequence[Sequence[float]] | None = None,
                            s: StencilConfig | None = None, use_exact: bool = True) -> ExtremalCheck:
    """
    U_a(xi), Delta^2 U_a at xi, and the worst B_1 U_a over `boundary` (default: the radial
    projection of xi, or the north pole for xi = 0).

    Example:
        >>> extremal_eval_and_check(ExtremalParams([0] * 6, 5), [0] * 6).value
        1.5
    """
    dim = params.dimension
    point = BallPoint(as_coords(xi), dim)
    field = extremal_field(params)
    if boundary is None:
        direction = point.coords / point.norm if point.norm > 0 else np.eye(dim.ambient)[-1]
        boundary = [direction]
    interior = (biharmonic_residual(field, point.coords, s, use_exact=use_exact) if point.norm < 1.0
                else Residual(0.0, 0.0))
    op = BoundaryOperatorId(1, 'ball')
    residuals = [boundary_residual(op, field, p, 0.0, s) for p in boundary]
    worst = max(residuals, key=lambda r: abs(r.value) - r.tolerance)
    return ExtremalCheck(float(extremal_values(params, point.coords)), interior, worst)


def transported_extremal_residual(params: ExtremalParams, xi) -> float:
    """Relative residual of U_a(xi) = A(xi)^{(n-3)/2} U_0(psi_a(xi))."""
    n = params.dimension.n
    point = BallPoint(as_coords(xi), params.dimension).coords
    centre = ExtremalParams(np.zeros(params.dimension.ambient), params.dimension)
    image = ball_automorphism(params.a, point)
    lhs = float(extremal_values(params, point))
    rhs = automorphism_factor(params.a, point) ** ((n - 3) / 2) * float(extremal_values(centre, image))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def admissible_competitor(dimension: Dimension | int, rng: np.random.Generator, amplitude: float = 0.05) -> ScalarField:
    """
    U_0 + d1 (h1 + (n-1)/4 (1 - |xi|^2) h1) + d2 (h2 + (n+1)/4 (1 - |xi|^2) h2) for the zonal
    harmonics h1 = xi.e and h2 = (n+1)(xi.e)^2 - |xi|^2 about a random axis e; every member is
    biharmonic with B_1 U = 0 on the sphere.
    """
    dim = Dimension.of(dimension)
    n = dim.n
    axis = rng.standard_normal(dim.ambient)
    axis /= np.linalg.norm(axis)
    d1, d2 = amplitude * rng.uniform(-1.0, 1.0, 2)
    z = coordinate_symbols(dim)
    r2 = sum(s ** 2 for s in z)
    c = sum(sympy.Float(e) * s for e, s in zip(axis, z))
    h1, h2 = c, (n + 1) * c ** 2 - r2
    beta1, beta2 = sympy.Rational(n - 1, 4), sympy.Rational(n + 1, 4)
    expr = (1 + sympy.Rational(n - 3, 4) * (1 - r2) + sympy.Float(d1) * (h1 + beta1 * (1 - r2) * h1)
            + sympy.Float(d2) * (h2 + beta2 * (1 - r2) * h2))
    return ScalarField(None, dim, 'ball', expression=expr, symbols=z, name='competitor', axis=axis)


# ____________________________________________ratio_section_______________________________________________________


def _normal(axis: np.ndarray) -> np.ndarray:
    trial = np.zeros_like(axis)
    trial[int(np.argmin(np.abs(axis)))] = 1.0
    normal = trial - (trial @ axis) * axis
    return normal / np.linalg.norm(normal)


def sphere_rule(U: ScalarField, q: QuadratureConfig, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on S^n and weights, reduced by the symmetry of U."""
    n = U.dimension.n
    if U.radial:
        return np.eye(U.dimension.ambient)[-1:], np.array([sphere_area(n)])
    if U.axis is not None:
        theta, weights = zonal_rule(n, q.panel_nodes(level), np.pi / 8)
        normal = _normal(U.axis)
        return np.cos(theta)[:, None] * U.axis + np.sin(theta)[:, None] * normal, weights
    return product_sphere_rule(n, q.sphere_nodes(level))


def ball_rule(U: ScalarField, q: QuadratureConfig, level: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes in the ball and weights: radial Gauss panels times `sphere_rule`."""
    n = U.dimension.n
    r, wr = panel_rule((0.0, 0.5, 1.0), q.panel_nodes(level))
    directions, ws = sphere_rule(U, q, level)
    points = (r[:, None, None] * directions[None, :, :]).reshape(-1, U.dimension.ambient)
    return points, np.outer(wr * r ** n, ws).ravel()


def _integral(rule: Callable[[int], tuple[np.ndarray, np.ndarray]], integrand: Callable[[np.ndarray], np.ndarray],
              q: QuadratureConfig, label: str) -> QuadratureResult:
    def evaluate(level: int) -> tuple[float, int]:
        points, weights = rule(level)
        return float(np.sum(weights * integrand(points))), len(weights)
    return refine(evaluate, q, label)


def _positive(U: ScalarField, points: np.ndarray) -> np.ndarray:
    values = np.atleast_1d(np.asarray(U(points), dtype=float))
    if values.min() <= 0.0:
        raise ContractError(f"Conformal factor '{U.name}' must be positive, sampled minimum {values.min():.3e}")
    return values


def _b3_values(U: ScalarField, points: np.ndarray, s: StencilConfig | None) -> np.ndarray:
    op = BoundaryOperatorId(3, 'ball')
    if U.has_exact:
        return np.atleast_1d(operator_values(op, U, points))
    return np.array([operator_estimate(op, U, p, s).value for p in points])


def volume_g(U: ScalarField, q: QuadratureConfig) -> QuadratureResult:
    """|B|_g = int_B U^{2(n+1)/(n-3)} d xi."""
    power = 2.0 * (U.dimension.n + 1) / (U.dimension.n - 3)
    return _integral(lambda L: ball_rule(U, q, L), lambda P: _positive(U, P) ** power, q, f'volume_g:{U.name}')


def area_g(U: ScalarField, q: QuadratureConfig) -> QuadratureResult:
    """|S^n|_g = int_S U^{2n/(n-3)} d sigma."""
    power = 2.0 * U.dimension.n / (U.dimension.n - 3)
    return _integral(lambda L: sphere_rule(U, q, L), lambda P: _positive(U, P) ** power, q, f'area_g:{U.name}')


def t3_norm(U: ScalarField, q: QuadratureConfig, normalization: str = 'curvature',
            s: StencilConfig | None = None) -> float:
    """
    ||T_3||_{L^{2n/(n+3)}(S^n, g)} with T_3 = c B_3 U U^{-p3*}, c = 2/(n-3) ('curvature') or 1
    ('operator'). The powers of U cancel against dV_g.
    """
    n = U.dimension.n
    c = 2.0 / (n - 3) if normalization == 'curvature' else 1.0
    exponent = 2.0 * n / (n + 3)

    def integrand(P: np.ndarray) -> np.ndarray:
        _positive(U, P)
        return np.abs(c * _b3_values(U, P, s)) ** exponent
    total = _integral(lambda L: sphere_rule(U, q, L), integrand, q, f't3_norm:{U.name}')
    return total.value ** (1.0 / exponent)


def ratio_eval(kind: str, U: ScalarField, q: QuadratureConfig | None = None,
               t3_normalization: str = 'curvature', s: StencilConfig | None = None) -> float:
    """
    The isoperimetric ratio |B|_g / |S^n|_g^{(n+1)/n} or the curvature ratio
    |B|_g^{(n-3)/(2(n+1))} / ||T_3||_{L^{2n/(n+3)}(S^n, g)} of g = U^{4/(n-3)} |d xi|^2.

    Raises:
        ContractError: n < 4, or U is not positive at a quadrature node.
        QuadratureError: propagated from the refinement.
    """
    q = q or QuadratureConfig()
    if kind not in RATIO_KINDS:
        raise DomainError(f"Unknown ratio '{kind}', expected one of {RATIO_KINDS}")
    if t3_normalization not in T3_NORMALIZATIONS:
        raise DomainError(f"Unknown T3 normalization '{t3_normalization}', expected one of {T3_NORMALIZATIONS}")
    if U.model != 'ball':
        raise DomainError("Geometric ratios are defined for conformal factors on the ball")
    U.dimension.require_classification()
    n = U.dimension.n
    volume = volume_g(U, q).value
    if kind == 'isoperimetric':
        ratio = volume / area_g(U, q).value ** ((n + 1) / n)
    else:
        ratio = volume ** ((n - 3) / (2 * (n + 1))) / t3_norm(U, q, t3_normalization, s)
    logger.debug({'ratio': kind, 'field': U.name, 'n': n, 'normalization': t3_normalization, 'value': ratio})
    return float(ratio)


def sampled_inequality(kind: str, dimension: Dimension | int, count: int = 4, q: QuadratureConfig | None = None,
                       seed: int = setting.DEFAULT_SEED, amplitude: float = 0.05) -> tuple[float, list[float]]:
    """ratio(U_0) and the ratios of `count` seeded admissible competitors."""
    dim = Dimension.of(dimension)
    rng = np.random.default_rng(seed)
    best = ratio_eval(kind, extremal_field(ExtremalParams(np.zeros(dim.ambient), dim)), q)
    return best, [ratio_eval(kind, admissible_competitor(dim, rng, amplitude), q) for _ in range(count)]
