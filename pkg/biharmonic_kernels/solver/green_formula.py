"""
The ball volume potential G * f, the full Green-formula solve U = G * f + P_i * f_i + P_j * f_j and
the comparison principle.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from biharmonic_kernels.geometry.points import BallPoint, Dimension, as_coords
from biharmonic_kernels.green.green_functions import GreenSpec, OperatorPair, green_values
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.poisson_integrals import poisson_integral
from biharmonic_kernels.solver.quadrature import (
    QuadratureConfig, QuadratureResult, grid_sum, panel_rule, product_sphere_rule, refine, sphere_measure, zonal_rule)
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import ContractError, DomainError, QuadratureError

# fractions of the chord length rho_max(omega) where the radial panels of the volume rule break
CHORD_FRACTIONS = (0.0, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0)
DECOMPOSITIONS = ('centre', 'origin')


def _pole(ambient: int) -> np.ndarray:
    e = np.zeros(ambient)
    e[-1] = 1.0
    return e


def _frame(xi: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """(unit direction of xi, a unit vector orthogonal to it, |xi|); e_{n+1} stands in at xi = 0."""
    radius = float(np.linalg.norm(xi))
    centre = xi / radius if radius > 0 else _pole(xi.size)
    trial = np.zeros_like(centre)
    trial[int(np.argmin(np.abs(centre)))] = 1.0
    normal = trial - (trial @ centre) * centre
    return centre, normal / np.linalg.norm(normal), radius


def _chord(radius: float, cos: np.ndarray) -> np.ndarray:
    """Distance from a point at |xi| = radius to the sphere along directions with xi-hat . omega = cos."""
    b = radius * cos
    return -b + np.sqrt(b * b + 1.0 - radius * radius)


def _centre_level(spec: GreenSpec, f: ScalarField, xi: np.ndarray, q: QuadratureConfig, level: int) -> tuple[float, int]:
    n = spec.dimension.n
    m = q.panel_nodes(level)
    fractions, fraction_weights = panel_rule(CHORD_FRACTIONS, m)
    centre, normal, radius = _frame(xi)

    if f.radial:
        theta, weights = zonal_rule(n, m, np.pi / 8)
        directions = np.cos(theta)[:, None] * centre + np.sin(theta)[:, None] * normal
    else:
        directions, weights = product_sphere_rule(n, q.sphere_nodes(level))
    chord = _chord(radius, directions @ centre)

    def integrand(i: np.ndarray, j: np.ndarray) -> np.ndarray:
        rho = fractions[j] * chord[i]
        eta = xi + rho[:, None] * directions[i]
        with np.errstate(divide='ignore', invalid='ignore'):
            values = green_values(spec, xi, eta) * f(eta) * rho ** n * chord[i]
        return np.where(rho > 0, values, 0.0)

    return grid_sum(np.asarray(weights), fraction_weights, integrand, q.workers), len(weights) * len(fraction_weights)


def _origin_decomposition(spec: GreenSpec, f: ScalarField, xi: np.ndarray, q: QuadratureConfig) -> QuadratureResult:
    """Nested adaptive quadrature in polar coordinates about the ball centre; radial f only."""
    n = spec.dimension.n
    centre, normal, radius = _frame(xi)
    tol = q.target_tol / 10.0
    shell = sphere_measure(n - 1)

    def sphere_mean(s: float) -> float:
        if radius == 0.0 or s == 0.0:
            return float(green_values(spec, xi, s * centre)) * sphere_measure(n)

        def polar(theta: float) -> float:
            eta = s * (np.cos(theta) * centre + np.sin(theta) * normal)
            return float(green_values(spec, xi, eta)) * np.sin(theta) ** (n - 1)
        value, _ = integrate.quad(polar, 0.0, np.pi, epsabs=tol, epsrel=tol, limit=200)
        return shell * value

    def radial(s: float) -> float:
        return s ** n * float(f(s * centre)) * sphere_mean(s)

    breaks = [radius] if 0.0 < radius < 1.0 else None
    value, error = integrate.quad(radial, 0.0, 1.0, points=breaks, epsabs=tol, epsrel=tol, limit=200)
    if error > q.target_tol * max(1.0, abs(value)):
        raise QuadratureError("Volume potential about the origin did not converge",
                              diagnostics={'values': [value], 'error_estimate': error, 'xi_norm': radius})
    return QuadratureResult(value, error, 0, 0)


def volume_potential_result(pair, f: ScalarField, xi, q: QuadratureConfig | None = None,
                            decomposition: str = 'centre', log_constant: float = 0.0) -> QuadratureResult:
    """`volume_potential` with the quadrature error."""
    q = q or QuadratureConfig()
    if f.model != 'ball':
        raise DomainError("The volume potential integrates fields on the ball")
    if decomposition not in DECOMPOSITIONS:
        raise DomainError(f"Unknown decomposition '{decomposition}', expected one of {DECOMPOSITIONS}")
    spec = GreenSpec(OperatorPair.parse(pair), 'ball', f.dimension, log_constant)
    point = BallPoint(as_coords(xi), f.dimension).coords
    if f.is_constant and float(f.exact('value', point)) == 0.0:
        return QuadratureResult(0.0, 0.0, 0, 0)
    if decomposition == 'origin':
        if not f.radial:
            raise ContractError("The origin decomposition needs a radial volume density")
        return _origin_decomposition(spec, f, point, q)
    return refine(lambda L: _centre_level(spec, f, point, q, L), q, f'volume:{spec.pair}',
                  {'xi_norm': float(np.linalg.norm(point))})


def volume_potential(pair, f: ScalarField, xi, q: QuadratureConfig | None = None,
                     decomposition: str = 'centre', log_constant: float = 0.0) -> float:
    """
    int_B G^{(i,j)}(xi, eta) f(eta) d eta on the ball.

    The default decomposition integrates in polar coordinates about xi, where the Jacobian rho^n
    absorbs the |xi - eta|^{3-n} singularity; 'origin' integrates about the ball centre with nested
    adaptive rules and serves as an independent cross-check for radial f.

    Raises:
        ContractError: 'origin' requested for a non-radial f.
        QuadratureError: refinement does not converge.
    """
    return volume_potential_result(pair, f, xi, q, decomposition, log_constant).value


# ____________________________________________green_formula_section_______________________________________________


def green_formula_data(pair, U: ScalarField) -> tuple[ScalarField, BoundaryData, BoundaryData]:
    """(Delta^2 U, B_i U, B_j U) of a symbolic ball field."""
    pair = OperatorPair.parse(pair)
    if U.model != 'ball':
        raise DomainError("The Green formula is solved on the ball")
    density = U.derived('bilaplacian', name=f'bilaplacian({U.name})')
    return density, BoundaryData.from_field_operator(pair.i, U), BoundaryData.from_field_operator(pair.j, U)


def green_formula_value(pair, density: ScalarField, f_i: BoundaryData, f_j: BoundaryData, xi,
                        q: QuadratureConfig | None = None, log_constant: float = 0.0) -> float:
    """(G * f)(xi) + (P_i * f_i)(xi) + (P_j * f_j)(xi)."""
    return (volume_potential(pair, density, xi, q, log_constant=log_constant)
            + poisson_integral(pair, f_i, f_j, xi, q, log_constant))


def solve_and_roundtrip(pair, U: ScalarField, q: QuadratureConfig | None = None,
                        samples: Iterable[Sequence[float]] = (), log_constant: float = 0.0) -> float:
    """
    Rebuild a manufactured ball solution from its own data through the Green formula and return the
    largest deviation max |G * Delta^2 U + P_i * B_i U + P_j * B_j U - U| over the samples.

    Raises:
        EvaluationError: U has no symbolic form.
        QuadratureError: propagated from the quadrature engine.
    """
    q = q or QuadratureConfig()
    density, f_i, f_j = green_formula_data(pair, U)
    errors = []
    for xi in samples:
        point = BallPoint(as_coords(xi), U.dimension).coords
        value = green_formula_value(pair, density, f_i, f_j, point, q, log_constant)
        errors.append(abs(value - float(U(point))))
    worst = max(errors, default=0.0)
    logger.debug({'roundtrip': str(OperatorPair.parse(pair)), 'field': U.name, 'samples': len(errors), 'max_error': worst})
    return worst


# ____________________________________________comparison_section__________________________________________________

# sign each boundary datum must have for U >= 0, by operator index
COMPARISON_SIGNS = {0: 1.0, 1: -1.0, 2: -1.0, 3: 1.0}


def _random_sphere(dimension: Dimension, count: int, rng: np.random.Generator) -> np.ndarray:
    points = rng.standard_normal((count, dimension.ambient))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def _random_ball(dimension: Dimension, count: int, rng: np.random.Generator) -> np.ndarray:
    directions = _random_sphere(dimension, count, rng)
    return directions * rng.uniform(0.0, 1.0, count)[:, None] ** (1.0 / dimension.ambient)


def comparison_check(pair, density: ScalarField | None, f_i: BoundaryData, f_j: BoundaryData,
                     samples: Iterable[Sequence[float]], q: QuadratureConfig | None = None,
                     sign_samples: int = 512, seed: int = setting.DEFAULT_SEED) -> float:
    """
    Minimum of U = G * f + P_i * f_i + P_j * f_j over the samples, for data with the signs of the
    comparison principle: f >= 0, data for B_0 and B_3 nonnegative, data for B_1 and B_2 nonpositive.

    The signs are checked on `sign_samples` seeded random points of the sphere and the ball.

    Raises:
        ContractError: n < 4, or a datum has the wrong sign.
    """
    q = q or QuadratureConfig()
    pair = OperatorPair.parse(pair)
    dim = f_i.dimension
    if dim.n < 4:
        raise ContractError(f"The comparison principle is checked for n >= 4, got n = {dim.n}")
    rng = np.random.default_rng(seed)
    boundary = _random_sphere(dim, sign_samples, rng)
    for k, data in ((pair.i, f_i), (pair.j, f_j)):
        low, high = data.sign_on(boundary)
        signed = low if COMPARISON_SIGNS[k] > 0 else -high
        if signed < 0.0:
            raise ContractError(f"Data for B_{k} must be {'nonnegative' if COMPARISON_SIGNS[k] > 0 else 'nonpositive'}, "
                                f"sampled range [{low:.3e}, {high:.3e}]")
    if density is not None:
        values = np.asarray(density(_random_ball(dim, sign_samples, rng)), dtype=float)
        if values.min() < 0.0:
            raise ContractError(f"Volume density must be nonnegative, sampled minimum {values.min():.3e}")

    minimum = np.inf
    for xi in samples:
        point = BallPoint(as_coords(xi), dim).coords
        value = poisson_integral(pair, f_i, f_j, point, q)
        if density is not None:
            value += volume_potential(pair, density, point, q)
        minimum = min(minimum, value)
    logger.debug({'comparison': str(pair), 'n': dim.n, 'minimum': minimum})
    return float(minimum)
