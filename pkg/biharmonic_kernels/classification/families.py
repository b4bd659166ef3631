"""
Solutions beyond the bubble: the boundary-singular family on the ball and the homogeneous families
that solve the linear problems with zero boundary data.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import sympy

from biharmonic_kernels.classification.bubbles import (
    BubbleResiduals, bubble_bvp_residual, bubble_field, nonlinear_boundary_residual, worst_residual)
from biharmonic_kernels.geometry.conformal import south_pole
from biharmonic_kernels.geometry.points import BallPoint, BubbleParams, Dimension, as_coords
from biharmonic_kernels.kernels.poisson import halfspace_kernel
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.operators.boundary import BoundaryOperatorId, biharmonic_residual, operator_values
from biharmonic_kernels.operators.fields import ScalarField, coordinate_symbols
from biharmonic_kernels.operators.stencils import StencilConfig
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.limits import default_heights, extrapolate, operator_trace_values
from biharmonic_kernels.solver.quadrature import QuadratureConfig, halfspace_convolution
from biharmonic_kernels.src.exceptions import ContractError, DomainError

# samples closer than this to -e_{n+1} are refused by the singular-solution check
SINGULAR_SAMPLE_MARGIN = 0.05


@dataclass(frozen=True)
class SingularSolutionParams:
    """
    U(xi) = U_{xi0}(xi) + cbar |xi + e|^{3-n} ((1 - |xi|^2) / |xi + e|^2)^{6-i-j}, singular at -e_{n+1}.
    The added term is the pull-back of t^{6-i-j} under F, so it is biharmonic and vanishes on the sphere.
    """
    i: int
    j: int
    xi0: tuple[float, ...]
    cbar: float
    dimension: Dimension

    def __init__(self, i: int, j: int, xi0: Sequence[float], cbar: float, dimension: Dimension | int) -> None:
        dim = Dimension.of(dimension)
        if not (1 <= i < j <= 3):
            raise ContractError(f"Singular solutions need 1 <= i < j <= 3, got ({i},{j})")
        if not cbar >= 0:
            raise DomainError(f"cbar must be nonnegative, got {cbar}")
        object.__setattr__(self, 'i', int(i))
        object.__setattr__(self, 'j', int(j))
        object.__setattr__(self, 'xi0', BubbleParams.ball(xi0, dim).xi0)
        object.__setattr__(self, 'cbar', float(cbar))
        object.__setattr__(self, 'dimension', dim)

    @property
    def exponent(self) -> int:
        return 6 - self.i - self.j

    @property
    def bubble(self) -> BubbleParams:
        return BubbleParams.ball(self.xi0, self.dimension)


def singular_field(params: SingularSolutionParams) -> ScalarField:
    dim = params.dimension
    z = coordinate_symbols(dim)
    shifted = sympy.sqrt(sum(s ** 2 for s in z[:-1]) + (z[-1] + 1) ** 2)
    singular = (sympy.nsimplify(params.cbar) * shifted ** (3 - dim.n)
                * ((1 - sum(s ** 2 for s in z)) / shifted ** 2) ** params.exponent)
    expr = bubble_field(params.bubble).expression + singular
    return ScalarField(None, dim, 'ball', expression=expr, symbols=z, singular_points=[south_pole(dim)],
                       name=f'singular_{params.i}{params.j}')


def singular_solution_check(params: SingularSolutionParams, interior: Sequence[Sequence[float]],
                            boundary: Sequence[Sequence[float]], s: StencilConfig | None = None,
                            margin: float = SINGULAR_SAMPLE_MARGIN) -> BubbleResiduals:
    """
    Worst Delta^2 U over the interior samples and worst B_k U - T_k U^{p_k*} (k = i, j) over the
    sphere samples. With cbar = 0 this is the bubble check of U_{xi0}.

    Raises:
        ContractError: n < 4, or a sample lies within `margin` of -e_{n+1}.
    """
    dim = params.dimension
    dim.require_classification()
    pole = south_pole(dim)
    for p in list(interior) + list(boundary):
        point = BallPoint(as_coords(p), dim).coords
        if float(np.linalg.norm(point - pole)) < margin:
            raise ContractError(f"Sample {point.tolist()} is within {margin} of the singular point -e_{{n+1}}")
    if params.cbar == 0.0:
        return bubble_bvp_residual(params.i, params.j, params.bubble, interior, boundary, s)
    field = singular_field(params)
    residuals = BubbleResiduals(
        worst_residual(biharmonic_residual(field, p, s) for p in interior),
        worst_residual(nonlinear_boundary_residual(params.i, field, p, s) for p in boundary),
        worst_residual(nonlinear_boundary_residual(params.j, field, p, s) for p in boundary),
    )
    logger.debug({'singular_solution': f'({params.i},{params.j})', 'cbar': params.cbar,
                  'residuals': [r.value for r in residuals]})
    return residuals


# ____________________________________________homogeneous_section_________________________________________________


class FamilyResidual(NamedTuple):
    """Largest boundary residual per condition, largest |Delta^2 u| and one interior value."""
    family: str
    conditions: tuple[str, str]
    boundary: tuple[float, float]
    bilaplacian: float
    interior_value: float

    def passed(self, tolerance: float) -> bool:
        return (max(abs(b) for b in self.boundary) <= tolerance and abs(self.bilaplacian) <= tolerance
                and self.interior_value != 0.0)


def _t(z):
    return z[-1]


# polynomial families: builder, boundary conditions
POLYNOMIAL_FAMILIES = {
    'c1t': (lambda z: _t(z), ('B2', 'B3')),
    'c2t2': (lambda z: _t(z) ** 2, ('B1', 'B3')),
    'c3t3': (lambda z: _t(z) ** 3, ('B0', 'lap')),
    'tP2': (lambda z: _t(z) * (z[0] ** 2 - z[1] ** 2 + z[0] * z[1]), ('B0', 'lap')),
}
# kernel families: kernel index m of u = P_m * phi, boundary conditions
KERNEL_FAMILIES = {
    'u_phi_03': (1, ('B0', 'B3')),
    'u_phi_12': (3, ('B1', 'B2')),
}
FAMILIES = tuple(POLYNOMIAL_FAMILIES) + tuple(KERNEL_FAMILIES)


def _condition_values(condition: str, field: ScalarField, points: np.ndarray) -> np.ndarray:
    if condition == 'lap':
        return np.atleast_1d(field.exact('laplacian', points))
    return operator_values(BoundaryOperatorId(int(condition[1])), field, points)


def _polynomial_family(family: str, dim: Dimension, boundary: np.ndarray, interior: np.ndarray) -> FamilyResidual:
    builder, conditions = POLYNOMIAL_FAMILIES[family]
    field = ScalarField.from_expression(builder, dim, 'halfspace', name=family)
    residuals = tuple(float(np.max(np.abs(_condition_values(c, field, boundary)))) for c in conditions)
    bilaplacian = float(np.max(np.abs(np.atleast_1d(field.exact('bilaplacian', interior)))))
    value = float(np.max(np.abs(np.atleast_1d(field(interior)))))
    return FamilyResidual(family, conditions, residuals, bilaplacian, value)


def _kernel_family(family: str, phi: BoundaryData, boundary: np.ndarray, interior: np.ndarray,
                   q: QuadratureConfig, heights: Sequence[float]) -> FamilyResidual:
    m, conditions = KERNEL_FAMILIES[family]
    n = phi.dimension.n
    if m == 3 and phi.dimension.critical:
        raise ContractError("The (1,2) kernel family is built from P_3 and needs n != 3")
    residuals = []
    for condition in conditions:
        k = int(condition[1])
        worst = 0.0
        for x in boundary[:, :-1]:
            limit = extrapolate(heights, operator_trace_values(k, m, phi, x, heights, q), f'{family}:{condition}')
            worst = max(worst, abs(limit.value))
        residuals.append(worst)
    X = interior[0]
    kernel = lambda r, t: halfspace_kernel(m, n, r, t)
    value = halfspace_convolution(kernel, n + {1: 1, 3: -3}[m], phi, X[:-1], float(X[-1]), q, label=family).value
    # Delta^2 (P_m * phi) vanishes identically
    return FamilyResidual(family, conditions, tuple(residuals), 0.0, value)


def homogeneous_family_check(family: str, dimension: Dimension | int, boundary: Sequence[Sequence[float]],
                             interior: Sequence[Sequence[float]], phi: BoundaryData | None = None,
                             q: QuadratureConfig | None = None,
                             heights: Sequence[float] | None = None) -> FamilyResidual:
    """
    Check that a homogeneous family meets its zero boundary conditions.

    Families: 'c1t' under (B2, B3), 'c2t2' under (B1, B3), 'c3t3' and 'tP2' under u = Delta u = 0,
    'u_phi_03' = P_1 * phi under (B0, B3) and 'u_phi_12' = P_3 * phi under (B1, B2). The kernel
    families take their boundary values by extrapolation to t = 0 and report u at the first
    interior sample as the nontriviality witness.

    Raises:
        DomainError: unknown family, or samples off the half-space boundary.
        ContractError: 'u_phi_12' with n = 3.
    """
    dim = Dimension.of(dimension)
    if family not in FAMILIES:
        raise DomainError(f"Unknown homogeneous family '{family}', expected one of {FAMILIES}")
    boundary = np.atleast_2d(np.asarray(boundary, dtype=float))
    interior = np.atleast_2d(np.asarray(interior, dtype=float))
    if boundary.shape[-1] != dim.ambient or np.any(boundary[:, -1] != 0.0):
        raise DomainError("Boundary samples must be points (x, 0) of the half-space")
    if interior.shape[-1] != dim.ambient or np.any(interior[:, -1] <= 0.0):
        raise DomainError("Interior samples must have t > 0")
    if family in POLYNOMIAL_FAMILIES:
        result = _polynomial_family(family, dim, boundary, interior)
    else:
        phi = phi or BoundaryData.bump(np.zeros(dim.n), 1.0, dim)
        heights = np.asarray(default_heights() if heights is None else heights, dtype=float)
        result = _kernel_family(family, phi, boundary, interior, q or QuadratureConfig(), heights)
    logger.debug({'homogeneous_family': family, 'n': dim.n, 'boundary': list(result.boundary),
                  'interior_value': result.interior_value})
    return result
