"""
Biharmonic Poisson integrals U = P_i * f_i + P_j * f_j on the half-space and the ball.
"""
from __future__ import annotations

import numpy as np

from biharmonic_kernels.geometry.conformal import conformal_factor, conformal_map_F
from biharmonic_kernels.geometry.points import BallPoint, HalfSpacePoint, as_coords
from biharmonic_kernels.green.green_functions import OperatorPair
from biharmonic_kernels.kernels.fundamental import RelationResult
from biharmonic_kernels.kernels.poisson import KernelSpec, ball_kernel_distance, halfspace_kernel
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.quadrature import (
    QuadratureConfig, QuadratureResult, halfspace_convolution, sphere_convolution, sphere_integral)
from biharmonic_kernels.src.exceptions import ContractError, DomainError


def interior_point(p, model: str, n: int) -> np.ndarray:
    """Coordinates of an interior point of the model; t > 0 on the half-space, |xi| < 1 on the ball."""
    if model == 'halfspace':
        X = HalfSpacePoint.from_coords(as_coords(p), n).coords
        if not X[-1] > 0:
            raise DomainError(f"Poisson integrals are evaluated at interior points t > 0, got t = {X[-1]}")
        return X
    xi = BallPoint(as_coords(p), n)
    if xi.norm >= 1.0:
        raise DomainError(f"Poisson integrals are evaluated at interior points |xi| < 1, got {xi.norm}")
    return xi.coords


def kernel_convolution(spec: KernelSpec, data: BoundaryData, p, q: QuadratureConfig | None = None) -> QuadratureResult:
    """
    P_k * f at an interior point.

    Raises:
        DomainError: the point or the data do not belong to the kernel's model and dimension.
        QuadratureError: propagated from the engine.
    """
    q = q or QuadratureConfig()
    n = spec.dimension.n
    if data.model != spec.model or data.dimension != spec.dimension:
        raise DomainError(f"Data '{data.name}' lives on {data.model} n={data.dimension.n}, kernel on {spec.model} n={n}")
    X = interior_point(p, spec.model, n)
    if data.is_zero:
        return QuadratureResult(0.0, 0.0, 0, 0)
    if spec.model == 'halfspace':
        kernel = lambda r, t: halfspace_kernel(spec.k, n, r, t, spec.log_constant)
        return halfspace_convolution(kernel, spec.decay, data, X[:-1], float(X[-1]), q, label=f'P{spec.k}')
    kernel = lambda w, d: ball_kernel_distance(spec.k, n, w, d, spec.log_constant)
    return sphere_convolution(kernel, data, X, q, label=f'ball_P{spec.k}')


def check_compatibility(pair: OperatorPair, data_j: BoundaryData, q: QuadratureConfig) -> None:
    """
    For n = 3 on the ball, data for B_3 must have zero mean over S^3.

    Raises:
        ContractError: the mean does not vanish within the quadrature tolerance.
    """
    if data_j.model != 'ball' or not data_j.dimension.critical or pair.j != 3 or data_j.is_zero:
        return
    total = sphere_integral(data_j, q)
    if abs(total.value) > q.target_tol * 10.0 + total.error:
        raise ContractError(f"B_3 data on S^3 must integrate to 0, got {total.value:.3e}")


def poisson_integral_result(pair, f_i: BoundaryData, f_j: BoundaryData, p,
                            q: QuadratureConfig | None = None, log_constant: float = 0.0) -> QuadratureResult:
    """`poisson_integral` with the quadrature error and node count."""
    q = q or QuadratureConfig()
    pair = OperatorPair.parse(pair)
    if f_i.model != f_j.model or f_i.dimension != f_j.dimension:
        raise DomainError("Both boundary data must live on the same model and dimension")
    model, dim = f_i.model, f_i.dimension
    f_i.require_admissible(pair.i)
    f_j.require_admissible(pair.j)
    check_compatibility(pair, f_j, q)

    value = error = 0.0
    nodes = level = 0
    for k, data in ((pair.i, f_i), (pair.j, f_j)):
        result = kernel_convolution(KernelSpec(k, model, dim, log_constant), data, p, q)
        value += result.value
        error += result.error
        nodes, level = nodes + result.nodes, max(level, result.level)
    logger.debug({'poisson_integral': str(pair), 'model': model, 'n': dim.n, 'value': value, 'nodes': nodes})
    return QuadratureResult(value, error, nodes, level)


def poisson_integral(pair, f_i: BoundaryData, f_j: BoundaryData, p, q: QuadratureConfig | None = None,
                     log_constant: float = 0.0) -> float:
    """
    U(p) = (P_i * f_i)(p) + (P_j * f_j)(p) for a well-posed pair, on the model of the data.

    Half-space points are (x, t) with t > 0; ball points xi with |xi| < 1.

    Raises:
        ContractError: the pair is ill-posed, the data decay too slowly, or (n = 3, ball, j = 3) the
            B_3 data do not have zero mean.
        QuadratureError: the tail is not summable or refinement does not converge.

    Example:
        >>> one = BoundaryData.constant(1.0, 4)
        >>> round(poisson_integral((0, 2), one, BoundaryData.zero(4), [0, 0, 0, 0, 1.0]), 6)
        1.0
    """
    return poisson_integral_result(pair, f_i, f_j, p, q, log_constant).value


def transport_check(pair, f_i: BoundaryData, f_j: BoundaryData, X, q: QuadratureConfig | None = None) -> RelationResult:
    """
    Compare the ball Poisson integral of (f_i, f_j) at F(X) with the half-space Poisson integral of
    the pulled-back data at X, divided by the conformal factor U_0(X).

    Raises:
        ContractError: n = 3, or the data are not ball data.
    """
    q = q or QuadratureConfig()
    pair = OperatorPair.parse(pair)
    if f_i.model != 'ball':
        raise ContractError("transport_check takes ball data")
    dim = f_i.dimension
    if dim.critical:
        raise ContractError("Conformal transport of Poisson integrals is defined for n != 3")
    X = interior_point(X, 'halfspace', dim.n)
    xi = conformal_map_F(X)
    ball_value = poisson_integral(pair, f_i, f_j, xi, q)
    half_value = poisson_integral(pair, f_i.pullback_to_halfspace(pair.i), f_j.pullback_to_halfspace(pair.j), X, q)
    transported = half_value / conformal_factor(X, dim)
    scale = max(abs(ball_value), abs(transported))
    residual = 0.0 if scale == 0.0 else abs(ball_value - transported) / scale
    return RelationResult(ball_value, transported, residual)
