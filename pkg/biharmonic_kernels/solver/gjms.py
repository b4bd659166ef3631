"""
Boundary trace of the (1,3) ball Poisson integral with data (0, f).

At |xi| = 1 the P_1 term carries the factor (1 - |xi|^2)^2, so U(xi) = P_3 * f(xi) on the sphere:
half the Green function of the third-order boundary operator applied to f. The check extrapolates
U(rho xi) to rho = 1 and compares with the sphere convolution evaluated directly at xi.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from biharmonic_kernels.geometry.points import BallPoint, as_coords
from biharmonic_kernels.kernels.poisson import ball_kernel_distance
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.limits import extrapolate
from biharmonic_kernels.solver.poisson_integrals import poisson_integral
from biharmonic_kernels.solver.quadrature import QuadratureConfig, sphere_convolution
from biharmonic_kernels.src.exceptions import ContractError, DomainError

# distances 1 - rho of the interior points used for the extrapolation
DEFAULT_OFFSETS = (0.1, 0.05, 0.025, 0.0125, 0.00625)


class GjmsResidual(NamedTuple):
    extrapolated: float
    direct: float
    residual: float
    monotone: bool


def gjms_trace_check(f3: BoundaryData, xi, q: QuadratureConfig | None = None,
                     offsets: Sequence[float] = DEFAULT_OFFSETS) -> GjmsResidual:
    """
    |lim_{rho -> 1} U(rho xi) - int_{S^n} P_3(xi, eta) f3(eta) dV| for U the (1,3) Poisson integral
    of (0, f3).

    Raises:
        ContractError: n = 3.
        DomainError: xi is not on the sphere or f3 is not ball data.
    """
    q = q or QuadratureConfig()
    dim = f3.dimension
    if dim.critical:
        raise ContractError("The trace check of the third-order operator is defined for n != 3")
    if f3.model != 'ball':
        raise DomainError("gjms_trace_check takes data on the sphere")
    point = BallPoint(as_coords(xi), dim)
    if not point.on_boundary:
        raise DomainError(f"gjms_trace_check needs a point on the sphere, got |xi| = {point.norm}")
    xi = point.coords / point.norm
    if f3.is_zero:
        return GjmsResidual(0.0, 0.0, 0.0, True)

    zero = BoundaryData.zero(dim, 'ball')
    offsets = np.asarray(offsets, dtype=float)
    values = [poisson_integral((1, 3), zero, f3, (1.0 - delta) * xi, q) for delta in offsets]
    limit = extrapolate(offsets, values, 'gjms_trace')

    n = dim.n
    direct = sphere_convolution(lambda w, d: ball_kernel_distance(3, n, w, d), f3, xi, q, label='gjms_direct').value
    residual = abs(limit.value - direct)
    logger.debug({'gjms_trace': f3.name, 'n': n, 'extrapolated': limit.value, 'direct': direct})
    return GjmsResidual(limit.value, direct, residual, limit.monotone)
