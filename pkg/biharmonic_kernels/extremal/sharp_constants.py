"""
The sharp constants of the isoperimetric and curvature-integral inequalities on the ball,

    I(n) = int_0^1 r^n (1 + (n-3)/4 (1 - r^2))^{2(n+1)/(n-3)} dr
    d_n  = |S^n|^{-1/n} I(n)
    e_n  = |S^n|^{-(7n+3)/(2n(n+1))} 4/((n^2-1)(n-3)) I(n)^{(n-3)/(2(n+1))}

and the T-curvatures of geodesic balls in S^{n+1}.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import integrate

from biharmonic_kernels.geometry.conformal import sphere_area
from biharmonic_kernels.geometry.points import Dimension
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.solver.quadrature import QuadratureConfig
from biharmonic_kernels.src.exceptions import DomainError, QuadratureError


class SharpConstants(NamedTuple):
    n: int
    integral: float
    d_n: float
    e_n: float
    quadrature_error: float


def extremal_profile(n: int, r):
    """r^n (1 + (n-3)/4 (1 - r^2))^{2(n+1)/(n-3)}; equals 1 at r = 1."""
    r = np.asarray(r, dtype=float)
    return r ** n * (1.0 + (n - 3) / 4.0 * (1.0 - r * r)) ** (2.0 * (n + 1) / (n - 3))


def profile_integral(n: Dimension | int, q: QuadratureConfig | None = None) -> tuple[float, float]:
    """I(n) by adaptive quadrature, with the error estimate."""
    q = q or QuadratureConfig()
    dim = Dimension.of(n)
    dim.require_classification()
    tol = q.target_tol / 100.0
    value, error = integrate.quad(lambda r: float(extremal_profile(dim.n, r)), 0.0, 1.0,
                                  epsabs=tol, epsrel=tol, limit=200)
    if error > q.target_tol * max(1.0, abs(value)):
        raise QuadratureError(f"I({dim.n}) did not reach tolerance {q.target_tol}",
                              diagnostics={'values': [value], 'error_estimate': error})
    return float(value), float(error)


def sharp_constants(n: Dimension | int, q: QuadratureConfig | None = None) -> SharpConstants:
    """
    d_n and e_n from I(n).

    Raises:
        ContractError: n < 4.

    Example:
        >>> round(sharp_constants(4).d_n, 3)
        0.198
    """
    dim = Dimension.of(n)
    integral, error = profile_integral(dim, q)
    k = dim.n
    S = sphere_area(k)
    d_n = S ** (-1.0 / k) * integral
    e_n = (S ** (-(7 * k + 3) / (2 * k * (k + 1))) * 4.0 / ((k * k - 1) * (k - 3))
           * integral ** ((k - 3) / (2 * (k + 1))))
    logger.debug({'sharp_constants': k, 'I': integral, 'd_n': d_n, 'e_n': e_n})
    return SharpConstants(k, integral, float(d_n), float(e_n), error)


def constants_table(n_max: int, n_min: int = 4, q: QuadratureConfig | None = None) -> list[dict]:
    """Rows (n, I, d_n, e_n, error) for n_min <= n <= n_max."""
    if n_min < 4 or n_max < n_min:
        raise DomainError(f"Constants table needs 4 <= n_min <= n_max, got {n_min}..{n_max}")
    rows = []
    for k in range(n_min, n_max + 1):
        c = sharp_constants(k, q)
        rows.append({'n': c.n, 'I': c.integral, 'd_n': c.d_n, 'e_n': c.e_n, 'error': c.quadrature_error})
    return rows


def d_n_monotonicity(rows: list[dict]) -> str:
    """'increasing', 'decreasing' or 'mixed' along the table; reported, not asserted."""
    steps = np.diff([row['d_n'] for row in rows])
    if np.all(steps > 0):
        return 'increasing'
    if np.all(steps < 0):
        return 'decreasing'
    return 'mixed'


# ____________________________________________geodesic_ball_section______________________________________________


class GeodesicBallCurvatures(NamedTuple):
    h: float
    T1: float
    T2: float
    T3: float


def geodesic_ball_curvatures(n: Dimension | int, r: float) -> GeodesicBallCurvatures:
    """
    Boundary T-curvatures of the geodesic ball of radius r in the round S^{n+1}: h = cot r,
    T2 = (n-1)(1/2 + h^2), T3 = ((n^2-1)/2) h (3/2 + h^2).
    """
    k = Dimension.of(n).n
    if not 0.0 < r < np.pi:
        raise DomainError(f"Geodesic radius must lie in (0, pi), got {r}")
    h = float(np.cos(r) / np.sin(r))
    return GeodesicBallCurvatures(h, h, (k - 1) * (0.5 + h * h), (k * k - 1) / 2.0 * h * (1.5 + h * h))


def q_curvature_sphere(n: Dimension | int) -> float:
    """Q of the round S^{n+1}: (n+1)((n+1)^2 - 4)/8."""
    k = Dimension.of(n).n
    return (k + 1) * ((k + 1) ** 2 - 4) / 8.0
