"""
Biharmonic Poisson kernels on the half-space and the ball.

Half-space, with rho^2 = t^2 + |x - y|^2:
    P_0 = 2(n+1)/|S^n| t^3 rho^{-(n+3)}          P_1 = -2/|S^n| t^2 rho^{-(n+1)}
    P_2 = -1/((n-1)|S^n|) t rho^{-(n-1)}        P_3 = 1/((n-1)(n-3)|S^n|) rho^{3-n}
and for n = 3, P_3 = -log(rho^2)/(4|S^3|) + C.
Ball, with d = |xi - eta|:
    P_0 = (n+1)/(4|S^n|) (1-|xi|^2)^3 d^{-(n+3)}   P_1 = -(1-|xi|^2)^2/(2|S^n| d^{n+1})
    P_2 = -(1-|xi|^2)/(2(n-1)|S^n| d^{n-1})        P_3 = d^{3-n}/((n-1)(n-3)|S^n|)
and for n = 3, P_3 = -log d/(2|S^3|) + C.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from biharmonic_kernels.geometry.conformal import sphere_area, stable_norm
from biharmonic_kernels.geometry.points import BallPoint, Dimension, HalfSpacePoint, as_coords
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.src.exceptions import ContractError, DomainError, QuadratureError, SingularityError

# decay rate of |P_k(x, t)| in |x| at fixed t
KERNEL_DECAY = {0: 3, 1: 1, 2: -1, 3: -3}


@dataclass(frozen=True)
class KernelSpec:
    """
    Identifies a Poisson kernel.

    Args:
        k (int): kernel index, 0..3.
        model (str): 'halfspace' or 'ball'.
        dimension (Dimension | int): boundary dimension n.
        log_constant (float): the free constant C of the n = 3 logarithmic kernel P_3.
    """
    k: int
    model: str
    dimension: Dimension
    log_constant: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'dimension', Dimension.of(self.dimension))
        if self.k not in (0, 1, 2, 3):
            raise DomainError(f"Kernel index must be in 0..3, got {self.k}")
        if self.model not in ('halfspace', 'ball'):
            raise DomainError(f"Unknown model '{self.model}'")

    @property
    def decay(self) -> float:
        """kappa with |P_k(x, t)| = O(|x|^{-kappa}) at fixed t."""
        return self.dimension.n + KERNEL_DECAY[self.k]


def halfspace_kernel(k: int, n: int, r, t, log_constant: float = 0.0) -> np.ndarray:
    """Vectorised P_k(x - y, t) as a function of r = |x - y| and t."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    S = sphere_area(n)
    rho = np.hypot(r, t)
    with np.errstate(divide='ignore'):
        if k == 0:
            return 2.0 * (n + 1) / S * t ** 3 * rho ** (-(n + 3))
        if k == 1:
            return -2.0 / S * t ** 2 * rho ** (-(n + 1))
        if k == 2:
            return -1.0 / ((n - 1) * S) * t * rho ** (-(n - 1))
        if n == 3:
            return -np.log(rho ** 2) / (4.0 * S) + log_constant
        return rho ** (3 - n) / ((n - 1) * (n - 3) * S)


def ball_kernel(k: int, n: int, xi, eta, log_constant: float = 0.0) -> np.ndarray:
    """Vectorised ball kernel P_k(xi, eta) for xi in the ball and eta on the sphere."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return ball_kernel_distance(k, n, 1.0 - np.sum(xi * xi, axis=-1), stable_norm(xi - eta), log_constant)


def ball_kernel_distance(k: int, n: int, w, d, log_constant: float = 0.0) -> np.ndarray:
    """Ball kernel P_k written in w = 1 - |xi|^2 and d = |xi - eta|."""
    w = np.asarray(w, dtype=float)
    d = np.asarray(d, dtype=float)
    S = sphere_area(n)
    with np.errstate(divide='ignore'):
        if k == 0:
            return (n + 1) / (4.0 * S) * w ** 3 * d ** (-(n + 3))
        if k == 1:
            return -(w ** 2) / (2.0 * S) * d ** (-(n + 1))
        if k == 2:
            return -w / (2.0 * (n - 1) * S) * d ** (-(n - 1))
        if n == 3:
            return -np.log(d) / (2.0 * S) + log_constant
        return d ** (3 - n) / ((n - 1) * (n - 3) * S)


def _boundary_coordinate(q, n: int) -> np.ndarray:
    if isinstance(q, HalfSpacePoint):
        if not q.on_boundary:
            raise DomainError("Kernel source point must lie on the boundary t = 0")
        return np.array(q.x)
    y = np.asarray(q, dtype=float).ravel()
    if y.size == n + 1:
        if y[-1] != 0.0:
            raise DomainError("Kernel source point must lie on the boundary t = 0")
        return y[:-1]
    if y.size != n:
        raise DomainError(f"Boundary coordinate must have {n} entries, got {y.size}")
    return y


def poisson_kernel(spec: KernelSpec, p, q) -> float:
    """
    Closed-form value of P_k at an interior (or boundary) point p and boundary point q.

    Half-space: p = (x, t), q = y (or (y, 0)); ball: p = xi, q = eta on the sphere.

    Raises:
        SingularityError: p coincides with q on the boundary.
    """
    n = spec.dimension.n
    if spec.model == 'halfspace':
        X = as_coords(p)
        if isinstance(p, HalfSpacePoint):
            X = p.coords
        y = _boundary_coordinate(q, n)
        if X.size != n + 1:
            raise DomainError(f"Half-space point must have {n + 1} coordinates")
        if X[-1] < 0:
            raise DomainError("Half-space point must satisfy t >= 0")
        r = float(stable_norm(X[:-1] - y))
        if X[-1] == 0.0 and r == 0.0:
            raise SingularityError("Poisson kernel evaluated at p = q on the boundary")
        return float(halfspace_kernel(spec.k, n, r, X[-1], spec.log_constant))

    xi = BallPoint(as_coords(p), spec.dimension).coords
    eta = BallPoint(as_coords(q), spec.dimension)
    if not eta.on_boundary:
        raise DomainError("Ball kernel source point must lie on the sphere")
    if float(stable_norm(xi - eta.coords)) == 0.0:
        raise SingularityError("Poisson kernel evaluated at p = q on the sphere")
    return float(ball_kernel(spec.k, n, xi, eta.coords, spec.log_constant))


def kernel_mass(spec: KernelSpec, t: float, tol: float = 1e-12) -> float:
    """
    int_{R^n} P_0(x, t) dx by radial quadrature after the substitution |x| = t tan(theta);
    equals 1 for every t > 0.

    Raises:
        ContractError: `spec` is not the half-space kernel P_0.
        QuadratureError: the adaptive rule reports an error above 1e-9.
    """
    if spec.k != 0 or spec.model != 'halfspace':
        raise ContractError("kernel_mass is defined for the half-space kernel P_0 only")
    if not t > 0:
        raise DomainError(f"kernel_mass needs t > 0, got {t}")
    n = spec.dimension.n
    shell = sphere_area(n - 1)

    def integrand(theta: float) -> float:
        r = t * np.tan(theta)
        return float(halfspace_kernel(0, n, r, t)) * r ** (n - 1) * t / np.cos(theta) ** 2

    value, error = integrate.quad(integrand, 0.0, np.pi / 2, epsabs=tol, epsrel=tol, limit=200)
    logger.debug({'kernel_mass': value, 'n': n, 't': t, 'quad_error': error})
    if error > 1e-9:
        raise QuadratureError("kernel_mass quadrature did not converge",
                              diagnostics={'value': value, 'error_estimate': error, 't': t, 'n': n})
    return shell * value
