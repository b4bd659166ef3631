"""
The conformal map F between the half-space and the ball, conformal factors, the distance identities
and the Kelvin transform.

F(X) = -e_{n+1} + 2(X + e_{n+1})/|X + e_{n+1}|^2 is an involution of R^{n+1} minus the south pole;
it maps the closed half-space onto the closed ball minus -e_{n+1}. All functions accept either typed
points or coordinate arrays with the coordinate axis last.
"""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
from scipy import special

from biharmonic_kernels.geometry.points import BallPoint, Dimension, HalfSpacePoint, as_coords
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import DomainError, SingularityError


def sphere_area(n: int) -> float:
    """
    |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2).

    Args:
        n (int): sphere dimension, n >= 1.

    Returns:
        (float): surface area of the unit n-sphere in R^{n+1}.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"sphere_area needs an integer n >= 1, got {n}")
    return float(2.0 * np.pi ** ((n + 1) / 2) / special.gamma((n + 1) / 2))


def stable_norm(v: np.ndarray, axis: int = -1) -> np.ndarray:
    """Euclidean norm with max-scaling so powers of tiny or huge distances keep relative accuracy."""
    v = np.asarray(v, dtype=float)
    scale = np.max(np.abs(v), axis=axis, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    out = safe * np.sqrt(np.sum((v / safe) ** 2, axis=axis, keepdims=True))
    return np.squeeze(np.where(scale > 0, out, 0.0), axis=axis)


def south_pole(dimension: Dimension | int) -> np.ndarray:
    dim = Dimension.of(dimension)
    e = np.zeros(dim.ambient)
    e[-1] = -1.0
    return e


def _shifted(points: np.ndarray) -> np.ndarray:
    shifted = np.array(points, dtype=float, copy=True)
    shifted[..., -1] += 1.0
    return shifted


def conformal_map_F(X):
    """
    Apply F. Typed points are mapped to the other model's point type; arrays map to arrays.

    Raises:
        SingularityError: the input is within 1e-8 of -e_{n+1}.
    """
    coords = as_coords(X)
    Y = _shifted(coords)
    norm = stable_norm(Y)
    if np.any(norm < setting.SINGULAR_POINT_MARGIN):
        raise SingularityError("F is singular at the south pole -e_{n+1}")
    out = 2.0 * Y / (norm ** 2)[..., None]
    out[..., -1] -= 1.0
    if isinstance(X, HalfSpacePoint):
        return BallPoint(_clip_to_ball(out), X.dimension)
    if isinstance(X, BallPoint):
        # boundary points map to t = 0 up to rounding
        t = out[-1] if out[-1] > 0 or out[-1] < -1e-12 else 0.0
        return HalfSpacePoint(out[:-1], t, X.dimension)
    return out


def _clip_to_ball(xi: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(xi))
    return xi / norm if norm > 1.0 else xi


def conformal_factor(X, dimension: Dimension | int) -> np.ndarray | float:
    """
    U_0(X) = (2/|X + e_{n+1}|^2)^{(n-3)/2}, the factor with F^*(|d xi|^2) = (2/|X+e|^2)^2 |dX|^2.
    """
    dim = Dimension.of(dimension)
    norm = stable_norm(_shifted(as_coords(X)))
    value = (2.0 / norm ** 2) ** ((dim.n - 3) / 2)
    return float(value) if np.ndim(value) == 0 else value


class DistanceResiduals(NamedTuple):
    conformal: float
    reflected: float
    extended: float


def extended_distance(xi, eta) -> np.ndarray | float:
    """
    |xi| |xi* - eta| written as sqrt(|xi-eta|^2 + (1-|xi|^2)(1-|eta|^2)), which stays regular at xi = 0.
    """
    a, b = as_coords(xi), as_coords(eta)
    d2 = stable_norm(a - b) ** 2
    value = np.sqrt(d2 + (1.0 - np.sum(a * a, axis=-1)) * (1.0 - np.sum(b * b, axis=-1)))
    return float(value) if np.ndim(value) == 0 else value


def _relative(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


def distance_identity_residual(xi, eta) -> DistanceResiduals:
    """
    Relative residuals of the distance identities under F for two ball points:

    - conformal: |F(xi) - F(eta)| = 2|xi - eta| / (|xi + e||eta + e|)
    - reflected: 2|xi||xi* - eta| = |xi + e||eta + e||X-bar - Y| with X = F(xi), Y = F(eta)
    - extended: |xi|^2|xi* - eta|^2 = |xi - eta|^2 + (1 - |xi|^2)(1 - |eta|^2)

    Returns:
        (DistanceResiduals): the three relative residuals.
    """
    a, b = as_coords(xi), as_coords(eta)
    X, Y = conformal_map_F(a), conformal_map_F(b)
    na, nb = float(stable_norm(_shifted(a))), float(stable_norm(_shifted(b)))

    conformal = _relative(float(stable_norm(X - Y)), 2.0 * float(stable_norm(a - b)) / (na * nb))

    X_bar = X.copy()
    X_bar[-1] = -X_bar[-1]
    reflected = _relative(2.0 * extended_distance(a, b), na * nb * float(stable_norm(X_bar - Y)))

    norm2 = float(np.dot(a, a))
    if norm2 < 1e-20:
        extended = 0.0
    else:
        direct = norm2 * float(stable_norm(a / norm2 - b)) ** 2
        extended = _relative(direct, extended_distance(a, b) ** 2)
    return DistanceResiduals(conformal, reflected, extended)


def kelvin_transform(u: Callable[[np.ndarray], np.ndarray], X, dimension: Dimension | int) -> np.ndarray | float:
    """
    u*(X) = |X|^{3-n} u(X/|X|^2).

    Args:
        u (callable): field evaluated on coordinate arrays (a ScalarField works).
        X: half-space point or coordinate array.
        dimension (Dimension | int): boundary dimension n.

    Raises:
        SingularityError: X = 0.
    """
    dim = Dimension.of(dimension)
    coords = as_coords(X)
    norm = stable_norm(coords)
    if np.any(norm == 0.0):
        raise SingularityError("Kelvin transform is undefined at X = 0")
    image = coords / (norm ** 2)[..., None] if coords.ndim > 1 else coords / norm ** 2
    value = norm ** (3 - dim.n) * np.asarray(u(image), dtype=float)
    return float(value) if np.ndim(value) == 0 else value


def kelvin_field(u, dimension: Dimension | int):
    """
    The Kelvin transform of a ScalarField as a new ScalarField; symbolic when `u` is.
    """
    from biharmonic_kernels.operators.fields import ScalarField

    dim = Dimension.of(dimension)
    if u.expression is not None:
        import sympy
        z = u.symbols
        r2 = sum(s ** 2 for s in z)
        expr = r2 ** sympy.Rational(3 - dim.n, 2) * u.expression.subs({s: s / r2 for s in z}, simultaneous=True)
        return ScalarField(None, dim, u.model, expression=expr, symbols=z,
                           singular_points=(np.zeros(dim.ambient),), name=f'kelvin({u.name})')
    return ScalarField(lambda P: kelvin_transform(u, P, dim), dim, u.model,
                       singular_points=(np.zeros(dim.ambient),), name=f'kelvin({u.name})')
