"""
Geometric bubbles on the half-space and the ball, the ball automorphisms and the bubble BVP residuals.

    U_{x0,eps}(x, t) = (2 eps / ((eps + t)^2 + |x - x0|^2))^{(n-3)/2}
    U_{xi0}(xi)     = ((1 - |xi0|^2) / (|xi|^2 |xi0|^2 - 2 xi0 . xi + 1))^{(n-3)/2}

Both solve Delta^2 U = 0 with B_k U = T_k U^{p_k*} on the boundary for every k in 1..3, and are
matched by the conformal map with xi0 = F(x0, eps).
"""
from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np
import sympy

from biharmonic_kernels.geometry.conformal import conformal_factor, conformal_map_F, stable_norm
from biharmonic_kernels.geometry.points import BubbleParams, Dimension, as_coords
from biharmonic_kernels.operators.boundary import BoundaryOperatorId, biharmonic_residual, operator_estimate, t_constants
from biharmonic_kernels.operators.fields import ScalarField, coordinate_symbols
from biharmonic_kernels.operators.stencils import EPS, Residual, StencilConfig
from biharmonic_kernels.src.exceptions import ContractError, DomainError


def bubble_values(params: BubbleParams, points) -> np.ndarray:
    """Vectorised bubble on coordinate arrays (..., n+1) of the params' model."""
    P = np.asarray(as_coords(points), dtype=float)
    n = params.dimension.n
    exponent = (n - 3) / 2
    if params.is_half_space:
        eps = params.eps
        x, t = P[..., :-1], P[..., -1]
        dist2 = np.sum((x - np.asarray(params.x0)) ** 2, axis=-1)
        return (2.0 * eps / ((eps + t) ** 2 + dist2)) ** exponent
    xi0 = np.asarray(params.xi0)
    a2 = float(xi0 @ xi0)
    return ((1.0 - a2) / (np.sum(P * P, axis=-1) * a2 - 2.0 * (P @ xi0) + 1.0)) ** exponent


def bubble_eval(params: BubbleParams, p) -> float:
    """
    Closed-form bubble value at a point of the params' model.

    Example:
        >>> bubble_eval(BubbleParams.half_space([0, 0, 0, 0, 0], 1.0, 5), [0, 0, 0, 0, 0, 0])
        2.0
    """
    P = np.asarray(as_coords(p), dtype=float)
    if P.shape[-1] != params.dimension.ambient:
        raise DomainError(f"Point must have {params.dimension.ambient} coordinates")
    if params.is_half_space and P[-1] < 0:
        raise DomainError("Half-space bubble evaluated below t = 0")
    if not params.is_half_space and float(np.linalg.norm(P)) > 1.0 + 1e-12:
        raise DomainError("Ball bubble evaluated outside the closed ball")
    return float(bubble_values(params, P))


def bubble_field(params: BubbleParams) -> ScalarField:
    """The bubble as a symbolic field, for exact boundary operators."""
    dim = params.dimension
    z = coordinate_symbols(dim)
    exponent = sympy.Rational(dim.n - 3, 2)
    if params.is_half_space:
        eps = sympy.nsimplify(params.eps)
        dist2 = sum((z[i] - sympy.nsimplify(params.x0[i])) ** 2 for i in range(dim.n))
        expr = (2 * eps / ((eps + z[-1]) ** 2 + dist2)) ** exponent
        return ScalarField(None, dim, 'halfspace', expression=expr, symbols=z, name='bubble')
    xi0 = [sympy.nsimplify(c) for c in params.xi0]
    a2 = sum(c ** 2 for c in xi0)
    expr = ((1 - a2) / (sum(s ** 2 for s in z) * a2 - 2 * sum(c * s for c, s in zip(xi0, z)) + 1)) ** exponent
    norm = float(np.linalg.norm(params.xi0))
    return ScalarField(None, dim, 'ball', expression=expr, symbols=z, name='ball_bubble',
                       radial=norm == 0.0, axis=np.asarray(params.xi0) / norm if norm > 0 else None)


def bubble_correspondence_residual(params: BubbleParams, X) -> float:
    """
    Relative residual of U_0(X) U_{xi0}(F(X)) = U_{x0,eps}(X) with xi0 = F(x0, eps).
    """
    if not params.is_half_space:
        params = params.to_half_space()
    X = np.asarray(as_coords(X), dtype=float)
    lhs = conformal_factor(X, params.dimension) * bubble_eval(params.to_ball(), _into_ball(conformal_map_F(X)))
    rhs = bubble_eval(params, X)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def _into_ball(xi: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(xi))
    return xi / norm if norm > 1.0 else xi


# ____________________________________________automorphism_section_______________________________________________


def automorphism_factor(a, xi) -> np.ndarray | float:
    """(1 - |a|^2) / (1 - 2 a . xi + |a|^2 |xi|^2)."""
    a = np.asarray(a, dtype=float)
    xi = np.asarray(xi, dtype=float)
    a2 = float(a @ a)
    value = (1.0 - a2) / (1.0 - 2.0 * (xi @ a) + a2 * np.sum(xi * xi, axis=-1))
    return float(value) if np.ndim(value) == 0 else value


def ball_automorphism(a, xi) -> np.ndarray:
    """
    psi_a(xi) = ((1 - |a|^2)(xi - a) - |xi - a|^2 a) / (1 - 2 a . xi + |a|^2 |xi|^2), the ball
    automorphism with psi_a(a) = 0.

    Raises:
        DomainError: |a| >= 1.
    """
    a = np.asarray(a, dtype=float)
    xi = np.asarray(xi, dtype=float)
    a2 = float(a @ a)
    if a2 >= 1.0:
        raise DomainError(f"Automorphism parameter must satisfy |a| < 1, got {np.sqrt(a2)}")
    diff = xi - a
    denominator = 1.0 - 2.0 * (xi @ a) + a2 * np.sum(xi * xi, axis=-1)
    numerator = (1.0 - a2) * diff - np.sum(diff * diff, axis=-1)[..., None] * a if xi.ndim > 1 else \
        (1.0 - a2) * diff - float(diff @ diff) * a
    return numerator / (denominator[..., None] if xi.ndim > 1 else denominator)


def automorphism_residual(a, xi) -> float:
    """
    Relative residual of 1 - |psi_a(xi)|^2 = factor_a(xi) (1 - |xi|^2), the identity that makes
    factor_a^{(n-3)/2} the ball bubble centred at a.
    """
    image = ball_automorphism(a, xi)
    lhs = 1.0 - float(image @ image)
    rhs = automorphism_factor(a, xi) * (1.0 - float(np.dot(xi, xi)))
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


# ____________________________________________bvp_section_________________________________________________________


class BubbleResiduals(NamedTuple):
    interior: Residual
    boundary_i: Residual
    boundary_j: Residual

    @property
    def passed(self) -> bool:
        return self.interior.passed and self.boundary_i.passed and self.boundary_j.passed


def worst_residual(residuals: Iterable[Residual]) -> Residual:
    residuals = list(residuals)
    if not residuals:
        return Residual(0.0, 0.0)
    return max(residuals, key=lambda r: abs(r.value) - r.tolerance)


def nonlinear_boundary_residual(k: int, field: ScalarField, p, s: StencilConfig | None = None) -> Residual:
    """B_k u - T_k u^{p_k*} at a boundary point, with the operator's error estimate as tolerance."""
    n = field.dimension.n
    estimate = operator_estimate(BoundaryOperatorId(k, field.model), field, p, s)
    target = t_constants(n)[k - 1] * float(field(p)) ** field.dimension.p_star(k)
    return Residual(estimate.value - target, estimate.error + 1e3 * EPS * max(1.0, abs(target)))


def bubble_bvp_residual(i: int, j: int, params: BubbleParams, interior: Sequence[Sequence[float]],
                        boundary: Sequence[Sequence[float]], s: StencilConfig | None = None,
                        use_exact: bool = True) -> BubbleResiduals:
    """
    Worst Delta^2 U over the interior samples and worst B_k U - T_k U^{p_k*} (k = i, j) over the
    boundary samples, for the bubble of `params`.

    Raises:
        ContractError: n < 4 or (i, j) not a pair 1 <= i < j <= 3.
    """
    params.dimension.require_classification()
    if not (1 <= i < j <= 3):
        raise ContractError(f"Bubble BVP pairs need 1 <= i < j <= 3, got ({i},{j})")
    field = bubble_field(params)
    return BubbleResiduals(
        worst_residual(biharmonic_residual(field, p, s, use_exact=use_exact) for p in interior),
        worst_residual(nonlinear_boundary_residual(i, field, p, s) for p in boundary),
        worst_residual(nonlinear_boundary_residual(j, field, p, s) for p in boundary),
    )


def bubble_scaling_residual(params: BubbleParams, X) -> float:
    """Relative residual of U_{x0,eps}(x, t) = eps^{-(n-3)/2} U_{0,1}((x - x0)/eps, t/eps)."""
    X = np.asarray(as_coords(X), dtype=float)
    n = params.dimension.n
    unit = BubbleParams.half_space(np.zeros(n), 1.0, params.dimension)
    scaled = np.append((X[:-1] - np.asarray(params.x0)) / params.eps, X[-1] / params.eps)
    lhs = bubble_eval(params, X)
    rhs = params.eps ** (-(n - 3) / 2) * bubble_eval(unit, scaled)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def bubble_trace_decay_slope(params: BubbleParams, radii: Sequence[float]) -> float:
    """Slope of log U(x, 0) against log |x| along the first axis; tends to 3 - n."""
    n = params.dimension.n
    R = np.asarray(radii, dtype=float)
    points = np.zeros((R.size, n + 1))
    points[:, 0] = np.asarray(params.x0)[0] + R
    points[:, 1:n] = np.asarray(params.x0)[1:]
    return float(np.polyfit(np.log(R), np.log(bubble_values(params, points)), 1)[0])


def random_half_space_points(dimension: Dimension | int, count: int, rng: np.random.Generator,
                             spread: float = 2.0, height: tuple[float, float] = (0.2, 2.0)) -> np.ndarray:
    """Seeded interior half-space samples with |x_i| <= spread and t in `height`."""
    dim = Dimension.of(dimension)
    x = rng.uniform(-spread, spread, (count, dim.n))
    t = rng.uniform(*height, count)
    return np.column_stack([x, t])


def random_boundary_points(dimension: Dimension | int, count: int, rng: np.random.Generator,
                           model: str = 'halfspace', spread: float = 2.0) -> np.ndarray:
    """Seeded boundary samples: (x, 0) with |x_i| <= spread, or unit vectors on S^n."""
    dim = Dimension.of(dimension)
    if model == 'halfspace':
        return np.column_stack([rng.uniform(-spread, spread, (count, dim.n)), np.zeros(count)])
    P = rng.standard_normal((count, dim.ambient))
    return P / stable_norm(P)[:, None]
