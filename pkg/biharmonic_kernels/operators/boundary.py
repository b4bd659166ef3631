"""
Conformal boundary operators B_k (k = 0..3) on the half-space and the ball, the T-curvature
constants and the biharmonic residual probe.

Half-space, at t = 0 with outward normal -dt:
    B_1 u = -u_t,  B_2 u = u_tt - Lap' u,  B_3 u = u_ttt + 3 Lap' u_t
where Lap' is the Laplacian in x. Ball, at |xi| = 1 with r the radius and S = Lap_{S^n} U:
    B_1 U = U_r + (n-3)/2 U
    B_2 U = U_rr - S + (n-2) U_r + (n-3)(n-1)/2 U
    B_3 U = -U_rrr - (3n-3)/2 U_rr + (3n-3)/2 U_r - 3 S_r - (3n-9)/2 S + (n^2-1)(n-3)/4 U
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from biharmonic_kernels.geometry.points import Dimension, as_coords
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.operators.stencils import (
    EPS, Estimate, Residual, Sampled, StencilConfig, central_offsets, combine, directional,
    fd_bilaplacian, fd_weights, one_sided_offsets, plain, richardson)
from biharmonic_kernels.src.exceptions import DomainError, EvaluationError

BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class BoundaryOperatorId:
    """
    Selects B_k on a model.

    Args:
        k (int): operator order, 0..3.
        model (str): 'halfspace' or 'ball'.
    """
    k: int
    model: str = 'halfspace'

    def __post_init__(self) -> None:
        if self.k not in (0, 1, 2, 3):
            raise DomainError(f"Boundary operator order must be in 0..3, got {self.k}")
        if self.model not in ('halfspace', 'ball'):
            raise DomainError(f"Unknown model '{self.model}'")


def t_constants(n: Dimension | int) -> tuple[float, float, float]:
    """(T_1, T_2, T_3) = ((n-3)/2, (n-1)(n-3)/2, (n^2-1)(n-3)/4)."""
    n = Dimension.of(n).n
    return ((n - 3) / 2, (n - 1) * (n - 3) / 2, (n * n - 1) * (n - 3) / 4)


def ball_coefficients(n: int) -> dict[str, tuple[float, ...]]:
    """
    Coefficients of the ball operators in the basis (U, U_r, U_rr, U_rrr, S, S_r).
    """
    t1, t2, t3 = t_constants(n)
    return {
        1: (t1, 1.0, 0.0, 0.0, 0.0, 0.0),
        2: (t2, n - 2.0, 1.0, 0.0, -1.0, 0.0),
        3: (t3, (3 * n - 3) / 2, -(3 * n - 3) / 2, -1.0, -(3 * n - 9) / 2, -3.0),
    }


HALFSPACE_COEFFICIENTS = {
    # basis (u, u_t, u_tt, u_ttt, Lap' u, Lap' u_t)
    1: (0.0, -1.0, 0.0, 0.0, 0.0, 0.0),
    2: (0.0, 0.0, 1.0, 0.0, -1.0, 0.0),
    3: (0.0, 0.0, 0.0, 1.0, 0.0, 3.0),
}


def _check_boundary_point(model: str, p: np.ndarray) -> None:
    if model == 'halfspace':
        if abs(p[-1]) > BOUNDARY_SLACK:
            raise DomainError(f"Half-space boundary operators act at t = 0, got t = {p[-1]}")
    elif abs(np.linalg.norm(p) - 1.0) > BOUNDARY_SLACK:
        raise DomainError(f"Ball boundary operators act on |xi| = 1, got |xi| = {np.linalg.norm(p)}")


# _____________________________________________exact_section_____________________________________________________


def _exact_basis(field: ScalarField, p: np.ndarray) -> np.ndarray:
    if field.model == 'halfspace':
        keys = ('value', 'dt1', 'dt2', 'dt3', 'tlap', 'tlap_dt')
        return np.array([field.exact(key, p) for key in keys])
    n = field.dimension.n
    U, Ur, Urr, Urrr, L, Lr = (field.exact(key, p) for key in ('value', 'dr1', 'dr2', 'dr3', 'laplacian', 'lap_dr1'))
    S = L - Urr - n * Ur
    Sr = Lr - Urrr - n * Urr + n * Ur + 2.0 * S
    return np.array([U, Ur, Urr, Urrr, S, Sr])


def _coefficients(k: int, model: str, n: int) -> np.ndarray:
    table = HALFSPACE_COEFFICIENTS if model == 'halfspace' else ball_coefficients(n)
    return np.asarray(table[k], dtype=float)


# _____________________________________________stencil_section___________________________________________________


def _tangential_laplacian(inner: Callable[[np.ndarray], Sampled], n: int, h: float, order: int):
    eye = np.eye(n + 1)
    return combine(*[(1.0, directional(inner, eye[i], 2, h, central_offsets(2, order))) for i in range(n)])


def _spherical_laplacian(inner: Callable[[np.ndarray], Sampled], frame: np.ndarray, h: float, order: int):
    """
    Lap_{S^n} of xi -> U(|P| xi) at each point P, via second differences along great circles
    through P/|P| in the orthonormal tangent directions of `frame`.
    """
    offsets = central_offsets(2, order)
    w = fd_weights(offsets, 2) / h ** 2
    angles = np.asarray(offsets, dtype=float) * h

    def sampled(points: np.ndarray) -> Sampled:
        P = np.atleast_2d(points)
        radius = np.linalg.norm(P, axis=1)
        value = np.zeros(P.shape[0])
        magnitude = np.zeros(P.shape[0])
        for tau in frame.T:
            rotated = (np.cos(angles)[None, :, None] * P[:, None, :]
                       + np.sin(angles)[None, :, None] * radius[:, None, None] * tau[None, None, :])
            out = inner(rotated.reshape(-1, P.shape[1]))
            value += out.value.reshape(P.shape[0], -1) @ w
            magnitude += out.magnitude.reshape(P.shape[0], -1) @ np.abs(w)
        return Sampled(value, magnitude)
    return sampled


def _stencil_basis(field: ScalarField, p: np.ndarray, s: StencilConfig) -> list[Callable[[float], Callable]]:
    """
    Stencil builders (scale -> operator) for the six basis quantities of the model.
    """
    n = field.dimension.n
    order = s.order
    clearance = min(field.clearance(p, include_boundary=False), 1.0)
    base = plain(field)

    def reach(m: int) -> float:
        return s.step(m, clearance, m + order - 1)

    h = {m: reach(m) for m in (1, 2, 3)}
    h_tan = s.step(2, clearance, max(central_offsets(2, order)) + order)

    if field.model == 'halfspace':
        normal = np.zeros(n + 1)
        normal[-1] = 1.0

        def t_derivative(inner, m, scale):
            return directional(inner, normal, m, scale * h[m], one_sided_offsets(m, order))

        return [
            lambda scale: base,
            lambda scale: t_derivative(base, 1, scale),
            lambda scale: t_derivative(base, 2, scale),
            lambda scale: t_derivative(base, 3, scale),
            lambda scale: _tangential_laplacian(base, n, scale * h_tan, order),
            lambda scale: t_derivative(_tangential_laplacian(base, n, scale * h_tan, order), 1, scale),
        ]

    inward = -p / np.linalg.norm(p)
    frame = sphere_frame(p)

    def r_derivative(inner, m, scale):
        # one-sided along -omega; d/dr = -d/ds
        return directional(inner, inward, m, scale * h[m], one_sided_offsets(m, order), sign=(-1.0) ** m)

    return [
        lambda scale: base,
        lambda scale: r_derivative(base, 1, scale),
        lambda scale: r_derivative(base, 2, scale),
        lambda scale: r_derivative(base, 3, scale),
        lambda scale: _spherical_laplacian(base, frame, scale * h_tan, order),
        lambda scale: r_derivative(_spherical_laplacian(base, frame, scale * h_tan, order), 1, scale),
    ]


# ______________________________________________operations_section_______________________________________________


def operator_estimate(op: BoundaryOperatorId, f: ScalarField, p, s: StencilConfig | None = None) -> Estimate:
    """
    B_k f at a boundary point, with an error estimate.

    Exact derivative expressions are used when `f` is symbolic, stencils otherwise.

    Raises:
        DomainError: `p` is not on the boundary of the operator's model.
        EvaluationError: a stencil cannot be placed around `p`.
    """
    s = s or StencilConfig()
    point = np.asarray(as_coords(p), dtype=float)
    if f.model != op.model:
        raise DomainError(f"Operator on '{op.model}' applied to a field on '{f.model}'")
    _check_boundary_point(op.model, point)
    if op.k == 0:
        return Estimate(float(f(point)), 0.0)

    coefficients = _coefficients(op.k, op.model, f.dimension.n)
    if f.has_exact:
        basis = _exact_basis(f, point)
        value = float(coefficients @ basis)
        return Estimate(value, 64 * EPS * float(np.abs(coefficients) @ np.abs(basis)))

    builders = _stencil_basis(f, point, s)
    active = [(c, b) for c, b in zip(coefficients, builders) if c != 0.0]

    def build(scale: float):
        return combine(*[(c, b(scale)) for c, b in active])

    return richardson(build, point, s.order)


def operator_values(op: BoundaryOperatorId, f: ScalarField, points) -> np.ndarray:
    """
    B_k f on a batch of boundary points (..., n+1) from exact derivatives; used to turn a
    manufactured solution into boundary data.

    Raises:
        EvaluationError: `f` has no symbolic form.
    """
    P = np.atleast_2d(np.asarray(as_coords(points), dtype=float))
    if f.model != op.model:
        raise DomainError(f"Operator on '{op.model}' applied to a field on '{f.model}'")
    if op.k == 0:
        return np.atleast_1d(f.exact('value', P) if f.has_exact else f(P))
    if not f.has_exact:
        raise EvaluationError(f"Batch operator values need a symbolic field, got '{f.name}'")
    basis = np.atleast_2d(_exact_basis(f, P).reshape(6, -1))
    return _coefficients(op.k, op.model, f.dimension.n) @ basis


def apply_operator(op: BoundaryOperatorId, f: ScalarField, p, s: StencilConfig | None = None) -> float:
    """
    B_k f at the boundary point `p`; k = 0 returns f(p).

    Example:
        >>> u = ScalarField.from_expression(lambda z: z[-1], 4, 'halfspace')
        >>> apply_operator(BoundaryOperatorId(1), u, [0, 0, 0, 0, 0])
        -1.0
    """
    return operator_estimate(op, f, p, s).value


def biharmonic_residual(f: ScalarField, p, s: StencilConfig | None = None, use_exact: bool = True) -> Residual:
    """
    Delta^2 f at an interior point as a `Residual` carrying its own tolerance.

    Symbolic fields are differentiated exactly unless `use_exact` is False.
    """
    s = s or StencilConfig()
    point = np.asarray(as_coords(p), dtype=float)
    clearance = f.clearance(point)
    if not clearance > 0:
        raise DomainError("biharmonic_residual needs an interior point away from singular points")
    if f.has_exact and use_exact:
        value = float(f.exact('bilaplacian', point))
        scale = max(1.0, abs(float(f(point)))) / min(clearance, 1.0) ** 4
        return Residual(value, 1e3 * EPS * max(scale, abs(value)))
    estimate = fd_bilaplacian(f, point, clearance, s)
    return Residual(estimate.value, estimate.error)


def boundary_residual(op: BoundaryOperatorId, f: ScalarField, p, target: float,
                      s: StencilConfig | None = None) -> Residual:
    """|B_k f(p) - target| with the operator's error estimate as tolerance."""
    estimate = operator_estimate(op, f, p, s)
    return Residual(estimate.value - target, estimate.error + 64 * EPS * abs(target))


def sphere_frame(p: Sequence[float]) -> np.ndarray:
    """Orthonormal basis of the tangent space of S^n at p, as columns."""
    return linalg.null_space(np.asarray(p, dtype=float)[None, :])
