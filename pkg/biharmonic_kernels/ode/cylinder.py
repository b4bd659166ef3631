"""
Cylinder reduction of radial solutions on the ball.

With t = -log r and V(t) = e^{(3-n)t/2} U(e^{-t}), the equation Delta^2 U = kappa U^{p*} becomes

    V'''' - (n^2 - 2n + 5)/2 V'' + ((n+1)(n-3)/4)^2 V = kappa V^{p*},   p* = (n+5)/(n-3),

which factors as (d^2/dt^2 - mu)(d^2/dt^2 - lambda) V with lambda = ((n-3)/2)^2, mu = ((n+1)/2)^2.
The boundary operators at r = 1 become -V'(0), V''(0) + (n+1)(n-3)/4 V(0) and
V'''(0) - (3n^2 - 6n + 7)/4 V'(0).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy

from biharmonic_kernels.extremal.sharp_constants import q_curvature_sphere
from biharmonic_kernels.geometry.points import Dimension
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.src.exceptions import ContractError, DomainError

NORMALIZATIONS = ('unit', 'geometric')


@dataclass(frozen=True)
class OdeParams:
    """
    Coefficients of the cylinder ODE.

    Args:
        dimension (Dimension | int): n >= 4.
        normalization (str): 'unit' for Delta^2 U = U^{p*}, 'geometric' for
            Delta^2 U = ((n-3)/2) Q_{S^{n+1}} U^{p*}.
    """
    dimension: Dimension
    normalization: str = 'unit'

    def __init__(self, dimension: Dimension | int, normalization: str = 'unit') -> None:
        dim = Dimension.of(dimension)
        dim.require_classification()
        if normalization not in NORMALIZATIONS:
            raise DomainError(f"Unknown normalization '{normalization}', expected one of {NORMALIZATIONS}")
        object.__setattr__(self, 'dimension', dim)
        object.__setattr__(self, 'normalization', normalization)
        n = dim.n
        if (n - 3) ** 2 * (n + 1) ** 2 != 16 * self.lam * self.mu or (n - 3) ** 2 + (n + 1) ** 2 != 4 * (self.lam + self.mu):
            raise ContractError("Cylinder coefficients do not factor")

    @property
    def n(self) -> int:
        return self.dimension.n

    @property
    def lam(self) -> float:
        return ((self.n - 3) / 2) ** 2

    @property
    def mu(self) -> float:
        return ((self.n + 1) / 2) ** 2

    @property
    def zeroth_coeff(self) -> float:
        return ((self.n + 1) * (self.n - 3) / 4) ** 2

    @property
    def damping(self) -> float:
        return (self.n ** 2 - 2 * self.n + 5) / 2

    @property
    def p_star(self) -> float:
        return (self.n + 5) / (self.n - 3)

    @property
    def kappa(self) -> float:
        """Coefficient of the nonlinearity."""
        return 1.0 if self.normalization == 'unit' else (self.n - 3) / 2 * q_curvature_sphere(self.n)

    @property
    def fixed_point(self) -> float:
        """The constant solution V = (zerothCoeff / kappa)^{1/(p*-1)}."""
        return (self.zeroth_coeff / self.kappa) ** (1.0 / (self.p_star - 1.0))

    @property
    def unit_scaling(self) -> float:
        """c with c V solving the unit equation whenever V solves this one."""
        return self.kappa ** ((self.n - 3) / 8)

    def forcing(self, V):
        """kappa V^{p*} written as zerothCoeff Vbar (V/Vbar)^{p*}; odd extension below zero."""
        V = np.asarray(V, dtype=float)
        bar = self.fixed_point
        ratio = V / bar
        return self.zeroth_coeff * bar * np.sign(ratio) * np.abs(ratio) ** self.p_star

    def rhs(self, t: float, state: np.ndarray) -> np.ndarray:
        """First-order system in (V, V', V'', V''')."""
        V, dV, ddV, dddV = state
        return np.array([dV, ddV, dddV, self.damping * ddV - self.zeroth_coeff * V + self.forcing(V)])


@dataclass(frozen=True)
class OdeBoundary:
    """
    Boundary data of the cylinder problem: V(0) = C0 > 0, B_i V = Ci (i = 1 or 2), B_3 V = C3.
    """
    i: int
    C0: float
    Ci: float
    C3: float

    def __post_init__(self) -> None:
        if self.i not in (1, 2):
            raise ContractError(f"The cylinder problem pairs B_3 with B_1 or B_2, got i = {self.i}")
        if not self.C0 > 0:
            raise DomainError(f"V(0) must be positive, got {self.C0}")

    @classmethod
    def from_state(cls, i: int, state, n: Dimension | int) -> "OdeBoundary":
        values = cylinder_operators(state, n)
        return cls(i, float(state[0]), values[i - 1], values[2])

    def initial_state(self, free: float, n: Dimension | int) -> np.ndarray:
        """
        The initial state for the free datum: V''(0) when i = 1, V'(0) when i = 2.
        """
        k = Dimension.of(n).n
        third = (3 * k * k - 6 * k + 7) / 4
        if self.i == 1:
            d1 = -self.Ci
            return np.array([self.C0, d1, free, self.C3 + third * d1])
        d2 = self.Ci - (k + 1) * (k - 3) / 4 * self.C0
        return np.array([self.C0, free, d2, self.C3 + third * free])

    def free_datum(self, state) -> float:
        return float(state[2] if self.i == 1 else state[1])


def cylinder_operators(state, n: Dimension | int) -> tuple[float, float, float]:
    """(B_1, B_2, B_3) of the state (V, V', V'', V''') at t = 0."""
    k = Dimension.of(n).n
    V, dV, ddV, dddV = (float(v) for v in state)
    return (-dV, ddV + (k + 1) * (k - 3) / 4 * V, dddV - (3 * k * k - 6 * k + 7) / 4 * dV)


def _radial_evaluator(U: ScalarField | Callable, n: int) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(U, ScalarField):
        if not (U.radial and U.model == 'ball'):
            raise DomainError("The cylinder transform takes radial fields on the ball")
        pole = np.eye(n + 1)[-1]
        return lambda r: np.asarray(U(np.asarray(r, dtype=float)[..., None] * pole), dtype=float)
    return lambda r: np.asarray(U(np.asarray(r, dtype=float)), dtype=float)


def cylinder_transform(U: ScalarField | Callable, t, n: Dimension | int):
    """
    V(t) = e^{(3-n)t/2} U(e^{-t}) for a radial U, given as a ball field or a function of r.

    Example:
        >>> one = ScalarField.constant(1.0, 5, 'ball')
        >>> round(float(cylinder_transform(one, 1.0, 5)), 12) == round(float(np.exp(-1.0)), 12)
        True
    """
    k = Dimension.of(n).n
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("The cylinder variable satisfies t >= 0")
    value = np.exp((3 - k) * t / 2) * _radial_evaluator(U, k)(np.exp(-t))
    return float(value) if value.ndim == 0 else value


def inverse_cylinder_transform(V: Callable, r, n: Dimension | int):
    """U(r) = r^{(3-n)/2} V(-log r) on (0, 1]."""
    k = Dimension.of(n).n
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r > 1):
        raise DomainError("The inverse cylinder transform is defined for 0 < r <= 1")
    value = r ** ((3 - k) / 2) * np.asarray(V(-np.log(r)), dtype=float)
    return float(value) if value.ndim == 0 else value


# ____________________________________________explicit_section____________________________________________________


@lru_cache(maxsize=None)
def _sech_derivatives(exponent: sympy.Rational) -> Callable[..., list]:
    s = sympy.Symbol('s', real=True)
    expr = sympy.sech(s) ** exponent
    return sympy.lambdify(s, [sympy.diff(expr, s, k) for k in range(4)], modules='numpy')


def explicit_state(params: OdeParams, eps: float, t) -> np.ndarray:
    """
    (V, V', V'', V''') of the transformed radial bubble (2 eps/(eps^2 + r^2))^{(n-3)/2}, which is
    sech(t + log eps)^{(n-3)/2} under the geometric normalization, scaled for the unit one.
    """
    if not eps > 0:
        raise DomainError(f"Bubble scale must satisfy eps > 0, got {eps}")
    n = params.n
    geometric = OdeParams(n, 'geometric')
    scale = geometric.unit_scaling / params.unit_scaling
    t = np.asarray(t, dtype=float)
    values = _sech_derivatives(sympy.Rational(n - 3, 2))(t + np.log(eps))
    return scale * np.array([np.broadcast_to(v, t.shape) for v in values], dtype=float)


def radial_bubble(eps: float, n: Dimension | int) -> ScalarField:
    """(2 eps/(eps^2 + |xi|^2))^{(n-3)/2} as a radial ball field."""
    dim = Dimension.of(n)
    e = sympy.nsimplify(eps)
    return ScalarField.from_expression(
        lambda z: (2 * e / (e ** 2 + sum(s ** 2 for s in z))) ** sympy.Rational(dim.n - 3, 2),
        dim, 'ball', name=f'radial_bubble({eps:g})', radial=True)
