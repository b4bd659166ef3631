"""
Biharmonic Green functions G^{(i,j)} for the four well-posed operator pairs on both models.

With d = |X - Y| and D = |X-bar - Y| on the half-space (D = |xi||xi* - eta|, the extended distance,
on the ball) and G = Gamma(d) + H:

    n != 3:  H^{(0,1)} = Gamma(D)/2 [(n-3) d^2/D^2 - (n-1)]     H^{(0,2)} = -Gamma(D)
             H^{(2,3)} = -H^{(0,1)}                              H^{(1,3)} = Gamma(D)
    n = 3:   H^{(0,1)} = -Gamma(D) + (d^2/D^2 - 1)/(8|S^3|)      H^{(0,2)} = -Gamma(D)
             H^{(2,3)} = -H^{(0,1)} + C                          H^{(1,3)} = Gamma(D) + C

Gamma inside these formulas carries no additive constant; C is the free additive constant of the Green function.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import sympy
from scipy import integrate

from biharmonic_kernels.geometry.conformal import (
    conformal_map_F, extended_distance, sphere_area, stable_norm, south_pole)
from biharmonic_kernels.geometry.points import BallPoint, Dimension, as_coords
from biharmonic_kernels.kernels.fundamental import RelationResult, gamma_of_distance
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.operators.boundary import BoundaryOperatorId, biharmonic_residual, operator_estimate
from biharmonic_kernels.operators.fields import ScalarField, coordinate_symbols
from biharmonic_kernels.operators.stencils import Residual, StencilConfig
from biharmonic_kernels.src.exceptions import ContractError, DomainError, QuadratureError, SingularityError

WELL_POSED_PAIRS = ((0, 1), (0, 2), (1, 3), (2, 3))
ORDERING_SLACK = 1e-12
# relative rounding allowance for closed-form operator residuals
CLOSED_FORM_RTOL = 1e-10


@dataclass(frozen=True)
class OperatorPair:
    """
    A boundary condition pair (B_i, B_j) with 0 <= i < j <= 3 and i + j != 3.

    Raises:
        ContractError: the pair is (0,3) or (1,2), which admit nontrivial homogeneous solutions.
    """
    i: int
    j: int

    def __post_init__(self) -> None:
        if not (0 <= self.i < self.j <= 3):
            raise ContractError(f"Operator pair needs 0 <= i < j <= 3, got ({self.i},{self.j})")
        if self.i + self.j == 3:
            raise ContractError(f"Operator pair ({self.i},{self.j}) is ill-posed (i + j = 3)")

    @classmethod
    def parse(cls, text: "str | OperatorPair | tuple[int, int]") -> "OperatorPair":
        """Accepts '0,2', '02', (0, 2) or an OperatorPair."""
        if isinstance(text, OperatorPair):
            return text
        if isinstance(text, str):
            digits = [c for c in text if c.isdigit()]
            if len(digits) != 2:
                raise ContractError(f"Cannot read an operator pair from '{text}'")
            return cls(int(digits[0]), int(digits[1]))
        i, j = text
        return cls(int(i), int(j))

    def __iter__(self):
        return iter((self.i, self.j))

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


@dataclass(frozen=True)
class GreenSpec:
    """
    Identifies a Green function.

    Args:
        pair (OperatorPair): the boundary operators.
        model (str): 'halfspace' or 'ball'.
        dimension (Dimension | int): boundary dimension n.
        log_constant (float): the free constant C of the n = 3 pairs (1,3) and (2,3).
    """
    pair: OperatorPair
    model: str
    dimension: Dimension
    log_constant: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'pair', OperatorPair.parse(self.pair))
        object.__setattr__(self, 'dimension', Dimension.of(self.dimension))
        if self.model not in ('halfspace', 'ball'):
            raise DomainError(f"Unknown model '{self.model}'")


# _____________________________________________closed_form_section_______________________________________________


def _gamma_sq(dist2, n: int, lib=np):
    """Gamma as a function of the squared distance; `lib` is numpy or sympy."""
    S = sphere_area(n)
    if n == 3:
        return -lib.log(dist2) / (8.0 * S)
    exponent = sympy.Rational(3 - n, 2) if lib is sympy else (3 - n) / 2
    return dist2 ** exponent / (2.0 * (n - 1) * (n - 3) * S)


def _regular_part(pair: tuple[int, int], n: int, d2, D2, log_constant: float, lib=np):
    gD = _gamma_sq(D2, n, lib)
    ratio = d2 / D2
    if n == 3:
        boggio = -gD + (ratio - 1) / (8.0 * sphere_area(3))
        return {
            (0, 1): lambda: boggio,
            (0, 2): lambda: -gD,
            (1, 3): lambda: gD + log_constant,
            (2, 3): lambda: -boggio + log_constant,
        }[pair]()
    boggio = 0.5 * gD * ((n - 3) * ratio - (n - 1))
    return {
        (0, 1): lambda: boggio,
        (0, 2): lambda: -gD,
        (1, 3): lambda: gD,
        (2, 3): lambda: -boggio,
    }[pair]()


def _squared_distances(model: str, P: np.ndarray, Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = stable_norm(P - Q) ** 2
    if model == 'halfspace':
        P_bar = np.array(P, dtype=float, copy=True)
        P_bar[..., -1] = -P_bar[..., -1]
        return d2, stable_norm(P_bar - Q) ** 2
    return d2, np.asarray(extended_distance(P, Q), dtype=float) ** 2


def _validate(spec: GreenSpec, P: np.ndarray, Q: np.ndarray) -> None:
    n = spec.dimension.n
    for label, point in (('P', P), ('Q', Q)):
        if point.shape[-1] != n + 1:
            raise DomainError(f"{label} must have {n + 1} coordinates")
        if spec.model == 'halfspace':
            if np.any(point[..., -1] < 0):
                raise DomainError(f"{label} must lie in the closed half-space t >= 0")
        elif np.any(stable_norm(point) > 1.0 + 1e-12):
            raise DomainError(f"{label} must lie in the closed unit ball")


def green_values(spec: GreenSpec, P, Q) -> np.ndarray:
    """
    Vectorised G^{(i,j)}(P, Q) over broadcast coordinate arrays. Coincident points give +-inf
    (or nan); use `green_value` for checked scalar evaluation.
    """
    P, Q = np.asarray(as_coords(P), dtype=float), np.asarray(as_coords(Q), dtype=float)
    _validate(spec, P, Q)
    n = spec.dimension.n
    d2, D2 = _squared_distances(spec.model, P, Q)
    with np.errstate(divide='ignore', invalid='ignore'):
        gamma = _gamma_sq(d2, n)
        return gamma + _regular_part((spec.pair.i, spec.pair.j), n, d2, D2, spec.log_constant)


def green_value(spec: GreenSpec, P, Q) -> float:
    """
    Closed-form G^{(i,j)}(P, Q) on the half-space or the ball.

    Raises:
        SingularityError: P = Q.
        DomainError: a point lies outside the closed model domain.
    """
    P, Q = as_coords(P), as_coords(Q)
    if float(stable_norm(P - Q)) == 0.0:
        raise SingularityError("Green function evaluated at P = Q")
    return float(green_values(spec, P, Q))


def regular_part(spec: GreenSpec, P, Q) -> float:
    """H^{(i,j)}(P, Q) = G^{(i,j)}(P, Q) - Gamma(P - Q)."""
    P, Q = np.asarray(as_coords(P), dtype=float), np.asarray(as_coords(Q), dtype=float)
    _validate(spec, P, Q)
    d2, D2 = _squared_distances(spec.model, P, Q)
    if float(D2) == 0.0:
        raise SingularityError("Regular part evaluated at a boundary diagonal point")
    return float(_regular_part((spec.pair.i, spec.pair.j), spec.dimension.n, d2, D2, spec.log_constant))


# _____________________________________________structure_section_________________________________________________


class OrderingResult(NamedTuple):
    values: tuple[float, float, float, float]
    ordered: bool
    strict: bool


def ordering_check(P, Q, n: Dimension | int, model: str = 'halfspace') -> OrderingResult:
    """
    The four Green values (G01, G02, G13, G23) at (P, Q) and whether
    0 <= G01 <= G02 <= G13 <= G23 holds within a relative slack of 1e-12; `strict` reports strict
    increase, which is expected whenever both points are interior.

    Raises:
        ContractError: n < 4.
    """
    dim = Dimension.of(n)
    if dim.n < 4:
        raise ContractError(f"The ordering chain is checked for n >= 4, got n = {dim.n}")
    values = tuple(green_value(GreenSpec(pair, model, dim), P, Q) for pair in WELL_POSED_PAIRS)
    slack = ORDERING_SLACK * max(1.0, max(abs(v) for v in values))
    chain = (0.0,) + values
    steps = [b - a for a, b in zip(chain, chain[1:])]
    return OrderingResult(values, all(s >= -slack for s in steps), all(s > slack for s in steps))


def _green_fields(spec: GreenSpec, Q: np.ndarray) -> tuple[ScalarField, ScalarField]:
    """Symbolic fields X -> Gamma(X - Q) and X -> H(X, Q) with Q frozen."""
    n = spec.dimension.n
    z = coordinate_symbols(spec.dimension)
    q = [sympy.Float(c) for c in Q]
    d2 = sum((zi - qi) ** 2 for zi, qi in zip(z, q))
    if spec.model == 'halfspace':
        D2 = sum((zi - qi) ** 2 for zi, qi in zip(z[:-1], q[:-1])) + (z[-1] + q[-1]) ** 2
    else:
        D2 = d2 + (1 - sum(zi ** 2 for zi in z)) * (1 - sum(qi ** 2 for qi in q))
    gamma_expr = _gamma_sq(d2, n, sympy)
    h_expr = _regular_part((spec.pair.i, spec.pair.j), n, d2, D2, spec.log_constant, sympy)
    gamma = ScalarField(None, spec.dimension, spec.model, expression=gamma_expr, symbols=z,
                        singular_points=(Q,), name='Gamma')
    regular = ScalarField(None, spec.dimension, spec.model, expression=h_expr, symbols=z,
                          name=f'H{spec.pair}')
    return gamma, regular


def _require_regular_ball_form(spec: GreenSpec) -> None:
    if spec.model == 'ball' and spec.dimension.critical and spec.pair.j == 3:
        raise ContractError(
            f"At n = 3 the ball pair {spec.pair} closed form differs from the transported Green function "
            "by a separable logarithmic term")


class RegularPartResidual(NamedTuple):
    first: Residual
    second: Residual

    @property
    def passed(self) -> bool:
        return self.first.passed and self.second.passed


def regular_part_residual(spec: GreenSpec, Y, sample_X, s: StencilConfig | None = None) -> RegularPartResidual:
    """
    B_i H + B_i Gamma and B_j H + B_j Gamma at the boundary point `sample_X`, with the operators
    acting on X -> H(X, Y) and X -> Gamma(X - Y). Exact derivatives of the closed forms are used.

    Raises:
        DomainError: `sample_X` is not a boundary point or Y is not interior.
        ContractError: ball pair (1,3) or (2,3) at n = 3.
    """
    _require_regular_ball_form(spec)
    Y = np.asarray(as_coords(Y), dtype=float)
    X = np.asarray(as_coords(sample_X), dtype=float)
    _validate(spec, X, Y)
    boundary_gap = Y[-1] if spec.model == 'halfspace' else 1.0 - float(stable_norm(Y))
    if not boundary_gap > 0:
        raise DomainError("regular_part_residual needs an interior source point Y")
    gamma, regular = _green_fields(spec, Y)
    out = []
    for k in spec.pair:
        op = BoundaryOperatorId(k, spec.model)
        on_h = operator_estimate(op, regular, X, s)
        on_gamma = operator_estimate(op, gamma, X, s)
        scale = max(abs(on_h.value), abs(on_gamma.value), on_h.error, on_gamma.error)
        tolerance = on_h.error + on_gamma.error + CLOSED_FORM_RTOL * scale
        out.append(Residual(on_h.value + on_gamma.value, tolerance))
    logger.debug({'regular_part_residual': str(spec.pair), 'model': spec.model, 'n': spec.dimension.n,
                  'values': [r.value for r in out]})
    return RegularPartResidual(*out)


def regular_part_bilaplacian(spec: GreenSpec, Y, X, s: StencilConfig | None = None,
                             use_exact: bool = True) -> Residual:
    """Delta^2 of X -> H(X, Y) at an interior point X."""
    Y = np.asarray(as_coords(Y), dtype=float)
    _, regular = _green_fields(spec, Y)
    return biharmonic_residual(regular, as_coords(X), s, use_exact=use_exact)


def _ball_weight(xi: np.ndarray, n: int) -> float:
    return float((2.0 / float(stable_norm(xi - south_pole(n))) ** 2) ** ((n - 3) / 2))


def conformal_correspondence_check(pair, xi, eta, n: Dimension | int) -> RelationResult:
    """
    Compare the ball Green function with the transported half-space one,
    G-bar(xi, eta) = G(F(xi), F(eta)) w(xi) w(eta) with w = (2/|. + e_{n+1}|^2)^{(n-3)/2}
    (w = 1 for n = 3).

    Raises:
        SingularityError: xi or eta at -e_{n+1}, or xi = eta.
        ContractError: pairs (1,3) and (2,3) at n = 3.
    """
    dim = Dimension.of(n)
    pair = OperatorPair.parse(pair)
    ball = GreenSpec(pair, 'ball', dim)
    _require_regular_ball_form(ball)
    a = BallPoint(as_coords(xi), dim).coords
    b = BallPoint(as_coords(eta), dim).coords
    X, Y = conformal_map_F(a), conformal_map_F(b)
    X[-1], Y[-1] = max(X[-1], 0.0), max(Y[-1], 0.0)
    lhs = green_value(ball, a, b)
    rhs = green_value(GreenSpec(pair, 'halfspace', dim), X, Y)
    if not dim.critical:
        rhs *= _ball_weight(a, dim.n) * _ball_weight(b, dim.n)
    scale = max(abs(lhs), abs(rhs))
    return RelationResult(lhs, rhs, 0.0 if scale == 0.0 else abs(lhs - rhs) / scale)


def boggio_integral_residual(P, Q, n: Dimension | int, tol: float = 1e-13) -> RelationResult:
    """
    G^{(0,1)} on the half-space from its integral representation
    |X-Y|^{3-n}/(4|S^n|) int_1^{|X-bar - Y|/|X - Y|} (s^2 - 1) s^{-n} ds, against the closed form.

    Raises:
        SingularityError: P = Q.
        QuadratureError: the adaptive rule misses `tol`.
    """
    dim = Dimension.of(n)
    P, Q = np.asarray(as_coords(P), dtype=float), np.asarray(as_coords(Q), dtype=float)
    closed = green_value(GreenSpec((0, 1), 'halfspace', dim), P, Q)
    d2, D2 = _squared_distances('halfspace', P, Q)
    d, upper = float(np.sqrt(d2)), float(np.sqrt(D2 / d2))
    value, error = integrate.quad(lambda s: (s * s - 1.0) * s ** (-dim.n), 1.0, upper,
                                  epsabs=tol, epsrel=tol, limit=200)
    if error > 1e3 * tol * max(1.0, abs(value)):
        raise QuadratureError("Boggio integral did not converge",
                              diagnostics={'value': value, 'error_estimate': error, 'upper_limit': upper})
    integral = d ** (3 - dim.n) / (4.0 * sphere_area(dim.n)) * value
    scale = max(abs(integral), abs(closed))
    return RelationResult(integral, closed, 0.0 if scale == 0.0 else abs(integral - closed) / scale)


def green_symmetry_residual(spec: GreenSpec, P, Q) -> float:
    """|G(P, Q) - G(Q, P)| relative to |G(P, Q)|."""
    forward, backward = green_value(spec, P, Q), green_value(spec, Q, P)
    scale = max(abs(forward), abs(backward))
    return 0.0 if scale == 0.0 else abs(forward - backward) / scale
