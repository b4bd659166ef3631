"""
The fundamental solution of Delta^2 in R^{n+1} and its exact relations with the Poisson kernels.

Gamma(X - Y) = |X - Y|^{3-n} / (2(n-1)(n-3)|S^n|) for n != 3 and -log|X - Y| / (4|S^3|) + C for n = 3.
Applying the boundary operators to Gamma(X - .) in the boundary variable gives
    B_0 Gamma = P_3/2,  B_1 Gamma = P_2/2,  B_2 Gamma = -P_1/2,  B_3 Gamma = -P_0/2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from biharmonic_kernels.geometry.conformal import sphere_area, stable_norm
from biharmonic_kernels.geometry.points import Dimension, HalfSpacePoint, as_coords
from biharmonic_kernels.kernels.calculus import apply_kernel_operator
from biharmonic_kernels.src.exceptions import DomainError, SingularityError

RELATION_SIGNS = {0: (0.5, 'P3'), 1: (0.5, 'P2'), 2: (-0.5, 'P1'), 3: (-0.5, 'P0')}


def gamma_of_distance(d, n: int, log_constant: float = 0.0) -> np.ndarray:
    """Gamma as a function of the distance d > 0 (vectorised)."""
    d = np.asarray(d, dtype=float)
    S = sphere_area(n)
    with np.errstate(divide='ignore'):
        if n == 3:
            return -np.log(d) / (4.0 * S) + log_constant
        return d ** (3 - n) / (2.0 * (n - 1) * (n - 3) * S)


@dataclass(frozen=True)
class FundamentalSolution:
    """
    Gamma for a fixed dimension; callable on pairs of points or coordinate arrays.

    Args:
        dimension (Dimension | int): boundary dimension n.
        log_constant (float): the additive constant C of the n = 3 branch.
    """
    dimension: Dimension
    log_constant: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'dimension', Dimension.of(self.dimension))

    def __call__(self, X, Y) -> np.ndarray | float:
        d = stable_norm(as_coords(X) - as_coords(Y))
        if np.any(d == 0.0):
            raise SingularityError("Fundamental solution evaluated at X = Y")
        value = gamma_of_distance(d, self.dimension.n, self.log_constant)
        return float(value) if np.ndim(value) == 0 else value


def fundamental_solution(n: Dimension | int, X, Y, log_constant: float = 0.0) -> float:
    """
    Gamma(X - Y).

    For n = 5 and |X - Y| = 1 the value is 1/(16 pi^3).
    """
    return FundamentalSolution(Dimension.of(n), log_constant)(X, Y)


class RelationResult(NamedTuple):
    lhs: float
    rhs: float
    residual: float


def _split(X, y, n: int) -> tuple[float, float]:
    coords = X.coords if isinstance(X, HalfSpacePoint) else np.asarray(X, dtype=float).ravel()
    if coords.size != n + 1 or not coords[-1] > 0:
        raise DomainError("kernel relations need an interior half-space point X = (x, t) with t > 0")
    y = np.asarray(y, dtype=float).ravel()
    if y.size == n + 1:
        y = y[:-1]
    return float(stable_norm(coords[:-1] - y)), float(coords[-1])


def _relative(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


def kernel_operator_relation(k: int, n: Dimension | int, X, y, log_constant: float = 0.0) -> RelationResult:
    """
    Compare B_k Gamma(X - .) at (y, 0), computed from exact derivatives of Gamma, with the signed
    half kernel +-P_{3-k}(x - y, t)/2.

    For n = 3 and k = 0 the kernel constant is twice the Gamma constant, so both sides use the same
    `log_constant` for Gamma and 2 * log_constant for P_3.

    Returns:
        (RelationResult): lhs, rhs and the relative residual.
    """
    dim = Dimension.of(n)
    r, t = _split(X, y, dim.n)
    lhs = float(apply_kernel_operator(k, 'Gamma', dim.n, r, t, log_constant, variable='Y'))
    sign, kind = RELATION_SIGNS[k]
    rhs = sign * float(apply_kernel_operator(0, kind, dim.n, r, t, 2.0 * log_constant))
    return RelationResult(lhs, rhs, _relative(lhs, rhs))


def kernel_branch_relations(n: Dimension | int, X, y) -> dict[str, RelationResult]:
    """
    Relations among the kernels themselves in the X variable:
    dt P_3 = P_2, B_2 P_3 = -P_1 and B_3 P_3 = P_0.
    """
    dim = Dimension.of(n)
    r, t = _split(X, y, dim.n)
    out = {}
    pairs = {
        'dt_P3_equals_P2': (-float(apply_kernel_operator(1, 'P3', dim.n, r, t)),
                            float(apply_kernel_operator(0, 'P2', dim.n, r, t))),
        'B2_P3_equals_minus_P1': (float(apply_kernel_operator(2, 'P3', dim.n, r, t)),
                                  -float(apply_kernel_operator(0, 'P1', dim.n, r, t))),
        'B3_P3_equals_P0': (float(apply_kernel_operator(3, 'P3', dim.n, r, t)),
                            float(apply_kernel_operator(0, 'P0', dim.n, r, t))),
    }
    for name, (lhs, rhs) in pairs.items():
        out[name] = RelationResult(lhs, rhs, _relative(lhs, rhs))
    return out
