"""
Finite difference stencils with self-calibrated error estimates.

Every stencil evaluation returns an `Estimate` (value, error). The error combines a Richardson
truncation estimate, obtained by repeating the evaluation with every step doubled, and a rounding
estimate eps * sum |w_i f_i| carried through nested stencils.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import DomainError, EvaluationError

EPS = np.finfo(float).eps
# safety factors applied to the raw truncation and rounding estimates
TRUNCATION_SAFETY = 10.0
ROUNDING_SAFETY = 40.0


@dataclass(frozen=True)
class StencilConfig:
    """
    Step and accuracy order of the difference stencils.

    Args:
        h (float): base step for first derivatives; higher derivatives use h^{(order+1)/(order+m)}.
        order (int): accuracy order, 2 or 4.
    """
    h: float = setting.STENCIL_STEP
    order: int = setting.STENCIL_ORDER

    def __post_init__(self) -> None:
        if not (self.h > 0) or not np.isfinite(self.h):
            raise DomainError(f"Stencil step must satisfy h > 0, got {self.h}")
        if self.order not in (2, 4):
            raise DomainError(f"Stencil order must be 2 or 4, got {self.order}")

    def step(self, m: int, clearance: float, halfwidth: int) -> float:
        """
        Step for an m-th derivative whose stencil reaches `halfwidth` steps from its centre while
        staying `clearance` away from the boundary or singular points, including the doubled step.
        """
        if not clearance > 0:
            raise EvaluationError(f"Stencil centre has no clearance (distance {clearance})")
        h = self.h ** ((self.order + 1) / (self.order + m))
        if halfwidth > 0:
            h = min(h, clearance / (3.0 * halfwidth))
        if h < setting.STENCIL_MIN_STEP:
            raise EvaluationError(
                f"Stencil step {h:.3e} below {setting.STENCIL_MIN_STEP:.0e}; point too close to a singularity or the boundary")
        return h


class Estimate(NamedTuple):
    value: float
    error: float


class Residual(NamedTuple):
    """A residual together with the tolerance it must respect."""
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.value) <= self.tolerance)


@lru_cache(maxsize=None)
def _weights(offsets: tuple[int, ...], m: int) -> np.ndarray:
    k = np.arange(len(offsets))
    factorial = np.array([float(np.prod(np.arange(1, i + 1))) for i in k])
    A = np.power.outer(np.asarray(offsets, dtype=float), k).T / factorial[:, None]
    rhs = np.zeros(len(offsets))
    rhs[m] = 1.0
    return np.linalg.solve(A, rhs)


def fd_weights(offsets: Sequence[int], m: int) -> np.ndarray:
    """
    Weights w with sum_i w_i f(x + o_i h) = h^m f^{(m)}(x) + O(h^{len(offsets)-m}).

    Example:
        >>> fd_weights([-1, 0, 1], 2)
        array([ 1., -2.,  1.])
    """
    offsets = tuple(int(o) for o in offsets)
    if m >= len(offsets):
        raise DomainError(f"{len(offsets)} offsets cannot resolve derivative order {m}")
    return _weights(offsets, m).copy()


def central_offsets(m: int, order: int) -> tuple[int, ...]:
    halfwidth = (m - 1) // 2 + order // 2
    return tuple(range(-halfwidth, halfwidth + 1))


def one_sided_offsets(m: int, order: int) -> tuple[int, ...]:
    return tuple(range(0, m + order))


class Sampled(NamedTuple):
    """Stencil output per base point: values and the accumulated |w f| magnitudes."""
    value: np.ndarray
    magnitude: np.ndarray


def plain(func: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], Sampled]:
    """Lift a vectorised field evaluator into the stencil calculus."""
    def sampled(points: np.ndarray) -> Sampled:
        v = np.asarray(func(points), dtype=float)
        return Sampled(v, np.abs(v))
    return sampled


def directional(inner: Callable[[np.ndarray], Sampled], direction: np.ndarray, m: int, h: float,
                offsets: Sequence[int], sign: float = 1.0) -> Callable[[np.ndarray], Sampled]:
    """m-th derivative of `inner` along `direction` with the given offsets and step."""
    w = sign * fd_weights(offsets, m) / h ** m
    shifts = np.outer(np.asarray(offsets, dtype=float) * h, direction)

    def sampled(points: np.ndarray) -> Sampled:
        P = np.atleast_2d(points)
        stacked = (P[:, None, :] + shifts[None, :, :]).reshape(-1, P.shape[-1])
        inner_out = inner(stacked)
        vals = inner_out.value.reshape(P.shape[0], len(w))
        mags = inner_out.magnitude.reshape(P.shape[0], len(w))
        return Sampled(vals @ w, mags @ np.abs(w))
    return sampled


def combine(*terms: tuple[float, Callable[[np.ndarray], Sampled]]) -> Callable[[np.ndarray], Sampled]:
    """Linear combination sum c_k T_k of stencil operators."""
    def sampled(points: np.ndarray) -> Sampled:
        value, magnitude = 0.0, 0.0
        for c, term in terms:
            out = term(points)
            value = value + c * out.value
            magnitude = magnitude + abs(c) * out.magnitude
        return Sampled(np.asarray(value, dtype=float), np.asarray(magnitude, dtype=float))
    return sampled


def richardson(build: Callable[[float], Callable[[np.ndarray], Sampled]], point: np.ndarray,
               order: int) -> Estimate:
    """
    Evaluate the stencil operator `build(scale)` at scale 1 and 2 and return the scale-1 value with a
    truncation plus rounding error estimate.
    """
    p = np.asarray(point, dtype=float)[None, :]
    fine = build(1.0)(p)
    coarse = build(2.0)(p)
    value = float(fine.value[0])
    truncation = abs(value - float(coarse.value[0])) / (2 ** order - 1)
    rounding = EPS * float(fine.magnitude[0])
    error = TRUNCATION_SAFETY * truncation + ROUNDING_SAFETY * rounding
    if not np.isfinite(value):
        raise EvaluationError("Stencil produced a non-finite value")
    return Estimate(value, error)


def bilaplacian_stencil(func: Callable[[np.ndarray], np.ndarray], ambient: int, h: float,
                        order: int) -> Callable[[float], Callable[[np.ndarray], Sampled]]:
    """
    Delta^2 = sum_i D_i^4 + 2 sum_{i<j} D_i^2 D_j^2 with central stencils at step scale * h.
    """
    base = plain(func)
    eye = np.eye(ambient)

    def build(scale: float) -> Callable[[np.ndarray], Sampled]:
        step = scale * h
        terms = [(1.0, directional(base, eye[i], 4, step, central_offsets(4, order))) for i in range(ambient)]
        for i in range(ambient):
            inner = directional(base, eye[i], 2, step, central_offsets(2, order))
            for j in range(i + 1, ambient):
                terms.append((2.0, directional(inner, eye[j], 2, step, central_offsets(2, order))))
        return combine(*terms)
    return build


def fd_bilaplacian(func: Callable[[np.ndarray], np.ndarray], point: Sequence[float], clearance: float,
                   s: StencilConfig) -> Estimate:
    """Finite difference Delta^2 of a vectorised evaluator at an interior point."""
    p = np.asarray(point, dtype=float)
    halfwidth = max(central_offsets(4, s.order))
    h = s.step(4, clearance, halfwidth)
    logger.debug({'stencil': 'bilaplacian', 'h': h, 'order': s.order, 'clearance': clearance})
    return richardson(bilaplacian_stencil(func, p.size, h, s.order), p, s.order)
