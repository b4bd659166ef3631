"""
Points, dimensions and bubble parameters for the two model domains.

The half-space model is R^{n+1}_+ = {(x,t) : x in R^n, t >= 0}; the ball model is the closed unit
ball B^{n+1}. Every point carries its `Dimension`, and mixing dimensions raises at construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from biharmonic_kernels.src.exceptions import DomainError, ContractError, SingularityError


@dataclass(frozen=True)
class Dimension:
    """
    Boundary dimension n; the ambient space is R^{n+1}.

    Args:
        n (int): boundary dimension, n >= 2.

    Example:
        >>> Dimension(5).p_star(3)
        4.0
    """
    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise DomainError(f"Dimension must be an integer, got {self.n!r}")
        object.__setattr__(self, 'n', int(self.n))
        if self.n < 2:
            raise DomainError(f"Boundary dimension must satisfy n >= 2, got {self.n}")

    @property
    def ambient(self) -> int:
        return self.n + 1

    @property
    def critical(self) -> bool:
        """True for n = 3, where Gamma and P_3 carry a logarithm."""
        return self.n == 3

    def p_star(self, k: int) -> float:
        """Critical exponent p_k* = (n+2k-3)/(n-3)."""
        if self.critical:
            raise DomainError("Critical exponents are undefined for n = 3")
        return (self.n + 2 * k - 3) / (self.n - 3)

    def require_classification(self) -> None:
        if self.n < 4:
            raise ContractError(f"Classification features require n >= 4, got n = {self.n}")

    @classmethod
    def of(cls, value: "Dimension | int") -> "Dimension":
        return value if isinstance(value, Dimension) else cls(value)


def _vector(values: Iterable[float], length: int, label: str) -> tuple[float, ...]:
    vec = tuple(float(v) for v in np.asarray(values, dtype=float).ravel())
    if len(vec) != length:
        raise DomainError(f"{label} must have {length} coordinates, got {len(vec)}")
    if not np.all(np.isfinite(vec)):
        raise DomainError(f"{label} has non-finite coordinates: {vec}")
    return vec


@dataclass(frozen=True)
class HalfSpacePoint:
    """
    X = (x, t) in the closed upper half-space.

    Args:
        x (sequence of float): tangential coordinates, length n.
        t (float): height, t >= 0.
        dimension (Dimension | int): boundary dimension n.
    """
    x: tuple[float, ...]
    t: float
    dimension: Dimension

    def __init__(self, x: Sequence[float], t: float, dimension: Dimension | int) -> None:
        dim = Dimension.of(dimension)
        object.__setattr__(self, 'dimension', dim)
        object.__setattr__(self, 'x', _vector(x, dim.n, 'x'))
        t = float(t)
        if not np.isfinite(t) or t < 0:
            raise DomainError(f"Half-space height must be finite and t >= 0, got {t}")
        object.__setattr__(self, 't', t)

    @classmethod
    def from_coords(cls, coords: Sequence[float], dimension: Dimension | int | None = None) -> "HalfSpacePoint":
        arr = np.asarray(coords, dtype=float).ravel()
        dim = Dimension.of(dimension) if dimension is not None else Dimension(arr.size - 1)
        if arr.size != dim.ambient:
            raise DomainError(f"Expected {dim.ambient} coordinates for n = {dim.n}, got {arr.size}")
        return cls(arr[:-1], arr[-1], dim)

    @property
    def coords(self) -> np.ndarray:
        return np.array(self.x + (self.t,))

    @property
    def reflected(self) -> np.ndarray:
        """Coordinates of the reflection X-bar = (x, -t)."""
        return np.array(self.x + (-self.t,))

    @property
    def on_boundary(self) -> bool:
        return self.t == 0.0


@dataclass(frozen=True)
class BallPoint:
    """
    xi in the closed unit ball of R^{n+1}.

    Args:
        xi (sequence of float): coordinates, length n+1, |xi| <= 1.
        dimension (Dimension | int): boundary dimension n.
    """
    xi: tuple[float, ...]
    dimension: Dimension

    def __init__(self, xi: Sequence[float], dimension: Dimension | int | None = None) -> None:
        arr = np.asarray(xi, dtype=float).ravel()
        dim = Dimension.of(dimension) if dimension is not None else Dimension(arr.size - 1)
        object.__setattr__(self, 'dimension', dim)
        vec = _vector(arr, dim.ambient, 'xi')
        norm = float(np.linalg.norm(vec))
        # unit vectors built in floating point may overshoot by a few ulp
        if norm > 1.0 + 1e-12:
            raise DomainError(f"Ball point must satisfy |xi| <= 1, got |xi| = {norm}")
        object.__setattr__(self, 'xi', vec)

    @property
    def coords(self) -> np.ndarray:
        return np.array(self.xi)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.xi))

    @property
    def on_boundary(self) -> bool:
        return abs(self.norm - 1.0) <= 1e-12

    def inversion(self) -> np.ndarray:
        """xi* = xi/|xi|^2; never formed for |xi| < 1e-10."""
        norm2 = float(np.dot(self.xi, self.xi))
        if norm2 < 1e-20:
            raise SingularityError("Inversion xi* is undefined at the ball centre")
        return self.coords / norm2


@dataclass(frozen=True)
class BubbleParams:
    """
    Parameters of a geometric bubble, either half-space (x0, eps) or ball (xi0).

    Use the `half_space` and `ball` constructors; `to_ball` and `to_half_space` convert with the
    correspondence xi0 = F(x0, eps).
    """
    dimension: Dimension
    x0: tuple[float, ...] | None = None
    eps: float | None = None
    xi0: tuple[float, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if (self.x0 is None) == (self.xi0 is None):
            raise DomainError("BubbleParams needs exactly one of (x0, eps) or xi0")
        if self.x0 is not None:
            if self.eps is None or not np.isfinite(self.eps) or self.eps <= 0:
                raise DomainError(f"Bubble scale must satisfy eps > 0, got {self.eps}")
        else:
            if float(np.linalg.norm(self.xi0)) >= 1.0:
                raise DomainError("Ball bubble centre must satisfy |xi0| < 1")

    @classmethod
    def half_space(cls, x0: Sequence[float], eps: float, dimension: Dimension | int) -> "BubbleParams":
        dim = Dimension.of(dimension)
        return cls(dimension=dim, x0=_vector(x0, dim.n, 'x0'), eps=float(eps))

    @classmethod
    def ball(cls, xi0: Sequence[float], dimension: Dimension | int) -> "BubbleParams":
        dim = Dimension.of(dimension)
        return cls(dimension=dim, xi0=_vector(xi0, dim.ambient, 'xi0'))

    @property
    def is_half_space(self) -> bool:
        return self.x0 is not None

    def to_ball(self) -> "BubbleParams":
        from biharmonic_kernels.geometry.conformal import conformal_map_F
        if not self.is_half_space:
            return self
        xi0 = conformal_map_F(np.array(self.x0 + (self.eps,)))
        return BubbleParams.ball(xi0, self.dimension)

    def to_half_space(self) -> "BubbleParams":
        from biharmonic_kernels.geometry.conformal import conformal_map_F
        if self.is_half_space:
            return self
        X = conformal_map_F(np.array(self.xi0))
        return BubbleParams.half_space(X[:-1], X[-1], self.dimension)


def as_coords(p: "HalfSpacePoint | BallPoint | Sequence[float] | np.ndarray") -> np.ndarray:
    """Coordinates of a typed point, or the array itself (any leading batch shape)."""
    if isinstance(p, (HalfSpacePoint, BallPoint)):
        return p.coords
    return np.asarray(p, dtype=float)
