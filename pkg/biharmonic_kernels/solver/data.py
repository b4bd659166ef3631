"""
Boundary data for the Poisson integrals.

A `BoundaryData` is a function on the boundary of one model: on R^n (coordinates (..., n)) for the
half-space, on S^n (coordinates (..., n+1)) for the ball. Besides the evaluator it carries what the
quadrature engine needs to size its rules: the declared decay exponent, a feature length and radial
breakpoints, and, when it has one, a symmetry (radial about a centre on R^n, zonal about an axis on
S^n) that reduces the angular integral to one dimension.

Linear combinations are kept as a list of terms so every term keeps its own symmetry.
"""
from __future__ import annotations

from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import pandas as pd
from scipy import spatial

from biharmonic_kernels.geometry.points import BubbleParams, Dimension
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.src.exceptions import ContractError, DomainError, HarnessError

Profile = Callable[[np.ndarray], np.ndarray]


class BoundaryData:
    """
    A boundary function with quadrature metadata.

    Args:
        func (callable | None): vectorised evaluator on boundary coordinates; built from `profile`
            when omitted.
        dimension (Dimension | int): boundary dimension n.
        model (str): 'halfspace' or 'ball'.
        decay_exponent (float): f = O(|x|^{-decay_exponent}) on R^n; np.inf for compact support
            or faster than any power. Ignored on the ball.
        derivative_bound (float | None): optional bound on the first derivatives.
        center (sequence | None): half-space radial centre; `profile` is then a function of |y - center|.
        axis (sequence | None): ball zonal axis; `profile` is then a function of eta . axis.
        profile (callable | None): the one-dimensional profile of a symmetric datum.
        scale (float): feature length, used to grade the angular and radial panels.
        breakpoints (sequence): radii (about `center`) where the profile is not smooth or changes scale.
        support_radius (float | None): the datum vanishes for |y - center| > support_radius.
        name (str): label used in logs and reports.
    """

    def __init__(self, func: Callable[[np.ndarray], np.ndarray] | None, dimension: Dimension | int,
                 model: str = 'halfspace', decay_exponent: float = np.inf, derivative_bound: float | None = None,
                 center: Sequence[float] | None = None, axis: Sequence[float] | None = None,
                 profile: Profile | None = None, scale: float = 1.0, breakpoints: Sequence[float] = (),
                 support_radius: float | None = None, name: str = 'f') -> None:
        if model not in ('halfspace', 'ball'):
            raise DomainError(f"Unknown model '{model}'")
        self.dimension = Dimension.of(dimension)
        self.model = model
        self.decay_exponent = float(decay_exponent)
        self.derivative_bound = derivative_bound
        self.center = None if center is None else np.asarray(center, dtype=float)
        self.axis = None if axis is None else _unit(axis)
        self.profile = profile
        self.scale = float(scale)
        self.breakpoints = tuple(float(b) for b in breakpoints)
        self.support_radius = support_radius
        self.name = name
        self.terms: tuple[tuple[float, BoundaryData], ...] = ((1.0, self),)
        if self.center is not None and self.center.size != self.dimension.n:
            raise DomainError(f"Radial centre must have {self.dimension.n} coordinates")
        if self.axis is not None and self.axis.size != self.dimension.ambient:
            raise DomainError(f"Zonal axis must have {self.dimension.ambient} coordinates")
        if (self.center is not None or self.axis is not None) and profile is None:
            raise DomainError("A symmetric datum needs its profile")
        if func is None:
            if profile is None:
                raise DomainError("BoundaryData needs an evaluator or a profile")
            func = self._from_profile
        self._func = func

    @property
    def width(self) -> int:
        return self.dimension.n if self.model == 'halfspace' else self.dimension.ambient

    @property
    def is_radial(self) -> bool:
        return self.center is not None

    @property
    def is_zonal(self) -> bool:
        return self.axis is not None

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c, _ in self.terms)

    def _from_profile(self, points: np.ndarray) -> np.ndarray:
        if self.center is not None:
            return self.profile(np.linalg.norm(points - self.center, axis=-1))
        return self.profile(np.clip(points @ self.axis, -1.0, 1.0))

    def __call__(self, points) -> np.ndarray | float:
        P = np.asarray(points, dtype=float)
        flat = P.reshape(-1, self.width)
        out = np.zeros(flat.shape[0])
        for coefficient, term in self.terms:
            if coefficient != 0.0:
                out = out + coefficient * np.broadcast_to(np.asarray(term._func(flat), dtype=float), out.shape)
        return float(out[0]) if P.ndim == 1 else out.reshape(P.shape[:-1])

    # ____________________________________________algebra_section_____________________________________________________

    def _combined(self, terms: list[tuple[float, "BoundaryData"]], name: str) -> "BoundaryData":
        out = BoundaryData(lambda P: np.zeros(P.shape[0]), self.dimension, self.model,
                           decay_exponent=min((t.decay_exponent for c, t in terms if c != 0.0), default=np.inf),
                           name=name)
        out.terms = tuple(terms)
        return out

    def __mul__(self, factor: float) -> "BoundaryData":
        return self._combined([(float(factor) * c, t) for c, t in self.terms], f"{factor}*{self.name}")

    __rmul__ = __mul__

    def __add__(self, other: "BoundaryData") -> "BoundaryData":
        if other.dimension != self.dimension or other.model != self.model:
            raise DomainError("Cannot add boundary data of different models or dimensions")
        return self._combined(list(self.terms) + list(other.terms), f"{self.name}+{other.name}")

    def __sub__(self, other: "BoundaryData") -> "BoundaryData":
        return self + (-1.0) * other

    # ____________________________________________contract_section____________________________________________________

    def require_admissible(self, k: int) -> None:
        """
        Half-space data for B_k must decay faster than |x|^{-k} for k >= 1; bounded data is enough
        for k = 0.

        Raises:
            ContractError: the declared decay is too slow.
        """
        if self.model != 'halfspace' or k == 0 or self.is_zero:
            return
        if not self.decay_exponent > k:
            raise ContractError(
                f"Data '{self.name}' for B_{k} must decay faster than |x|^-{k}, declared decay {self.decay_exponent}")

    def sign_on(self, points: np.ndarray) -> tuple[float, float]:
        values = np.asarray(self(points), dtype=float)
        return float(values.min()), float(values.max())

    def __repr__(self) -> str:
        return f"BoundaryData(name={self.name!r}, model={self.model!r}, n={self.dimension.n}, decay={self.decay_exponent})"

    # ____________________________________________families_section____________________________________________________

    @classmethod
    def zero(cls, dimension: Dimension | int, model: str = 'halfspace') -> "BoundaryData":
        return cls.constant(0.0, dimension, model) * 0.0

    @classmethod
    def constant(cls, value: float, dimension: Dimension | int, model: str = 'halfspace') -> "BoundaryData":
        dim = Dimension.of(dimension)
        profile = lambda r: np.full(np.shape(r), float(value))
        if model == 'halfspace':
            return cls(None, dim, model, decay_exponent=0.0 if value != 0 else np.inf,
                       center=np.zeros(dim.n), profile=profile, name=f'const({value})')
        return cls(None, dim, model, axis=_pole(dim), profile=profile, name=f'const({value})')

    @classmethod
    def bubble_trace(cls, params: BubbleParams, power: float = 1.0, coefficient: float = 1.0) -> "BoundaryData":
        """
        coefficient * U^power restricted to the boundary, for the geometric bubble U of `params`.
        Half-space parameters give data on R^n, ball parameters data on S^n.
        """
        n = params.dimension.n
        exponent = (n - 3) * power / 2
        if params.is_half_space:
            eps = params.eps
            profile = lambda r: coefficient * (2.0 * eps / (eps * eps + np.asarray(r) ** 2)) ** exponent
            return cls(None, params.dimension, 'halfspace', decay_exponent=(n - 3) * power,
                       center=params.x0, profile=profile, scale=eps, breakpoints=(eps,),
                       name=f'bubble^{power:g}')
        xi0 = np.asarray(params.xi0)
        a = float(np.linalg.norm(xi0))
        if a == 0.0:
            return coefficient * cls.constant(1.0, params.dimension, 'ball')
        profile = lambda c: coefficient * ((1.0 - a * a) / (1.0 - 2.0 * a * np.asarray(c) + a * a)) ** exponent
        return cls(None, params.dimension, 'ball', axis=xi0 / a, profile=profile,
                   scale=max(1.0 - a, 1e-3), name=f'ball_bubble^{power:g}')

    @classmethod
    def bump(cls, center: Sequence[float], radius: float, dimension: Dimension | int,
             amplitude: float = 1.0) -> "BoundaryData":
        """amplitude * exp(1 - 1/(1 - |y - c|^2/radius^2)) inside the ball of the given radius, 0 outside."""
        if not radius > 0:
            raise DomainError(f"Bump radius must be positive, got {radius}")

        def profile(r: np.ndarray) -> np.ndarray:
            s = (np.asarray(r, dtype=float) / radius) ** 2
            out = np.zeros_like(s)
            inside = s < 1.0
            out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - s[inside]))
            return out
        return cls(None, dimension, 'halfspace', decay_exponent=np.inf, center=center, profile=profile,
                   scale=radius, breakpoints=(radius,), support_radius=radius, name='bump')

    @classmethod
    def gaussian(cls, center: Sequence[float], width: float, dimension: Dimension | int,
                 amplitude: float = 1.0) -> "BoundaryData":
        if not width > 0:
            raise DomainError(f"Gaussian width must be positive, got {width}")
        profile = lambda r: amplitude * np.exp(-(np.asarray(r) / width) ** 2)
        return cls(None, dimension, 'halfspace', decay_exponent=np.inf, center=center, profile=profile,
                   scale=width, breakpoints=(width,), name='gaussian')

    @classmethod
    def rational(cls, center: Sequence[float], exponent: float, dimension: Dimension | int,
                 amplitude: float = 1.0) -> "BoundaryData":
        """amplitude * (1 + |y - c|^2)^{-exponent/2}, decay exponent `exponent`."""
        profile = lambda r: amplitude * (1.0 + np.asarray(r) ** 2) ** (-exponent / 2)
        return cls(None, dimension, 'halfspace', decay_exponent=exponent, center=center, profile=profile,
                   breakpoints=(1.0,), name=f'rational({exponent:g})')

    @classmethod
    def coordinate(cls, index: int, dimension: Dimension | int) -> "BoundaryData":
        """eta -> eta_index on S^n."""
        dim = Dimension.of(dimension)
        if not 0 <= index < dim.ambient:
            raise DomainError(f"Coordinate index must be in 0..{dim.n}, got {index}")
        axis = np.zeros(dim.ambient)
        axis[index] = 1.0
        return cls(None, dim, 'ball', axis=axis, profile=lambda c: np.asarray(c, dtype=float),
                   name=f'eta_{index}')

    @classmethod
    def zonal(cls, profile: Profile, axis: Sequence[float], dimension: Dimension | int,
              name: str = 'zonal') -> "BoundaryData":
        return cls(None, dimension, 'ball', axis=axis, profile=profile, name=name)

    @classmethod
    def from_field_operator(cls, k: int, field) -> "BoundaryData":
        """
        B_k of a symbolic ball field restricted to S^n, keeping the field's symmetry.
        """
        from biharmonic_kernels.operators.boundary import BoundaryOperatorId, operator_values

        dim = field.dimension
        op = BoundaryOperatorId(k, 'ball')
        if field.radial:
            value = float(operator_values(op, field, _pole(dim))[0])
            return cls.constant(value, dim, 'ball')
        if field.axis is not None:
            axis = _unit(field.axis)
            normal = _orthogonal(axis)

            def profile(c: np.ndarray) -> np.ndarray:
                c = np.asarray(c, dtype=float)
                flat = c.reshape(-1)
                points = flat[:, None] * axis + np.sqrt(np.clip(1.0 - flat ** 2, 0.0, None))[:, None] * normal
                return operator_values(op, field, points).reshape(c.shape)
            return cls(None, dim, 'ball', axis=axis, profile=profile, name=f'B{k}({field.name})')
        return cls(lambda P: operator_values(op, field, P), dim, 'ball', name=f'B{k}({field.name})')

    def pullback_to_halfspace(self, k: int) -> "BoundaryData":
        """
        Half-space data U_0(y, 0)^{p_k*} f(F(y, 0)) matching ball data for B_k under the conformal map.

        Raises:
            ContractError: n = 3, or the datum is not on the ball.
        """
        from biharmonic_kernels.geometry.conformal import conformal_map_F

        if self.model != 'ball':
            raise ContractError("Only ball data can be pulled back to the half-space")
        dim = self.dimension
        if dim.critical:
            raise ContractError("Conformal transport of boundary data is defined for n != 3")
        power = (dim.n + 2 * k - 3) / 2
        weight = lambda r: (2.0 / (1.0 + np.asarray(r) ** 2)) ** power
        pole = _pole(dim)
        out: list[tuple[float, BoundaryData]] = []
        for coefficient, term in self.terms:
            if coefficient == 0.0:
                continue
            if term.is_zonal and abs(abs(float(term.axis @ pole)) - 1.0) < 1e-14:
                sign = float(term.axis @ pole)
                g = term.profile
                profile = (lambda g, sign: lambda r: weight(r) * g(sign * (1.0 - np.asarray(r) ** 2)
                                                                  / (1.0 + np.asarray(r) ** 2)))(g, sign)
                pulled = BoundaryData(None, dim, 'halfspace', decay_exponent=2 * power, center=np.zeros(dim.n),
                                      profile=profile, breakpoints=(1.0,), name=f'pullback({term.name})')
            else:
                def func(P: np.ndarray, term=term) -> np.ndarray:
                    X = np.concatenate([P, np.zeros((P.shape[0], 1))], axis=1)
                    xi = conformal_map_F(X)
                    xi /= np.linalg.norm(xi, axis=-1, keepdims=True)
                    return weight(np.linalg.norm(P, axis=-1)) * term(xi)
                pulled = BoundaryData(func, dim, 'halfspace', decay_exponent=2 * power, name=f'pullback({term.name})')
            out.append((coefficient, pulled))
        if not out:
            return BoundaryData.zero(dim, 'halfspace')
        return out[0][1]._combined(out, f'pullback({self.name})')

    @classmethod
    def from_csv(cls, path: str | Path, decay_exponent: float, dimension: Dimension | int | None = None,
                 model: str = 'halfspace') -> "BoundaryData":
        """
        Sampled data from a CSV file with coordinate columns followed by a `value` column.

        A single coordinate column named `r` gives a radial profile about the origin; otherwise the
        coordinate columns are the boundary coordinates and the datum is evaluated at the nearest sample.

        Raises:
            HarnessError: the file cannot be read.
            DomainError: the columns do not fit the model.
        """
        try:
            frame = pd.read_csv(path)
        except (OSError, ValueError) as e:
            raise HarnessError(f"Cannot read boundary data from '{path}': {e}") from e
        if 'value' not in frame.columns:
            raise DomainError(f"'{path}' has no 'value' column")
        coordinates = [c for c in frame.columns if c != 'value']
        values = frame['value'].to_numpy(dtype=float)
        logger.info({'boundary_data': str(path), 'rows': len(frame), 'columns': coordinates})

        if coordinates == ['r']:
            if dimension is None:
                raise DomainError("A radial CSV profile needs an explicit dimension")
            dim = Dimension.of(dimension)
            order = np.argsort(frame['r'].to_numpy(dtype=float))
            radii, samples = frame['r'].to_numpy(dtype=float)[order], values[order]

            def profile(r: np.ndarray) -> np.ndarray:
                r = np.asarray(r, dtype=float)
                idx = np.clip(np.searchsorted(radii, r), 1, len(radii) - 1)
                left_closer = (r - radii[idx - 1]) <= (radii[idx] - r)
                return samples[np.where(left_closer, idx - 1, idx)]
            return cls(None, dim, 'halfspace', decay_exponent=decay_exponent, center=np.zeros(dim.n),
                       profile=profile, breakpoints=tuple(radii[1:-1]), name=Path(path).stem)

        points = frame[coordinates].to_numpy(dtype=float)
        width = points.shape[1]
        dim = Dimension.of(dimension) if dimension is not None else Dimension(width if model == 'halfspace' else width - 1)
        expected = dim.n if model == 'halfspace' else dim.ambient
        if width != expected:
            raise DomainError(f"'{path}' has {width} coordinate columns, the {model} boundary needs {expected}")
        tree = spatial.cKDTree(points)
        return cls(lambda P: values[tree.query(P)[1]], dim, model, decay_exponent=decay_exponent,
                   name=Path(path).stem)


def _unit(v: Sequence[float]) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise DomainError("Zonal axis must be nonzero")
    return v / norm


def _pole(dimension: Dimension) -> np.ndarray:
    e = np.zeros(dimension.ambient)
    e[-1] = 1.0
    return e


def _orthogonal(axis: np.ndarray) -> np.ndarray:
    trial = np.zeros_like(axis)
    trial[int(np.argmin(np.abs(axis)))] = 1.0
    normal = trial - (trial @ axis) * axis
    return normal / np.linalg.norm(normal)
