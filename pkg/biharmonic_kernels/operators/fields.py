"""
Evaluable scalar fields on the two model domains.

A `ScalarField` wraps either a vectorised numpy callable or a sympy expression in the ambient
coordinates z0..zn (the last coordinate is t on the half-space). Symbolic fields expose exact
derivative quantities to the boundary operators; callable fields fall back to stencils.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np
import sympy

from biharmonic_kernels.geometry.points import Dimension
from biharmonic_kernels.src.exceptions import DomainError, EvaluationError

MODELS = ('halfspace', 'ball')


def coordinate_symbols(dimension: Dimension | int) -> tuple[sympy.Symbol, ...]:
    dim = Dimension.of(dimension)
    return sympy.symbols(f'z0:{dim.ambient}', real=True)


class ScalarField:
    """
    A scalar field u on a model domain.

    Args:
        func (callable | None): vectorised evaluator taking an array (..., n+1) of coordinates.
        dimension (Dimension | int): boundary dimension n.
        model (str): 'halfspace' or 'ball'.
        expression (sympy.Expr | None): symbolic form in `symbols`; when given, `func` may be None
            and exact derivatives become available.
        symbols (tuple | None): the coordinate symbols of `expression`.
        singular_points (sequence): points the field is not defined at; stencils keep clear of them.
        name (str): label used in logs and reports.
        radial (bool): the field depends on |z| only.
        axis (array | None): unit vector; the field depends on |z| and z.axis only.

    Methods:
        - __call__(points): evaluate on a point or a batch of points.
        - exact(quantity, points): evaluate an exact derivative quantity (see `QUANTITIES`).
        - clearance(point): distance to the domain boundary and the singular points.

    Example:
        >>> u = ScalarField.from_expression(lambda z: z[-1] ** 3, 4, 'halfspace')
        >>> u.exact('dt3', [0, 0, 0, 0, 0])
        6.0
    """

    QUANTITIES = ('value', 'laplacian', 'bilaplacian', 'dt1', 'dt2', 'dt3', 'tlap', 'tlap_dt',
                  'dr1', 'dr2', 'dr3', 'lap_dr1')

    def __init__(self, func: Callable[[np.ndarray], np.ndarray] | None, dimension: Dimension | int,
                 model: str = 'halfspace', expression: sympy.Expr | None = None,
                 symbols: Sequence[sympy.Symbol] | None = None, singular_points: Iterable[Sequence[float]] = (),
                 name: str = 'u', radial: bool = False, axis: Sequence[float] | None = None) -> None:
        if model not in MODELS:
            raise DomainError(f"Unknown model '{model}', expected one of {MODELS}")
        self.dimension = Dimension.of(dimension)
        self.model = model
        self.name = name
        self.radial = radial
        self.axis = None if axis is None else np.asarray(axis, dtype=float)
        self.singular_points = tuple(np.asarray(p, dtype=float) for p in singular_points)
        self.expression = None if expression is None else sympy.sympify(expression)
        self.symbols = tuple(symbols) if symbols is not None else (
            coordinate_symbols(self.dimension) if expression is not None else None)
        self._compiled: dict[str, Callable[..., np.ndarray]] = {}
        if func is None and self.expression is None:
            raise DomainError("ScalarField needs a callable or a sympy expression")
        self._func = func

    @classmethod
    def from_expression(cls, builder: Callable[[tuple[sympy.Symbol, ...]], sympy.Expr], dimension: Dimension | int,
                        model: str = 'halfspace', **kwargs) -> "ScalarField":
        """Build a symbolic field from `builder(symbols)`."""
        z = coordinate_symbols(dimension)
        return cls(None, dimension, model, expression=sympy.sympify(builder(z)), symbols=z, **kwargs)

    @classmethod
    def constant(cls, value: float, dimension: Dimension | int, model: str = 'halfspace') -> "ScalarField":
        return cls.from_expression(lambda z: sympy.Float(value) if value != int(value) else sympy.Integer(int(value)),
                                   dimension, model, name=f'const({value})', radial=True)

    @property
    def has_exact(self) -> bool:
        return self.expression is not None

    def __call__(self, points) -> np.ndarray | float:
        if self._func is None:
            return self.exact('value', points)
        P = np.asarray(points, dtype=float)
        flat = P.reshape(-1, self.dimension.ambient)
        out = np.asarray(self._func(flat), dtype=float)
        out = np.broadcast_to(out, (flat.shape[0],)).astype(float)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"Field '{self.name}' is not finite at some requested points")
        return float(out[0]) if P.ndim == 1 else out.reshape(P.shape[:-1])

    # ____________________________________________exact_derivative_section____________________________________________

    def _laplacian(self, expr: sympy.Expr) -> sympy.Expr:
        return sum(sympy.diff(expr, s, 2) for s in self.symbols)

    def _tangential_laplacian(self, expr: sympy.Expr) -> sympy.Expr:
        return sum(sympy.diff(expr, s, 2) for s in self.symbols[:-1])

    def _radial(self, expr: sympy.Expr, order: int) -> sympy.Expr:
        # d^k/ds^k expr(s z) at s = 1 is the k-th derivative along the fixed direction z
        s = sympy.Symbol('s_radial', positive=True)
        scaled = expr.subs({v: s * v for v in self.symbols}, simultaneous=True)
        return sympy.diff(scaled, s, order).subs(s, 1)

    def _build(self, quantity: str) -> sympy.Expr:
        e, t = self.expression, self.symbols[-1]
        builders = {
            'value': lambda: e,
            'laplacian': lambda: self._laplacian(e),
            'bilaplacian': lambda: self._laplacian(self._laplacian(e)),
            'dt1': lambda: sympy.diff(e, t, 1),
            'dt2': lambda: sympy.diff(e, t, 2),
            'dt3': lambda: sympy.diff(e, t, 3),
            'tlap': lambda: self._tangential_laplacian(e),
            'tlap_dt': lambda: self._tangential_laplacian(sympy.diff(e, t)),
            'dr1': lambda: self._radial(e, 1),
            'dr2': lambda: self._radial(e, 2),
            'dr3': lambda: self._radial(e, 3),
            'lap_dr1': lambda: self._radial(self._laplacian(e), 1),
        }
        if quantity not in builders:
            raise DomainError(f"Unknown derivative quantity '{quantity}'")
        return builders[quantity]()

    def compiled(self, quantity: str) -> Callable[..., np.ndarray]:
        if not self.has_exact:
            raise EvaluationError(f"Field '{self.name}' has no symbolic form for '{quantity}'")
        if quantity not in self._compiled:
            self._compiled[quantity] = sympy.lambdify(self.symbols, self._build(quantity), modules='numpy')
        return self._compiled[quantity]

    def exact(self, quantity: str, points) -> np.ndarray | float:
        """Evaluate an exact derivative quantity on a point or a batch of points."""
        P = np.asarray(points, dtype=float)
        flat = P.reshape(-1, self.dimension.ambient)
        with np.errstate(divide='ignore', invalid='ignore'):
            out = np.asarray(self.compiled(quantity)(*flat.T), dtype=float)
        out = np.broadcast_to(out, (flat.shape[0],)).astype(float)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"'{quantity}' of field '{self.name}' is not finite at some requested points")
        return float(out[0]) if P.ndim == 1 else out.reshape(P.shape[:-1])

    def derived(self, quantity: str, name: str | None = None) -> "ScalarField":
        """
        An exact derivative quantity as a new symbolic field with the same symmetry; a quantity
        without free symbols (Delta^2 of a quartic, say) comes back flagged radial.
        """
        if not self.has_exact:
            raise EvaluationError(f"Field '{self.name}' has no symbolic form for '{quantity}'")
        expr = sympy.simplify(self._build(quantity))
        return ScalarField(None, self.dimension, self.model, expression=expr, symbols=self.symbols,
                           singular_points=self.singular_points, name=name or f'{quantity}({self.name})',
                           radial=self.radial or not expr.free_symbols, axis=self.axis)

    @property
    def is_constant(self) -> bool:
        return self.has_exact and not self.expression.free_symbols

    # ________________________________________________________________________________________________________________

    def boundary_distance(self, point: Sequence[float]) -> float:
        p = np.asarray(point, dtype=float)
        if self.model == 'halfspace':
            return float(p[-1])
        return float(1.0 - np.linalg.norm(p))

    def clearance(self, point: Sequence[float], include_boundary: bool = True) -> float:
        """Distance from `point` to the singular points, and to the boundary if requested."""
        p = np.asarray(point, dtype=float)
        dist = self.boundary_distance(p) if include_boundary else np.inf
        for q in self.singular_points:
            dist = min(dist, float(np.linalg.norm(p - q)))
        return float(dist)

    def __repr__(self) -> str:
        return f"ScalarField(name={self.name!r}, model={self.model!r}, n={self.dimension.n}, exact={self.has_exact})"
