"""
Exact derivatives of the half-space kernels.

Every half-space kernel is a function of r = |x - y| and t only, so the derivatives needed by the
boundary operators are taken symbolically in (r, t) with the tangential Laplacian written as
f_rr + (n-1)/r f_r, simplified once per (kernel, n, quantity) and compiled with lambdify.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
import sympy

from biharmonic_kernels.src.exceptions import DomainError

R, T = sympy.symbols('r t', positive=True)
C = sympy.Symbol('C', real=True)

KERNEL_KINDS = ('P0', 'P1', 'P2', 'P3', 'P', 'Gamma')
QUANTITIES = ('value', 'dt', 'dtt', 'dttt', 'tlap', 'tlap_dt')


def _area(n: int) -> sympy.Expr:
    # |S^n| as an exact sympy expression
    return 2 * sympy.pi ** sympy.Rational(n + 1, 2) / sympy.gamma(sympy.Rational(n + 1, 2))


@lru_cache(maxsize=None)
def kernel_expression(kind: str, n: int) -> sympy.Expr:
    """
    Closed form of a half-space kernel in (r, t).

    'P0'..'P3' are the biharmonic Poisson kernels, 'P' the classical Poisson kernel and 'Gamma'
    the fundamental solution at vertical offset t. For n = 3, 'P3' and 'Gamma' carry the free
    constant C.
    """
    if kind not in KERNEL_KINDS:
        raise DomainError(f"Unknown kernel kind '{kind}'")
    if n < 2:
        raise DomainError(f"Kernel calculus needs n >= 2, got {n}")
    S = _area(n)
    rho2 = R ** 2 + T ** 2
    if kind == 'P0':
        return 2 * (n + 1) / S * T ** 3 * rho2 ** sympy.Rational(-(n + 3), 2)
    if kind == 'P1':
        return -2 / S * T ** 2 * rho2 ** sympy.Rational(-(n + 1), 2)
    if kind == 'P2':
        return -1 / ((n - 1) * S) * T * rho2 ** sympy.Rational(-(n - 1), 2)
    if kind == 'P':
        return 2 / S * T * rho2 ** sympy.Rational(-(n + 1), 2)
    if kind == 'P3':
        if n == 3:
            return -sympy.log(rho2) / (4 * S) + C
        return 1 / ((n - 1) * (n - 3) * S) * rho2 ** sympy.Rational(3 - n, 2)
    if n == 3:
        return -sympy.log(rho2) / (8 * S) + C
    return 1 / (2 * (n - 1) * (n - 3) * S) * rho2 ** sympy.Rational(3 - n, 2)


def _tangential_laplacian(expr: sympy.Expr, n: int) -> sympy.Expr:
    return sympy.diff(expr, R, 2) + (n - 1) / R * sympy.diff(expr, R)


@lru_cache(maxsize=None)
def kernel_derivative_expression(kind: str, n: int, quantity: str) -> sympy.Expr:
    """Simplified symbolic derivative quantity of a kernel (see QUANTITIES)."""
    e = kernel_expression(kind, n)
    builders = {
        'value': lambda: e,
        'dt': lambda: sympy.diff(e, T),
        'dtt': lambda: sympy.diff(e, T, 2),
        'dttt': lambda: sympy.diff(e, T, 3),
        'tlap': lambda: _tangential_laplacian(e, n),
        'tlap_dt': lambda: _tangential_laplacian(sympy.diff(e, T), n),
    }
    if quantity not in builders:
        raise DomainError(f"Unknown kernel quantity '{quantity}'")
    return sympy.simplify(builders[quantity]())


@lru_cache(maxsize=None)
def _compiled(kind: str, n: int, quantity: str) -> Callable[..., np.ndarray]:
    return sympy.lambdify((R, T, C), kernel_derivative_expression(kind, n, quantity), modules='numpy')


def kernel_quantity(kind: str, n: int, quantity: str, r, t, log_constant: float = 0.0) -> np.ndarray:
    """Evaluate a kernel derivative quantity at arrays r = |x - y| > 0 or t > 0."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    out = _compiled(kind, n, quantity)(r, t, log_constant)
    return np.broadcast_to(np.asarray(out, dtype=float), np.broadcast(r, t).shape).astype(float)


# operators acting on X = (x, t), coefficients on (value, dt, dtt, dttt, tlap, tlap_dt)
X_OPERATORS = {
    0: {'value': 1.0},
    1: {'dt': -1.0},
    2: {'dtt': 1.0, 'tlap': -1.0},
    3: {'dttt': 1.0, 'tlap_dt': 3.0},
}

# the same operators acting in Y = (y, s) at s = 0, written in tau = t - s (d/ds = -d/dtau)
Y_OPERATORS = {
    0: {'value': 1.0},
    1: {'dt': 1.0},
    2: {'dtt': 1.0, 'tlap': -1.0},
    3: {'dttt': -1.0, 'tlap_dt': -3.0},
}


def apply_kernel_operator(k: int, kind: str, n: int, r, t, log_constant: float = 0.0,
                          variable: str = 'X') -> np.ndarray:
    """
    B_k applied to a half-space kernel, in the X variable or in the boundary variable Y.
    """
    table = X_OPERATORS if variable == 'X' else Y_OPERATORS
    if k not in table:
        raise DomainError(f"Boundary operator order must be in 0..3, got {k}")
    total = 0.0
    for quantity, coefficient in table[k].items():
        total = total + coefficient * kernel_quantity(kind, n, quantity, r, t, log_constant)
    return np.asarray(total, dtype=float)
