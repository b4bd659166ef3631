"""
Boundary limits of half-space Poisson integrals, computed by extrapolation to t = 0 over the heights
t_k = t0 * 2^{-k}; the integrals are never evaluated at t = 0.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from biharmonic_kernels.green.green_functions import OperatorPair
from biharmonic_kernels.kernels.calculus import apply_kernel_operator, kernel_quantity
from biharmonic_kernels.kernels.poisson import KERNEL_DECAY
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.quadrature import QuadratureConfig, halfspace_convolution
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import ContractError, DomainError

# decay in |x - y| of the t-derivative probes, by kernel kind, as an offset from n
PROBE_DECAY = {'P0': 3, 'P': 1}


class Extrapolation(NamedTuple):
    value: float
    error: float
    monotone: bool


class BoundaryLimit(NamedTuple):
    """Extrapolated B_i and B_j traces, the derivative-limit probe of the P_0 kernel and the flags."""
    trace_i: Extrapolation
    trace_j: Extrapolation
    derivative_probe: Extrapolation

    @property
    def monotone(self) -> bool:
        return self.trace_i.monotone and self.trace_j.monotone


def default_heights(t0: float = setting.LIMIT_T0, levels: int = setting.LIMIT_LEVELS) -> tuple[float, ...]:
    return tuple(t0 * 2.0 ** -k for k in range(levels))


def neville(nodes: Sequence[float], values: Sequence[float], at: float = 0.0) -> tuple[float, float]:
    """
    Value at `at` of the interpolating polynomial through (nodes, values), and the change from the
    polynomial through all but the last node as an error estimate.
    """
    x = np.asarray(nodes, dtype=float)
    p = np.array(values, dtype=float)
    m = len(x)
    previous = p[-1]
    for level in range(1, m):
        for i in range(m - level):
            p[i] = ((at - x[i + level]) * p[i] + (x[i] - at) * p[i + 1]) / (x[i] - x[i + level])
        if level == m - 2:
            previous = p[0]
    return float(p[0]), float(abs(p[0] - previous))


def _check_heights(heights: Sequence[float]) -> np.ndarray:
    t = np.asarray(heights, dtype=float)
    if t.size < 4:
        raise ContractError(f"Boundary limits need at least 4 heights, got {t.size}")
    if np.any(t <= 0) or np.any(t > 1) or np.any(np.diff(t) >= 0):
        raise DomainError("Heights must be strictly decreasing within (0, 1]")
    return t


def extrapolate(heights: Sequence[float], values: Sequence[float], label: str) -> Extrapolation:
    """
    Neville extrapolation to t = 0, flagging sequences whose successive differences change sign or
    fail to shrink; a flagged sequence is logged, not rejected.
    """
    value, error = neville(heights, values)
    steps = np.diff(np.asarray(values, dtype=float))
    scale = max(1.0, float(np.max(np.abs(values))))
    significant = np.abs(steps) > 1e-12 * scale
    monotone = bool(np.all(np.sign(steps[significant]) == np.sign(steps[significant][0]))) if significant.any() else True
    if monotone and significant.sum() > 1:
        tail = np.abs(steps[significant])
        monotone = bool(np.all(tail[1:] <= tail[:-1] * 1.01))
    if not monotone:
        logger.warning({'extrapolation': label, 'message': 'non-monotone sequence', 'values': list(map(float, values))})
    return Extrapolation(value, error, monotone)


def operator_trace_values(k: int, m: int, data: BoundaryData, x, heights: Sequence[float],
                          q: QuadratureConfig) -> list[float]:
    """(B_k (P_m * f))(x, t) for each height t, with the exact kernel derivatives."""
    n = data.dimension.n
    kernel = lambda r, t: apply_kernel_operator(k, f'P{m}', n, r, t)
    decay = n + KERNEL_DECAY[m]
    return [halfspace_convolution(kernel, decay, data, x, float(t), q, label=f'B{k}P{m}').value for t in heights]


def derivative_limit_probe(kind: str, data: BoundaryData, x, heights: Sequence[float] | None = None,
                           q: QuadratureConfig | None = None) -> Extrapolation:
    """
    lim_{t -> 0} d/dt (K * f)(x, t) for K = P_0 (kernel power t^3) or the classical Poisson kernel
    P (power t). The P_0 limit vanishes; for P with a nonnegative datum vanishing near x it is
    strictly positive.
    """
    if kind not in PROBE_DECAY:
        raise DomainError(f"Derivative probe kernel must be one of {tuple(PROBE_DECAY)}, got '{kind}'")
    q = q or QuadratureConfig()
    t = _check_heights(default_heights() if heights is None else heights)
    n = data.dimension.n
    kernel = lambda r, s: kernel_quantity(kind, n, 'dt', r, s)
    values = [halfspace_convolution(kernel, n + PROBE_DECAY[kind], data, np.asarray(x, dtype=float), float(s), q,
                                    label=f'dt_{kind}').value for s in t]
    return extrapolate(t, values, f'dt_{kind}')


def hopf_probe(data: BoundaryData, x, heights: Sequence[float] | None = None,
               q: QuadratureConfig | None = None) -> Extrapolation:
    """The t-derivative limit for the classical Poisson kernel."""
    return derivative_limit_probe('P', data, x, heights, q)


def boundary_limit_check(pair, f_i: BoundaryData, f_j: BoundaryData, x, heights: Sequence[float] | None = None,
                         q: QuadratureConfig | None = None) -> BoundaryLimit:
    """
    Traces lim_{t -> 0} B_i U and lim_{t -> 0} B_j U of the half-space Poisson integral
    U = P_i * f_i + P_j * f_j at the boundary point x; they should reproduce f_i(x) and f_j(x).
    Also runs the derivative-limit probe of P_0 on f_i.

    Raises:
        ContractError: fewer than 4 heights or inadmissible data.
        DomainError: heights outside (0, 1] or not decreasing, or ball data.
    """
    q = q or QuadratureConfig()
    pair = OperatorPair.parse(pair)
    if f_i.model != 'halfspace' or f_j.model != 'halfspace':
        raise DomainError("Boundary limits are taken on the half-space")
    t = _check_heights(default_heights() if heights is None else heights)
    x = np.asarray(x, dtype=float).ravel()
    if x.size == f_i.dimension.ambient:
        x = x[:-1]
    f_i.require_admissible(pair.i)
    f_j.require_admissible(pair.j)

    traces = []
    for k in (pair.i, pair.j):
        values = np.zeros(len(t))
        for m, data in ((pair.i, f_i), (pair.j, f_j)):
            if not data.is_zero:
                values += np.asarray(operator_trace_values(k, m, data, x, t, q))
        traces.append(extrapolate(t, values, f'B{k}_trace'))
    probe = derivative_limit_probe('P0', f_i, x, t, q) if not f_i.is_zero else Extrapolation(0.0, 0.0, True)
    logger.debug({'boundary_limit': str(pair), 'x': x.tolist(), 'traces': [tr.value for tr in traces]})
    return BoundaryLimit(traces[0], traces[1], probe)
