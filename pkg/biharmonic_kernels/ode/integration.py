"""
Integration of the cylinder ODE as a first-order system in (V, V', V'', V''').

Integration stops early when V reaches zero or the state leaves the blowup bound. The factored form
(d^2/dt^2 - mu)(d^2/dt^2 - lambda) V is integrated as a cascade through W = V'' - lambda V.
"""
from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.ode.cylinder import OdeParams, explicit_state
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import DomainError, StiffnessError


class Trajectory(NamedTuple):
    """Nodes t_k, states (V, V', V'', V''') of shape (len(t), 4) and why integration stopped."""
    t: np.ndarray
    states: np.ndarray
    termination_reason: str

    @property
    def V(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def exit_time(self) -> float:
        return float(self.t[-1])

    @property
    def admissible(self) -> bool:
        return self.termination_reason == 'reachedT'


def _events(V_index: Callable[[np.ndarray], float], bound: float, ceiling: float | None) -> list:
    def sign_change(t, y):
        return V_index(y)
    sign_change.terminal = True
    sign_change.direction = -1

    def blowup(t, y):
        return bound - float(np.max(np.abs(y)))
    blowup.terminal = True

    events = [sign_change, blowup]
    if ceiling is not None:
        def above_ceiling(t, y):
            return ceiling - V_index(y)
        above_ceiling.terminal = True
        above_ceiling.direction = -1
        events.append(above_ceiling)
    return events


def _solve(rhs, init: np.ndarray, T: float, rtol: float | None, atol: float | None, bound: float | None,
           ceiling: float | None, t_eval: Sequence[float] | None, V_index: Callable[[np.ndarray], float],
           label: str) -> tuple[np.ndarray, np.ndarray, str]:
    if not T > 0:
        raise DomainError(f"Integration length must be positive, got {T}")
    rtol = setting.ODE_RTOL if rtol is None else rtol
    atol = setting.ODE_ATOL if atol is None else atol
    if not (rtol > 0 and atol > 0):
        raise DomainError(f"Integration tolerances must be positive, got rtol={rtol}, atol={atol}")
    bound = setting.ODE_BLOWUP_BOUND if bound is None else bound
    init = np.asarray(init, dtype=float)
    if init.shape != (4,):
        raise DomainError(f"Initial state must have 4 components, got shape {init.shape}")
    if not np.any(init):
        # the zero state is an equilibrium of every right-hand side here
        t = np.array([0.0, T]) if t_eval is None else np.asarray(t_eval, dtype=float)
        return t, np.zeros((t.size, 4)), 'reachedT'
    if V_index(init) <= 0:
        return np.array([0.0]), init[None, :], 'signChange'
    sol = solve_ivp(rhs, (0.0, T), init, method=setting.ODE_METHOD, rtol=rtol, atol=atol,
                    events=_events(V_index, bound, ceiling), t_eval=t_eval)
    if sol.status == -1:
        raise StiffnessError(f"{label}: {sol.message}")
    reason = 'reachedT'
    if sol.status == 1:
        reason = 'signChange' if sol.t_events[0].size else 'blowup'
    t, states = sol.t, sol.y.T
    if sol.status == 1:
        # t_eval omits the stopping point
        hit = next(k for k, times in enumerate(sol.t_events) if times.size)
        if t.size == 0 or t[-1] < sol.t_events[hit][0]:
            t = np.append(t, sol.t_events[hit][0])
            states = np.vstack([states.reshape(-1, 4), sol.y_events[hit][0]])
    return t, states, reason


def integrate_ode(params: OdeParams, init: Sequence[float], T: float, rtol: float | None = None,
                  atol: float | None = None, bound: float | None = None, ceiling: float | None = None,
                  t_eval: Sequence[float] | None = None) -> Trajectory:
    """
    Integrate the cylinder ODE from `init` on [0, T].

    Args:
        bound (float): stop with 'blowup' once max |state| reaches it.
        ceiling (float | None): stop with 'blowup' once V reaches it.
        t_eval (Sequence[float] | None): report the state at these nodes instead of the steps.

    Raises:
        DomainError: T <= 0, nonpositive tolerances or a malformed initial state.
        StiffnessError: the step size underflowed.
    """
    t, states, reason = _solve(params.rhs, init, T, rtol, atol, bound, ceiling, t_eval, lambda y: float(y[0]), 'ode')
    logger.debug({'integrate_ode': params.n, 'normalization': params.normalization, 'T': T,
                  'termination': reason, 'exit_time': float(t[-1]), 'steps': int(t.size)})
    return Trajectory(t, states, reason)


def integrate_cascade(params: OdeParams, init: Sequence[float], T: float, rtol: float | None = None,
                      atol: float | None = None, t_eval: Sequence[float] | None = None) -> Trajectory:
    """
    The same initial value problem through the cascade (V, V', W, W') with W = V'' - lambda V and
    W'' - mu W = kappa V^{p*}. States are returned as (V, V', V'', V''').
    """
    lam, mu = params.lam, params.mu

    def rhs(t, y):
        V, dV, W, dW = y
        return np.array([dV, W + lam * V, dW, mu * W + params.forcing(V)])

    V0, dV0, ddV0, dddV0 = np.asarray(init, dtype=float)
    start = np.array([V0, dV0, ddV0 - lam * V0, dddV0 - lam * dV0])
    t, states, reason = _solve(rhs, start, T, rtol, atol, None, None, t_eval, lambda y: float(y[0]), 'cascade')
    V, dV, W, dW = states.T
    return Trajectory(t, np.column_stack([V, dV, W + lam * V, dW + lam * dV]), reason)


def normalization_scaling_residual(n: int, eps: float = 1.0, T: float = 3.0, nodes: int = 31) -> float:
    """
    Integrate the transformed bubble under the geometric normalization, and its rescaling under the
    unit one; return max |c V_geometric - V_unit| over the grid, c = kappa^{(n-3)/8} of the geometric
    normalization. Returns inf when either run stops before T.
    """
    geometric, unit = OdeParams(n, 'geometric'), OdeParams(n, 'unit')
    grid = np.linspace(0.0, T, nodes)
    start = explicit_state(geometric, eps, 0.0)
    geo = integrate_ode(geometric, start, T, t_eval=grid)
    c = geometric.unit_scaling
    scaled = integrate_ode(unit, c * start, T, t_eval=grid)
    if not (geo.admissible and scaled.admissible):
        logger.warning({'normalization_scaling': n, 'message': 'run stopped before T',
                        'geometric': geo.termination_reason, 'unit': scaled.termination_reason})
        return float('inf')
    residual = float(np.max(np.abs(c * geo.V - scaled.V)))
    logger.debug({'normalization_scaling': n, 'eps': eps, 'T': T, 'residual': residual})
    return residual
