"""
Quadrature engine for the Poisson, volume and singular integrals.

Rules are Gauss-Legendre panels, graded geometrically toward the point where the integrand peaks, in
the radial and polar directions, and a hyperspherical product rule for data without symmetry. An
integral is evaluated at refinement levels L = 0, 1, ... with 2^L times the panel nodes until two
successive levels agree to the target tolerance.

Sums are taken over fixed chunks of the flattened node grid, each chunk summed pairwise by numpy and
the chunk partials summed again; the chunk boundaries depend only on the node count, so the value is
the same for every worker count.
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, NamedTuple

import numpy as np
from scipy import linalg, special

from biharmonic_kernels.geometry.conformal import sphere_area
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import DomainError, QuadratureError

RadialKernel = Callable[[np.ndarray, float], np.ndarray]
SphereKernel = Callable[[float, np.ndarray], np.ndarray]

# breakpoints of the mapped tail variable u in (0, 1]
TAIL_BREAKPOINTS = (0.0, 0.125, 0.25, 0.5, 1.0)


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Accuracy and size of the quadrature rules.

    Args:
        target_tol (float): two successive refinement levels must agree to target_tol * max(1, |I|).
        max_refinements (int): highest refinement level tried.
        truncation_radius (float | None): radius where half-space integrals switch to the mapped
            tail; None sizes it from the point and the data.
        sphere_order (int): polar Gauss order of the product rule at level 0, raised by 4 per level.
        radial_nodes (int): Gauss nodes per panel at level 0, doubled per level.
        workers (int): threads used for the chunked sums.
    """
    target_tol: float = setting.QUADRATURE_TARGET_TOL
    max_refinements: int = setting.QUADRATURE_MAX_REFINEMENTS
    truncation_radius: float | None = None
    sphere_order: int = setting.QUADRATURE_SPHERE_ORDER
    radial_nodes: int = setting.QUADRATURE_RADIAL_NODES
    workers: int = setting.QUADRATURE_WORKERS

    def __post_init__(self) -> None:
        if not (self.target_tol > 0) or not np.isfinite(self.target_tol):
            raise DomainError(f"Quadrature target_tol must be positive, got {self.target_tol}")
        if int(self.max_refinements) != self.max_refinements or self.max_refinements < 1:
            raise DomainError(f"max_refinements must be an integer >= 1, got {self.max_refinements}")
        if self.truncation_radius is not None and not self.truncation_radius > 0:
            raise DomainError(f"truncation_radius must be positive, got {self.truncation_radius}")
        if self.sphere_order < 2 or self.radial_nodes < 2:
            raise DomainError("Quadrature rules need at least 2 nodes")
        if int(self.workers) != self.workers or self.workers < 1:
            raise DomainError(f"workers must be an integer >= 1, got {self.workers}")

    def panel_nodes(self, level: int) -> int:
        return self.radial_nodes * 2 ** level

    def sphere_nodes(self, level: int) -> int:
        return self.sphere_order + 4 * level

    def replace(self, **changes: Any) -> "QuadratureConfig":
        return dataclasses.replace(self, **changes)


class QuadratureResult(NamedTuple):
    value: float
    error: float
    nodes: int
    level: int


# ____________________________________________rules_section_______________________________________________________


@lru_cache(maxsize=None)
def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = special.roots_legendre(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(breakpoints, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite m-point Gauss rule over the panels between consecutive breakpoints."""
    b = np.unique(np.asarray(breakpoints, dtype=float))
    x, w = gauss_legendre(m)
    left, right = b[:-1, None], b[1:, None]
    half = (right - left) / 2.0
    return ((left + right) / 2.0 + half * x).ravel(), (half * w).ravel()


def geometric_breakpoints(start: float, stop: float, ratio: float = 2.0) -> np.ndarray:
    """start, start * ratio, ... strictly below stop, then stop."""
    if not start > 0 or start >= stop:
        return np.array([stop], dtype=float)
    count = int(np.ceil(np.log(stop / start) / np.log(ratio)))
    points = start * ratio ** np.arange(count)
    return np.append(points[points < stop], stop)


def sphere_measure(m: int) -> float:
    """|S^m|, with |S^0| = 2."""
    return 2.0 if m == 0 else sphere_area(m)


def zonal_rule(m: int, nodes_per_panel: int, theta_min: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Polar angles on [0, pi] and weights such that sum w g(theta) integrates g(angle to a fixed
    axis) over S^m; panels are graded geometrically from `theta_min` toward theta = 0.
    """
    if m < 1:
        raise DomainError(f"zonal_rule needs m >= 1, got {m}")
    theta_min = min(float(theta_min), np.pi / 8)
    breaks = np.concatenate([[0.0], geometric_breakpoints(theta_min, np.pi / 2), [np.pi]])
    theta, w = panel_rule(breaks, nodes_per_panel)
    return theta, w * sphere_measure(m - 1) * np.sin(theta) ** (m - 1)


@lru_cache(maxsize=None)
def product_sphere_rule(m: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Points on S^m in R^{m+1} and weights summing to |S^m|: Gauss-Legendre in the polar angles and a
    uniform rule with 2 * order points in the azimuth.
    """
    if m == 0:
        points, weights = np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    elif m == 1:
        count = 2 * order
        phi = 2.0 * np.pi * (np.arange(count) + 0.5) / count
        points, weights = np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(count, 2.0 * np.pi / count)
    else:
        x, w = gauss_legendre(order)
        theta = np.pi / 2 * (x + 1.0)
        polar_weights = np.pi / 2 * w * np.sin(theta) ** (m - 1)
        sub_points, sub_weights = product_sphere_rule(m - 1, order)
        points = np.concatenate([
            np.repeat(np.cos(theta), len(sub_weights))[:, None],
            (np.sin(theta)[:, None, None] * sub_points[None, :, :]).reshape(-1, m),
        ], axis=1)
        weights = np.outer(polar_weights, sub_weights).ravel()
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


# ____________________________________________reduction_section___________________________________________________


def chunked_sum(evaluate: Callable[[slice], float], count: int, workers: int = 1) -> float:
    """
    Sum of evaluate(chunk) over fixed chunks of range(count); chunks run on `workers` threads.
    """
    size = setting.QUADRATURE_CHUNK_SIZE
    chunks = [slice(start, min(start + size, count)) for start in range(0, count, size)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(evaluate, chunks))
    else:
        partials = [evaluate(chunk) for chunk in chunks]
    return float(np.sum(np.asarray(partials, dtype=float)))


def grid_sum(outer_weights: np.ndarray, inner_weights: np.ndarray,
             integrand: Callable[[np.ndarray, np.ndarray], np.ndarray], workers: int = 1) -> float:
    """sum_ij outer_i inner_j integrand(i, j) over the flattened (outer, inner) grid."""
    inner_count = len(inner_weights)

    def evaluate(chunk: slice) -> float:
        index = np.arange(chunk.start, chunk.stop)
        i, j = index // inner_count, index % inner_count
        values = outer_weights[i] * inner_weights[j] * integrand(i, j)
        return float(np.sum(values))
    return chunked_sum(evaluate, len(outer_weights) * inner_count, workers)


def refine(evaluate: Callable[[int], tuple[float, int]], q: QuadratureConfig, label: str,
           context: dict[str, Any] | None = None) -> QuadratureResult:
    """
    Evaluate at levels 0, 1, ... until two successive values agree to q.target_tol.

    Raises:
        QuadratureError: no agreement up to q.max_refinements; the diagnostics hold the values,
            node counts and `context`.
    """
    values: list[float] = []
    counts: list[int] = []
    for level in range(q.max_refinements + 1):
        value, count = evaluate(level)
        values.append(value)
        counts.append(count)
        logger.debug({'quadrature': label, 'level': level, 'value': value, 'nodes': count})
        if not np.isfinite(value):
            break
        if level > 0:
            change = abs(values[-1] - values[-2])
            if change < q.target_tol * max(1.0, abs(value)):
                if level == q.max_refinements:
                    logger.warning({'quadrature': label, 'message': 'tolerance met only at the last refinement',
                                    'change': change})
                return QuadratureResult(value, change, count, level)
    raise QuadratureError(f"Quadrature '{label}' did not reach tolerance {q.target_tol}",
                          diagnostics={'values': values, 'node_counts': counts, **(context or {})})


# ____________________________________________halfspace_section___________________________________________________


def _halfspace_layout(term: BoundaryData, x: np.ndarray, t: float, q: QuadratureConfig) -> tuple[float, float, list[float]]:
    """(offset a of the datum's centre from x, truncation radius, radial feature points)."""
    features = [t]
    if term.is_radial:
        a = float(np.linalg.norm(term.center - x))
        features.append(a)
        for b in term.breakpoints:
            features.extend((abs(a - b), a + b))
    else:
        a = float(np.linalg.norm(x))
    if term.support_radius is not None:
        radius = a + term.support_radius
    elif q.truncation_radius is not None:
        radius = q.truncation_radius
    else:
        radius = 4.0 * max(t, a + term.scale)
    return a, min(radius, setting.QUADRATURE_MAX_RADIUS), features


def _radial_nodes(term: BoundaryData, kernel: RadialKernel, decay: float, x: np.ndarray, t: float,
                  q: QuadratureConfig, level: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Radial nodes r and weights w * K(r, t) r^{n-1}, the tail included."""
    n = term.dimension.n
    m = q.panel_nodes(level)
    a, radius, features = _halfspace_layout(term, x, t, q)
    start = min(t, term.scale) / 8.0
    breaks = np.concatenate([[0.0], geometric_breakpoints(start, radius), [f for f in features if 0 < f < radius]])
    r, w = panel_rule(breaks, m)

    if term.support_radius is None:
        rate = decay + min(term.decay_exponent, 3.0 * n) - n
        if not rate > 0:
            raise QuadratureError(
                f"Tail of the integral is not summable: kernel decay {decay} and data decay {term.decay_exponent} in n = {n}",
                diagnostics={'values': [], 'node_counts': [], 'truncation_radius': radius})
        s = 1.0 / rate
        u, wu = panel_rule(TAIL_BREAKPOINTS, m)
        with np.errstate(over='ignore'):
            tail_r = radius * u ** (-s)
            tail_w = wu * s * radius * u ** (-s - 1.0)
        r, w = np.concatenate([r, tail_r]), np.concatenate([w, tail_w])

    with np.errstate(over='ignore', invalid='ignore', under='ignore'):
        weights = w * kernel(r, t) * r ** (n - 1)
    finite = np.isfinite(weights) & np.isfinite(r)
    return np.where(finite, r, radius), np.where(finite, weights, 0.0), a


def _halfspace_term(kernel: RadialKernel, decay: float, term: BoundaryData, x: np.ndarray, t: float,
                    q: QuadratureConfig, level: int) -> tuple[float, int]:
    n = term.dimension.n
    r, W, a = _radial_nodes(term, kernel, decay, x, t, q, level)

    if term.is_radial and a == 0.0:
        inner = np.array([sphere_measure(n - 1)])
        integrand = lambda i, j: term.profile(r[i])
    elif term.is_radial:
        theta, inner = zonal_rule(n - 1, q.panel_nodes(level), term.scale / (4.0 * a))
        cos = np.cos(theta)

        def integrand(i: np.ndarray, j: np.ndarray) -> np.ndarray:
            rho2 = r[i] ** 2 + a * a - 2.0 * a * r[i] * cos[j]
            return term.profile(np.sqrt(np.clip(rho2, 0.0, None)))
    else:
        directions, inner = product_sphere_rule(n - 1, q.sphere_nodes(level))

        def integrand(i: np.ndarray, j: np.ndarray) -> np.ndarray:
            return term(x + r[i, None] * directions[j])

    return grid_sum(W, inner, integrand, q.workers), len(W) * len(inner)


def halfspace_convolution(kernel: RadialKernel, decay: float, data: BoundaryData, x, t: float,
                          q: QuadratureConfig, label: str = 'halfspace') -> QuadratureResult:
    """
    int_{R^n} K(|x - y|, t) f(y) dy for a kernel with |K(r, t)| = O(r^{-decay}) at fixed t.

    Raises:
        QuadratureError: the tail is not summable or refinement does not converge.
    """
    x = np.asarray(x, dtype=float)
    value = error = 0.0
    nodes = level = 0
    for coefficient, term in data.terms:
        if coefficient == 0.0:
            continue
        result = refine(lambda L: _halfspace_term(kernel, decay, term, x, t, q, L), q, f'{label}:{term.name}',
                        {'truncation_radius': _halfspace_layout(term, x, t, q)[1], 't': t})
        value += coefficient * result.value
        error += abs(coefficient) * result.error
        nodes, level = nodes + result.nodes, max(level, result.level)
    return QuadratureResult(value, error, nodes, level)


# ____________________________________________sphere_section______________________________________________________


def _ball_term(kernel: SphereKernel, term: BoundaryData, xi: np.ndarray, q: QuadratureConfig,
               level: int) -> tuple[float, int]:
    n = term.dimension.n
    radius = float(np.linalg.norm(xi))
    centre = xi / radius if radius > 0 else _pole(term.dimension.ambient)
    theta, wt = zonal_rule(n, q.panel_nodes(level), max(1.0 - radius, 1e-6) / 8.0)
    d = np.sqrt((1.0 - radius) ** 2 + 4.0 * radius * np.sin(theta / 2.0) ** 2)
    with np.errstate(divide='ignore'):
        W = wt * kernel(1.0 - radius * radius, d)
    cos, sin = np.cos(theta), np.sin(theta)

    if term.is_zonal:
        c = float(np.clip(centre @ term.axis, -1.0, 1.0))
        s = np.sqrt(1.0 - c * c)
        phi, inner = zonal_rule(n - 1, q.panel_nodes(level), np.pi / 8)
        inner = inner / sphere_measure(n - 1)
        cos_phi = np.cos(phi)
        integrand = lambda i, j: term.profile(np.clip(cos[i] * c + sin[i] * s * cos_phi[j], -1.0, 1.0))
    else:
        frame = linalg.null_space(centre[None, :])
        directions, inner = product_sphere_rule(n - 1, q.sphere_nodes(level))
        directions = directions @ frame.T
        inner = inner / sphere_measure(n - 1)
        integrand = lambda i, j: term(cos[i, None] * centre + sin[i, None] * directions[j])

    return grid_sum(W, inner, integrand, q.workers), len(W) * len(inner)


def sphere_convolution(kernel: SphereKernel, data: BoundaryData, xi, q: QuadratureConfig,
                       label: str = 'sphere') -> QuadratureResult:
    """
    int_{S^n} K(1 - |xi|^2, |xi - eta|) f(eta) dV(eta) for xi in the closed ball, polar about xi/|xi|.
    """
    xi = np.asarray(xi, dtype=float)
    value = error = 0.0
    nodes = level = 0
    for coefficient, term in data.terms:
        if coefficient == 0.0:
            continue
        result = refine(lambda L: _ball_term(kernel, term, xi, q, L), q, f'{label}:{term.name}',
                        {'xi_norm': float(np.linalg.norm(xi))})
        value += coefficient * result.value
        error += abs(coefficient) * result.error
        nodes, level = nodes + result.nodes, max(level, result.level)
    return QuadratureResult(value, error, nodes, level)


def sphere_integral(data: BoundaryData, q: QuadratureConfig) -> QuadratureResult:
    """int_{S^n} f dV."""
    ones = lambda w, d: np.ones_like(d)
    return sphere_convolution(ones, data, np.zeros(data.dimension.ambient), q, label='sphere_integral')


def _pole(ambient: int) -> np.ndarray:
    e = np.zeros(ambient)
    e[-1] = 1.0
    return e
