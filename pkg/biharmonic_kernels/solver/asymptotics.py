"""
Decay of the two prototype singular integrals on the half-space,

    v(x, t) = int f(y) (t^2 + |x - y|^2)^{-alpha} dy           ('lemma-1')
    w(x, t) = int t^beta f(y) (t^2 + |x - y|^2)^{-(n+beta)/2} dy  ('lemma-2')

for data f = O(|y|^{-a}). A log-log fit along rays is compared with the predicted exponents
n - 2 alpha - min(a, n) and -min(b, n); at a = n (b = n) the bound carries a log |X| factor, whose
coefficient is fitted separately.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.quadrature import QuadratureConfig, halfspace_convolution
from biharmonic_kernels.src.exceptions import ContractError, DomainError

KINDS = ('lemma-1', 'lemma-2')
# ray directions: t >> |x| and t << |x|
REGIMES = {'vertical': 0.0, 'horizontal': 10.0}


class DecayFitReport(NamedTuple):
    fitted_slope: float
    predicted_slope: float
    r_squared: float
    sample_range: tuple[float, float]
    log_coefficient: float | None = None

    @property
    def slope_error(self) -> float:
        return abs(self.fitted_slope - self.predicted_slope)


def _kernel(kind: str, exponent: float, n: int):
    if kind == 'lemma-1':
        return (lambda r, t: (t * t + r * r) ** (-exponent)), 2.0 * exponent
    return (lambda r, t: t ** exponent * (t * t + r * r) ** (-(n + exponent) / 2)), n + exponent


def predicted_slope(kind: str, exponent: float, decay: float, n: int) -> float:
    if kind == 'lemma-1':
        return n - 2.0 * exponent - min(decay, n)
    return -min(decay, n)


def check_hypotheses(kind: str, exponent: float, decay: float, n: int) -> None:
    """
    Raises:
        ContractError: 'lemma-1' without 0 < alpha < n/2 and a + 2 alpha > n, or 'lemma-2' without
            beta > 0 and b > 0.
    """
    if kind not in KINDS:
        raise DomainError(f"Unknown singular integral '{kind}', expected one of {KINDS}")
    if kind == 'lemma-1':
        if not 0 < exponent < n / 2:
            raise ContractError(f"lemma-1 needs 0 < alpha < n/2, got alpha = {exponent}, n = {n}")
        if not decay + 2 * exponent > n:
            raise ContractError(f"lemma-1 needs a + 2 alpha > n, got a = {decay}, alpha = {exponent}, n = {n}")
    elif not (exponent > 0 and decay > 0):
        raise ContractError(f"lemma-2 needs beta > 0 and b > 0, got beta = {exponent}, b = {decay}")


def singular_integral(kind: str, exponent: float, f: BoundaryData, X, q: QuadratureConfig | None = None,
                      scale: float = 1.0) -> float:
    """
    v (kind 'lemma-1', exponent alpha) or w (kind 'lemma-2', exponent beta) at X = (x, t), t > 0.

    The kernel is multiplied by `scale` inside the quadrature so that the refinement tolerance acts
    on a quantity of order one.
    """
    q = q or QuadratureConfig()
    X = np.asarray(X, dtype=float)
    kernel, decay = _kernel(kind, exponent, f.dimension.n)
    scaled = lambda r, t: scale * kernel(r, t)
    return halfspace_convolution(scaled, decay, f, X[:-1], float(X[-1]), q, label=kind).value / scale


def decay_asymptotics_fit(kind: str, params: tuple[float, float, int], f: BoundaryData, radii: Sequence[float],
                          q: QuadratureConfig | None = None, regime: str = 'vertical') -> DecayFitReport:
    """
    Fit log |v(X)| (or log |w(X)|) against log |X| along a ray.

    Args:
        kind (str): 'lemma-1' or 'lemma-2'.
        params (tuple): (alpha or beta, a or b, n); a and b are the decay exponents of f.
        f (BoundaryData): half-space datum.
        radii (sequence): |X| values spanning at least one decade.
        regime (str): 'vertical' walks X = (0, R); 'horizontal' walks |x| = 10 t.

    Raises:
        ContractError: the hypotheses fail or the radii span less than a decade.
    """
    exponent, decay, n = params
    check_hypotheses(kind, exponent, decay, n)
    if f.dimension.n != n or f.model != 'halfspace':
        raise DomainError(f"Datum must live on the half-space boundary R^{n}")
    if regime not in REGIMES:
        raise DomainError(f"Unknown regime '{regime}', expected one of {tuple(REGIMES)}")
    R = np.asarray(radii, dtype=float)
    if R.size < 3 or R.min() <= 0 or R.max() / R.min() < 10.0:
        raise ContractError("Decay fits need at least 3 positive radii spanning one decade")

    q = q or QuadratureConfig()
    predicted = predicted_slope(kind, exponent, decay, n)
    ratio = REGIMES[regime]
    heights = R / np.sqrt(1.0 + ratio ** 2)
    values = []
    for radius, t in zip(R, heights):
        X = np.zeros(n + 1)
        X[0] = ratio * t
        X[-1] = t
        values.append(singular_integral(kind, exponent, f, X, q, scale=radius ** (-predicted)))
    values = np.abs(np.asarray(values))

    logR, logV = np.log(R), np.log(values)
    slope, intercept = np.polyfit(logR, logV, 1)
    residual = logV - (slope * logR + intercept)
    spread = np.sum((logV - logV.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2) / spread) if spread > 0 else 1.0

    log_coefficient = None
    if decay == n:
        leading = -2.0 * exponent if kind == 'lemma-1' else -float(n)
        log_coefficient = float(np.polyfit(logR, values * R ** (-leading), 1)[0])
    report = DecayFitReport(float(slope), float(predicted), r_squared, (float(R.min()), float(R.max())), log_coefficient)
    logger.debug({'decay_fit': kind, 'regime': regime, 'report': report._asdict()})
    return report
