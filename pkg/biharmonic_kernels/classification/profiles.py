"""
The classification profiles M1, M2, M3 built from bubble boundary traces.

    M1 = T1 P1 * U^{p1}          + T3 P3 * U^{p3*}     pair (1,3) conditions, p3 = p3*
    M2 = P0 * U^{p1*/p1}         + T2 P2 * U^{p2*}     (1,2) conditions, p2/p1 = (n+1)/(n-1)
    M3 = P0 * U                  + T2 P2 * U^{p2}      (2,3) conditions, p3 = p3*

U is the trace of U_{x0,eps}. At fully critical exponents every profile equals the bubble itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from biharmonic_kernels.classification.bubbles import bubble_eval
from biharmonic_kernels.geometry.points import BubbleParams, Dimension, HalfSpacePoint, as_coords
from biharmonic_kernels.log.log_handler import logger
from biharmonic_kernels.operators.boundary import t_constants
from biharmonic_kernels.solver.asymptotics import DecayFitReport
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.poisson_integrals import poisson_integral
from biharmonic_kernels.solver.quadrature import QuadratureConfig
from biharmonic_kernels.src.exceptions import ContractError, DomainError

CASES = ('M1', 'M2', 'M3')
# boundary conditions B_i u = T_i u^{p_i}, B_j u = T_j u^{p_j} of each classification
CONDITIONS = {'M1': (1, 3), 'M2': (1, 2), 'M3': (2, 3)}
# operator pair of the Poisson integral each profile is built from
PROFILE_PAIRS = {'M1': (1, 3), 'M2': (0, 2), 'M3': (0, 2)}
# the polynomial that may be added to the profile
FREE_TERMS = {'M1': 'c2 t^2', 'M2': 'c3 t^3', 'M3': 'c1 t'}
RATIO_SLACK = 1e-12


class ProfileTerm(NamedTuple):
    """coefficient * P_k * U^power."""
    k: int
    coefficient: float
    power: float


@dataclass(frozen=True)
class ClassificationCase:
    """
    One of the three classifications, with the exponents of its boundary nonlinearities.

    Args:
        which (str): 'M1', 'M2' or 'M3'.
        exponents (tuple): (p_i, p_j) for the conditions (1,3), (1,2) and (2,3) respectively.
        params (BubbleParams): half-space bubble whose trace feeds the profile.

    Raises:
        ContractError: n < 4, nonpositive exponents, or exponents outside the profile branch.
    """
    which: str
    exponents: tuple[float, float]
    params: BubbleParams

    def __post_init__(self) -> None:
        if self.which not in CASES:
            raise DomainError(f"Unknown classification case '{self.which}', expected one of {CASES}")
        if not self.params.is_half_space:
            raise DomainError("Classification profiles are built on the half-space")
        self.dimension.require_classification()
        p_i, p_j = self.exponents
        if not (p_i > 0 and p_j > 0):
            raise ContractError(f"Exponents must be positive, got {self.exponents}")
        if self.branch != 'profile':
            raise ContractError(f"Exponents {self.exponents} of {self.which} are outside the profile branch; "
                                f"solutions there are {FREE_TERMS[self.which]} only")

    @classmethod
    def critical(cls, which: str, params: BubbleParams) -> "ClassificationCase":
        dim = params.dimension
        i, j = CONDITIONS[which]
        return cls(which, (dim.p_star(i), dim.p_star(j)), params)

    @property
    def dimension(self) -> Dimension:
        return self.params.dimension

    @property
    def conditions(self) -> tuple[int, int]:
        return CONDITIONS[self.which]

    @property
    def branch(self) -> str:
        """'profile' when a bubble-type solution exists, 'trivial' when only the free polynomial does."""
        dim = self.dimension
        n = dim.n
        p_i, p_j = self.exponents
        if self.which == 'M1':
            if p_j < dim.p_star(3) - RATIO_SLACK:
                return 'trivial'
            return 'profile' if abs(p_j - dim.p_star(3)) <= RATIO_SLACK and p_i > 1 / (n - 3) else 'undetermined'
        if self.which == 'M2':
            ratio = p_j / p_i
            if ratio < (n + 1) / (n - 1) - RATIO_SLACK:
                return 'trivial'
            return 'profile' if abs(ratio - (n + 1) / (n - 1)) <= RATIO_SLACK else 'undetermined'
        if p_j < dim.p_star(3) - RATIO_SLACK:
            return 'trivial'
        return 'profile' if abs(p_j - dim.p_star(3)) <= RATIO_SLACK and p_i > 2 / (n - 3) else 'undetermined'

    @property
    def is_critical(self) -> bool:
        """The profile coincides with the bubble: p1 = p1* (M1, M2) or p2 = p2* (M3)."""
        dim = self.dimension
        p_i = self.exponents[0]
        target = dim.p_star(2) if self.which == 'M3' else dim.p_star(1)
        return abs(p_i - target) <= RATIO_SLACK

    @property
    def decay_bound(self) -> float:
        """The trace must decay faster than |x|^{-c} for c above this bound."""
        p_i, p_j = self.exponents
        if self.which == 'M1':
            return max(3.0 / p_j, 1.0 / p_i)
        if self.which == 'M2':
            return 2.0 / p_j
        return max(2.0 / p_i, 3.0 / p_j)

    @property
    def decay_hypothesis_holds(self) -> bool:
        """The bubble trace decays like |x|^{3-n}."""
        return self.dimension.n - 3 > self.decay_bound

    def terms(self) -> tuple[ProfileTerm, ProfileTerm]:
        dim = self.dimension
        T1, T2, T3 = t_constants(dim.n)
        p_i, p_j = self.exponents
        if self.which == 'M1':
            return ProfileTerm(1, T1, p_i), ProfileTerm(3, T3, p_j)
        if self.which == 'M2':
            return ProfileTerm(0, 1.0, dim.p_star(1) / p_i), ProfileTerm(2, T2, dim.p_star(2))
        return ProfileTerm(0, 1.0, 1.0), ProfileTerm(2, T2, p_i)

    def boundary_data(self) -> tuple[BoundaryData, BoundaryData]:
        first, second = self.terms()
        return (BoundaryData.bubble_trace(self.params, first.power, first.coefficient),
                BoundaryData.bubble_trace(self.params, second.power, second.coefficient))

    def metadata(self) -> dict:
        return {'case': self.which, 'n': self.dimension.n, 'exponents': list(self.exponents),
                'conditions': list(self.conditions), 'critical': self.is_critical,
                'decay_bound': self.decay_bound, 'decay_hypothesis': self.decay_hypothesis_holds,
                'free_term': FREE_TERMS[self.which]}


def m_profile_eval(case: ClassificationCase, X, q: QuadratureConfig | None = None) -> float:
    """
    The profile of `case` at an interior half-space point.

    Raises:
        QuadratureError: propagated from the quadrature engine.

    Example:
        >>> case = ClassificationCase.critical('M1', BubbleParams.half_space([0] * 5, 1.0, 5))
        >>> round(m_profile_eval(case, [0, 0, 0, 0, 0, 1.0]), 5)
        0.5
    """
    f_i, f_j = case.boundary_data()
    return poisson_integral(PROFILE_PAIRS[case.which], f_i, f_j, X, q)


def classification_identity_check(case: ClassificationCase, samples: Sequence[Sequence[float]],
                                  q: QuadratureConfig | None = None) -> float:
    """
    max |M(X) - U_{x0,eps}(X)| over interior samples.

    Raises:
        ContractError: the exponents are not fully critical; no identity is claimed there.
    """
    if not case.is_critical:
        raise ContractError(f"{case.which} equals the bubble only at critical exponents, got {case.exponents}")
    deviations = []
    for X in samples:
        point = HalfSpacePoint.from_coords(as_coords(X), case.dimension).coords
        deviations.append(abs(m_profile_eval(case, point, q) - bubble_eval(case.params, point)))
    worst = max(deviations, default=0.0)
    logger.debug({'classification_identity': case.which, 'n': case.dimension.n, 'samples': len(deviations),
                  'max_deviation': worst})
    return worst


def m_profile_decay_fit(case: ClassificationCase, radii: Sequence[float], q: QuadratureConfig | None = None) -> DecayFitReport:
    """
    Fit log M(0, R) against log R; the profile decays like |X|^{3-n}.

    Raises:
        ContractError: fewer than 3 radii or a span below one decade.
    """
    R = np.asarray(radii, dtype=float)
    if R.size < 3 or R.min() <= 0 or R.max() / R.min() < 10.0:
        raise ContractError("Decay fits need at least 3 positive radii spanning one decade")
    n = case.dimension.n
    x0 = np.asarray(case.params.x0)
    values = np.array([m_profile_eval(case, np.append(x0, radius), q) for radius in R])
    logR, logV = np.log(R), np.log(np.abs(values))
    slope, intercept = np.polyfit(logR, logV, 1)
    residual = logV - (slope * logR + intercept)
    spread = np.sum((logV - logV.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2) / spread) if spread > 0 else 1.0
    report = DecayFitReport(float(slope), float(3 - n), r_squared, (float(R.min()), float(R.max())))
    logger.debug({'m_profile_decay': case.which, 'report': report._asdict()})
    return report
