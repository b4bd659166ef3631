import os
import tempfile
import unittest

import numpy as np

from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.solver.asymptotics import check_hypotheses, decay_asymptotics_fit, predicted_slope
from biharmonic_kernels.solver.data import BoundaryData
from biharmonic_kernels.solver.gjms import gjms_trace_check
from biharmonic_kernels.solver.green_formula import comparison_check, volume_potential
from biharmonic_kernels.solver.limits import boundary_limit_check, neville
from biharmonic_kernels.solver.poisson_integrals import poisson_integral, poisson_integral_result, transport_check
from biharmonic_kernels.solver.quadrature import (
    QuadratureConfig, gauss_legendre, panel_rule, product_sphere_rule, refine)
from biharmonic_kernels.src.exceptions import ContractError, DomainError, QuadratureError


class TestBoundaryData(unittest.TestCase):
    '''

    # TestBoundaryData
    `Boundary data families, their algebra and CSV loading.`
    '''

    def test_families(self):
        origin = np.zeros(4)
        self.assertEqual(BoundaryData.constant(2.5, 4)(origin), 2.5)
        self.assertAlmostEqual(BoundaryData.bump(origin, 1.0, 4)(origin), 1.0, places=15)
        self.assertEqual(BoundaryData.bump(origin, 1.0, 4)(np.array([1.5, 0, 0, 0])), 0.0)
        self.assertAlmostEqual(BoundaryData.rational(origin, 6.0, 4)(np.array([1.0, 0, 0, 0])), 0.125, places=15)
        self.assertEqual(BoundaryData.coordinate(2, 4)(np.eye(5)[2]), 1.0)
        self.assertTrue(BoundaryData.zero(4).is_zero)
        with self.assertRaises(DomainError):
            BoundaryData.coordinate(5, 4)
        with self.assertRaises(DomainError):
            BoundaryData.gaussian(origin, 0.0, 4)

    def test_algebra(self):
        g = BoundaryData.gaussian(np.zeros(4), 1.0, 4)
        combined = 2.0 * g + g
        self.assertAlmostEqual(combined(np.zeros(4)), 3.0, places=15)
        self.assertAlmostEqual((g - g)(np.ones(4)), 0.0, places=15)
        with self.assertRaises(DomainError):
            g + BoundaryData.constant(1.0, 4, 'ball')

    def test_admissibility(self):
        slow = BoundaryData.rational(np.zeros(4), 1.5, 4)
        slow.require_admissible(0)
        slow.require_admissible(1)
        with self.assertRaises(ContractError):
            slow.require_admissible(2)

    def test_from_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            radial = os.path.join(directory, 'radial.csv')
            with open(radial, 'w') as file:
                file.write('r,value\n0,1.0\n1,0.5\n2,0.25\n')
            data = BoundaryData.from_csv(radial, 4.0, dimension=3)
            self.assertEqual(data(np.array([0.9, 0.0, 0.0])), 0.5)
            self.assertEqual(data.decay_exponent, 4.0)

            scattered = os.path.join(directory, 'scattered.csv')
            with open(scattered, 'w') as file:
                file.write('y0,y1,value\n0,0,3.0\n1,1,-1.0\n')
            data = BoundaryData.from_csv(scattered, 6.0)
            self.assertEqual(data.dimension.n, 2)
            self.assertEqual(data(np.array([0.9, 0.8])), -1.0)
            with self.assertRaises(DomainError):
                BoundaryData.from_csv(scattered, 6.0, dimension=3)


class TestQuadrature(unittest.TestCase):
    '''

    # TestQuadrature
    `Rules and the refinement driver.`
    '''

    def test_rules(self):
        _, w = gauss_legendre(8)
        self.assertAlmostEqual(float(np.sum(w)), 2.0, places=14)
        x, w = panel_rule([0.0, 1.0, 3.0], 4)
        self.assertAlmostEqual(float(np.sum(w * x ** 2)), 9.0, places=12)
        points, weights = product_sphere_rule(2, 8)
        self.assertAlmostEqual(float(np.sum(weights)), 4.0 * np.pi, places=12)
        np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0, atol=1e-14)

    def test_refine(self):
        q = QuadratureConfig(target_tol=1e-6, max_refinements=3)
        result = refine(lambda level: (1.0 + 10.0 ** (-3 * level), 10 * 2 ** level), q, 'converging')
        self.assertEqual(result.level, 3)
        self.assertAlmostEqual(result.value, 1.0, places=8)
        with self.assertRaises(QuadratureError) as context:
            refine(lambda level: (float(level), 1), q, 'diverging')
        self.assertEqual(len(context.exception.diagnostics['values']), 4)

    def test_config_validation(self):
        with self.assertRaises(DomainError):
            QuadratureConfig(target_tol=0.0)
        with self.assertRaises(DomainError):
            QuadratureConfig(workers=0)


class TestPoissonIntegrals(unittest.TestCase):
    '''

    # TestPoissonIntegrals
    `U = P_i * f_i + P_j * f_j on the half-space.`

    Test Cases
    test_constant_data

    - Constant data 1 for B_0 and 0 for B_j reproduce U = 1.

    test_contract_errors

    - Ill-posed pairs, slowly decaying data and boundary points are rejected.
    '''

    def test_constant_data(self):
        one, zero = BoundaryData.constant(1.0, 4), BoundaryData.zero(4)
        for pair in ((0, 1), (0, 2)):
            self.assertAlmostEqual(poisson_integral(pair, one, zero, [0, 0, 0, 0, 1.0]), 1.0, places=5)
        result = poisson_integral_result((0, 2), one, zero, [0.5, 0, 0, 0, 0.3])
        self.assertAlmostEqual(result.value, 1.0, places=5)
        self.assertGreater(result.nodes, 0)

    def test_zero_data(self):
        zero = BoundaryData.zero(5)
        self.assertEqual(poisson_integral((1, 3), zero, zero, [0, 0, 0, 0, 0, 1.0]), 0.0)

    def test_contract_errors(self):
        one, zero = BoundaryData.constant(1.0, 4), BoundaryData.zero(4)
        with self.assertRaises(ContractError):
            poisson_integral((0, 3), one, zero, [0, 0, 0, 0, 1.0])
        with self.assertRaises(ContractError):
            poisson_integral((0, 2), zero, BoundaryData.rational(np.zeros(4), 1.5, 4), [0, 0, 0, 0, 1.0])
        with self.assertRaises(DomainError):
            poisson_integral((0, 2), one, zero, [0, 0, 0, 0, 0.0])
        with self.assertRaises(DomainError):
            poisson_integral((0, 2), one, BoundaryData.zero(4, 'ball'), [0, 0, 0, 0, 1.0])


class TestLimitsAndDecay(unittest.TestCase):
    '''

    # TestLimitsAndDecay
    `Extrapolation to the boundary and decay fits of the singular integrals.`
    '''

    def test_neville(self):
        value, error = neville([0.4, 0.2, 0.1], [1.0 + 0.4 ** 2, 1.0 + 0.2 ** 2, 1.0 + 0.1 ** 2])
        self.assertAlmostEqual(value, 1.0, places=13)
        self.assertLess(error, 0.1)

    def test_boundary_limit_contracts(self):
        g = BoundaryData.gaussian(np.zeros(4), 1.0, 4)
        with self.assertRaises(ContractError):
            boundary_limit_check((0, 2), g, g, np.zeros(4), heights=(0.1, 0.05, 0.025))
        with self.assertRaises(DomainError):
            boundary_limit_check((0, 2), g, g, np.zeros(4), heights=(0.1, 0.2, 0.05, 0.025))
        with self.assertRaises(DomainError):
            boundary_limit_check((0, 2), g, BoundaryData.zero(4, 'ball'), np.zeros(4))

    def test_hypotheses(self):
        self.assertEqual(predicted_slope('lemma-1', 1.0, 8.0, 4), -2.0)
        self.assertEqual(predicted_slope('lemma-2', 1.0, 3.0, 4), -3.0)
        with self.assertRaises(ContractError):
            check_hypotheses('lemma-1', 2.0, 8.0, 4)
        with self.assertRaises(ContractError):
            check_hypotheses('lemma-1', 0.5, 2.0, 4)
        with self.assertRaises(ContractError):
            check_hypotheses('lemma-2', 0.0, 2.0, 4)
        with self.assertRaises(DomainError):
            check_hypotheses('lemma-3', 1.0, 8.0, 4)

    def test_vertical_decay_fit(self):
        g = BoundaryData.gaussian(np.zeros(4), 1.0, 4)
        report = decay_asymptotics_fit('lemma-1', (1.0, 8.0, 4), g, (10.0, 30.0, 100.0))
        self.assertEqual(report.predicted_slope, -2.0)
        self.assertLess(report.slope_error, 0.05)
        self.assertIsNone(report.log_coefficient)
        with self.assertRaises(ContractError):
            decay_asymptotics_fit('lemma-1', (1.0, 8.0, 4), g, (10.0, 20.0, 30.0))


class TestBallSolvers(unittest.TestCase):
    '''

    # TestBallSolvers
    `The ball volume potential, the comparison principle and the trace checks.`
    '''

    def setUp(self):
        self.centre = np.zeros(6)

    def test_volume_potential_contracts(self):
        zero = ScalarField.constant(0.0, 5, 'ball')
        self.assertEqual(volume_potential((0, 2), zero, self.centre), 0.0)
        with self.assertRaises(DomainError):
            volume_potential((0, 2), ScalarField.constant(1.0, 5, 'halfspace'), np.append(np.zeros(5), 1.0))
        with self.assertRaises(DomainError):
            volume_potential((0, 2), ScalarField.constant(1.0, 5, 'ball'), self.centre, decomposition='shell')
        with self.assertRaises(ContractError):
            volume_potential((0, 3), ScalarField.constant(1.0, 5, 'ball'), self.centre)

    def test_comparison_signs(self):
        one, zero = BoundaryData.constant(1.0, 5, 'ball'), BoundaryData.zero(5, 'ball')
        with self.assertRaises(ContractError):
            comparison_check((0, 1), None, zero, one, [self.centre], sign_samples=16)
        with self.assertRaises(ContractError):
            comparison_check((0, 1), None, BoundaryData.constant(1.0, 3, 'ball'), BoundaryData.zero(3, 'ball'),
                             [np.zeros(4)], sign_samples=16)

    def test_trace_checks(self):
        with self.assertRaises(DomainError):
            gjms_trace_check(BoundaryData.constant(1.0, 5), np.append(np.zeros(5), 1.0))
        with self.assertRaises(DomainError):
            gjms_trace_check(BoundaryData.constant(1.0, 5, 'ball'), 0.5 * np.eye(6)[0])
        with self.assertRaises(ContractError):
            gjms_trace_check(BoundaryData.constant(1.0, 3, 'ball'), np.eye(4)[0])
        zero = BoundaryData.zero(5, 'ball')
        self.assertEqual(gjms_trace_check(zero, np.eye(6)[0]).residual, 0.0)
        with self.assertRaises(ContractError):
            transport_check((0, 2), BoundaryData.zero(5), BoundaryData.zero(5), [0, 0, 0, 0, 0, 1.0])

    def test_comparison_positive_data(self):
        one, zero = BoundaryData.constant(1.0, 5, 'ball'), BoundaryData.zero(5, 'ball')
        samples = [np.zeros(6), [0.2, -0.1, 0.0, 0.3, 0.0, 0.1], [0.0, 0.0, 0.0, 0.0, 0.0, -0.6]]
        self.assertGreaterEqual(comparison_check((0, 1), None, one, zero, samples), -1e-6)

    def test_trace_checks_positive_data(self):
        gjms = gjms_trace_check(BoundaryData.coordinate(0, 5), np.eye(6)[0])
        self.assertLess(gjms.residual, 1e-4)
        one, zero = BoundaryData.constant(1.0, 5, 'ball'), BoundaryData.zero(5, 'ball')
        transport = transport_check((0, 2), one, zero, np.append(np.full(5, 0.3), 0.7))
        self.assertLess(transport.residual, 1e-5)

    def test_boundary_limit_of_bump(self):
        bump = BoundaryData.bump(np.zeros(5), 1.0, 5)
        x = np.full(5, 0.2)
        limit = boundary_limit_check((0, 1), bump, BoundaryData.zero(5), x)
        self.assertAlmostEqual(limit.trace_i.value, float(bump(x)), delta=1e-4)
        self.assertAlmostEqual(limit.trace_j.value, 0.0, delta=1e-4)
        self.assertAlmostEqual(limit.derivative_probe.value, 0.0, delta=1e-4)


if __name__ == '__main__':
    unittest.main()
