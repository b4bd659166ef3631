import unittest
from unittest.mock import patch

import numpy as np

from biharmonic_kernels.ode.cylinder import (
    OdeBoundary, OdeParams, cylinder_operators, cylinder_transform, explicit_state, inverse_cylinder_transform)
from biharmonic_kernels.ode.integration import integrate_cascade, integrate_ode, normalization_scaling_residual
from biharmonic_kernels.ode.shooting import (
    ScanReport, expected_constants, explicit_solution_check, free_datum_of_bubble, scan_ceiling, uniqueness_scan)
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.src.exceptions import ContractError, DomainError


class TestCylinder(unittest.TestCase):
    '''

    # TestCylinder
    `Coefficients, boundary data and the change of variables r = e^{-t}.`
    '''

    def test_params(self):
        params = OdeParams(5)
        self.assertEqual(params.lam, 1.0)
        self.assertEqual(params.mu, 9.0)
        self.assertEqual(params.p_star, 5.0)
        self.assertEqual(params.kappa, 1.0)
        with self.assertRaises(ContractError):
            OdeParams(3)
        with self.assertRaises(DomainError):
            OdeParams(5, 'cylindrical')

    def test_fixed_point_is_stationary(self):
        for normalization in ('unit', 'geometric'):
            params = OdeParams(6, normalization)
            derivative = params.rhs(0.0, np.array([params.fixed_point, 0.0, 0.0, 0.0]))
            np.testing.assert_allclose(derivative, np.zeros(4), atol=1e-12)

    def test_boundary(self):
        with self.assertRaises(ContractError):
            OdeBoundary(3, 1.0, 0.0, 0.0)
        with self.assertRaises(DomainError):
            OdeBoundary(1, 0.0, 0.0, 0.0)
        state = np.array([0.8, -0.3, 0.4, 1.1])
        for i in (1, 2):
            boundary = OdeBoundary.from_state(i, state, 5)
            np.testing.assert_allclose(boundary.initial_state(boundary.free_datum(state), 5), state, atol=1e-14)
        self.assertEqual(cylinder_operators(state, 5)[0], 0.3)

    def test_transform(self):
        one = ScalarField.constant(1.0, 5, 'ball')
        self.assertAlmostEqual(cylinder_transform(one, 1.0, 5), np.exp(-1.0), places=14)
        profile = lambda r: 1.0 + r ** 2
        V = lambda t: cylinder_transform(profile, t, 5)
        self.assertAlmostEqual(inverse_cylinder_transform(V, 0.5, 5), 1.25, places=14)
        with self.assertRaises(DomainError):
            cylinder_transform(one, -1.0, 5)
        with self.assertRaises(DomainError):
            inverse_cylinder_transform(V, 0.0, 5)

    def test_explicit_state(self):
        params = OdeParams(5, 'geometric')
        # sech t at t = 0
        np.testing.assert_allclose(explicit_state(params, 1.0, 0.0), [1.0, 0.0, -1.0, 0.0], atol=1e-14)
        with self.assertRaises(DomainError):
            explicit_state(params, 0.0, 0.0)


class TestIntegration(unittest.TestCase):
    '''

    # TestIntegration
    `The fourth-order system, its cascade form and the normalization rescaling.`
    '''

    def test_bubble_trajectory(self):
        params = OdeParams(5)
        grid = np.linspace(0.0, 2.0, 5)
        trajectory = integrate_ode(params, explicit_state(params, 1.0, 0.0), 2.0, t_eval=grid)
        self.assertTrue(trajectory.admissible)
        np.testing.assert_allclose(trajectory.V, explicit_state(params, 1.0, grid)[0], atol=1e-6)
        cascade = integrate_cascade(params, explicit_state(params, 1.0, 0.0), 2.0, t_eval=grid)
        np.testing.assert_allclose(cascade.V, trajectory.V, atol=1e-6)

    def test_sign_change(self):
        trajectory = integrate_ode(OdeParams(5), [1.0, -5.0, 0.0, 0.0], 5.0)
        self.assertEqual(trajectory.termination_reason, 'signChange')
        self.assertLess(trajectory.exit_time, 5.0)
        self.assertFalse(trajectory.admissible)

    def test_zero_state(self):
        grid = np.linspace(0.0, 5.0, 6)
        for integrate in (integrate_ode, integrate_cascade):
            trajectory = integrate(OdeParams(5), [0.0, 0.0, 0.0, 0.0], 5.0, t_eval=grid)
            self.assertEqual(trajectory.termination_reason, 'reachedT')
            self.assertEqual(trajectory.exit_time, 5.0)
            np.testing.assert_array_equal(trajectory.states, np.zeros((6, 4)))
        self.assertTrue(integrate_ode(OdeParams(5), [0.0, 0.0, 0.0, 0.0], 5.0).admissible)

    def test_constant_solution_holds(self):
        params = OdeParams(5)
        grid = np.linspace(0.0, 50.0, 11)
        trajectory = integrate_ode(params, [params.fixed_point, 0.0, 0.0, 0.0], 50.0, t_eval=grid)
        self.assertTrue(trajectory.admissible)
        np.testing.assert_allclose(trajectory.V, params.fixed_point, rtol=1e-9)
        np.testing.assert_allclose(trajectory.states[:, 1:], 0.0, atol=1e-9)

    def test_errors(self):
        with self.assertRaises(DomainError):
            integrate_ode(OdeParams(5), [1.0, 0.0, 0.0, 0.0], 0.0)
        with self.assertRaises(DomainError):
            integrate_ode(OdeParams(5), [1.0, 0.0, 0.0], 1.0)

    def test_normalization_scaling(self):
        self.assertLess(normalization_scaling_residual(5, T=2.0), 1e-6)
        self.assertLess(normalization_scaling_residual(4, T=3.0), 1e-6)


class TestShooting(unittest.TestCase):
    '''

    # TestShooting
    `The explicit ball solutions and the uniqueness scan.`

    Test Cases
    test_explicit_solution

    - Back-solved c_1, c_3 match ((eps^2-1)/(2 eps), c_1 (3/2 + c_1^2)).

    test_scan_contains_bubble

    - The scan over V''(0) finds the datum of the transformed bubble.
    '''

    def test_expected_constants(self):
        self.assertEqual(expected_constants(1.0), (0.0, 0.5, 0.0))

    def test_explicit_solution(self):
        report = explicit_solution_check(2.0, 5, 1)
        self.assertAlmostEqual(report.measured[0], 0.75, places=10)
        self.assertAlmostEqual(report.measured[1], report.expected[1], places=8)
        self.assertLess(report.pde_residual, 1e-8)
        self.assertLess(report.constraint_residual, 1e-8)
        self.assertLess(report.geodesic_residual, 1e-10)
        second = explicit_solution_check(2.0, 5, 2)
        self.assertLess(second.constraint_residual, 1e-8)
        with self.assertRaises(ContractError):
            explicit_solution_check(2.0, 5, 3)
        with self.assertRaises(DomainError):
            explicit_solution_check(-1.0, 5, 1)

    def test_scan_contains_bubble(self):
        params = OdeParams(5)
        boundary, state, free = free_datum_of_bubble(params, 1)
        report = uniqueness_scan(params, boundary, (free - 0.5, free + 0.5), 3.0, grid_size=11, reference=state)
        self.assertTrue(report.contains(free, slack=1e-6))
        self.assertEqual(len(report.table()), len(report.rows))

    def test_scan_shrinks_with_T(self):
        params = OdeParams(5)
        boundary, state, free = free_datum_of_bubble(params, 1)
        widths = []
        for T in (3.0, 5.0, 8.0):
            report = uniqueness_scan(params, boundary, (free - 1.0, free + 1.0), T, grid_size=21, reference=state)
            self.assertTrue(report.resolved, msg=f'T = {T}')
            self.assertTrue(report.contains(free, slack=1e-6), msg=f'T = {T}')
            widths.append(report.width)
        self.assertTrue(all(b <= a for a, b in zip(widths, widths[1:])), msg=str(widths))
        self.assertLess(widths[-1], 1e-3)

    def test_perturbed_datum_leaves(self):
        params = OdeParams(5)
        boundary, state, free = free_datum_of_bubble(params, 1)
        ceiling = scan_ceiling(params, boundary, 8.0, state)
        trajectory = integrate_ode(params, boundary.initial_state(free + 0.1, 5), 8.0, ceiling=ceiling)
        self.assertFalse(trajectory.admissible)
        self.assertIn(trajectory.termination_reason, ('signChange', 'blowup'))
        self.assertLess(trajectory.exit_time, 8.0)

    def test_resolved(self):
        boundary, _, _ = free_datum_of_bubble(OdeParams(5), 1)
        nothing = ScanReport(3.0, boundary, 1.0, [], [], None)
        self.assertTrue(nothing.empty)
        self.assertFalse(nothing.resolved)
        self.assertTrue(nothing._replace(bracket=(0.1, 0.2)).resolved)
        self.assertTrue(nothing._replace(intervals=[(0.1, 0.2)]).resolved)

    @patch('biharmonic_kernels.log.log_handler.logger.info')
    def test_scan_logs_at_debug(self, mock_logger_info):
        params = OdeParams(5)
        boundary, state, free = free_datum_of_bubble(params, 1)
        uniqueness_scan(params, boundary, (free - 0.5, free + 0.5), 1.0, grid_size=5, reference=state)
        mock_logger_info.assert_not_called()

    def test_scan_errors(self):
        params = OdeParams(5)
        boundary, state, free = free_datum_of_bubble(params, 1)
        with self.assertRaises(ContractError):
            uniqueness_scan(OdeParams(5, 'geometric'), boundary, (free - 1, free + 1), 1.0)
        with self.assertRaises(DomainError):
            uniqueness_scan(params, boundary, (free, free), 1.0)


if __name__ == '__main__':
    unittest.main()
