import unittest

import numpy as np

from biharmonic_kernels.extremal.functions import (
    ExtremalParams, admissible_competitor, extremal_eval_and_check, extremal_field, ratio_eval,
    transported_extremal_residual)
from biharmonic_kernels.extremal.sharp_constants import (
    constants_table, d_n_monotonicity, geodesic_ball_curvatures, q_curvature_sphere, sharp_constants)
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.src.exceptions import ContractError, DomainError


class TestExtremalFunctions(unittest.TestCase):
    '''

    # TestExtremalFunctions
    `U_a on the ball, its transport by automorphisms and the geometric ratios.`

    Test Cases
    test_centre_value

    - U_0(0) = 1 + (n-3)/4 = 3/2 for n = 5, biharmonic with B_1 U_0 = 0.

    test_isoperimetric_ratio

    - The ratio of U_0 is d_n.
    '''

    def test_centre_value(self):
        check = extremal_eval_and_check(ExtremalParams([0] * 6, 5), [0] * 6)
        self.assertAlmostEqual(check.value, 1.5, places=14)
        self.assertTrue(check.bilaplacian.passed)
        self.assertTrue(check.boundary.passed)

    def test_shifted_centre(self):
        params = ExtremalParams([0.3, 0.0, -0.2, 0.1, 0.0, 0.2], 5)
        check = extremal_eval_and_check(params, [0.1, 0.2, 0.0, -0.1, 0.3, 0.0])
        self.assertTrue(check.bilaplacian.passed)
        self.assertTrue(check.boundary.passed)
        self.assertLess(transported_extremal_residual(params, [0.4, -0.1, 0.2, 0.0, 0.1, 0.3]), 1e-12)

    def test_params(self):
        with self.assertRaises(ContractError):
            ExtremalParams([0] * 4, 3)
        with self.assertRaises(DomainError):
            ExtremalParams([1.0, 0, 0, 0, 0, 0], 5)

    def test_competitor_is_biharmonic(self):
        U = admissible_competitor(5, np.random.default_rng(3))
        self.assertEqual(U.model, 'ball')
        self.assertLess(abs(float(U.exact('bilaplacian', np.array([0.1, 0.2, 0.0, 0.0, -0.3, 0.1])))), 1e-10)

    def test_isoperimetric_ratio(self):
        U0 = extremal_field(ExtremalParams([0] * 5, 4))
        self.assertAlmostEqual(ratio_eval('isoperimetric', U0), sharp_constants(4).d_n, places=6)

    def test_t3_operator_normalization(self):
        for n in (4, 5):
            U0 = extremal_field(ExtremalParams([0] * (n + 1), n))
            self.assertAlmostEqual(ratio_eval('t3ratio', U0, t3_normalization='operator'), sharp_constants(n).e_n,
                                   delta=1e-4, msg=f'n = {n}')

    def test_ratio_errors(self):
        U0 = extremal_field(ExtremalParams([0] * 6, 5))
        with self.assertRaises(DomainError):
            ratio_eval('volume', U0)
        with self.assertRaises(DomainError):
            ratio_eval('t3ratio', U0, t3_normalization='area')
        with self.assertRaises(DomainError):
            ratio_eval('isoperimetric', ScalarField.constant(1.0, 5, 'halfspace'))


class TestSharpConstants(unittest.TestCase):
    '''

    # TestSharpConstants
    `I(n), d_n, e_n and the curvatures of geodesic balls.`
    '''

    def test_d4(self):
        constants = sharp_constants(4)
        self.assertAlmostEqual(constants.d_n, 0.198, places=3)
        self.assertAlmostEqual(constants.integral, 0.4488, places=3)
        self.assertGreater(constants.e_n, 0.0)
        with self.assertRaises(ContractError):
            sharp_constants(3)

    def test_table(self):
        rows = constants_table(6)
        self.assertEqual([row['n'] for row in rows], [4, 5, 6])
        self.assertEqual(set(rows[0]), {'n', 'I', 'd_n', 'e_n', 'error'})
        self.assertIn(d_n_monotonicity(rows), ('increasing', 'decreasing', 'mixed'))
        with self.assertRaises(DomainError):
            constants_table(5, n_min=3)

    def test_monotonicity_labels(self):
        self.assertEqual(d_n_monotonicity([{'d_n': 1.0}, {'d_n': 2.0}]), 'increasing')
        self.assertEqual(d_n_monotonicity([{'d_n': 2.0}, {'d_n': 1.0}]), 'decreasing')
        self.assertEqual(d_n_monotonicity([{'d_n': 1.0}, {'d_n': 2.0}, {'d_n': 1.5}]), 'mixed')

    def test_geodesic_balls(self):
        hemisphere = geodesic_ball_curvatures(5, np.pi / 2)
        self.assertAlmostEqual(hemisphere.h, 0.0, places=14)
        self.assertAlmostEqual(hemisphere.T2, 2.0, places=12)
        self.assertAlmostEqual(hemisphere.T3, 0.0, places=12)
        small = geodesic_ball_curvatures(5, np.pi / 4)
        self.assertAlmostEqual(small.T2, 6.0, places=12)
        self.assertAlmostEqual(small.T3, 30.0, places=12)
        with self.assertRaises(DomainError):
            geodesic_ball_curvatures(5, np.pi)
        self.assertEqual(q_curvature_sphere(3), 6.0)


if __name__ == '__main__':
    unittest.main()
