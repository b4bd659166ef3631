import unittest

import numpy as np

from biharmonic_kernels.classification.bubbles import (
    automorphism_residual, ball_automorphism, bubble_bvp_residual, bubble_correspondence_residual, bubble_eval,
    bubble_scaling_residual, bubble_trace_decay_slope)
from biharmonic_kernels.classification.families import (
    SingularSolutionParams, homogeneous_family_check, singular_field, singular_solution_check)
from biharmonic_kernels.classification.profiles import (
    ClassificationCase, classification_identity_check, m_profile_eval)
from biharmonic_kernels.geometry.points import BubbleParams
from biharmonic_kernels.src.exceptions import ContractError, DomainError


class TestBubbles(unittest.TestCase):
    '''

    # TestBubbles
    `Closed-form bubbles, their conformal correspondence and the bubble BVP.`

    Test Cases
    test_values

    - U_{0,1}(0, 0) = 2 and U_{0,1}(0, 1) = 1/2 for n = 5.

    test_bvp

    - The n = 5 bubble is biharmonic and meets B_1, B_3 with the critical exponents.
    '''

    def setUp(self):
        self.params = BubbleParams.half_space([0.0] * 5, 1.0, 5)
        self.rng = np.random.default_rng(11)

    def test_values(self):
        self.assertEqual(bubble_eval(self.params, [0] * 6), 2.0)
        self.assertAlmostEqual(bubble_eval(self.params, [0, 0, 0, 0, 0, 1.0]), 0.5, places=15)
        self.assertAlmostEqual(bubble_eval(BubbleParams.ball([0.0] * 6, 5), [0.3, 0, 0, 0, 0, 0]), 1.0, places=15)
        with self.assertRaises(DomainError):
            bubble_eval(self.params, [0, 0, 0, 0, 0, -1.0])

    def test_correspondence(self):
        params = BubbleParams.half_space([0.4, -0.2, 0.0, 0.1, 0.3], 0.8, 5)
        for X in ([0.1, 0.2, -0.3, 0.0, 0.5, 0.4], [1.5, 0.0, 0.2, -1.0, 0.3, 2.0]):
            self.assertLess(bubble_correspondence_residual(params, X), 1e-12)
        self.assertLess(bubble_scaling_residual(params, [0.2, 0.1, 0.0, 0.0, 0.3, 0.6]), 1e-12)

    def test_trace_decay(self):
        slope = bubble_trace_decay_slope(self.params, (1e3, 1e4, 1e5))
        self.assertAlmostEqual(slope, -2.0, places=4)

    def test_automorphisms(self):
        a = np.array([0.2, -0.1, 0.3, 0.0])
        np.testing.assert_allclose(ball_automorphism(a, a), np.zeros(4), atol=1e-15)
        for _ in range(10):
            xi = 0.45 * self.rng.uniform(-1, 1, 4)
            self.assertLess(automorphism_residual(a, xi), 1e-12)
        with self.assertRaises(DomainError):
            ball_automorphism([1.0, 0.0, 0.0, 0.0], np.zeros(4))

    def test_bvp(self):
        residuals = bubble_bvp_residual(1, 3, self.params, [[0.1, 0.2, 0.0, 0.0, 0.0, 0.5]],
                                        [[0.3, 0.0, 0.0, 0.0, 0.0, 0.0]])
        self.assertTrue(residuals.passed)

    def test_bvp_contracts(self):
        with self.assertRaises(ContractError):
            bubble_bvp_residual(1, 3, BubbleParams.half_space([0.0] * 3, 1.0, 3), [], [])
        with self.assertRaises(ContractError):
            bubble_bvp_residual(0, 2, self.params, [], [])


class TestFamilies(unittest.TestCase):
    '''

    # TestFamilies
    `Homogeneous solutions and the singular family on the ball.`
    '''

    def setUp(self):
        self.boundary = [[0.3, -0.2, 0.1, 0.0, 0.5, 0.0], [1.0, 0.4, -0.7, 0.2, 0.0, 0.0]]
        self.interior = [[0.2, 0.1, 0.0, -0.3, 0.4, 0.8]]

    def test_polynomial_families(self):
        for family in ('c1t', 'c2t2', 'c3t3', 'tP2'):
            result = homogeneous_family_check(family, 5, self.boundary, self.interior)
            self.assertTrue(result.passed(1e-12), msg=family)

    def test_family_errors(self):
        with self.assertRaises(DomainError):
            homogeneous_family_check('c4t4', 5, self.boundary, self.interior)
        with self.assertRaises(DomainError):
            homogeneous_family_check('c1t', 5, [[0.0, 0, 0, 0, 0, 0.1]], self.interior)

    def test_singular_solution_params(self):
        params = SingularSolutionParams(1, 3, [0.0] * 6, 0.5, 5)
        self.assertEqual(params.exponent, 2)
        with self.assertRaises(ContractError):
            SingularSolutionParams(0, 3, [0.0] * 6, 0.5, 5)
        with self.assertRaises(DomainError):
            SingularSolutionParams(1, 3, [0.0] * 6, -1.0, 5)

    def test_singular_family_with_positive_cbar(self):
        interior = [[0.1, 0.2, 0.0, -0.1, 0.3, 0.2], [0.0, 0.0, 0.0, 0.0, 0.0, -0.5]]
        sphere = [[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.6, 0.0, 0.0, 0.8], [0.0, 0.8, 0.0, 0.0, 0.0, -0.6]]
        for i, j, cbar in ((1, 2, 1.0), (1, 3, 1.0), (2, 3, 2.0)):
            params = SingularSolutionParams(i, j, [0.0] * 6, cbar, 5)
            residuals = singular_solution_check(params, interior, sphere)
            self.assertTrue(residuals.passed, msg=f'({i},{j}): {residuals}')
            # the singular term vanishes on the sphere and not inside
            field = singular_field(params)
            self.assertAlmostEqual(float(field(np.array(sphere[1]))), 1.0, places=12)
            self.assertGreater(float(field(np.array(interior[1]))), bubble_eval(params.bubble, interior[1]))

    def test_kernel_families(self):
        boundary = [[0.3, -0.2, 0.1, 0.0, 0.2, 0.0]]
        interior = [[0.2, 0.1, 0.0, -0.3, 0.4, 0.8]]
        for family in ('u_phi_03', 'u_phi_12'):
            result = homogeneous_family_check(family, 5, boundary, interior)
            self.assertTrue(result.passed(1e-3), msg=f'{family}: {result}')

    def test_singular_sample_near_pole(self):
        params = SingularSolutionParams(1, 2, [0.0] * 6, 1.0, 5)
        with self.assertRaises(ContractError):
            singular_solution_check(params, [], [[0.0, 0.0, 0.0, 0.0, 0.0, -1.0]])


class TestProfiles(unittest.TestCase):
    '''

    # TestProfiles
    `Exponent branches of the three classifications and the critical profile.`
    '''

    def setUp(self):
        self.params = BubbleParams.half_space([0.0] * 5, 1.0, 5)

    def test_branches(self):
        for which in ('M1', 'M2', 'M3'):
            case = ClassificationCase.critical(which, self.params)
            self.assertEqual(case.branch, 'profile')
            self.assertTrue(case.is_critical)
            self.assertEqual(case.metadata()['n'], 5)
        with self.assertRaises(ContractError):
            ClassificationCase('M1', (2.0, 3.0), self.params)
        with self.assertRaises(DomainError):
            ClassificationCase('M4', (2.0, 4.0), self.params)

    def test_critical_profile_value(self):
        case = ClassificationCase.critical('M1', self.params)
        self.assertAlmostEqual(m_profile_eval(case, [0, 0, 0, 0, 0, 1.0]), 0.5, places=4)

    def test_identity_other_classifications(self):
        for which, n in (('M2', 4), ('M3', 7)):
            case = ClassificationCase.critical(which, BubbleParams.half_space([0.0] * n, 1.0, n))
            samples = [[0.0] * n + [1.0], [0.3, -0.2] + [0.0] * (n - 2) + [0.6]]
            self.assertLess(classification_identity_check(case, samples), 1e-3, msg=which)

    def test_identity_requires_critical_case(self):
        case = ClassificationCase('M1', (3.0, 4.0), self.params)
        self.assertFalse(case.is_critical)
        with self.assertRaises(ContractError):
            classification_identity_check(case, [[0, 0, 0, 0, 0, 1.0]])


if __name__ == '__main__':
    unittest.main()
