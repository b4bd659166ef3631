import unittest

import numpy as np

from biharmonic_kernels.classification.bubbles import random_half_space_points
from biharmonic_kernels.green.green_functions import (
    GreenSpec, OperatorPair, WELL_POSED_PAIRS, boggio_integral_residual, conformal_correspondence_check,
    green_symmetry_residual, green_value, ordering_check, regular_part, regular_part_residual)
from biharmonic_kernels.kernels.fundamental import fundamental_solution
from biharmonic_kernels.src.exceptions import ContractError, DomainError, SingularityError


class TestOperatorPair(unittest.TestCase):
    '''

    # TestOperatorPair
    `Parsing and well-posedness of boundary operator pairs.`
    '''

    def test_parse(self):
        self.assertEqual(tuple(OperatorPair.parse('0,2')), (0, 2))
        self.assertEqual(tuple(OperatorPair.parse('13')), (1, 3))
        self.assertEqual(str(OperatorPair.parse((2, 3))), '(2,3)')

    def test_ill_posed_pairs(self):
        for text in ('0,3', '1,2', '2,1', '1,1', 'a'):
            with self.assertRaises(ContractError, msg=text):
                OperatorPair.parse(text)


class TestGreenFunctions(unittest.TestCase):
    '''

    # TestGreenFunctions
    `Closed-form Green functions, their boundary conditions and structure.`

    Test Cases
    test_symmetry

    - G(P, Q) = G(Q, P) for every pair and both models.

    test_ordering

    - 0 < G01 < G02 < G13 < G23 at interior points for n >= 4.

    test_conformal_correspondence

    - The ball Green function equals the weighted transport of the half-space one.
    '''

    def setUp(self):
        self.P = np.array([0.2, -0.1, 0.4, 0.0, 0.3, 0.7])
        self.Q = np.array([-0.3, 0.2, 0.1, 0.5, 0.0, 1.2])
        self.xi = np.array([0.1, 0.2, -0.3, 0.0, 0.2, 0.1])
        self.eta = np.array([-0.2, 0.1, 0.3, 0.2, 0.0, -0.4])

    def test_symmetry(self):
        for pair in WELL_POSED_PAIRS:
            for model, P, Q in (('halfspace', self.P, self.Q), ('ball', self.xi, self.eta)):
                spec = GreenSpec(OperatorPair(*pair), model, 5)
                self.assertLess(green_symmetry_residual(spec, P, Q), 1e-12)

    def test_dirichlet_pairs_vanish_on_boundary(self):
        boundary = self.P.copy()
        boundary[-1] = 0.0
        for pair in ((0, 1), (0, 2)):
            value = green_value(GreenSpec(pair, 'halfspace', 5), boundary, self.Q)
            self.assertAlmostEqual(value, 0.0, places=14)

    def test_regular_part(self):
        spec = GreenSpec((1, 3), 'halfspace', 5)
        reflected = self.P.copy()
        reflected[-1] = -reflected[-1]
        self.assertAlmostEqual(regular_part(spec, self.P, self.Q), fundamental_solution(5, reflected, self.Q),
                               places=14)
        self.assertAlmostEqual(green_value(spec, self.P, self.Q),
                               fundamental_solution(5, self.P, self.Q) + regular_part(spec, self.P, self.Q),
                               places=14)

    def test_boundary_conditions(self):
        X = np.array([0.5, -0.2, 0.1, 0.3, -0.4, 0.0])
        for pair in WELL_POSED_PAIRS:
            residual = regular_part_residual(GreenSpec(pair, 'halfspace', 5), self.Q, X)
            self.assertTrue(residual.passed, msg=str(pair))

    def test_ordering(self):
        result = ordering_check(self.P, self.Q, 5)
        self.assertTrue(result.ordered)
        self.assertTrue(result.strict)
        self.assertGreater(result.values[0], 0.0)
        with self.assertRaises(ContractError):
            ordering_check(self.P[2:], self.Q[2:], 3)

    def test_ordering_on_seeded_batch(self):
        for n in (4, 5, 7):
            rng = np.random.default_rng(n)
            P, Q = random_half_space_points(n, 10000, rng), random_half_space_points(n, 10000, rng)
            results = [ordering_check(a, b, n) for a, b in zip(P, Q)]
            self.assertTrue(all(r.ordered for r in results), msg=f'n = {n}')
            self.assertTrue(all(r.strict for r in results), msg=f'n = {n}')

    @staticmethod
    def _resized(point, n):
        if point.size >= n + 1:
            return point[-(n + 1):]
        return np.append(np.full(n + 1 - point.size, 0.1), point)

    def test_boggio_integral(self):
        for n in (4, 5, 7):
            P, Q = self._resized(self.P, n), self._resized(self.Q, n)
            self.assertLess(boggio_integral_residual(P, Q, n).residual, 1e-10, msg=f'n={n}')

    def test_conformal_correspondence(self):
        for pair in WELL_POSED_PAIRS:
            self.assertLess(conformal_correspondence_check(pair, self.xi, self.eta, 5).residual, 1e-10)
        xi3, eta3 = self.xi[:4], self.eta[:4]
        for pair in ((0, 1), (0, 2)):
            self.assertLess(conformal_correspondence_check(pair, xi3, eta3, 3).residual, 1e-10)
        with self.assertRaises(ContractError):
            conformal_correspondence_check((1, 3), xi3, eta3, 3)

    def test_invalid_points(self):
        spec = GreenSpec((0, 2), 'halfspace', 5)
        with self.assertRaises(SingularityError):
            green_value(spec, self.P, self.P)
        below = self.P.copy()
        below[-1] = -0.1
        with self.assertRaises(DomainError):
            green_value(spec, below, self.Q)
        with self.assertRaises(DomainError):
            green_value(GreenSpec((0, 2), 'ball', 5), 2.0 * np.eye(6)[0], self.eta)


if __name__ == '__main__':
    unittest.main()
