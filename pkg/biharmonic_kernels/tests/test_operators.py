import unittest

import numpy as np

from biharmonic_kernels.operators.boundary import (
    BoundaryOperatorId, apply_operator, biharmonic_residual, operator_values, t_constants)
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.operators.stencils import StencilConfig, fd_weights
from biharmonic_kernels.src.exceptions import DomainError, EvaluationError


class TestStencils(unittest.TestCase):
    '''

    # TestStencils
    `Difference weights and stencil configuration.`
    '''

    def test_fd_weights(self):
        np.testing.assert_allclose(fd_weights([-1, 0, 1], 2), [1.0, -2.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(fd_weights([-1, 0, 1], 1), [-0.5, 0.0, 0.5], atol=1e-12)
        with self.assertRaises(DomainError):
            fd_weights([0, 1], 2)

    def test_stencil_config(self):
        with self.assertRaises(DomainError):
            StencilConfig(h=0.0)
        with self.assertRaises(DomainError):
            StencilConfig(order=3)
        with self.assertRaises(EvaluationError):
            StencilConfig().step(2, 0.0, 3)
        with self.assertRaises(EvaluationError):
            StencilConfig().step(4, 1e-6, 3)


class TestBoundaryOperators(unittest.TestCase):
    '''

    # TestBoundaryOperators
    `B_k on the half-space and the ball, exact and by stencils.`

    Test Cases
    test_halfspace_exact

    - Monomials in t and x give the values read off the operator formulas.

    test_halfspace_stencil_matches_exact

    - A plain callable field is differentiated by stencils to the same value.

    test_ball_constant

    - On the constant 1 the ball operators return the T-curvature constants.
    '''

    def setUp(self):
        self.origin = np.zeros(5)

    def test_halfspace_exact(self):
        t = ScalarField.from_expression(lambda z: z[-1], 4)
        self.assertEqual(apply_operator(BoundaryOperatorId(1), t, self.origin), -1.0)
        t_cubed = ScalarField.from_expression(lambda z: z[-1] ** 3, 4)
        self.assertEqual(t_cubed.exact('dt3', self.origin), 6.0)
        self.assertEqual(apply_operator(BoundaryOperatorId(3), t_cubed, self.origin), 6.0)
        harmonic = ScalarField.from_expression(lambda z: z[-1] ** 2 - z[0] ** 2, 4)
        self.assertEqual(apply_operator(BoundaryOperatorId(2), harmonic, self.origin), 4.0)
        mixed = ScalarField.from_expression(lambda z: z[-1] * z[0] ** 2, 4)
        self.assertEqual(apply_operator(BoundaryOperatorId(3), mixed, self.origin), 6.0)

    def test_value_operator(self):
        u = ScalarField.from_expression(lambda z: 2 + z[0], 4)
        self.assertEqual(apply_operator(BoundaryOperatorId(0), u, [1, 0, 0, 0, 0]), 3.0)

    def test_halfspace_stencil_matches_exact(self):
        u = ScalarField(lambda P: P[..., -1] ** 3 + P[..., 0] ** 2 * P[..., -1], 4, name='cubic')
        self.assertAlmostEqual(apply_operator(BoundaryOperatorId(3), u, self.origin), 12.0, places=4)
        self.assertAlmostEqual(apply_operator(BoundaryOperatorId(1), u, self.origin), 0.0, places=6)

    def test_ball_constant(self):
        one = ScalarField.constant(1, 5, 'ball')
        pole = np.eye(6)[0]
        for k, expected in zip((1, 2, 3), t_constants(5)):
            self.assertAlmostEqual(apply_operator(BoundaryOperatorId(k, 'ball'), one, pole), expected, places=12)
        self.assertEqual(t_constants(5), (1.0, 4.0, 12.0))

    def test_operator_values_batch(self):
        t_cubed = ScalarField.from_expression(lambda z: z[-1] ** 3 + z[-1] * z[0], 4)
        points = np.zeros((3, 5))
        points[:, 0] = [0.0, 1.0, 2.0]
        np.testing.assert_allclose(operator_values(BoundaryOperatorId(1), t_cubed, points), [0.0, -1.0, -2.0])

    def test_rejects_off_boundary_points(self):
        t = ScalarField.from_expression(lambda z: z[-1], 4)
        with self.assertRaises(DomainError):
            apply_operator(BoundaryOperatorId(1), t, [0, 0, 0, 0, 0.5])
        one = ScalarField.constant(1, 4, 'ball')
        with self.assertRaises(DomainError):
            apply_operator(BoundaryOperatorId(1, 'ball'), one, [0.5, 0, 0, 0, 0])
        with self.assertRaises(DomainError):
            apply_operator(BoundaryOperatorId(1, 'ball'), t, [1, 0, 0, 0, 0])
        with self.assertRaises(DomainError):
            BoundaryOperatorId(4)


class TestBiharmonicResidual(unittest.TestCase):
    '''

    # TestBiharmonicResidual
    `Delta^2 probe with its own tolerance.`
    '''

    def test_exact_polynomials(self):
        quadratic = ScalarField.from_expression(lambda z: sum(s ** 2 for s in z), 5)
        self.assertTrue(biharmonic_residual(quadratic, [0, 0, 0, 0, 0, 1.0]).passed)
        quartic = ScalarField.from_expression(lambda z: sum(s ** 2 for s in z) ** 2, 5)
        residual = biharmonic_residual(quartic, [0, 0, 0, 0, 0, 1.0])
        self.assertAlmostEqual(residual.value, 384.0, places=9)
        self.assertFalse(residual.passed)

    def test_stencil_quartic(self):
        quartic = ScalarField(lambda P: np.sum(P ** 2, axis=-1) ** 2, 5, name='quartic')
        residual = biharmonic_residual(quartic, [0.1, 0, 0, 0, 0, 0.5])
        self.assertAlmostEqual(residual.value, 384.0, places=3)

    def test_boundary_point_rejected(self):
        quadratic = ScalarField.from_expression(lambda z: z[0] ** 2, 4)
        with self.assertRaises(DomainError):
            biharmonic_residual(quadratic, [0, 0, 0, 0, 0])


if __name__ == '__main__':
    unittest.main()
