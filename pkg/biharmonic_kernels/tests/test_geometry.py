import unittest

import numpy as np

from biharmonic_kernels.geometry.conformal import (
    conformal_factor, conformal_map_F, distance_identity_residual, extended_distance, kelvin_field,
    kelvin_transform, south_pole, sphere_area)
from biharmonic_kernels.geometry.points import BallPoint, BubbleParams, Dimension, HalfSpacePoint
from biharmonic_kernels.operators.fields import ScalarField
from biharmonic_kernels.src.exceptions import DomainError, SingularityError


class TestPoints(unittest.TestCase):
    '''

    # TestPoints
    `Validation of dimensions, model points and bubble parameters.`
    '''

    def test_dimension(self):
        dim = Dimension(5)
        self.assertEqual(dim.ambient, 6)
        self.assertEqual(dim.p_star(3), 4.0)
        self.assertEqual(dim.p_star(1), 2.0)
        self.assertTrue(Dimension(3).critical)
        with self.assertRaises(DomainError):
            Dimension(1)
        with self.assertRaises(DomainError):
            Dimension(3).p_star(1)

    def test_half_space_point(self):
        point = HalfSpacePoint([1.0, 2.0], 3.0, 2)
        np.testing.assert_array_equal(point.coords, [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(point.reflected, [1.0, 2.0, -3.0])
        self.assertFalse(point.on_boundary)
        with self.assertRaises(DomainError):
            HalfSpacePoint([0.0, 0.0], -0.1, 2)
        with self.assertRaises(DomainError):
            HalfSpacePoint([0.0], 1.0, 2)

    def test_ball_point(self):
        self.assertTrue(BallPoint([0.0, 0.0, 1.0]).on_boundary)
        np.testing.assert_allclose(BallPoint([0.5, 0.0, 0.0]).inversion(), [2.0, 0.0, 0.0])
        with self.assertRaises(DomainError):
            BallPoint([1.0, 1.0, 0.0])
        with self.assertRaises(SingularityError):
            BallPoint([0.0, 0.0, 0.0]).inversion()

    def test_bubble_params_correspondence(self):
        params = BubbleParams.half_space([0.3, -0.2, 0.1, 0.0, 0.5], 0.7, 5)
        back = params.to_ball().to_half_space()
        np.testing.assert_allclose(back.x0, params.x0, atol=1e-12)
        self.assertAlmostEqual(back.eps, params.eps, places=12)
        with self.assertRaises(DomainError):
            BubbleParams.half_space([0.0] * 5, 0.0, 5)


class TestConformalMap(unittest.TestCase):
    '''

    # TestConformalMap
    `The map F, its conformal factor, the distance identities and the Kelvin transform.`
    '''

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_sphere_area(self):
        self.assertAlmostEqual(sphere_area(1), 2.0 * np.pi, places=12)
        self.assertAlmostEqual(sphere_area(2), 4.0 * np.pi, places=12)
        with self.assertRaises(DomainError):
            sphere_area(0)

    def test_special_points(self):
        np.testing.assert_allclose(conformal_map_F(np.zeros(6)), np.eye(6)[-1], atol=1e-15)
        np.testing.assert_allclose(conformal_map_F(np.eye(6)[-1]), np.zeros(6), atol=1e-15)
        with self.assertRaises(SingularityError):
            conformal_map_F(south_pole(5))

    def test_involution(self):
        X = np.column_stack([self.rng.uniform(-2, 2, (10, 5)), self.rng.uniform(0.1, 2, 10)])
        np.testing.assert_allclose(conformal_map_F(conformal_map_F(X)), X, atol=1e-12)
        self.assertTrue(np.all(np.linalg.norm(conformal_map_F(X), axis=1) < 1.0))

    def test_typed_points(self):
        xi = conformal_map_F(HalfSpacePoint([0.0] * 4, 1.0, 4))
        self.assertIsInstance(xi, BallPoint)
        self.assertAlmostEqual(xi.norm, 0.0, places=15)
        X = conformal_map_F(BallPoint([1.0, 0.0, 0.0, 0.0, 0.0]))
        self.assertIsInstance(X, HalfSpacePoint)
        self.assertTrue(X.on_boundary)

    def test_conformal_factor(self):
        self.assertAlmostEqual(conformal_factor(np.zeros(6), 5), 2.0, places=14)
        self.assertAlmostEqual(conformal_factor(np.zeros(4), 3), 1.0, places=14)

    def test_distance_identities(self):
        for _ in range(20):
            xi, eta = (0.9 * self.rng.uniform(-1, 1, 6) / np.sqrt(6) for _ in range(2))
            residuals = distance_identity_residual(xi, eta)
            self.assertLess(max(residuals), 1e-10)

    def test_extended_distance_at_centre(self):
        eta = np.array([0.3, 0.1, -0.2, 0.0, 0.4, 0.2])
        self.assertAlmostEqual(extended_distance(np.zeros(6), eta), 1.0, places=14)

    def test_kelvin_transform(self):
        one = lambda P: np.ones(np.shape(P)[:-1]) if np.ndim(P) > 1 else 1.0
        self.assertAlmostEqual(kelvin_transform(one, [0, 0, 0, 0, 0, 2.0], 5), 0.25, places=14)
        with self.assertRaises(SingularityError):
            kelvin_transform(one, np.zeros(6), 5)

    def test_kelvin_field_biharmonic(self):
        u = ScalarField.from_expression(lambda z: z[-1] * sum(s ** 2 for s in z), 5, 'halfspace')
        kelvin = kelvin_field(u, 5)
        X = np.array([0.3, -0.4, 0.2, 0.1, 0.5, 0.8])
        self.assertLess(abs(kelvin.exact('bilaplacian', X)), 1e-8)
        # t |X|^2 becomes t |X|^{-n-1}
        self.assertAlmostEqual(float(kelvin(X)), X[-1] * np.linalg.norm(X) ** (-6), places=12)


if __name__ == '__main__':
    unittest.main()
