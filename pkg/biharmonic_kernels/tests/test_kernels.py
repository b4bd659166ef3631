import unittest

import numpy as np

from biharmonic_kernels.geometry.conformal import sphere_area
from biharmonic_kernels.geometry.points import HalfSpacePoint
from biharmonic_kernels.kernels.fundamental import (
    fundamental_solution, kernel_branch_relations, kernel_operator_relation)
from biharmonic_kernels.kernels.poisson import KernelSpec, halfspace_kernel, kernel_mass, poisson_kernel
from biharmonic_kernels.src.exceptions import ContractError, DomainError, SingularityError


class TestPoissonKernels(unittest.TestCase):
    '''

    # TestPoissonKernels
    `Closed-form kernels on both models.`

    Test Cases
    test_halfspace_values

    - P_0 at (0, 1) with source 0 and n = 4 is 10/|S^4| = 15/(4 pi^2).

    test_mass

    - P_0 integrates to 1 over R^n for several heights.
    '''

    def test_halfspace_values(self):
        spec = KernelSpec(0, 'halfspace', 4)
        self.assertAlmostEqual(poisson_kernel(spec, [0, 0, 0, 0, 1.0], [0, 0, 0, 0]), 15.0 / (4.0 * np.pi ** 2),
                               places=12)
        self.assertAlmostEqual(poisson_kernel(spec, HalfSpacePoint([0] * 4, 1.0, 4), [0, 0, 0, 0, 0]), 0.379954,
                               places=5)
        p1 = poisson_kernel(KernelSpec(1, 'halfspace', 5), [0, 0, 0, 0, 0, 1.0], [0] * 5)
        self.assertAlmostEqual(p1, -2.0 / np.pi ** 3, places=12)

    def test_critical_logarithm(self):
        self.assertAlmostEqual(float(halfspace_kernel(3, 3, 0.0, 1.0)), 0.0, places=15)
        self.assertAlmostEqual(float(halfspace_kernel(3, 3, 0.0, 1.0, log_constant=0.25)), 0.25, places=15)

    def test_ball_values(self):
        spec = KernelSpec(0, 'ball', 5)
        pole = np.eye(6)[0]
        self.assertAlmostEqual(poisson_kernel(spec, np.zeros(6), pole), 6.0 / (4.0 * sphere_area(5)), places=12)
        with self.assertRaises(DomainError):
            poisson_kernel(spec, np.zeros(6), 0.5 * pole)
        with self.assertRaises(SingularityError):
            poisson_kernel(spec, pole, pole)

    def test_boundary_singularity(self):
        with self.assertRaises(SingularityError):
            poisson_kernel(KernelSpec(0, 'halfspace', 4), [1, 0, 0, 0, 0], [1, 0, 0, 0])
        with self.assertRaises(DomainError):
            poisson_kernel(KernelSpec(0, 'halfspace', 4), [0, 0, 0, 0, 1.0], [0, 0, 0, 0, 1.0])

    def test_kernel_spec(self):
        self.assertEqual(KernelSpec(0, 'halfspace', 5).decay, 8)
        self.assertEqual(KernelSpec(3, 'halfspace', 5).decay, 2)
        with self.assertRaises(DomainError):
            KernelSpec(4, 'halfspace', 5)
        with self.assertRaises(DomainError):
            KernelSpec(0, 'cylinder', 5)

    def test_mass(self):
        for n in (4, 5):
            for t in (0.5, 1.0, 3.0):
                self.assertAlmostEqual(kernel_mass(KernelSpec(0, 'halfspace', n), t), 1.0, places=9)
        with self.assertRaises(ContractError):
            kernel_mass(KernelSpec(1, 'halfspace', 4), 1.0)


class TestFundamentalSolution(unittest.TestCase):
    '''

    # TestFundamentalSolution
    `Gamma and the exact relations B_k Gamma = +-P_{3-k}/2.`
    '''

    def test_value(self):
        X, Y = np.zeros(6), np.eye(6)[2]
        self.assertAlmostEqual(fundamental_solution(5, X, Y), 1.0 / (16.0 * np.pi ** 3), places=14)
        with self.assertRaises(SingularityError):
            fundamental_solution(5, X, X)

    def test_operator_relations(self):
        X = np.array([0.3, -0.2, 0.5, 0.1, 0.0, 0.8])
        y = np.array([0.1, 0.4, -0.3, 0.0, 0.2])
        for n_point, n in ((X, 5), (X[1:], 4)):
            for k in range(4):
                relation = kernel_operator_relation(k, n, n_point, y[:n])
                self.assertLess(relation.residual, 1e-10, msg=f'k={k}, n={n}')

    def test_critical_relations(self):
        X = np.array([0.3, -0.2, 0.5, 0.7])
        for k in range(4):
            self.assertLess(kernel_operator_relation(k, 3, X, [0.1, 0.0, 0.2], log_constant=0.3).residual, 1e-10)

    def test_branch_relations(self):
        for name, relation in kernel_branch_relations(5, [0.2, 0.1, 0.0, -0.3, 0.4, 1.1], [0.0] * 5).items():
            self.assertLess(relation.residual, 1e-10, msg=name)

    def test_relations_need_interior_point(self):
        with self.assertRaises(DomainError):
            kernel_operator_relation(0, 5, [0, 0, 0, 0, 0, 0.0], [0] * 5)


if __name__ == '__main__':
    unittest.main()
