"""
Tests for ReLU^k neurons and candidate sampling.
"""

import unittest

import numpy as np

from indefinite_oga.dictionary import (
    Neuron, SamplingMode, compute_b_range, eval_neuron, grad_neuron,
    relu_power_derivative, sample_candidates, sign_vectors
)
from indefinite_oga.errors import DictionaryError
from indefinite_oga.quadrature import BoxDomain


class TestNeuron(unittest.TestCase):
    """
    Test neuron evaluation.
    """

    def test_eval_examples(self):
        """
        Test pointwise values including an inactive neuron.
        """
        self.assertAlmostEqual(eval_neuron(Neuron((1.0,), 0.0, 2), [0.5]), 0.25)
        self.assertEqual(eval_neuron(Neuron((1.0, 1.0), -3.0, 2), [0.5, 0.5]), 0.0)
        self.assertAlmostEqual(eval_neuron(Neuron((1.0, -1.0), 0.5, 3), [1.0, 0.0]), 3.375)

    def test_grad_examples(self):
        """
        Test pointwise gradients including an inactive neuron.
        """
        np.testing.assert_allclose(grad_neuron(Neuron((1.0,), 0.0, 2), [0.5]), [1.0])
        np.testing.assert_array_equal(grad_neuron(Neuron((1.0, 1.0), -3.0, 2), [0.5, 0.5]), [0.0, 0.0])

    def test_relu_kink_is_one_sided(self):
        """
        Test that k=1 has zero gradient exactly at the kink.
        """
        np.testing.assert_array_equal(grad_neuron(Neuron((1.0, 2.0), -3.0, 1), [1.0, 1.0]), [0.0, 0.0])

    def test_vectorized_evaluation(self):
        """
        Test that (N, d) inputs return arrays matching pointwise calls.
        """
        neuron = Neuron((0.6, -0.8), 0.1, 3)
        points = np.random.default_rng(1).uniform(-1, 1, (50, 2))
        values = eval_neuron(neuron, points)
        gradients = grad_neuron(neuron, points)
        self.assertEqual(values.shape, (50,))
        self.assertEqual(gradients.shape, (50, 2))
        for x, v, g in zip(points, values, gradients):
            np.testing.assert_allclose(eval_neuron(neuron, x), v, rtol=1e-13, atol=1e-15)
            np.testing.assert_allclose(grad_neuron(neuron, x), g, rtol=1e-13, atol=1e-15)

    def test_positive_homogeneity(self):
        """
        Test that scaling (omega, b) by s scales the value by s^k.
        """
        rng = np.random.default_rng(2)
        points = rng.uniform(0, 1, (100, 2))
        for k in (1, 2, 3, 4):
            neuron = Neuron((1.0, -1.0), 0.3, k)
            base = eval_neuron(neuron, points)
            for s in (0.1, 2.5, 7.0):
                scaled = eval_neuron(Neuron((s, -s), 0.3 * s, k), points)
                np.testing.assert_allclose(scaled, s ** k * base, rtol=1e-12, atol=0)

    def test_gradient_matches_finite_differences(self):
        """
        Test the analytic gradient against central differences away from the kink.
        """
        rng = np.random.default_rng(3)
        h = 1e-6
        for k in (2, 3, 4):
            neuron = Neuron((0.7, -1.3), 0.2, k)
            checked = 0
            while checked < 100:
                x = rng.uniform(-1, 1, 2)
                if abs(neuron.pre_activation(x[None, :])[0]) <= 1e-3:
                    continue
                fd = np.array([
                    (eval_neuron(neuron, x + h * e) - eval_neuron(neuron, x - h * e)) / (2 * h)
                    for e in np.eye(2)
                ])
                np.testing.assert_allclose(grad_neuron(neuron, x), fd, atol=1e-6)
                checked += 1

    def test_nonnegative(self):
        """
        Test that neuron values are never negative.
        """
        points = np.random.default_rng(4).uniform(-3, 3, (500, 3))
        self.assertTrue(np.all(eval_neuron(Neuron((1.0, -2.0, 0.5), -0.5, 3), points) >= 0))

    def test_invalid_neuron(self):
        """
        Test that zero directions and unsupported powers are rejected.
        """
        with self.assertRaises(DictionaryError):
            Neuron((0.0, 0.0), 1.0)
        with self.assertRaises(DictionaryError):
            Neuron((1.0,), 0.0, 5)
        with self.assertRaises(DictionaryError):
            eval_neuron(Neuron((1.0, 1.0), 0.0), [0.5])

    def test_derivative_orders(self):
        """
        Test higher derivatives of sigma_k against closed forms.
        """
        z = np.array([-1.0, 0.0, 0.5, 2.0])
        np.testing.assert_allclose(relu_power_derivative(z, 3, 2), 6 * np.maximum(z, 0))
        np.testing.assert_array_equal(relu_power_derivative(z, 2, 2), [0.0, 0.0, 2.0, 2.0])
        np.testing.assert_array_equal(relu_power_derivative(z, 1, 2), np.zeros(4))

    def test_theta(self):
        """
        Test the polar angle of a 2D direction.
        """
        self.assertAlmostEqual(Neuron((0.0, -1.0), 0.0).theta, 1.5 * np.pi)


class TestSampling(unittest.TestCase):
    """
    Test candidate enumeration.
    """

    def test_one_dimensional_enumeration(self):
        """
        Test the 10 candidates of d=1, n_b=4 on [-2, 2].
        """
        candidates = sample_candidates(BoxDomain((-1.0,), (1.0,)), SamplingMode.SIGN_VECTORS, 4, margin=1.0)
        self.assertEqual(len(candidates), 10)
        expected = [((w,), b) for w in (1.0, -1.0) for b in (-2.0, -1.0, 0.0, 1.0, 2.0)]
        self.assertEqual([(n.omega, n.b) for n in candidates.neurons], expected)

    def test_candidate_counts(self):
        """
        Test 4*101 candidates in 2D and 8*101 in 3D.
        """
        self.assertEqual(len(sample_candidates(BoxDomain.unit(2), 'sign_vectors', 100)), 404)
        self.assertEqual(len(sample_candidates(BoxDomain.unit(3), 'sign_vectors', 100)), 808)

    def test_angular_directions(self):
        """
        Test unit-circle directions at equally spaced angles.
        """
        candidates = sample_candidates(BoxDomain.unit(2), SamplingMode.ANGULAR, 10,
                                       n_theta=8, b_range=(-2.0, 2.0))
        self.assertEqual(len(candidates), 8 * 11)
        np.testing.assert_allclose(np.linalg.norm(candidates.directions, axis=1), 1.0)
        self.assertAlmostEqual(candidates.theta(11 * 3), 3 * np.pi / 4)
        self.assertEqual((candidates.b_lo, candidates.b_hi), (-2.0, 2.0))

    def test_angular_requires_2d(self):
        """
        Test that angular sampling outside 2D is rejected.
        """
        with self.assertRaises(DictionaryError):
            sample_candidates(BoxDomain.unit(3), SamplingMode.ANGULAR, 10, n_theta=8)
        with self.assertRaises(DictionaryError):
            sample_candidates(BoxDomain.unit(2), SamplingMode.ANGULAR, 10, n_theta=0)
        with self.assertRaises(DictionaryError):
            sample_candidates(BoxDomain.unit(2), SamplingMode.SIGN_VECTORS, 0)

    def test_b_range_from_corners(self):
        """
        Test b-ranges [-2, 2] on the square, [-3, 3] on the cube and [-1, 1] on (-1, 1).
        """
        self.assertEqual(compute_b_range(BoxDomain.unit(2), sign_vectors(2)), (-2.0, 2.0))
        self.assertEqual(compute_b_range(BoxDomain.unit(3), sign_vectors(3)), (-3.0, 3.0))
        self.assertEqual(compute_b_range(BoxDomain((-1.0,), (1.0,)), sign_vectors(1)), (-1.0, 1.0))
        self.assertEqual(compute_b_range(BoxDomain((-1.0,), (1.0,)), sign_vectors(1), 1.0), (-2.0, 2.0))

    def test_b_range_errors(self):
        """
        Test that empty direction lists and negative margins are rejected.
        """
        with self.assertRaises(DictionaryError):
            compute_b_range(BoxDomain.unit(2), np.zeros((0, 2)))
        with self.assertRaises(DictionaryError):
            compute_b_range(BoxDomain.unit(2), sign_vectors(2), -0.5)

    def test_sign_vector_entries(self):
        """
        Test that sign vectors are the 2^d distinct vectors with entries +-1.
        """
        for dim in (1, 2, 3):
            directions = sign_vectors(dim)
            self.assertEqual(directions.shape, (2 ** dim, dim))
            self.assertTrue(np.all(np.abs(directions) == 1.0))
            self.assertEqual(len({tuple(row) for row in directions}), 2 ** dim)

    def test_normalized_sign_vectors(self):
        """
        Test that normalized sign vectors have unit length.
        """
        np.testing.assert_allclose(np.linalg.norm(sign_vectors(3, normalize=True), axis=1), 1.0)


if __name__ == '__main__':
    unittest.main()
