"""
Tests for the process pool used by the candidate scan.
"""

import unittest

import numpy as np

from indefinite_oga.utils.parallel import ScanPool, shared_data


def scaled_sum(item):
    return float(np.sum(shared_data()['weights'] * item))


class TestScanPool(unittest.TestCase):
    """
    Test ScanPool.
    """

    def setUp(self):
        self.weights = np.arange(1.0, 6.0)
        self.items = [np.full(5, float(i)) for i in range(7)]
        self.expected = [15.0 * i for i in range(7)]

    def test_serial(self):
        """
        Test that one process maps in order without starting a pool.
        """
        with ScanPool(1, shared={'weights': self.weights}) as pool:
            self.assertIsNone(pool._pool)
            self.assertEqual(pool.map(scaled_sum, self.items), self.expected)

    def test_pool_matches_serial(self):
        """
        Test that workers see the shared data and results keep item order.
        """
        with ScanPool(2, shared={'weights': self.weights}) as pool:
            self.assertEqual(pool.num_processes, 2)
            first = pool.map(scaled_sum, self.items)
            second = pool.map(scaled_sum, self.items[::-1])
        self.assertEqual(first, self.expected)
        self.assertEqual(second, self.expected[::-1])

    def test_close(self):
        """
        Test that closing twice is harmless.
        """
        pool = ScanPool(2)
        pool.close()
        pool.close()
        self.assertIsNone(pool._pool)


if __name__ == '__main__':
    unittest.main()
