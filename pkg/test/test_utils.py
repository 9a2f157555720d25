import unittest

from nmdslab.utils import deepmap, popcount, hexstr


class TestUtils(unittest.TestCase):
    def test_deepmap(self):

        data = [["0x1", "0x2"], ["0xa", ["0xf"]]]

        data2 = deepmap(lambda x: int(x, 0), data)

        self.assertEqual(data2[0], [1, 2])
        self.assertEqual(data2[1][0], 10)
        self.assertEqual(data2[1][1], [15])

        # Tuples come back as lists
        self.assertEqual(deepmap(int, ((1, 2), (3, 4))), [[1, 2], [3, 4]])

    def test_bits(self):

        self.assertEqual(popcount(0), 0)
        self.assertEqual(popcount(0x1C3), 5)
        self.assertEqual(hexstr(12), "0xc")
        self.assertEqual(hexstr(0), "0x0")
