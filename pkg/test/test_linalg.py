import unittest

import numpy as np

from nmdslab.gf import FieldSpec, GF16, mul_matrix
from nmdslab.linalg import (
    BinaryMatrix,
    FieldMatrix,
    BlockMatrix,
    PackedMatrix,
    MatrixError,
    SingularMatrixError,
    mat_mul,
    mat_pow,
    block_mul,
    rank,
    det,
    inverse,
    submatrix,
    expand,
    nonzero_count,
    is_involutory,
    is_orthogonal,
    batch_mul,
)


class TestBinaryMatrix(unittest.TestCase):
    def test_construction(self):

        M = BinaryMatrix.from_positions([[2], [3], [1, 2]])

        self.assertEqual(M.rows, (2, 4, 3))
        self.assertEqual(M.shape, (3, 3))
        self.assertEqual(M.positions(), [[2], [3], [1, 2]])
        self.assertTrue(
            np.all(M.to_array() == np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]]))
        )
        self.assertEqual(BinaryMatrix.from_array(M.to_array()), M)
        self.assertEqual(M.weight(), 4)
        self.assertEqual(M.T.positions(), [[3], [1, 3], [2]])

        with self.assertRaises(MatrixError):
            BinaryMatrix([8], 3)
        with self.assertRaises(MatrixError):
            BinaryMatrix.from_positions([[4]], 3)

    def test_algebra(self):

        M = BinaryMatrix.from_positions([[2], [3], [1, 2]])
        I = BinaryMatrix.identity(3)

        M3 = M ** 3
        self.assertTrue(
            np.all(M3.to_array() == np.array([[1, 1, 0], [0, 1, 1], [1, 1, 1]]))
        )
        self.assertEqual(M ** 0, I)
        self.assertEqual(M * M.inverse(), I)
        self.assertEqual(M ** -1, M.inverse())
        self.assertEqual(M.rank(), 3)
        self.assertEqual((M + M), BinaryMatrix.zero(3))
        self.assertEqual(M.apply(0b001), 0b100)

        S = BinaryMatrix.from_array([[1, 1], [1, 1]])
        self.assertEqual(S.rank(), 1)
        with self.assertRaises(SingularMatrixError):
            S.inverse()

        self.assertEqual(M.submatrix([0, 2], [0, 1]).positions(), [[2], [1, 2]])
        with self.assertRaises(MatrixError):
            M.submatrix([3], [0])


class TestFieldMatrix(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)

    def test_construction(self):

        A = FieldMatrix([[1, 2], [3, 4]], self.f)

        self.assertEqual(A.shape, (2, 2))
        self.assertEqual(A[1, 0], 3)
        self.assertEqual(A.to_rows(), [[1, 2], [3, 4]])
        self.assertEqual(A.T.to_rows(), [[1, 3], [2, 4]])

        with self.assertRaises(MatrixError):
            FieldMatrix([[16]], self.f)
        with self.assertRaises(MatrixError):
            FieldMatrix([1, 2], self.f)
        with self.assertRaises(TypeError):
            FieldMatrix([[1]], 16)

    def test_products(self):

        A = FieldMatrix([[1, 2], [3, 4]], self.f)
        B = FieldMatrix([[0, 1], [1, 0]], self.f)

        self.assertEqual((A * B).to_rows(), [[2, 1], [4, 3]])
        self.assertEqual((B * A).to_rows(), [[3, 4], [1, 2]])
        self.assertEqual((A * 2).to_rows(), [[2, 4], [6, 8]])
        self.assertEqual(A ** 0, FieldMatrix.identity(2, self.f))
        self.assertEqual(mat_pow(A, 3), A * A * A)

        with self.assertRaises(MatrixError):
            mat_mul(A, FieldMatrix([[1, 2, 3]], self.f))
        with self.assertRaises(MatrixError):
            mat_mul(A, BinaryMatrix.identity(2))

        stack = np.array([A.values, B.values])
        prods = batch_mul(stack, stack, self.f)
        self.assertTrue(np.all(prods[0] == (A * A).values))
        self.assertTrue(np.all(prods[1] == np.eye(2)))

    def test_elimination(self):

        A = FieldMatrix([[1, 2], [3, 4]], self.f)
        S = FieldMatrix([[1, 2], [2, 4]], self.f)

        self.assertEqual(det(A), 2)
        self.assertEqual(det(S), 0)
        self.assertEqual(rank(A), 2)
        self.assertEqual(rank(S), 1)

        self.assertEqual(A * inverse(A), FieldMatrix.identity(2, self.f))
        self.assertEqual(A ** -1, inverse(A))
        with self.assertRaises(SingularMatrixError):
            inverse(S)

        self.assertEqual(submatrix(A, [1], [0, 1]).to_rows(), [[3, 4]])
        with self.assertRaises(MatrixError):
            submatrix(A, [2], [0])

    def test_properties(self):

        B = FieldMatrix([[0, 1], [1, 0]], self.f)
        A = FieldMatrix([[1, 2], [3, 4]], self.f)

        self.assertTrue(is_involutory(B))
        self.assertTrue(is_orthogonal(B))
        self.assertFalse(is_involutory(A))
        self.assertEqual(nonzero_count(B), 2)

        self.assertEqual(expand(FieldMatrix([[2]], self.f)).rows, (8, 9, 2, 4))


class TestBlockMatrix(unittest.TestCase):
    def test_algebra(self):

        f = FieldSpec.get(*GF16)
        C = mul_matrix(f.alpha)
        A = BlockMatrix([[1, C], [0, 1]], 4)
        I = BlockMatrix.identity(2, 4)

        self.assertEqual(nonzero_count(A), 3)
        # [[I, C], [0, I]] is its own inverse in characteristic 2
        self.assertEqual(A * A, I)
        self.assertEqual(inverse(A), A)
        self.assertEqual(rank(A), 8)
        self.assertEqual(A.T.block(1, 0), C.T)

        with self.assertRaises(MatrixError):
            BlockMatrix([[BinaryMatrix.identity(3)]], 4)
        with self.assertRaises(TypeError):
            BlockMatrix([[2]], 4)


class TestPackedMatrix(unittest.TestCase):
    def test_kernel(self):

        f = FieldSpec.get(*GF16)
        S = PackedMatrix(FieldMatrix([[1, 2], [2, 4]], f))

        self.assertEqual(S.n, 2)
        self.assertEqual(S.w, 4)
        self.assertEqual(S.rank([0, 1], [0, 1]), 4)

        x = S.kernel_vector([0, 1], [0, 1])
        self.assertNotEqual(x, 0)
        self.assertEqual(S.apply(x), 0)
        self.assertEqual(S.word_weight(x), 2)

        A = PackedMatrix(FieldMatrix([[1, 2], [3, 4]], f))
        with self.assertRaises(MatrixError):
            A.kernel_vector([0, 1], [0, 1])
        self.assertIsNone(A.deficient_rows([0, 1], 2))
        self.assertEqual(A.words(A.apply(0b0001)), [1, 3])


class TestRandomAlgebra(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)
        self.rng = np.random.default_rng(5)

    def _random(self, n):
        return FieldMatrix(self.rng.integers(0, 16, (n, n)), self.f)

    def test_det(self):

        for n in (2, 3, 4, 5):
            I = FieldMatrix.identity(n, self.f)
            for _ in range(50):
                A = self._random(n)
                B = self._random(n)

                self.assertEqual(det(A * B), det(A) * det(B))
                self.assertEqual(det(A.T), det(A))

                if det(A):
                    self.assertEqual(rank(A), n)
                    self.assertEqual(A * inverse(A), I)
                    self.assertEqual(inverse(A) * A, I)
                else:
                    self.assertLess(rank(A), n)
                    with self.assertRaises(SingularMatrixError):
                        inverse(A)

            d = self.rng.integers(1, 16, n)
            D = FieldMatrix(np.diag(d), self.f)
            prod = self.f.element(1)
            for v in d:
                prod = prod * int(v)
            self.assertEqual(det(D), prod)

    def test_expand(self):

        for _ in range(50):
            A = self._random(3)
            B = self._random(3)

            self.assertEqual(expand(A * B), expand(A) * expand(B))
            self.assertEqual(expand(A + B), expand(A) + expand(B))

            X, Y = [
                BlockMatrix(
                    [
                        [BinaryMatrix(self.rng.integers(0, 8, 3), 3) for _ in range(3)]
                        for _ in range(3)
                    ],
                    3,
                )
                for _ in range(2)
            ]
            self.assertEqual(expand(block_mul(X, Y)), expand(X) * expand(Y))
