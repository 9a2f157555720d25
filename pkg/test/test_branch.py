import os
import unittest

import numpy as np

from nmdslab.gf import FieldSpec, GF16, GF256
from nmdslab.linalg import (
    BinaryMatrix,
    FieldMatrix,
    BlockMatrix,
    PackedMatrix,
    det,
    inverse,
)
from nmdslab.construct import GdlsSpec, Permutation, perm_matrix, circulant
from nmdslab.search import binary_branch_numbers
from nmdslab.branch import (
    BranchError,
    NmdsVerdict,
    branch_differential,
    branch_linear,
    branch_report,
    branch_bruteforce,
    is_mds,
    is_nmds,
    is_k_nmds,
)


def _rec_n4(field):
    return GdlsSpec([2, 3, 4, 1], [1, 2, 3, 4], [1] * 4, [0, 1, 0, 1], field).matrix()


class TestBranch(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)

    def test_identity(self):

        I = FieldMatrix.identity(4, self.f)

        bd = branch_differential(I)
        self.assertEqual(bd.beta, 2)
        self.assertEqual(sum(1 for w in bd.witness if w), 1)

        v = is_nmds(I)
        self.assertFalse(v.is_nmds)
        self.assertFalse(v.is_mds)
        self.assertEqual(v.certificate["reason"], "too few nonzero entries")
        self.assertEqual(v.certificate["count"], 4)

    def test_mds(self):

        A = FieldMatrix([[1, 3], [2, 1]], self.f)

        self.assertTrue(is_mds(A))
        rep = branch_report(A)
        self.assertEqual(rep.beta_d, 3)
        self.assertEqual(rep.beta_l, 3)
        self.assertEqual(rep.beta, 3)

        v = is_nmds(A)
        self.assertTrue(v.is_mds)
        self.assertFalse(v.is_nmds)
        self.assertFalse(v)

        with self.assertRaises(BranchError):
            NmdsVerdict(True, True)

    def test_rank_deficient(self):

        J = FieldMatrix([[1] * 3] * 3, self.f)

        v = is_nmds(J)
        self.assertFalse(v.is_nmds)
        self.assertEqual(v.certificate["rows"], [1, 2, 3])
        self.assertEqual(v.certificate["cols"], [1, 2])
        self.assertEqual(v.certificate["reason"], "rank-deficient 3x2 submatrix")

        bd = branch_differential(J)
        self.assertEqual(bd.beta, 2)
        # The witness is a codeword of weight 2
        y = (J * FieldMatrix([[w] for w in bd.witness], self.f)).to_rows()
        self.assertEqual(y, [[0], [0], [0]])

        self.assertEqual(branch_bruteforce(J).beta_d, 2)

    def test_recursive(self):

        B = _rec_n4(self.f)

        self.assertFalse(is_k_nmds(B, 1))
        self.assertFalse(is_k_nmds(B, 2))

        v = is_k_nmds(B, 3)
        self.assertTrue(v.is_nmds)
        self.assertEqual(v.beta_d, 4)
        self.assertEqual(v.to_dict()["nmds"], True)

        B3 = B ** 3
        self.assertEqual(
            B3.to_rows(), [[0, 1, 1, 1], [1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1]]
        )
        rep = branch_bruteforce(B3)
        self.assertEqual(rep.beta_d, 4)
        self.assertEqual(rep.beta_l, 4)
        self.assertEqual(branch_linear(B3).beta, 4)

        with self.assertRaises(BranchError):
            is_k_nmds(B, 0)

    def test_binary(self):

        M = BinaryMatrix.from_positions([[2], [3], [1, 2]])

        self.assertFalse(is_nmds(M))
        self.assertFalse(is_k_nmds(M, 2))
        self.assertTrue(is_k_nmds(M, 3))
        self.assertEqual(branch_differential(M ** 3).beta, 3)
        self.assertEqual(branch_bruteforce(M ** 3).beta_l, 3)

    def test_blocks(self):

        B3 = _rec_n4(self.f) ** 3
        blocks = BlockMatrix(B3.to_rows(), 4)

        v = is_nmds(blocks)
        self.assertTrue(v.is_nmds)
        self.assertEqual(v.beta_d, 4)
        self.assertEqual(v.beta_l, 4)

        bd = branch_differential(blocks)
        y = PackedMatrix(blocks).words(
            PackedMatrix(blocks).apply(
                sum(w << (4 * j) for j, w in enumerate(bd.witness))
            )
        )
        self.assertEqual(sum(1 for w in bd.witness if w) + sum(1 for w in y if w), 4)

    def test_bruteforce_limit(self):

        f = FieldSpec.get(*GF256)
        with self.assertRaises(BranchError):
            branch_bruteforce(FieldMatrix.identity(4, f))
        with self.assertRaises(BranchError):
            branch_differential(FieldMatrix([[1, 2, 3]], self.f))


LONG_TESTS = os.environ.get("NMDSLAB_LONG_TESTS", "0") not in ("", "0")


def _random_matrix(rng, n, field, density=0.8):
    vals = rng.integers(1, field.order, (n, n))
    return FieldMatrix(vals * (rng.random((n, n)) < density), field)


def _random_diagonal(rng, n, field):
    return FieldMatrix(np.diag(rng.integers(1, field.order, n)), field)


def _random_permutation(rng, n, field):
    return perm_matrix(Permutation(rng.permutation(n) + 1), field)


def _binary_4x4(i):
    # Entry (a, b) is bit 4a + b of i
    return BinaryMatrix([(i >> (4 * a)) & 0xF for a in range(4)], 4)


class TestBranchOracle(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)

    def test_field(self):

        rng = np.random.default_rng(17)

        for n, count in ((2, 200), (3, 100), (4, 30)):
            for _ in range(count):
                M = _random_matrix(rng, n, self.f, density=rng.uniform(0.4, 1.0))
                r = branch_report(M)
                b = branch_bruteforce(M)
                self.assertEqual((r.beta_d, r.beta_l), (b.beta_d, b.beta_l))

    def test_binary(self):

        betas = binary_branch_numbers(4)
        rng = np.random.default_rng(19)
        for i in rng.choice(2 ** 16, 300, replace=False):
            M = _binary_4x4(int(i))
            self.assertEqual(branch_differential(M).beta, betas[i])
            self.assertEqual(branch_bruteforce(M).beta_d, betas[i])

    @unittest.skipUnless(LONG_TESTS, "set NMDSLAB_LONG_TESTS=1 to run")
    def test_binary_all(self):

        betas = binary_branch_numbers(4)
        for i in range(2 ** 16):
            self.assertEqual(branch_differential(_binary_4x4(i)).beta, betas[i])


class TestInvariance(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)
        self.rng = np.random.default_rng(23)

    def test_nmds(self):

        known = [_rec_n4(self.f) ** 3, circulant([0, 1, 1, 1], self.f)]
        for M in known:
            self.assertTrue(is_nmds(M))

        for _ in range(100):
            for M in known + [_random_matrix(self.rng, 4, self.f)]:
                n = M.n
                v = is_nmds(M).is_nmds
                r = branch_report(M)

                self.assertEqual(is_nmds(M.T).is_nmds, v)

                D1 = _random_diagonal(self.rng, n, self.f)
                D2 = _random_diagonal(self.rng, n, self.f)
                self.assertEqual(is_nmds(D1 * M * D2).is_nmds, v)

                P = _random_permutation(self.rng, n, self.f)
                Q = _random_permutation(self.rng, n, self.f)
                rp = branch_report(P * M * Q)
                self.assertEqual((rp.beta_d, rp.beta_l), (r.beta_d, r.beta_l))

                if det(M):
                    self.assertEqual(is_nmds(inverse(M)).is_nmds, v)

    def test_k_nmds(self):

        B = _rec_n4(self.f)

        for _ in range(50):
            D = _random_diagonal(self.rng, 4, self.f)
            P = _random_permutation(self.rng, 4, self.f)

            self.assertTrue(is_k_nmds(D * B * inverse(D), 3))
            self.assertTrue(is_k_nmds(P * B * inverse(P), 3))

            C = _random_matrix(self.rng, 4, self.f, density=0.5)
            self.assertEqual(
                is_k_nmds(C, 3).is_nmds, is_k_nmds(D * C * inverse(D), 3).is_nmds
            )
            self.assertEqual(
                is_k_nmds(C, 3).is_nmds, is_k_nmds(P * C * inverse(P), 3).is_nmds
            )
