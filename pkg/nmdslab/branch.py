"""branch.py

Differential and linear branch numbers and the MDS / NMDS / k-NMDS
predicates, for matrices over GF(2^r), over GF(2) and over the ring of
m x m binary matrices"""

from collections import namedtuple
from itertools import combinations

import numpy as np

from nmdslab.linalg import (
    FieldMatrix,
    BlockMatrix,
    BinaryMatrix,
    PackedMatrix,
    mat_pow,
    nonzero_count,
)
from nmdslab.utils import hexstr

# Largest number of inputs enumerated by the brute-force oracle
BRUTEFORCE_LIMIT = 2 ** 24
_CHUNK = 2 ** 16


class BranchError(Exception):
    pass


BranchValue = namedtuple("BranchValue", ["beta", "witness"])


class BranchReport(object):
    def __init__(self, beta_d, beta_l, witness_d=None, witness_l=None):
        self.beta_d = beta_d
        self.beta_l = beta_l
        self.witness_d = witness_d
        self.witness_l = witness_l

    @property
    def beta(self):
        return min(self.beta_d, self.beta_l)

    def to_dict(self):
        return {
            "beta_d": self.beta_d,
            "beta_l": self.beta_l,
            "witness_d": _witness_out(self.witness_d),
            "witness_l": _witness_out(self.witness_l),
        }

    def __repr__(self):
        return "BranchReport(beta_d={0}, beta_l={1})".format(self.beta_d, self.beta_l)


class NmdsVerdict(object):
    def __init__(self, is_mds, is_nmds, certificate=None, beta_d=None, beta_l=None):
        """Outcome of an NMDS check

        Arguments:
            is_mds {bool} -- The matrix is MDS
            is_nmds {bool} -- The matrix is NMDS (never together with is_mds)

        Keyword Arguments:
            certificate {dict} -- Evidence for a negative answer: a low-weight
                                  codeword, a rank-deficient submatrix or a
                                  nonzero count
            beta_d {int} -- Differential branch number, when known
            beta_l {int} -- Linear branch number, when known
        """

        if is_mds and is_nmds:
            raise BranchError("A matrix can not be both MDS and NMDS")

        self.is_mds = bool(is_mds)
        self.is_nmds = bool(is_nmds)
        self.certificate = certificate
        self.beta_d = beta_d
        self.beta_l = beta_l

    def __bool__(self):
        return self.is_nmds

    def to_dict(self):
        return {
            "beta_d": self.beta_d,
            "beta_l": self.beta_l,
            "mds": self.is_mds,
            "nmds": self.is_nmds,
            "witness": self.certificate,
        }

    def __repr__(self):
        return "NmdsVerdict(mds={0}, nmds={1})".format(self.is_mds, self.is_nmds)


def _witness_out(w):
    if w is None:
        return None
    return [hexstr(v) for v in w]


def _packed(M):
    if isinstance(M, PackedMatrix):
        return M
    return PackedMatrix(M)


def _branch(packed):
    # Smallest v = s + n - t such that some t x s block submatrix has a
    # nonzero kernel
    n = packed.n
    for v in range(1, n + 2):
        for s in range(max(1, v - n), min(v, n) + 1):
            t = s + n - v
            for S in combinations(range(n), s):
                T = packed.deficient_rows(S, t)
                if T is not None:
                    x = packed.kernel_vector(T, S)
                    return BranchValue(v, packed.words(x))

    raise BranchError("No branch number found")  # unreachable for n >= 1


def branch_differential(M):
    """Differential branch number min(w(x) + w(Mx)) over nonzero x

    Weights count nonzero entries (nonzero m-bit blocks for block matrices).

    Arguments:
        M {FieldMatrix | BlockMatrix | BinaryMatrix} -- Square matrix

    Returns:
        BranchValue -- The branch number and an input attaining it, as a list
                       of words
    """

    if not M.is_square:
        raise BranchError("Branch numbers need a square matrix")
    return _branch(_packed(M))


def branch_linear(M):
    """Linear branch number min(w(x) + w(M^T x)) over nonzero x"""

    if not M.is_square:
        raise BranchError("Branch numbers need a square matrix")
    return _branch(_packed(M.transpose()))


def branch_report(M):
    bd = branch_differential(M)
    bl = branch_linear(M)
    return BranchReport(bd.beta, bl.beta, bd.witness, bl.witness)


def _word_tables(M):
    # tabs[i, j, x] is the word (M)_{i,j} * x
    if isinstance(M, FieldMatrix):
        return M.field.mul_table[M.values].astype(np.int64), M.field.order
    elif isinstance(M, BlockMatrix):
        q = 1 << M.m
        return (
            np.array(
                [[[b.apply(x) for x in range(q)] for b in row] for row in M.blocks],
                dtype=np.int64,
            ),
            q,
        )
    elif isinstance(M, BinaryMatrix):
        a = M.to_array().astype(np.int64)
        return np.stack([np.zeros_like(a), a], axis=-1), 2

    raise TypeError("Unsupported matrix type")


def _enumerate_branch(tabs, q, n):
    total = q ** n
    powers = q ** np.arange(n, dtype=np.int64)
    ii = np.arange(n)[None, :, None]
    jj = np.arange(n)[None, None, :]

    best = None
    arg = None
    for start in range(1, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % q
        y = np.bitwise_xor.reduce(tabs[ii, jj, digits[:, None, :]], axis=2)
        ws = np.count_nonzero(digits, axis=1) + np.count_nonzero(y, axis=1)
        k = int(np.argmin(ws))
        if best is None or ws[k] < best:
            best = int(ws[k])
            arg = [int(d) for d in digits[k]]

    return BranchValue(best, arg)


def branch_bruteforce(M):
    """Branch numbers by enumeration of every nonzero input

    Raises:
        BranchError -- If the number of inputs exceeds 2^24
    """

    if not M.is_square:
        raise BranchError("Branch numbers need a square matrix")

    tabs, q = _word_tables(M)
    n = M.n
    if q ** n > BRUTEFORCE_LIMIT:
        raise BranchError(
            "Brute force over {0}^{1} inputs exceeds the limit of 2^24".format(q, n)
        )

    bd = _enumerate_branch(tabs, q, n)
    bl = _enumerate_branch(_word_tables(M.transpose())[0], q, n)

    return BranchReport(bd.beta, bl.beta, bd.witness, bl.witness)


def _one_based(idx):
    return [i + 1 for i in idx]


def is_mds(M):
    """Check that every square submatrix is nonsingular"""

    if not M.is_square:
        return False
    n = M.n
    if nonzero_count(M) < n * n:
        return False

    packed = _packed(M)
    w = packed.w
    for g in range(2, n + 1):
        for rows in combinations(range(n), g):
            for cols in combinations(range(n), g):
                if packed.rank(rows, cols) < g * w:
                    return False

    return True


def _submatrix_rank_check(packed, transposed=False):
    # Every (g+1) x g submatrix must have rank g
    n = packed.n
    for g in range(1, n):
        for S in combinations(range(n), g):
            T = packed.deficient_rows(S, g + 1)
            if T is not None:
                if transposed:
                    return {
                        "rows": _one_based(S),
                        "cols": _one_based(T),
                        "reason": "rank-deficient {0}x{1} submatrix".format(g, g + 1),
                    }
                return {
                    "rows": _one_based(T),
                    "cols": _one_based(S),
                    "reason": "rank-deficient {0}x{1} submatrix".format(g + 1, g),
                }
    return None


def is_nmds(M):
    """Decide whether a square matrix is NMDS, i.e. has differential and
    linear branch number n while not being MDS

    Matrices with fewer than n^2 - n nonzero entries are rejected at once.
    Over a field, the rank of every (g+1) x g and g x (g+1) submatrix is
    checked; block matrices are decided on their branch numbers.

    Arguments:
        M {FieldMatrix | BlockMatrix | BinaryMatrix} -- Square matrix

    Returns:
        NmdsVerdict -- The verdict, with a certificate when negative
    """

    if not M.is_square:
        return NmdsVerdict(False, False, {"reason": "not square"})

    n = M.n
    nz = nonzero_count(M)
    if nz < n * n - n:
        return NmdsVerdict(
            False, False, {"reason": "too few nonzero entries", "count": nz}
        )

    if isinstance(M, BlockMatrix):
        bd = branch_differential(M)
        if bd.beta < n:
            return NmdsVerdict(
                False, False, {"witness": _witness_out(bd.witness)}, beta_d=bd.beta
            )
        bl = branch_linear(M)
        if bl.beta < n:
            return NmdsVerdict(
                False,
                False,
                {"witness": _witness_out(bl.witness), "linear": True},
                beta_d=bd.beta,
                beta_l=bl.beta,
            )
        mds = bd.beta == n + 1 and bl.beta == n + 1
        return NmdsVerdict(mds, not mds, beta_d=bd.beta, beta_l=bl.beta)

    packed = _packed(M)
    cert = _submatrix_rank_check(packed)
    if cert is None:
        cert = _submatrix_rank_check(_packed(M.transpose()), transposed=True)
    if cert is not None:
        return NmdsVerdict(False, False, cert)

    if is_mds(M):
        return NmdsVerdict(True, False, beta_d=n + 1, beta_l=n + 1)

    return NmdsVerdict(False, True, beta_d=n, beta_l=n)


def is_k_nmds(B, k):
    """Check whether B^k is NMDS"""

    if k < 1:
        raise BranchError("Invalid power {0}".format(k))
    return is_nmds(mat_pow(B, k))
