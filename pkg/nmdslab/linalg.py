"""linalg.py

Dense matrix algebra over GF(2), over GF(2^r) and over the ring of m x m
binary matrices. Binary rows are stored as integer bit-masks (bit j of row i
is the entry (i, j)); field matrices as read-only uint8 numpy arrays.
"""

from numbers import Integral

import numpy as np

from nmdslab.gf import FieldSpec, FieldElement
from nmdslab.utils import deepmap, popcount


class MatrixError(Exception):
    pass


class SingularMatrixError(MatrixError):
    pass


def _xor_insert(basis, row):
    # Insert row in a xor basis keyed by leading bit; True if independent
    while row:
        p = row.bit_length() - 1
        b = basis.get(p)
        if b is None:
            basis[p] = row
            return True
        row ^= b
    return False


def _binary_rank(rows):
    basis = {}
    rank = 0
    for r in rows:
        rank += _xor_insert(basis, r)
    return rank


def _rref(rows, colmask):
    """Fully reduced row echelon form restricted to the columns in colmask

    Returns:
        dict -- pivot column -> reduced row
    """

    pivots = {}
    for r in rows:
        r &= colmask
        for p, pr in pivots.items():
            if (r >> p) & 1:
                r ^= pr
        if r == 0:
            continue
        p = (r & -r).bit_length() - 1
        for q in list(pivots):
            if (pivots[q] >> p) & 1:
                pivots[q] ^= r
        pivots[p] = r

    return pivots


class BinaryMatrix(object):
    def __init__(self, rows, ncols=None):
        """Create a matrix over GF(2)

        Arguments:
            rows {[int]} -- Rows as bit-masks, bit j being column j

        Keyword Arguments:
            ncols {int} -- Number of columns (default: number of rows)

        Raises:
            MatrixError -- If a row has bits beyond the last column
        """

        rows = tuple(int(r) for r in rows)
        ncols = len(rows) if ncols is None else int(ncols)

        for r in rows:
            if r < 0 or r >> ncols:
                raise MatrixError(
                    "Row {0} does not fit in {1} columns".format(bin(r), ncols)
                )

        self._rows = rows
        self._ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def zero(cls, nrows, ncols=None):
        return cls([0] * nrows, nrows if ncols is None else ncols)

    @classmethod
    def from_positions(cls, positions, ncols=None):
        """Build from the 1-based nonzero positions of every row, e.g.
        [[2], [3], [4], [1, 3]]"""

        ncols = len(positions) if ncols is None else ncols
        rows = []
        for ps in positions:
            r = 0
            for p in ps:
                if not (1 <= p <= ncols):
                    raise MatrixError("Invalid column position {0}".format(p))
                r |= 1 << (p - 1)
            rows.append(r)
        return cls(rows, ncols)

    @classmethod
    def from_array(cls, array):
        a = np.array(array, dtype=int) % 2
        if a.ndim != 2:
            raise MatrixError("Binary matrix must be two-dimensional")
        rows = [sum(int(v) << j for j, v in enumerate(row)) for row in a]
        return cls(rows, a.shape[1])

    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return (len(self._rows), self._ncols)

    @property
    def n(self):
        return len(self._rows)

    @property
    def is_square(self):
        return len(self._rows) == self._ncols

    def entry(self, i, j):
        return (self._rows[i] >> j) & 1

    def positions(self):
        return [
            [j + 1 for j in range(self._ncols) if (r >> j) & 1] for r in self._rows
        ]

    def to_array(self):
        return np.array(
            [[(r >> j) & 1 for j in range(self._ncols)] for r in self._rows],
            dtype=np.uint8,
        ).reshape(self.shape)

    def weight(self):
        return sum(popcount(r) for r in self._rows)

    def is_zero(self):
        return not any(self._rows)

    def transpose(self):
        nr = len(self._rows)
        cols = [0] * self._ncols
        for i, r in enumerate(self._rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return BinaryMatrix(cols, nr)

    @property
    def T(self):
        return self.transpose()

    def apply(self, x):
        """Matrix-vector product with x given as a bit-mask"""
        return sum((popcount(r & x) & 1) << i for i, r in enumerate(self._rows))

    def rank(self):
        return _binary_rank(self._rows)

    def inverse(self):

        if not self.is_square:
            raise MatrixError("Only square matrices can be inverted")

        n = self._ncols
        aug = [r | (1 << (n + i)) for i, r in enumerate(self._rows)]
        for c in range(n):
            p = next((i for i in range(c, n) if (aug[i] >> c) & 1), None)
            if p is None:
                raise SingularMatrixError("Binary matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            for i in range(n):
                if i != c and (aug[i] >> c) & 1:
                    aug[i] ^= aug[c]

        return BinaryMatrix([r >> n for r in aug], n)

    def submatrix(self, rows, cols):
        for i in rows:
            if not (0 <= i < len(self._rows)):
                raise MatrixError("Row index {0} out of range".format(i))
        for j in cols:
            if not (0 <= j < self._ncols):
                raise MatrixError("Column index {0} out of range".format(j))
        return BinaryMatrix(
            [
                sum(((self._rows[i] >> j) & 1) << k for k, j in enumerate(cols))
                for i in rows
            ],
            len(cols),
        )

    def __mul__(self, x):

        if isinstance(x, BinaryMatrix):
            if self._ncols != len(x._rows):
                raise MatrixError("Non-conformable binary matrices")
            out = []
            for r in self._rows:
                acc = 0
                while r:
                    j = (r & -r).bit_length() - 1
                    acc ^= x._rows[j]
                    r &= r - 1
                out.append(acc)
            return BinaryMatrix(out, x._ncols)
        elif isinstance(x, Integral):
            return BinaryMatrix(self._rows if x % 2 else [0] * self.n, self._ncols)

        raise TypeError("Unsupported operation for BinaryMatrix")

    def __add__(self, x):
        if not isinstance(x, BinaryMatrix):
            raise TypeError("Unsupported operation for BinaryMatrix")
        if self.shape != x.shape:
            raise MatrixError("Binary matrices of different shapes")
        return BinaryMatrix([a ^ b for a, b in zip(self._rows, x._rows)], self._ncols)

    __sub__ = __add__

    def __pow__(self, k):
        if not isinstance(k, Integral):
            raise TypeError("Unsupported operation for BinaryMatrix")
        if k < 0:
            return self.inverse() ** (-k)
        return mat_pow(self, k)

    def __eq__(self, x):
        if not isinstance(x, BinaryMatrix):
            return False
        return self._rows == x._rows and self._ncols == x._ncols

    def __hash__(self):
        return hash((self._rows, self._ncols))

    def __repr__(self):
        return "BinaryMatrix({0})".format(self.positions())


class FieldMatrix(object):
    def __init__(self, entries, field):
        """Create a matrix over a field GF(2^r)

        Arguments:
            entries {array-like} -- Two-dimensional array of integer values or
                                    FieldElements
            field {FieldSpec} -- The field of the entries

        Raises:
            MatrixError -- If entries are not a 2D array of field values
        """

        if not isinstance(field, FieldSpec):
            raise TypeError("field must be a FieldSpec")

        if isinstance(entries, np.ndarray):
            vals = entries.astype(np.int64)
        else:
            vals = np.array(deepmap(int, entries), dtype=np.int64)
        if vals.ndim != 2:
            raise MatrixError("Field matrix must be two-dimensional")
        if np.any(vals < 0) or np.any(vals >= field.order):
            raise MatrixError("Entries out of range for {0}".format(field))

        self._values = vals.astype(np.uint8)
        self._values.setflags(write=False)
        self._field = field

    @classmethod
    def identity(cls, n, field):
        return cls(np.eye(n, dtype=np.uint8), field)

    @classmethod
    def zero(cls, nrows, field, ncols=None):
        return cls(np.zeros((nrows, nrows if ncols is None else ncols)), field)

    @property
    def field(self):
        return self._field

    @property
    def values(self):
        return self._values

    @property
    def shape(self):
        return self._values.shape

    @property
    def n(self):
        return self._values.shape[0]

    @property
    def is_square(self):
        return self._values.shape[0] == self._values.shape[1]

    def entry(self, i, j):
        return FieldElement(self._values[i, j], self._field)

    def __getitem__(self, ij):
        return self.entry(*ij)

    def to_rows(self):
        return self._values.astype(int).tolist()

    def transpose(self):
        return FieldMatrix(self._values.T, self._field)

    @property
    def T(self):
        return self.transpose()

    def _check(self, x):
        if not isinstance(x, FieldMatrix):
            raise TypeError("Unsupported operation for FieldMatrix")
        if x._field != self._field:
            raise MatrixError("Matrices over different fields")

    def __add__(self, x):
        self._check(x)
        if self.shape != x.shape:
            raise MatrixError("Field matrices of different shapes")
        return FieldMatrix(self._values ^ x._values, self._field)

    __sub__ = __add__

    def __mul__(self, x):
        if isinstance(x, FieldMatrix):
            return mat_mul(self, x)
        elif isinstance(x, (FieldElement, Integral)):
            v = self._field.element(x).value
            return FieldMatrix(self._field.mul_table[v][self._values], self._field)
        raise TypeError("Unsupported operation for FieldMatrix")

    def __rmul__(self, x):
        if isinstance(x, (FieldElement, Integral)):
            return self.__mul__(x)
        raise TypeError("Unsupported operation for FieldMatrix")

    def __pow__(self, k):
        if not isinstance(k, Integral):
            raise TypeError("Unsupported operation for FieldMatrix")
        if k < 0:
            return inverse(self) ** (-k)
        return mat_pow(self, k)

    def __eq__(self, x):
        if not isinstance(x, FieldMatrix):
            return False
        return (
            self._field == x._field
            and self.shape == x.shape
            and bool(np.all(self._values == x._values))
        )

    def __hash__(self):
        return hash((self._field, self.shape, self._values.tobytes()))

    def __repr__(self):
        return "FieldMatrix({0}, {1})".format(
            [[hex(v) for v in row] for row in self.to_rows()], self._field
        )


class BlockMatrix(object):
    def __init__(self, blocks, m):
        """Create a matrix whose entries are m x m binary matrices

        Arguments:
            blocks {[[BinaryMatrix]]} -- Two-dimensional array of blocks; None
                                         or 0 stand for the zero block
            m {int} -- Block size

        Raises:
            MatrixError -- If a block does not have shape m x m
        """

        m = int(m)
        rows = []
        for brow in blocks:
            row = []
            for b in brow:
                if b is None or (isinstance(b, Integral) and b == 0):
                    b = BinaryMatrix.zero(m)
                elif isinstance(b, Integral) and b == 1:
                    b = BinaryMatrix.identity(m)
                elif not isinstance(b, BinaryMatrix):
                    raise TypeError("Blocks must be BinaryMatrix instances")
                if b.shape != (m, m):
                    raise MatrixError(
                        "Block of shape {0} in a ring of {1}x{1} blocks".format(
                            b.shape, m
                        )
                    )
                row.append(b)
            rows.append(tuple(row))

        if len(set(len(r) for r in rows)) > 1:
            raise MatrixError("Ragged block matrix")

        self._blocks = tuple(rows)
        self._m = m

    @classmethod
    def identity(cls, n, m):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], m)

    @property
    def m(self):
        return self._m

    @property
    def blocks(self):
        return self._blocks

    @property
    def shape(self):
        return (len(self._blocks), len(self._blocks[0]) if self._blocks else 0)

    @property
    def n(self):
        return len(self._blocks)

    @property
    def is_square(self):
        return self.shape[0] == self.shape[1]

    def block(self, i, j):
        return self._blocks[i][j]

    def __getitem__(self, ij):
        return self.block(*ij)

    def transpose(self):
        nr, nc = self.shape
        return BlockMatrix(
            [[self._blocks[j][i].transpose() for j in range(nr)] for i in range(nc)],
            self._m,
        )

    @property
    def T(self):
        return self.transpose()

    def __add__(self, x):
        if not isinstance(x, BlockMatrix):
            raise TypeError("Unsupported operation for BlockMatrix")
        if self.shape != x.shape or self._m != x._m:
            raise MatrixError("Block matrices of different shapes")
        return BlockMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._blocks, x._blocks)],
            self._m,
        )

    def __mul__(self, x):
        if isinstance(x, BlockMatrix):
            return block_mul(self, x)
        raise TypeError("Unsupported operation for BlockMatrix")

    def __pow__(self, k):
        if not isinstance(k, Integral):
            raise TypeError("Unsupported operation for BlockMatrix")
        if k < 0:
            return inverse(self) ** (-k)
        return mat_pow(self, k)

    def __eq__(self, x):
        if not isinstance(x, BlockMatrix):
            return False
        return self._m == x._m and self._blocks == x._blocks

    def __hash__(self):
        return hash((self._m, self._blocks))

    def __repr__(self):
        return "BlockMatrix({0}, m={1})".format(
            [[b.positions() for b in row] for row in self._blocks], self._m
        )


class PackedMatrix(object):
    def __init__(self, matrix):
        """Bit-row form of a square matrix as a map on n words of w bits

        A field matrix is expanded through the multiplication matrices of its
        entries (w = r), a block matrix through its blocks (w = m) and a
        binary matrix is taken as is (w = 1). Column block j occupies bits
        [j*w, (j+1)*w) of every row; the binary rank of a submatrix on row
        blocks T and column blocks S is w times its rank over the field.

        Arguments:
            matrix {FieldMatrix | BlockMatrix | BinaryMatrix} -- Square matrix
        """

        if not matrix.is_square:
            raise MatrixError("PackedMatrix requires a square matrix")

        if isinstance(matrix, FieldMatrix):
            w = matrix.field.r
        elif isinstance(matrix, BlockMatrix):
            w = matrix.m
        elif isinstance(matrix, BinaryMatrix):
            w = 1
        else:
            raise TypeError("Unsupported matrix type for PackedMatrix")

        big = expand(matrix)
        n = matrix.n

        self._n = n
        self._w = w
        self._rows = tuple(tuple(big.rows[i * w : (i + 1) * w]) for i in range(n))
        self._full = (1 << w) - 1

    @property
    def n(self):
        return self._n

    @property
    def w(self):
        return self._w

    def column_mask(self, cols):
        mask = 0
        for j in cols:
            mask |= self._full << (j * self._w)
        return mask

    def rank(self, rows, cols):
        mask = self.column_mask(cols)
        return _binary_rank(r & mask for i in rows for r in self._rows[i])

    def deficient_rows(self, cols, t):
        """Find t row blocks T such that the submatrix on (T, cols) has a
        nonzero kernel

        Returns:
            tuple -- The row blocks, or None if every choice has full rank
        """

        mask = self.column_mask(cols)
        full = len(cols) * self._w
        n = self._n

        if t * self._w < full:
            return tuple(range(t))

        def dfs(start, chosen, basis, rank):
            if len(chosen) == t:
                return tuple(chosen)
            for i in range(start, n - (t - len(chosen)) + 1):
                b = dict(basis)
                rk = rank
                for r in self._rows[i]:
                    rk += _xor_insert(b, r & mask)
                if rk == full:
                    # Every superset has full column rank too
                    continue
                found = dfs(i + 1, chosen + [i], b, rk)
                if found is not None:
                    return found
            return None

        return dfs(0, [], {}, 0)

    def kernel_vector(self, rows, cols):
        """A nonzero input supported on cols that the row blocks in rows map
        to zero, as a bit-mask over all n*w input bits

        Raises:
            MatrixError -- If the submatrix has trivial kernel
        """

        mask = self.column_mask(cols)
        pivots = _rref((r for i in rows for r in self._rows[i]), mask)
        free = mask
        for p in pivots:
            free &= ~(1 << p)
        if free == 0:
            raise MatrixError("Submatrix has trivial kernel")

        f = (free & -free).bit_length() - 1
        x = 1 << f
        for p, pr in pivots.items():
            if (pr >> f) & 1:
                x |= 1 << p

        return x

    def apply(self, x):
        y = 0
        for i, brow in enumerate(self._rows):
            for a, r in enumerate(brow):
                if popcount(r & x) & 1:
                    y |= 1 << (i * self._w + a)
        return y

    def word_weight(self, x):
        """Number of nonzero w-bit words of a bit-mask"""
        full = self._full
        w = self._w
        return sum(1 for j in range(self._n) if (x >> (j * w)) & full)

    def words(self, x):
        full = self._full
        return [(x >> (j * self._w)) & full for j in range(self._n)]


def _check_kind(A, B):
    if type(A) is not type(B):
        raise MatrixError(
            "Can not combine {0} and {1}".format(type(A).__name__, type(B).__name__)
        )


def mat_mul(A, B):
    """Product of two conformable matrices of the same kind

    Field matrices are multiplied through the field's multiplication table,
    binary and block matrices by xor-accumulation of rows.
    """

    _check_kind(A, B)

    if isinstance(A, BlockMatrix):
        return block_mul(A, B)
    if isinstance(A, BinaryMatrix):
        return A * B

    if A.field != B.field:
        raise MatrixError("Matrices over different fields")
    if A.shape[1] != B.shape[0]:
        raise MatrixError("Non-conformable matrices {0} and {1}".format(A.shape, B.shape))

    T = A.field.mul_table
    a = A.values
    b = B.values
    if a.shape[1] == 0:
        return FieldMatrix.zero(a.shape[0], A.field, b.shape[1])

    prod = np.bitwise_xor.reduce(T[a[:, :, None], b[None, :, :]], axis=1)
    return FieldMatrix(prod, A.field)


def block_mul(A, B):

    if not (isinstance(A, BlockMatrix) and isinstance(B, BlockMatrix)):
        raise TypeError("block_mul requires two BlockMatrix")
    if A.m != B.m:
        raise MatrixError("Block sizes {0} and {1} differ".format(A.m, B.m))
    if A.shape[1] != B.shape[0]:
        raise MatrixError("Non-conformable block matrices")

    nr, p = A.shape
    nc = B.shape[1]
    zero = BinaryMatrix.zero(A.m)
    out = []
    for i in range(nr):
        row = []
        for j in range(nc):
            acc = zero
            for k in range(p):
                a = A.blocks[i][k]
                b = B.blocks[k][j]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            row.append(acc)
        out.append(row)

    return BlockMatrix(out, A.m)


def identity_like(A):
    if isinstance(A, FieldMatrix):
        return FieldMatrix.identity(A.n, A.field)
    elif isinstance(A, BlockMatrix):
        return BlockMatrix.identity(A.n, A.m)
    return BinaryMatrix.identity(A.n)


def mat_pow(A, k):
    """A^k by repeated squaring, k >= 0"""

    if not A.is_square:
        raise MatrixError("Only square matrices have powers")
    if k < 0:
        raise MatrixError("Negative exponent {0}; use inverse".format(k))

    ans = identity_like(A)
    base = A
    while k:
        if k & 1:
            ans = mat_mul(ans, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)

    return ans


def _field_eliminate(A):
    # Row reduction over the field; returns (echelon array, rank, pivot product)
    f = A.field
    T = f.mul_table
    I = f.inv_table
    a = A.values.copy()
    nr, nc = a.shape
    rank = 0
    pivprod = 1
    for c in range(nc):
        if rank == nr:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if len(nz) == 0:
            continue
        p = rank + nz[0]
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
        pv = int(a[rank, c])
        pivprod = f.mul(pivprod, pv)
        a[rank] = T[I[pv]][a[rank]]
        below = rank + 1 + np.nonzero(a[rank + 1 :, c])[0]
        if len(below):
            a[below] ^= T[a[below, c][:, None], a[rank][None, :]]
        rank += 1

    return a, rank, pivprod


def rank(A):
    if isinstance(A, FieldMatrix):
        return _field_eliminate(A)[1]
    elif isinstance(A, BlockMatrix):
        return expand(A).rank()
    elif isinstance(A, BinaryMatrix):
        return A.rank()
    raise TypeError("Unsupported matrix type")


def det(A):
    """Determinant of a square field matrix, by elimination"""

    if not isinstance(A, FieldMatrix):
        raise TypeError("det requires a FieldMatrix")
    if not A.is_square:
        raise MatrixError("Only square matrices have a determinant")

    _, rk, pivprod = _field_eliminate(A)
    # Row swaps carry no sign in characteristic 2
    return A.field.element(pivprod if rk == A.n else 0)


def inverse(A):
    """Inverse of a nonsingular matrix

    Raises:
        SingularMatrixError -- If the matrix is singular
    """

    if not A.is_square:
        raise MatrixError("Only square matrices can be inverted")

    if isinstance(A, BinaryMatrix):
        return A.inverse()
    elif isinstance(A, BlockMatrix):
        n, m = A.n, A.m
        big = expand(A).inverse()
        return BlockMatrix(
            [
                [big.submatrix(range(i * m, (i + 1) * m), range(j * m, (j + 1) * m))
                 for j in range(n)]
                for i in range(n)
            ],
            m,
        )

    f = A.field
    T = f.mul_table
    I = f.inv_table
    n = A.n
    aug = np.concatenate([A.values, np.eye(n, dtype=np.uint8)], axis=1)
    for c in range(n):
        nz = np.nonzero(aug[c:, c])[0]
        if len(nz) == 0:
            raise SingularMatrixError("Field matrix is singular")
        p = c + nz[0]
        if p != c:
            aug[[c, p]] = aug[[p, c]]
        aug[c] = T[I[aug[c, c]]][aug[c]]
        others = np.nonzero(aug[:, c])[0]
        others = others[others != c]
        if len(others):
            aug[others] ^= T[aug[others, c][:, None], aug[c][None, :]]

    return FieldMatrix(aug[:, n:], f)


def submatrix(A, rows, cols):
    """Extract the submatrix on the given 0-based row and column indices,
    in the order given"""

    rows = list(rows)
    cols = list(cols)

    if isinstance(A, BinaryMatrix):
        return A.submatrix(rows, cols)

    nr, nc = A.shape
    if any(not (0 <= i < nr) for i in rows) or any(not (0 <= j < nc) for j in cols):
        raise MatrixError("Submatrix indices out of range")

    if isinstance(A, BlockMatrix):
        return BlockMatrix([[A.blocks[i][j] for j in cols] for i in rows], A.m)

    return FieldMatrix(
        A.values[np.ix_(rows, cols)].reshape((len(rows), len(cols))), A.field
    )


def expand(A):
    """Binary matrix of the GF(2)-linear map of a block or field matrix

    Block (i, j) occupies rows i*w..(i+1)*w-1 and columns j*w..(j+1)*w-1,
    with w the block size or the field degree.
    """

    if isinstance(A, BinaryMatrix):
        return A

    if isinstance(A, BlockMatrix):
        w = A.m
        grid = [[b.rows for b in brow] for brow in A.blocks]
    elif isinstance(A, FieldMatrix):
        w = A.field.r
        mr = A.field.mul_rows
        grid = [[mr[v] for v in row] for row in A.to_rows()]
    else:
        raise TypeError("Unsupported matrix type")

    rows = []
    for brow in grid:
        for a in range(w):
            rows.append(sum(b[a] << (j * w) for j, b in enumerate(brow)))

    return BinaryMatrix(rows, len(grid[0]) * w if grid else 0)


def transpose(A):
    return A.transpose()


def nonzero_count(A):
    """Number of nonzero entries (nonzero blocks for block matrices)"""

    if isinstance(A, FieldMatrix):
        return int(np.count_nonzero(A.values))
    elif isinstance(A, BlockMatrix):
        return sum(not b.is_zero() for row in A.blocks for b in row)
    elif isinstance(A, BinaryMatrix):
        return A.weight()
    raise TypeError("Unsupported matrix type")


def is_involutory(A):
    if not A.is_square:
        return False
    return mat_mul(A, A) == identity_like(A)


def is_orthogonal(A):
    if not A.is_square:
        return False
    return mat_mul(A, A.transpose()) == identity_like(A)


def batch_mul(A, B, field):
    """Products of two stacks of field matrices given as integer arrays

    Arguments:
        A {np.ndarray} -- Array of shape (..., n, p)
        B {np.ndarray} -- Array of shape (..., p, m)
        field {FieldSpec} -- Field of the entries

    Returns:
        np.ndarray -- Array of shape (..., n, m)
    """

    T = field.mul_table
    return np.bitwise_xor.reduce(T[A[..., :, :, None], B[..., None, :, :]], axis=-2)
