"""construct.py

Permutations and the structured matrix families built from them: DLS and
GDLS matrices, circulant, left-circulant, Toeplitz, Hankel, Hadamard and
companion matrices"""

from itertools import permutations
from numbers import Integral

import numpy as np

from nmdslab.gf import FieldElement
from nmdslab.linalg import FieldMatrix, BinaryMatrix, BlockMatrix
from nmdslab.utils import hexstr


class ConstructionError(ValueError):
    pass


class Permutation(object):

    __slots__ = ("_images",)

    def __init__(self, images):
        """A permutation of {1, ..., n} in one-line notation

        Arguments:
            images {[int]} -- [p(1), p(2), ..., p(n)], 1-based

        Raises:
            ConstructionError -- If images is not a bijection on {1..n}
        """

        if isinstance(images, Permutation):
            images = images.images

        images = tuple(int(i) for i in images)
        n = len(images)
        if n == 0 or sorted(images) != list(range(1, n + 1)):
            raise ConstructionError(
                "{0} is not a permutation of 1..{1}".format(list(images), n)
            )

        self._images = images

    @property
    def images(self):
        return self._images

    @property
    def n(self):
        return len(self._images)

    @property
    def zero_based(self):
        return tuple(i - 1 for i in self._images)

    def __call__(self, k):
        return self._images[k - 1]

    def __mul__(self, x):
        # (p*q)(k) = p(q(k))
        if not isinstance(x, Permutation):
            raise TypeError("Unsupported operation for Permutation")
        if x.n != self.n:
            raise ConstructionError("Permutations of different sizes")
        return Permutation([self._images[j - 1] for j in x._images])

    def inverse(self):
        inv = [0] * self.n
        for k, i in enumerate(self._images):
            inv[i - 1] = k + 1
        return Permutation(inv)

    def cycles(self):
        """Cycle decomposition, fixed points included as 1-cycles"""

        seen = set()
        out = []
        for k in range(1, self.n + 1):
            if k in seen:
                continue
            cyc = [k]
            seen.add(k)
            j = self(k)
            while j != k:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_type(self):
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def is_derangement(self):
        return all(i != k + 1 for k, i in enumerate(self._images))

    def is_n_cycle(self):
        return self.cycle_type() == (self.n,)

    def is_identity(self):
        return self._images == tuple(range(1, self.n + 1))

    def matrix(self, field=None):
        return perm_matrix(self, field)

    def __eq__(self, x):
        if not isinstance(x, Permutation):
            return False
        return self._images == x._images

    def __lt__(self, x):
        return self._images < x._images

    def __hash__(self):
        return hash(self._images)

    def __repr__(self):
        return "Permutation({0})".format(list(self._images))

    def __str__(self):
        return "[{0}]".format(",".join(str(i) for i in self._images))


def _as_perm(p):
    return p if isinstance(p, Permutation) else Permutation(p)


def perm_compose(p, q):
    return _as_perm(p) * _as_perm(q)


def perm_inverse(p):
    return _as_perm(p).inverse()


def perm_matrix(p, field=None):
    """Permutation matrix with a one at (p(j), j) for every column j

    Arguments:
        p {Permutation} -- The permutation

    Keyword Arguments:
        field {FieldSpec} -- If given, return a FieldMatrix over it; otherwise
                             a BinaryMatrix

    Returns:
        FieldMatrix | BinaryMatrix -- The matrix
    """

    p = _as_perm(p)
    n = p.n
    if field is None:
        inv = p.inverse()
        return BinaryMatrix([1 << (inv(i + 1) - 1) for i in range(n)], n)

    a = np.zeros((n, n), dtype=np.uint8)
    a[list(p.zero_based), list(range(n))] = 1
    return FieldMatrix(a, field)


def are_conjugate(p, q):
    p = _as_perm(p)
    q = _as_perm(q)
    return p.n == q.n and p.cycle_type() == q.cycle_type()


def identity_permutation(n):
    return Permutation(range(1, n + 1))


def cycle_permutation(n, shift=1):
    """The n-cycle k -> k + shift (mod n); [2,3,...,n,1] for shift=1 and
    [n,1,...,n-1] for shift=-1"""
    return Permutation([(k + shift) % n + 1 for k in range(n)])


def reversal_permutation(n):
    """[1, n, n-1, ..., 2]; left multiplying a circulant matrix by its
    permutation matrix gives the left-circulant matrix of the same row"""
    return Permutation([1] + list(range(n, 1, -1)))


def derangements(n):
    """All fixed-point-free permutations of order n, in lexicographic order"""

    if n < 2:
        raise ConstructionError("Derangements need n >= 2")

    for images in permutations(range(1, n + 1)):
        if all(i != k + 1 for k, i in enumerate(images)):
            yield Permutation(images)


def derangement_count(n):
    # D(n) = (n-1)(D(n-1) + D(n-2))
    a, b = 1, 0
    if n == 0:
        return a
    for k in range(2, n + 1):
        a, b = b, (k - 1) * (a + b)
    return b


def _values(entries, field, n=None, allow_zero=True, name="entry"):
    vals = []
    for e in entries:
        if isinstance(e, FieldElement):
            if e.field != field:
                raise ConstructionError("{0} from a different field".format(name))
            v = e.value
        elif isinstance(e, Integral):
            v = int(e)
        else:
            raise ConstructionError("Invalid {0} {1}".format(name, e))
        if not (0 <= v < field.order):
            raise ConstructionError(
                "{0} {1} out of range for {2}".format(name, hexstr(v), field)
            )
        if v == 0 and not allow_zero:
            raise ConstructionError("{0} must be nonzero".format(name))
        vals.append(v)

    if n is not None and len(vals) != n:
        raise ConstructionError(
            "Expected {0} values for {1}, got {2}".format(n, name, len(vals))
        )

    return tuple(vals)


def _blocks(entries, m, n, allow_zero=True, name="entry"):
    out = []
    for e in entries:
        if isinstance(e, BinaryMatrix):
            if e.shape != (m, m):
                raise ConstructionError("{0} is not {1}x{1}".format(name, m))
            b = e
        elif isinstance(e, Integral) and e in (0, 1):
            b = BinaryMatrix.identity(m) if e else BinaryMatrix.zero(m)
        else:
            raise ConstructionError("Invalid {0} {1}".format(name, e))
        if b.is_zero() and not allow_zero:
            raise ConstructionError("{0} must be nonzero".format(name))
        out.append(b)

    if len(out) != n:
        raise ConstructionError(
            "Expected {0} values for {1}, got {2}".format(n, name, len(out))
        )
    return tuple(out)


def _entry_str(v):
    if isinstance(v, BinaryMatrix):
        return str(v.positions()).replace(" ", "")
    return hexstr(v)


class DlsSpec(object):
    def __init__(self, rho, d1, d2, field):
        """Blueprint of the matrix P*D1 + D2

        Arguments:
            rho {Permutation} -- Fixed-point-free permutation of P
            d1 {[int]} -- Diagonal of D1, all nonzero
            d2 {[int]} -- Diagonal of D2
            field {FieldSpec} -- Field of the entries

        Raises:
            ConstructionError -- If rho has a fixed point or D1 is singular
        """

        rho = _as_perm(rho)
        if not rho.is_derangement():
            raise ConstructionError("{0} has a fixed point".format(rho))

        self._rho = rho
        self._field = field
        self._d1 = _values(d1, field, rho.n, allow_zero=False, name="d1")
        self._d2 = _values(d2, field, rho.n, name="d2")

    @property
    def rho(self):
        return self._rho

    @property
    def d1(self):
        return self._d1

    @property
    def d2(self):
        return self._d2

    @property
    def field(self):
        return self._field

    @property
    def n(self):
        return self._rho.n

    @property
    def fixed_xor(self):
        return sum(1 for v in self._d2 if v)

    def key(self):
        return (self._rho.images, self._d1, self._d2)

    def matrix(self):
        return dls(self)

    def to_gdls(self):
        return GdlsSpec(
            self._rho, identity_permutation(self.n), self._d1, self._d2, self._field
        )

    def to_string(self):
        return "rho={0};d1={1};d2={2}".format(
            self._rho,
            ",".join(hexstr(v) for v in self._d1),
            ",".join(hexstr(v) for v in self._d2),
        )

    def to_dict(self):
        return {
            "kind": "dls",
            "rho": list(self._rho.images),
            "d1": [hexstr(v) for v in self._d1],
            "d2": [hexstr(v) for v in self._d2],
        }

    def __eq__(self, x):
        return (
            isinstance(x, DlsSpec) and self.key() == x.key() and self._field == x._field
        )

    def __hash__(self):
        return hash((self.key(), self._field))

    def __repr__(self):
        return "DlsSpec({0})".format(self.to_string())


class GdlsSpec(object):
    def __init__(self, rho1, rho2, d1, d2, field=None, m=None):
        """Blueprint of the matrix P1*D1 + P2*D2

        Entries are field values when a field is given, or m x m binary
        matrices (0 and 1 standing for the zero and identity blocks) when
        the block size m is given instead.

        Arguments:
            rho1 {Permutation} -- Permutation of P1
            rho2 {Permutation} -- Permutation of P2, rho1(k) != rho2(k) for
                                  every k
            d1 {list} -- Diagonal of D1, all nonzero
            d2 {list} -- Diagonal of D2

        Keyword Arguments:
            field {FieldSpec} -- Field of the entries
            m {int} -- Block size for matrices over GL(m, F2)

        Raises:
            ConstructionError -- If the permutations collide or D1 is singular
        """

        rho1 = _as_perm(rho1)
        rho2 = _as_perm(rho2)
        if rho1.n != rho2.n:
            raise ConstructionError("rho1 and rho2 have different orders")
        for k in range(1, rho1.n + 1):
            if rho1(k) == rho2(k):
                raise ConstructionError(
                    "rho1 and rho2 agree at position {0}".format(k)
                )
        if (field is None) == (m is None):
            raise ConstructionError("Exactly one of field and m must be given")

        n = rho1.n
        self._rho1 = rho1
        self._rho2 = rho2
        self._field = field
        self._m = m
        if field is not None:
            self._d1 = _values(d1, field, n, allow_zero=False, name="d1")
            self._d2 = _values(d2, field, n, name="d2")
        else:
            self._d1 = _blocks(d1, m, n, allow_zero=False, name="d1")
            self._d2 = _blocks(d2, m, n, name="d2")

    @property
    def rho1(self):
        return self._rho1

    @property
    def rho2(self):
        return self._rho2

    @property
    def d1(self):
        return self._d1

    @property
    def d2(self):
        return self._d2

    @property
    def field(self):
        return self._field

    @property
    def m(self):
        return self._m

    @property
    def n(self):
        return self._rho1.n

    @property
    def fixed_xor(self):
        if self._m is None:
            return sum(1 for v in self._d2 if v)
        return sum(1 for b in self._d2 if not b.is_zero())

    def key(self):
        if self._m is not None:
            return (
                self._rho1.images,
                self._rho2.images,
                tuple(b.rows for b in self._d1),
                tuple(b.rows for b in self._d2),
            )
        return (self._rho1.images, self._rho2.images, self._d1, self._d2)

    def matrix(self):
        return gdls(self)

    def to_string(self):
        return "rho1={0};rho2={1};d1={2};d2={3}".format(
            self._rho1,
            self._rho2,
            ",".join(_entry_str(v) for v in self._d1),
            ",".join(_entry_str(v) for v in self._d2),
        )

    def to_dict(self):
        return {
            "kind": "gdls",
            "rho1": list(self._rho1.images),
            "rho2": list(self._rho2.images),
            "d1": [_entry_str(v) for v in self._d1],
            "d2": [_entry_str(v) for v in self._d2],
        }

    def __eq__(self, x):
        return (
            isinstance(x, GdlsSpec)
            and self.key() == x.key()
            and self._field == x._field
            and self._m == x._m
        )

    def __hash__(self):
        return hash((self.key(), self._field, self._m))

    def __repr__(self):
        return "GdlsSpec({0})".format(self.to_string())


def dls(spec):
    """Build DLS(rho; D1, D2) = P*D1 + D2"""

    n = spec.n
    a = np.zeros((n, n), dtype=np.uint8)
    a[list(spec.rho.zero_based), list(range(n))] = spec.d1
    a[range(n), range(n)] = spec.d2
    return FieldMatrix(a, spec.field)


def gdls(spec):
    """Build GDLS(rho1, rho2; D1, D2) = P1*D1 + P2*D2

    Entry (rho1(j), j) is the j-th value of D1 and (rho2(j), j) the j-th of
    D2, both 1-based."""

    n = spec.n
    r1 = spec.rho1.zero_based
    r2 = spec.rho2.zero_based

    if spec.m is not None:
        grid = [[0] * n for _ in range(n)]
        for j in range(n):
            grid[r1[j]][j] = spec.d1[j]
            grid[r2[j]][j] = spec.d2[j]
        return BlockMatrix(grid, spec.m)

    a = np.zeros((n, n), dtype=np.uint8)
    a[list(r1), list(range(n))] = spec.d1
    a[list(r2), list(range(n))] = spec.d2
    return FieldMatrix(a, spec.field)


def diagonal(values, field):
    vals = _values(values, field)
    n = len(vals)
    a = np.zeros((n, n), dtype=np.uint8)
    a[range(n), range(n)] = vals
    return FieldMatrix(a, field)


FAMILIES = ("circulant", "left-circulant", "toeplitz", "hankel", "hadamard")


def family_index(family, n):
    """Index array I such that the family matrix of a parameter vector x is
    x[I]

    Circulant and left-circulant matrices take n parameters (the first row),
    Hadamard matrices n = 2^k parameters (the first row), Toeplitz matrices
    2n-1 (first row, then first column without its first entry) and Hankel
    matrices 2n-1 (first row, then last column without its first entry).

    Returns:
        np.ndarray -- n x n integer array
    """

    i, j = np.indices((n, n))
    if family == "circulant":
        return (j - i) % n
    elif family == "left-circulant":
        return (i + j) % n
    elif family == "hadamard":
        if n < 1 or n & (n - 1):
            raise ConstructionError("Hadamard order {0} is not a power of 2".format(n))
        return i ^ j
    elif family == "toeplitz":
        return np.where(j >= i, j - i, n - 1 + i - j)
    elif family == "hankel":
        return i + j

    raise ConstructionError("Unknown matrix family '{0}'".format(family))


def family_params(family, n):
    """Number of free parameters of a family matrix of order n"""
    if family in ("toeplitz", "hankel"):
        return 2 * n - 1
    family_index(family, n)
    return n


def family_matrix(family, params, field):
    params = np.array(_values(params, field), dtype=np.uint8)
    np_ = len(params)
    n = (np_ + 1) // 2 if family in ("toeplitz", "hankel") else np_
    if family_params(family, n) != np_:
        raise ConstructionError(
            "Wrong number of parameters ({0}) for a {1} matrix".format(np_, family)
        )
    return FieldMatrix(params[family_index(family, n)], field)


def circulant(row, field):
    """Circ(x1, ..., xn): every row is the right shift of the previous one"""
    return family_matrix("circulant", row, field)


def left_circulant(row, field):
    """l-Circ(x1, ..., xn): every row is the left shift of the previous one"""
    return family_matrix("left-circulant", row, field)


def hadamard(row, field):
    return family_matrix("hadamard", row, field)


def toeplitz(first_row, first_col, field):
    first_row = list(first_row)
    first_col = list(first_col)
    if len(first_row) != len(first_col):
        raise ConstructionError("First row and first column differ in length")
    if int(first_row[0]) != int(first_col[0]):
        raise ConstructionError("First row and first column disagree at the corner")
    return family_matrix("toeplitz", first_row + first_col[1:], field)


def hankel(first_row, last_col, field):
    first_row = list(first_row)
    last_col = list(last_col)
    if len(first_row) != len(last_col):
        raise ConstructionError("First row and last column differ in length")
    if int(first_row[-1]) != int(last_col[0]):
        raise ConstructionError("First row and last column disagree at the corner")
    return family_matrix("hankel", first_row + last_col[1:], field)


def companion(coeffs, field):
    """Companion-type matrix with ones on the superdiagonal and the given
    coefficients as its last row"""

    vals = _values(coeffs, field, name="coefficient")
    n = len(vals)
    if n < 2:
        raise ConstructionError("Companion matrices need order at least 2")
    a = np.zeros((n, n), dtype=np.uint8)
    a[range(n - 1), range(1, n)] = 1
    a[n - 1] = vals
    return FieldMatrix(a, field)
