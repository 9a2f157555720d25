"""gf.py

Arithmetic in the binary extension fields GF(2^r), r <= 8, with elements
stored as integers in the polynomial basis {1, a, ..., a^(r-1)}
"""

import re
from numbers import Integral

import numpy as np

MAX_DEGREE = 8

# Fields used throughout, as (r, modulus)
GF16 = (4, 0x13)  # x^4+x+1
GF256_AES = (8, 0x11B)  # x^8+x^4+x^3+x+1
GF256 = (8, 0x1C3)  # x^8+x^7+x^6+x+1


class FieldError(Exception):
    pass


def _degree(p):
    return p.bit_length() - 1


def clmul(a, b):
    """Carry-less product of two polynomials over GF(2) stored as bit-masks"""

    ans = 0
    while b:
        if b & 1:
            ans ^= a
        a <<= 1
        b >>= 1
    return ans


def poly_mod(a, m):
    """Remainder of the polynomial a divided by m over GF(2)"""

    dm = _degree(m)
    while a and _degree(a) >= dm:
        a ^= m << (_degree(a) - dm)
    return a


def is_irreducible(poly, r):
    """Check whether a polynomial of degree r is irreducible over GF(2)

    Arguments:
        poly {int} -- Polynomial as a bit-mask (e.g. 0x13 for x^4+x+1)
        r {int} -- Expected degree

    Returns:
        bool -- True if poly has degree r and no nontrivial factor
    """

    if r < 1 or _degree(poly) != r:
        return False
    if r == 1:
        return True
    if not poly & 1:
        return False

    # Trial division by every polynomial of degree up to r/2
    for d in range(1, r // 2 + 1):
        for q in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, q) == 0:
                return False

    return True


class FieldSpec(object):

    _cache = {}

    def __init__(self, r, modulus):
        """Create the field GF(2^r) defined by an irreducible polynomial

        Build the multiplication, inversion and (when the class of x is
        primitive) log/antilog tables of GF(2^r).

        Arguments:
            r {int} -- Extension degree, 1 <= r <= 8
            modulus {int} -- Irreducible polynomial of degree r as a bit-mask

        Raises:
            FieldError -- If the modulus is ill-formed or reducible
        """

        if not isinstance(r, Integral) or not (1 <= r <= MAX_DEGREE):
            raise FieldError("Invalid extension degree {0}".format(r))
        if not isinstance(modulus, Integral) or _degree(modulus) != r:
            raise FieldError(
                "Modulus {0} does not have degree {1}".format(hex(modulus), r)
            )
        if not modulus & 1:
            raise FieldError(
                "Modulus {0} has zero constant term".format(hex(modulus))
            )
        if not is_irreducible(modulus, r):
            raise FieldError("Modulus {0} is reducible".format(hex(modulus)))

        self._r = int(r)
        self._modulus = int(modulus)
        self._q = 1 << self._r

        self._build_tables()

    @classmethod
    def get(cls, r, modulus):
        """Return a shared instance of the field, building it if needed"""

        key = (int(r), int(modulus))
        if key not in cls._cache:
            cls._cache[key] = cls(*key)
        return cls._cache[key]

    def _build_tables(self):

        q = self._q
        x = poly_mod(2, self._modulus)

        # Powers of the class of x
        exp = [1]
        while True:
            nxt = self.mul_carryless(exp[-1], x)
            if nxt == 1:
                break
            exp.append(nxt)

        self._primitive = len(exp) == q - 1

        if self._primitive:
            self._exp = np.array(exp + exp, dtype=np.int64)
            self._log = np.zeros(q, dtype=np.int64)
            self._log[self._exp[: q - 1]] = np.arange(q - 1)
            la = self._log[:, None] + self._log[None, :]
            table = self._exp[la % (q - 1)]
            table[0, :] = 0
            table[:, 0] = 0
        else:
            self._exp = None
            self._log = None
            table = np.array(
                [[self.mul_carryless(a, b) for b in range(q)] for a in range(q)]
            )

        self._mul = table.astype(np.uint8)
        self._mul.setflags(write=False)

        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(self._mul[a] == 1)[0][0])
        self._inv = inv
        self._inv.setflags(write=False)

        # Rows of the multiplication matrix of every element, as bit-masks:
        # bit j of row i is the coefficient of a^i in e*a^j
        rows = []
        for e in range(q):
            cols = [int(self._mul[e, 1 << j]) for j in range(self._r)]
            rows.append(
                tuple(
                    sum(((c >> i) & 1) << j for j, c in enumerate(cols))
                    for i in range(self._r)
                )
            )
        self._mul_rows = tuple(rows)

    def mul_carryless(self, a, b):
        """Multiply two field values by carry-less product and reduction"""
        return poly_mod(clmul(a, b), self._modulus)

    @property
    def r(self):
        return self._r

    @property
    def modulus(self):
        return self._modulus

    @property
    def order(self):
        return self._q

    @property
    def is_primitive(self):
        return self._primitive

    @property
    def alpha(self):
        return FieldElement(poly_mod(2, self._modulus), self)

    @property
    def mul_table(self):
        return self._mul

    @property
    def inv_table(self):
        return self._inv

    @property
    def mul_rows(self):
        return self._mul_rows

    def element(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("Element belongs to a different field")
            return value
        return FieldElement(value, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self._q)]

    def nonzero(self):
        return [FieldElement(v, self) for v in range(1, self._q)]

    def mul(self, a, b):
        return int(self._mul[a, b])

    def inv(self, a):
        if a == 0:
            raise FieldError("Zero has no inverse")
        return int(self._inv[a])

    def pow(self, a, e):
        if e < 0:
            a = self.inv(a)
            e = -e
        ans = 1
        while e:
            if e & 1:
                ans = self.mul(ans, a)
            a = self.mul(a, a)
            e >>= 1
        return ans

    def alpha_exponent(self, value, limit=None):
        """Find the exponent e of smallest magnitude with alpha^e = value

        Positive exponents win ties, so alpha^(q-2) is reported as -1.

        Arguments:
            value {int} -- Nonzero field value

        Keyword Arguments:
            limit {int} -- Largest |e| to try (default: multiplicative order)

        Returns:
            int -- The exponent, or None if value is not a power of alpha
        """

        if value == 0:
            return None

        a = self.alpha.value
        ainv = self.inv(a)
        limit = self._q - 1 if limit is None else limit

        up = 1
        down = 1
        for e in range(limit + 1):
            if up == value:
                return e
            if down == value:
                return -e
            up = self.mul(up, a)
            down = self.mul(down, ainv)

        return None

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return False
        return (self._r, self._modulus) == (other._r, other._modulus)

    def __hash__(self):
        return hash((self._r, self._modulus))

    def __reduce__(self):
        return (FieldSpec.get, (self._r, self._modulus))

    def __repr__(self):
        return "GF(2^{0})/{1}".format(self._r, hex(self._modulus))

    def describe(self):
        """Short string in the r:hexpoly notation used on the command line"""
        return "{0}:{1}".format(self._r, hex(self._modulus))


class FieldElement(object):

    __slots__ = ("_value", "_field")

    def __init__(self, value, field):

        value = int(value)
        if not (0 <= value < field.order):
            raise FieldError(
                "Value {0} out of range for {1}".format(hex(value), field)
            )

        self._value = value
        self._field = field

    @property
    def value(self):
        return self._value

    @property
    def field(self):
        return self._field

    def _coerce(self, x):
        if isinstance(x, FieldElement):
            if x._field != self._field:
                raise FieldError("Operation between elements of different fields")
            return x._value
        elif isinstance(x, Integral):
            return FieldElement(x, self._field)._value
        raise TypeError("Unsupported operand for FieldElement")

    def __add__(self, x):
        return FieldElement(self._value ^ self._coerce(x), self._field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, x):
        return FieldElement(self._field.mul(self._value, self._coerce(x)), self._field)

    __rmul__ = __mul__

    def __truediv__(self, x):
        return self * self._field.inv(self._coerce(x))

    def __rtruediv__(self, x):
        return FieldElement(self._coerce(x), self._field) / self

    def __pow__(self, e):
        if not isinstance(e, Integral):
            raise TypeError("Field elements can only be raised to integer powers")
        if e < 0 and self._value == 0:
            raise FieldError("Zero can not be raised to a negative power")
        return FieldElement(self._field.pow(self._value, int(e)), self._field)

    def __neg__(self):
        return self

    def inverse(self):
        return FieldElement(self._field.inv(self._value), self._field)

    def __eq__(self, x):
        if isinstance(x, FieldElement):
            return self._field == x._field and self._value == x._value
        elif isinstance(x, Integral):
            return self._value == x
        return False

    def __hash__(self):
        return hash((self._value, self._field))

    def __int__(self):
        return self._value

    __index__ = __int__

    def __bool__(self):
        return self._value != 0

    def __repr__(self):
        return "FieldElement({0}, {1})".format(hex(self._value), self._field)

    def __str__(self):
        return hex(self._value)


def _check_same(a, b):
    if a.field != b.field:
        raise FieldError("Elements belong to different fields")


def add(a, b):
    _check_same(a, b)
    return a + b


def mul(a, b):
    _check_same(a, b)
    return a * b


def inv(a):
    if a.value == 0:
        raise FieldError("Zero has no inverse")
    return a.inverse()


def power(a, e):
    return a ** e


def mul_matrix(a):
    """Binary matrix of x -> a*x in the polynomial basis

    Arguments:
        a {FieldElement} -- Element to multiply by

    Returns:
        BinaryMatrix -- r x r matrix M with M.v(x) = v(a*x)
    """

    from nmdslab.linalg import BinaryMatrix

    f = a.field
    return BinaryMatrix(f.mul_rows[a.value], f.r)


_field_re = re.compile(r"^\s*(?:(\d+)\s*:)?\s*(0[xX][0-9a-fA-F]+|\d+)\s*$")


def parse_field(text):
    """Parse a field given as r:hexpoly (e.g. 4:0x13) or just hexpoly"""

    m = _field_re.match(text)
    if m is None:
        raise FieldError("Invalid field specification '{0}'".format(text))

    r, poly = m.groups()
    poly = int(poly, 0)
    r = int(r) if r is not None else _degree(poly)

    return FieldSpec.get(r, poly)


def default_field():
    return FieldSpec.get(*GF16)
