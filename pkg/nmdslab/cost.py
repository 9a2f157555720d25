"""cost.py

XOR-count cost model: fixed XOR, d-XOR and s-XOR counts of field elements
and binary matrices, and total implementation cost of matrices and of
products of matrices"""

import logging
import threading
from collections import deque

from nmdslab.gf import FieldElement, FieldSpec, mul_matrix, GF256
from nmdslab.linalg import FieldMatrix, BlockMatrix, BinaryMatrix

# Largest degree for which the s-XOR breadth-first search is run
SXOR_MAX_DEGREE = 4

METRICS = ("auto", "s-xor", "d-xor", "catalog")

# s-XOR counts of small powers of alpha for fields too large to search,
# keyed by (r, modulus) and then by the exponent of alpha
ELEMENT_XOR_TABLE = {GF256: {0: 0, 1: 3, -1: 3, 2: 4, -2: 4}}

# Binary matrices replacing alpha in GL(m, F2) lifts, as nonzero positions
# per row, with the XOR counts of their small powers
RING_GENERATORS = {
    "C": {
        "positions": [[2], [3], [4], [5], [6], [7], [8], [1, 3]],
        "costs": {0: 0, 1: 1, -1: 1, 2: 2, -2: 2},
    },
    "C8": {
        "positions": [[8], [1, 2], [2, 8], [3], [4], [5], [6], [7]],
        "costs": {0: 0, 1: 2, -1: 2, 2: 4, -2: 4},
    },
}


class CostError(Exception):
    pass


def ring_generator(name):
    """The binary matrix of a named ring generator ('C' or 'C8')"""

    try:
        g = RING_GENERATORS[name]
    except KeyError:
        raise CostError("Unknown ring generator '{0}'".format(name))
    return BinaryMatrix.from_positions(g["positions"])


_ring_cost_cache = {}


def _ring_costs(m):
    # Stored XOR counts of the generator powers, keyed by the binary matrix
    if m not in _ring_cost_cache:
        table = {}
        for name, g in RING_GENERATORS.items():
            if len(g["positions"]) != m:
                continue
            G = ring_generator(name)
            for e, c in g["costs"].items():
                table[G ** e] = c
        _ring_cost_cache[m] = table
    return _ring_cost_cache[m]


class CostReport(object):
    def __init__(self, fixed_xor, element_costs, word, metric, bound=False):
        """Implementation cost of a matrix

        Arguments:
            fixed_xor {int} -- Fixed XOR K of the matrix
            element_costs {dict} -- (i, j) -> XOR count, 0-based positions of
                                    the nonzero entries
            word {int} -- Word size in bits (r, or the block size m)
            metric {str} -- Metric used for the entries

        Keyword Arguments:
            bound {bool} -- Some entries were costed by an upper bound only
        """

        self.fixed_xor = fixed_xor
        self.element_costs = dict(element_costs)
        self.word = word
        self.metric = metric
        self.bound = bound

    @property
    def elements_total(self):
        return sum(self.element_costs.values())

    @property
    def total(self):
        return self.elements_total + self.fixed_xor * self.word

    def decomposition(self):
        """The cost as a sum, e.g. '(1+2+1+2) + 4·4 = 22'"""

        costs = [self.element_costs[k] for k in sorted(self.element_costs)]
        costs = [c for c in costs if c]
        tail = "{0}·{1} = {2}".format(self.fixed_xor, self.word, self.total)
        if not costs:
            return tail
        elif len(costs) == 1:
            return "{0} + {1}".format(costs[0], tail)
        return "({0}) + {1}".format("+".join(str(c) for c in costs), tail)

    def to_dict(self):
        return {
            "fixed_xor": self.fixed_xor,
            "word": self.word,
            "metric": self.metric,
            "bound": self.bound,
            "elements": [
                [i + 1, j + 1, c] for (i, j), c in sorted(self.element_costs.items())
            ],
            "total": self.total,
            "decomposition": self.decomposition(),
        }

    def __repr__(self):
        return "CostReport({0})".format(self.decomposition())


def _row_counts(M):
    if isinstance(M, FieldMatrix):
        return [int((row != 0).sum()) for row in M.values]
    elif isinstance(M, BlockMatrix):
        return [sum(not b.is_zero() for b in row) for row in M.blocks]
    elif isinstance(M, BinaryMatrix):
        return [bin(r).count("1") for r in M.rows]
    raise TypeError("Unsupported matrix type")


def fixed_xor(M):
    """Fixed XOR K = sum over rows of (nonzero entries - 1)

    Raises:
        CostError -- If a row has no nonzero entry
    """

    counts = _row_counts(M)
    for i, k in enumerate(counts):
        if k == 0:
            raise CostError("Row {0} is all zero".format(i + 1))
    return sum(k - 1 for k in counts)


def _as_binary(e):
    if isinstance(e, FieldElement):
        if e.value == 0:
            raise CostError("Zero has no XOR count")
        return mul_matrix(e)
    elif isinstance(e, BinaryMatrix):
        if not e.is_square:
            raise CostError("Only square binary matrices have a XOR count")
        return e
    raise TypeError("Unsupported element type")


def d_xor(e):
    """Direct XOR count wt(M) - r of the multiplication matrix of e (or of a
    binary matrix)

    Raises:
        CostError -- If the input is zero or singular
    """

    B = _as_binary(e)
    if B.rank() < B.n:
        raise CostError("Singular matrices have no XOR count")
    return B.weight() - B.n


class _SxorTable(object):
    def __init__(self, r):
        """Breadth-first search over GL(r, 2) modulo row permutations

        Generators are right multiplications by I + E_{i,j}, i != j, which
        commute with the row permutations. Cosets are keyed by their sorted
        tuple of rows.
        """

        self.r = r
        start = tuple(sorted(1 << i for i in range(r)))
        parent = {start: None}
        dist = {start: 0}
        queue = deque([start])
        moves = [(i, j) for i in range(r) for j in range(r) if i != j]

        while queue:
            key = queue.popleft()
            d = dist[key]
            for i, j in moves:
                rows = tuple(
                    sorted(row ^ (1 << j) if (row >> i) & 1 else row for row in key)
                )
                if rows not in dist:
                    dist[rows] = d + 1
                    parent[rows] = (key, (i, j))
                    queue.append(rows)

        self.dist = dist
        self.parent = parent
        logging.debug("s-XOR table for r = {0}: {1} cosets".format(r, len(dist)))

    def key(self, B):
        return tuple(sorted(B.rows))

    def distance(self, B):
        return self.dist[self.key(B)]

    def path(self, B):
        steps = []
        key = self.key(B)
        while self.parent[key] is not None:
            key, step = self.parent[key]
            steps.append(step)
        return steps[::-1]


_sxor_tables = {}
_sxor_lock = threading.Lock()


def _sxor_table(r):
    if r not in _sxor_tables:
        with _sxor_lock:
            if r not in _sxor_tables:
                _sxor_tables[r] = _SxorTable(r)
    return _sxor_tables[r]


def _sxor_input(e):
    B = _as_binary(e)
    if B.n > SXOR_MAX_DEGREE:
        raise CostError(
            "s-XOR search is limited to r <= {0}; use the catalog metric".format(
                SXOR_MAX_DEGREE
            )
        )
    if B.rank() < B.n:
        raise CostError("Singular matrices have no XOR count")
    return B


def s_xor(e):
    """Sequential XOR count: the least t such that the multiplication
    matrix of e is a permutation matrix times t factors I + E_{i,j}

    Raises:
        CostError -- If r > 4 or e is zero
    """

    B = _sxor_input(e)
    return _sxor_table(B.n).distance(B)


def s_xor_decomposition(e):
    """Elementary factors realising the s-XOR count of e

    Returns:
        [(int, int)] -- 1-based (i, j) of the factors I + E_{i,j}, in the
                        order they multiply on the right of the permutation
    """

    B = _sxor_input(e)
    return [(i + 1, j + 1) for i, j in _sxor_table(B.n).path(B)]


def catalog_xor(e, field=None):
    """Stored s-XOR count of a small power of alpha

    Raises:
        CostError -- If the field or the element is not in the table
    """

    field = e.field if field is None else field
    if e.value == 0:
        raise CostError("Zero has no XOR count")
    if e.value == 1:
        return 0

    table = ELEMENT_XOR_TABLE.get((field.r, field.modulus))
    if table is None:
        raise CostError("No stored XOR counts for {0}".format(field))

    exp = field.alpha_exponent(e.value, limit=max(abs(k) for k in table))
    if exp is None or exp not in table:
        raise CostError(
            "No stored XOR count for {0} over {1}".format(e, field)
        )

    return table[exp]


def element_xor(e, metric="auto"):
    """XOR count of a nonzero field element under a metric

    The auto metric uses s-XOR for r <= 4, then stored values, then the
    d-XOR count as an upper bound.

    Returns:
        (int, bool) -- The count and whether it is only an upper bound
    """

    if metric == "s-xor":
        return s_xor(e), False
    elif metric == "d-xor":
        return d_xor(e), False
    elif metric == "catalog":
        return catalog_xor(e), False
    elif metric != "auto":
        raise CostError("Unknown metric '{0}'".format(metric))

    if e.value == 1:
        return 0, False
    if e.field.r <= SXOR_MAX_DEGREE:
        return s_xor(e), False
    try:
        return catalog_xor(e), False
    except CostError:
        return d_xor(e), True


def _resolved_metric(metric, field):
    if metric != "auto":
        return metric
    if field.r <= SXOR_MAX_DEGREE:
        return "s-xor"
    return "catalog"


def matrix_cost(M, metric="auto"):
    """Total XOR count sum(XOR(entries)) + K * word of a matrix

    Arguments:
        M {FieldMatrix | BlockMatrix | BinaryMatrix} -- The matrix

    Keyword Arguments:
        metric {str} -- One of auto, s-xor, d-xor, catalog (field matrices)

    Returns:
        CostReport -- The full report
    """

    K = fixed_xor(M)
    costs = {}
    bound = False

    if isinstance(M, FieldMatrix):
        f = M.field
        resolved = _resolved_metric(metric, f)
        for (i, j), v in _nonzero_items(M):
            c, b = element_xor(FieldElement(v, f), metric)
            costs[(i, j)] = c
            if b:
                bound = True
                resolved = "d-xor"
        return CostReport(K, costs, f.r, resolved, bound)

    elif isinstance(M, BlockMatrix):
        stored = _ring_costs(M.m)
        resolved = "catalog"
        for i, row in enumerate(M.blocks):
            for j, b in enumerate(row):
                if b.is_zero():
                    continue
                if b in stored:
                    costs[(i, j)] = stored[b]
                else:
                    try:
                        costs[(i, j)] = d_xor(b)
                    except CostError:
                        raise CostError(
                            "Singular block at ({0}, {1})".format(i + 1, j + 1)
                        )
                    resolved = "d-xor"
        return CostReport(K, costs, M.m, resolved)

    elif isinstance(M, BinaryMatrix):
        for i, r in enumerate(M.rows):
            for j in range(M.shape[1]):
                if (r >> j) & 1:
                    costs[(i, j)] = 0
        return CostReport(K, costs, 1, "d-xor")

    raise TypeError("Unsupported matrix type")


def _nonzero_items(M):
    vals = M.values
    for i in range(vals.shape[0]):
        for j in range(vals.shape[1]):
            if vals[i, j]:
                yield (i, j), int(vals[i, j])


def composed_cost(factors, metric="auto"):
    """Cost of a product implemented factor by factor: the sum of the
    factor costs, repeats included"""

    if len(factors) == 0:
        raise CostError("No factors given")
    return sum(matrix_cost(F, metric).total for F in factors)


def family_cost_lower_bound(n, field):
    """Least XOR count of an NMDS circulant, left-circulant or Hadamard
    matrix of order n >= 5: XOR(beta) * n + n(n - 2) * r, with XOR(beta) the
    cheapest element other than 0 and 1

    Raises:
        CostError -- For n < 5
    """

    if n < 5:
        raise CostError("The bound holds for orders n >= 5 only")
    if not isinstance(field, FieldSpec):
        raise TypeError("field must be a FieldSpec")

    if field.r <= SXOR_MAX_DEGREE:
        cheapest = min(
            (s_xor(e) for e in field.nonzero() if e.value != 1), default=0
        )
    else:
        # Any element other than 1 costs at least one XOR
        cheapest = 1

    return cheapest * n + n * (n - 2) * field.r
