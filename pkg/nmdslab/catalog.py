"""catalog.py

Registry of the shipped NMDS constructions with their expected properties,
and the runner that rebuilds and re-checks each of them"""

import os
import re
import json
import logging

from nmdslab.gf import parse_field, FieldError
from nmdslab.linalg import (
    FieldMatrix,
    BlockMatrix,
    MatrixError,
    mat_mul,
    mat_pow,
    rank,
    det,
    nonzero_count,
    is_involutory,
    is_orthogonal,
)
from nmdslab.construct import (
    GdlsSpec,
    DlsSpec,
    ConstructionError,
    identity_permutation,
    family_index,
    family_matrix,
    companion,
    gdls,
    dls,
)
from nmdslab.branch import is_nmds
from nmdslab.cost import matrix_cost, composed_cost, ring_generator, CostError
from nmdslab.input.larkeval import parse_element, LarkExpressionError
from nmdslab.search import run_tasks

CATALOG_PATH = os.path.join(os.path.dirname(__file__), "data", "catalog.json")

KINDS = ("gdls", "dls", "family", "companion", "explicit", "product")
FLAGS = ("nmds", "mds", "involutory", "orthogonal", "singular")

_power_re = re.compile(r"^(?:0|1|a(?:\^(-?\d+))?)$")


class CatalogError(Exception):
    pass


def _lift_value(text, G):
    # 0, 1 and powers of alpha only; alpha^e becomes G^e
    t = str(text).replace(" ", "").replace("alpha", "a").replace("(", "").replace(")", "")
    m = _power_re.match(t)
    if m is None:
        raise CatalogError("Entry '{0}' is not a power of alpha".format(text))
    if t in ("0", "1"):
        return int(t)
    e = int(m.group(1)) if m.group(1) is not None else 1
    return G ** e


def _entry_grid(c):
    # n x n grid of entry expressions, for constructions without a dedicated
    # ring builder
    kind = c["kind"]
    if kind == "explicit":
        return [list(row) for row in c["rows"]]
    elif kind == "companion":
        coeffs = list(c["coeffs"])
        n = len(coeffs)
        grid = [["1" if j == i + 1 else "0" for j in range(n)] for i in range(n - 1)]
        return grid + [coeffs]
    elif kind == "family":
        params = list(c["params"])
        n = (len(params) + 1) // 2 if c["family"] in ("toeplitz", "hankel") else len(params)
        idx = family_index(c["family"], n)
        return [[params[idx[i, j]] for j in range(n)] for i in range(n)]

    raise CatalogError("No entry grid for construction kind '{0}'".format(kind))


def _strings(c):
    # Every entry expression appearing in a construction
    kind = c["kind"]
    if kind in ("gdls", "dls"):
        return list(c["d1"]) + list(c["d2"])
    elif kind == "product":
        out = []
        for f in c["factors"].values():
            out += _strings(f)
        return out
    return [v for row in _entry_grid(c) for v in row]


class CatalogEntry(object):
    def __init__(
        self,
        entry_id,
        construction,
        expected,
        field=None,
        generator=None,
        order=None,
        ctype="example",
        word_input=None,
        provenance="",
        lifted_from=None,
    ):
        """A catalogued matrix together with the properties claimed for it

        Arguments:
            entry_id {str} -- Unique identifier
            construction {dict} -- How to rebuild the matrix; kind is one of
                                   gdls, dls, family, companion, explicit or
                                   product
            expected {dict} -- Claimed properties: k (power at which the flags
                               hold), cost and metric, flags, nonzero

        Keyword Arguments:
            field {FieldSpec} -- Field of the entries (field constructions)
            generator {BinaryMatrix} -- Binary matrix replacing alpha (ring
                                        constructions)
            order {int} -- Order of the matrix
            ctype {str} -- recursive, nonrecursive or example
            word_input {str} -- Input word size, e.g. '4-bit'
            provenance {str} -- Where the construction comes from
            lifted_from {str} -- Id of the field entry a ring entry lifts
        """

        if construction.get("kind") not in KINDS:
            raise CatalogError(
                "Entry {0}: unknown construction kind '{1}'".format(
                    entry_id, construction.get("kind")
                )
            )
        if (field is None) == (generator is None):
            raise CatalogError(
                "Entry {0} needs exactly one of a field and a ring generator".format(
                    entry_id
                )
            )
        for f in expected.get("flags", {}):
            if f not in FLAGS:
                raise CatalogError("Entry {0}: unknown flag '{1}'".format(entry_id, f))

        self.id = entry_id
        self.construction = construction
        self.expected = expected
        self.field = field
        self.generator = generator
        self.order = order
        self.type = ctype
        self.input = word_input
        self.provenance = provenance
        self.lifted_from = lifted_from

    @property
    def m(self):
        return None if self.generator is None else self.generator.n

    @property
    def power(self):
        """Power of the matrix at which the flags are claimed"""
        return self.expected.get("k", 1)

    @property
    def ring(self):
        if self.generator is None:
            return self.field.describe()
        return "GL({0},F2)".format(self.m)

    def _value(self, text):
        if self.generator is not None:
            return _lift_value(text, self.generator)
        return parse_element(str(text), self.field).value

    def _build(self, c):
        kind = c["kind"]
        vals = self._value
        if kind == "gdls":
            spec = GdlsSpec(
                c["rho1"],
                c["rho2"],
                [vals(v) for v in c["d1"]],
                [vals(v) for v in c["d2"]],
                field=self.field,
                m=self.m,
            )
            return gdls(spec)
        elif kind == "dls":
            d1 = [vals(v) for v in c["d1"]]
            d2 = [vals(v) for v in c["d2"]]
            if self.generator is None:
                return dls(DlsSpec(c["rho"], d1, d2, self.field))
            n = len(c["rho"])
            return gdls(GdlsSpec(c["rho"], identity_permutation(n), d1, d2, m=self.m))
        elif kind == "product":
            M = None
            for F in self._factors(c):
                M = F if M is None else mat_mul(M, F)
            return M

        if self.generator is not None:
            grid = [[vals(v) for v in row] for row in _entry_grid(c)]
            return BlockMatrix(grid, self.m)
        elif kind == "family":
            return family_matrix(c["family"], [vals(v) for v in c["params"]], self.field)
        elif kind == "companion":
            return companion([vals(v) for v in c["coeffs"]], self.field)
        return FieldMatrix([[vals(v) for v in row] for row in c["rows"]], self.field)

    def _factors(self, c):
        built = {name: self._build(f) for name, f in c["factors"].items()}
        try:
            return [built[name] for name in c["word"]]
        except KeyError as e:
            raise CatalogError("Entry {0}: unknown factor {1}".format(self.id, e))

    def _checked(self, func, *args):
        try:
            return func(*args)
        except (
            ConstructionError,
            MatrixError,
            FieldError,
            LarkExpressionError,
            KeyError,
            TypeError,
        ) as e:
            raise CatalogError("Entry {0}: {1}".format(self.id, e))

    def matrix(self):
        """Rebuild the matrix from its construction

        Raises:
            CatalogError -- If the construction is invalid
        """
        return self._checked(self._build, self.construction)

    def factors(self):
        """Factor matrices in product order, or [matrix] for a single matrix"""
        if self.construction["kind"] == "product":
            return self._checked(self._factors, self.construction)
        return [self.matrix()]

    def printed(self):
        """The explicitly stored product of a field entry, if any"""
        rows = self.construction.get("rows")
        if self.construction["kind"] != "product" or rows is None:
            return None
        if self.generator is not None:
            # Printed rows hold sums of powers, which have no ring image
            return None
        return self._checked(self._build, {"kind": "explicit", "rows": rows})

    def to_dict(self):
        d = {
            "id": self.id,
            "order": self.order,
            "type": self.type,
            "input": self.input,
            "ring": self.ring,
            "construction": self.construction,
            "expected": self.expected,
            "provenance": self.provenance,
        }
        if self.lifted_from is not None:
            d["lifted_from"] = self.lifted_from
        return d

    def __repr__(self):
        return "CatalogEntry({0})".format(self.id)


def lift_to_ring(entry, C, entry_id=None, expected=None, provenance=None):
    """Replace alpha by the binary matrix C in a field construction

    Every entry of the source must be 0, 1 or a power of alpha; alpha^e
    becomes C^e and the result is a matrix over the ring of m x m binary
    matrices.

    Arguments:
        entry {CatalogEntry} -- Field entry to lift
        C {BinaryMatrix} -- Nonsingular binary matrix replacing alpha

    Keyword Arguments:
        entry_id {str} -- Id of the lifted entry (default: source id + '-ring')
        expected {dict} -- Claimed properties of the lift (default: those of
                           the source, without a cost)
        provenance {str} -- Provenance of the lift

    Returns:
        CatalogEntry -- The lifted entry

    Raises:
        CatalogError -- If the source is already lifted or has an entry that
                        is not a power of alpha
    """

    if entry.generator is not None:
        raise CatalogError("Entry {0} is already over a ring".format(entry.id))
    if not C.is_square:
        raise CatalogError("The replacement of alpha must be square")

    for t in _strings(entry.construction):
        _lift_value(t, C)

    if expected is None:
        expected = {k: v for k, v in entry.expected.items() if k not in ("cost", "metric")}

    return CatalogEntry(
        entry_id or entry.id + "-ring",
        entry.construction,
        expected,
        generator=C,
        order=entry.order,
        ctype=entry.type,
        word_input="{0}-bit".format(C.n),
        provenance=provenance if provenance is not None else entry.provenance,
        lifted_from=entry.id,
    )


class Catalog(object):
    def __init__(self, entries, references=()):
        ids = [e.id for e in entries]
        dup = set(i for i in ids if ids.count(i) > 1)
        if dup:
            raise CatalogError("Duplicate catalog ids: {0}".format(", ".join(sorted(dup))))

        self._entries = {e.id: e for e in entries}
        self._references = list(references)

    @property
    def references(self):
        return self._references

    @property
    def ids(self):
        return sorted(self._entries)

    def get(self, entry_id):
        try:
            return self._entries[entry_id]
        except KeyError:
            raise CatalogError("No catalog entry '{0}'".format(entry_id))

    def __contains__(self, entry_id):
        return entry_id in self._entries

    def __iter__(self):
        return iter(self._entries[i] for i in self.ids)

    def __len__(self):
        return len(self._entries)


def _entry_from_dict(d, known):
    try:
        eid = d["id"]
        if "lift" in d:
            src = known.get(d["lift"]["source"])
            if src is None:
                raise CatalogError(
                    "Entry {0} lifts unknown entry {1}".format(eid, d["lift"]["source"])
                )
            try:
                C = ring_generator(d["lift"]["generator"])
            except CostError as e:
                raise CatalogError("Entry {0}: {1}".format(eid, e))
            return lift_to_ring(src, C, eid, d.get("expected", {}), d.get("provenance"))

        return CatalogEntry(
            eid,
            d["construction"],
            d.get("expected", {}),
            field=parse_field(d["field"]),
            order=d.get("order"),
            ctype=d.get("type", "example"),
            word_input=d.get("input"),
            provenance=d.get("provenance", ""),
        )
    except (KeyError, TypeError, FieldError) as e:
        raise CatalogError("Malformed catalog entry {0}: {1}".format(d.get("id"), e))


def catalog_from_dict(data):
    known = {}
    entries = []
    # Lifts may only refer to entries listed before them
    for d in data.get("entries", []):
        e = _entry_from_dict(d, known)
        known[e.id] = e
        entries.append(e)
    return Catalog(entries, data.get("references", []))


def load_catalog(path=None):
    """Load a catalog file (default: the shipped catalog)

    Raises:
        CatalogError -- If the file is not valid JSON or an entry is malformed
    """

    path = CATALOG_PATH if path is None else path
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise CatalogError("Invalid catalog file {0}: {1}".format(path, e))

    cat = catalog_from_dict(data)
    logging.debug("Loaded {0} catalog entries from {1}".format(len(cat), path))
    return cat


def _matches(entry, key, value):
    if key == "order":
        return entry.order == int(value)
    elif key == "type":
        return entry.type == value
    elif key == "input":
        return entry.input == value
    elif key == "ring":
        return entry.ring == value
    elif key == "id":
        return entry.id == value
    raise CatalogError("Unknown catalog filter '{0}'".format(key))


def catalog_list(filter=None, catalog=None):
    """Catalog entries matching every key of filter (order, type, input,
    ring, id), sorted by (order, type, id)"""

    catalog = load_catalog() if catalog is None else catalog
    filter = filter or {}
    sel = [e for e in catalog if all(_matches(e, k, v) for k, v in filter.items())]
    return sorted(sel, key=lambda e: (e.order or 0, e.type, e.id))


class EntryResult(object):
    def __init__(self, entry_id, checks=None, audit=None, error=None):
        """Outcome of the verification of one catalog entry

        Arguments:
            entry_id {str} -- Id of the entry

        Keyword Arguments:
            checks {[dict]} -- One dict per checked claim, with keys check,
                               expected, actual
            audit {dict} -- Recorded but not judged results
            error {str} -- Why the entry could not be rebuilt
        """
        self.id = entry_id
        self.checks = checks or []
        self.audit = audit or {}
        self.error = error

    @property
    def passed(self):
        return self.error is None and all(
            c["expected"] == c["actual"] for c in self.checks
        )

    @property
    def mismatches(self):
        return [c for c in self.checks if c["expected"] != c["actual"]]

    def to_dict(self):
        d = {
            "id": self.id,
            "passed": self.passed,
            "checks": self.checks,
            "audit": self.audit,
        }
        if self.error is not None:
            d["error"] = self.error
        return d


class VerificationReport(object):
    def __init__(self, results):
        self.results = sorted(results, key=lambda r: r.id)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    def to_dict(self):
        return {
            "passed": self.passed,
            "entries": [r.to_dict() for r in self.results],
        }


def verify_entry(entry):
    """Rebuild an entry and compare every claimed property with the
    computed one

    The flags (nmds, mds, involutory, orthogonal, singular) and the nonzero
    count are checked on M^k, k being the claimed power (1 if none). The NMDS
    verdict at k - 1 is recorded in the audit only.

    Returns:
        EntryResult -- The outcome
    """

    exp = entry.expected
    checks = []
    audit = {}

    def check(name, expected, actual):
        checks.append({"check": name, "expected": expected, "actual": actual})

    try:
        M = entry.matrix()
        k = entry.power
        Mk = mat_pow(M, k) if k > 1 else M

        flags = exp.get("flags", {})
        if "nmds" in flags or "mds" in flags:
            v = is_nmds(Mk)
            if "nmds" in flags:
                check("nmds", flags["nmds"], v.is_nmds)
            if "mds" in flags:
                check("mds", flags["mds"], v.is_mds)
            if k > 1:
                audit["nmds_at_k_minus_1"] = is_nmds(mat_pow(M, k - 1)).is_nmds
        if "involutory" in flags:
            check("involutory", flags["involutory"], is_involutory(Mk))
        if "orthogonal" in flags:
            check("orthogonal", flags["orthogonal"], is_orthogonal(Mk))
        if "singular" in flags:
            if isinstance(Mk, FieldMatrix):
                singular = det(Mk).value == 0
            else:
                singular = rank(Mk) < Mk.n * Mk.m
            check("singular", flags["singular"], singular)

        if "nonzero" in exp:
            check("nonzero", exp["nonzero"], nonzero_count(Mk))

        if "cost" in exp:
            metric = exp.get("metric", "auto")
            if entry.construction["kind"] == "product":
                cost = composed_cost(entry.factors(), metric)
            else:
                rep = matrix_cost(M, metric)
                cost = rep.total
                audit["decomposition"] = rep.decomposition()
            check("cost", exp["cost"], cost)

        P = entry.printed()
        if P is not None:
            check("printed_product", True, P == M)

    except (CatalogError, CostError, MatrixError) as e:
        logging.warning("Catalog entry {0} could not be verified: {1}".format(entry.id, e))
        return EntryResult(entry.id, checks, audit, error=str(e))

    res = EntryResult(entry.id, checks, audit)
    if res.passed:
        logging.info("Catalog entry {0}: pass".format(entry.id))
    else:
        logging.warning(
            "Catalog entry {0}: FAIL ({1})".format(
                entry.id, ", ".join(c["check"] for c in res.mismatches)
            )
        )
    return res


def catalog_verify(entries=None, catalog=None, jobs=1, use_mpi=False):
    """Verify catalog entries, independently and possibly in parallel

    Keyword Arguments:
        entries {[CatalogEntry | str]} -- Entries or ids to verify (default:
                                          the whole catalog)
        catalog {Catalog} -- Catalog to resolve ids in (default: shipped)
        jobs {int} -- Worker processes
        use_mpi {bool} -- Distribute the entries over MPI ranks

    Returns:
        VerificationReport -- Results ordered by id
    """

    if entries is None or any(isinstance(e, str) for e in entries):
        catalog = load_catalog() if catalog is None else catalog
    if entries is None:
        entries = list(catalog)
    entries = [catalog.get(e) if isinstance(e, str) else e for e in entries]

    results = run_tasks(verify_entry, entries, jobs, use_mpi)
    return VerificationReport(results)
