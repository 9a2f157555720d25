"""search.py

Searches for recursive NMDS matrices: exhaustive search of DLS matrices
over a domain reduced by equivalence, seeded random search of GDLS
matrices, exhaustive checks of the K = 1 impossibility and of the binary
branch-number bound, and scans of structured matrix families"""

import os
import json
import time
import logging
from math import factorial
from itertools import combinations, product, permutations
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.special import comb

from nmdslab.gf import FieldSpec
from nmdslab.linalg import FieldMatrix, batch_mul, mat_mul, mat_pow, nonzero_count
from nmdslab.construct import (
    DlsSpec,
    GdlsSpec,
    Permutation,
    cycle_permutation,
    derangement_count,
    family_index,
    family_params,
    FAMILIES,
)
from nmdslab.branch import is_nmds, is_k_nmds
from nmdslab.cost import matrix_cost
from nmdslab.mpi import mpi_controller
from nmdslab.utils import hexstr

EXISTS = "Exists"
DNE = "DNE"
UNRESOLVED = "Unresolved"

MODES = (
    "reduced-dls",
    "random-gdls",
    "exhaustive-k1",
    "binary-branch-bound",
    "family-scan",
)
PREDICATES = ("any", "involutory", "orthogonal")

# Reduced domains larger than this need an explicit long-run opt-in
LONG_THRESHOLD = 10 ** 8
# Parameter vectors handled at once by the vectorised scans
SCAN_CHUNK = 2 ** 14
# Random candidates per worker task
RANDOM_CHUNK = 256


class SearchError(Exception):
    pass


class BudgetExhaustedError(SearchError):
    pass


class SearchCampaign(object):
    def __init__(
        self,
        n,
        l,
        field,
        k_set,
        mode="reduced-dls",
        seed=0,
        budget=None,
        name=None,
        entries=None,
        rho1=None,
        rho2=None,
        d1="identity",
        family="circulant",
        predicate="any",
        sample=None,
        long=False,
    ):
        """Parameters of a search

        Arguments:
            n {int} -- Matrix order
            l {int} -- Fixed XOR K of the candidates
            field {FieldSpec} -- Field of the entries
            k_set {[int]} -- Powers to test

        Keyword Arguments:
            mode {str} -- One of reduced-dls, random-gdls, exhaustive-k1,
                          binary-branch-bound, family-scan
            seed {int} -- Seed of the random streams
            budget {int} -- Cap on the candidates examined
            name {str} -- Campaign name
            entries {[int]} -- Entry set of the random GDLS search
            rho1 {Permutation} -- Fixed rho1 of the random GDLS search
            rho2 {Permutation} -- Fixed rho2 of the random GDLS search
            d1 {str} -- 'identity' or 'free' D1 in the random GDLS search
            family {str} -- Family of a family scan
            predicate {str} -- Structural predicate of a family scan
            sample {int} -- Number of random samples instead of exhaustion
            long {bool} -- Allow domains above the long-run threshold

        Raises:
            SearchError -- If the parameters are inconsistent
        """

        if mode not in MODES:
            raise SearchError("Invalid search mode '{0}'".format(mode))
        if not isinstance(field, FieldSpec):
            raise SearchError("field must be a FieldSpec")
        if n < 2:
            raise SearchError("Invalid order {0}".format(n))
        if l < 0 or l > n:
            raise SearchError("Invalid fixed XOR {0} for order {1}".format(l, n))
        k_set = tuple(sorted(set(int(k) for k in k_set)))
        if len(k_set) == 0 or k_set[0] < 1:
            raise SearchError("The set of powers must contain positive integers")
        if budget is not None and budget < 0:
            raise SearchError("Invalid budget {0}".format(budget))
        if d1 not in ("identity", "free"):
            raise SearchError("Invalid D1 mode '{0}'".format(d1))
        if family not in FAMILIES:
            raise SearchError("Invalid family '{0}'".format(family))
        if predicate not in PREDICATES:
            raise SearchError("Invalid predicate '{0}'".format(predicate))

        self.n = int(n)
        self.l = int(l)
        self.field = field
        self.k_set = k_set
        self.mode = mode
        self.seed = int(seed)
        self.budget = None if budget is None else int(budget)
        self.name = name
        self.entries = None if entries is None else tuple(int(e) for e in entries)
        self.rho1 = None if rho1 is None else Permutation(rho1)
        self.rho2 = None if rho2 is None else Permutation(rho2)
        self.d1 = d1
        self.family = family
        self.predicate = predicate
        self.sample = None if sample is None else int(sample)
        self.long = bool(long)

    def signature(self):
        """Parameters that identify the results of a campaign"""
        return {
            "mode": self.mode,
            "n": self.n,
            "l": self.l,
            "field": self.field.describe(),
            "k_set": list(self.k_set),
            "seed": self.seed,
            "budget": self.budget,
        }

    def to_dict(self):
        d = self.signature()
        d["name"] = self.name
        if self.mode == "random-gdls":
            d["entries"] = None if self.entries is None else [hexstr(e) for e in self.entries]
            d["rho1"] = None if self.rho1 is None else list(self.rho1.images)
            d["rho2"] = None if self.rho2 is None else list(self.rho2.images)
            d["d1"] = self.d1
        if self.mode == "family-scan":
            d["family"] = self.family
            d["predicate"] = self.predicate
            d["sample"] = self.sample
        return d


class SearchVerdict(object):
    def __init__(self, n, l, k, status, witness=None, note=None, cost=None):
        self.n = n
        self.l = l
        self.k = k
        self.status = status
        self.witness = witness
        self.note = note
        self.cost = cost

    def to_dict(self):
        d = {"n": self.n, "l": self.l, "k": self.k, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
        if self.note is not None:
            d["note"] = self.note
        if self.cost is not None:
            d["cost"] = self.cost
        return d

    def __repr__(self):
        return "SearchVerdict(n={0}, l={1}, k={2}, {3})".format(
            self.n, self.l, self.k, self.status
        )


class SearchReport(object):
    def __init__(self, campaign, verdicts=None, candidates_examined=0, elapsed=0.0):
        self.campaign = campaign
        self.verdicts = list(verdicts or [])
        self.candidates_examined = candidates_examined
        self.elapsed = elapsed
        self.hits = []
        self.stats = {}

    def verdict(self, k):
        for v in self.verdicts:
            if v.k == k:
                return v
        return None

    @property
    def unresolved(self):
        return any(v.status == UNRESOLVED for v in self.verdicts)

    def to_dict(self, timing=True):
        d = {
            "campaign": self.campaign.to_dict(),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "candidates_examined": self.candidates_examined,
        }
        if self.hits:
            d["hits"] = self.hits
        if self.stats:
            d["stats"] = self.stats
        if timing:
            d["elapsed"] = round(self.elapsed, 3)
        return d


def run_tasks(worker, tasks, jobs=1, use_mpi=False, stop=None):
    """Evaluate worker on every task, in waves of jobs tasks, and return the
    results in task order. After every wave, stop(results) may end the run
    early; the results of the whole wave are kept either way."""

    if use_mpi and mpi_controller.size > 1:
        return mpi_controller.map_tasks(worker, tasks)

    results = []
    if jobs <= 1:
        for t in tasks:
            results.append(worker(t))
            if stop is not None and stop(results):
                break
        return results

    with ProcessPoolExecutor(max_workers=jobs) as executor:
        for w0 in range(0, len(tasks), jobs):
            futures = [executor.submit(worker, t) for t in tasks[w0 : w0 + jobs]]
            results += [f.result() for f in futures]
            if stop is not None and stop(results):
                break

    return results


# Reduced DLS domain


def _support_patterns(n, l):
    return list(combinations(range(n), l))


def reduced_dls_domain_size(n, l, field):
    """C(n, l) * (q - 1)^(1 + l) candidates"""
    q = field.order
    return int(comb(n, l, exact=True)) * (q - 1) ** (1 + l)


def unreduced_dls_domain_size(n, l, r):
    """D(n) * C(n, l) * 2^(r(n + l)): every derangement, every D1 and every
    D2 with l nonzero entries, zeros included"""
    return derangement_count(n) * int(comb(n, l, exact=True)) * 2 ** (r * (n + l))


def reduced_dls_domain(n, l, field, pattern=None):
    """Iterate over DLS(rho; diag(a, 1, ..., 1), D2) with rho = [2, ..., n, 1],
    a nonzero and D2 with exactly l nonzero entries

    Arguments:
        n {int} -- Order
        l {int} -- Number of nonzero entries of D2
        field {FieldSpec} -- Field of the entries

    Keyword Arguments:
        pattern {int} -- Only iterate over the D2 support with this index
                         (supports in combinations order)

    Yields:
        DlsSpec -- The candidates, support by support
    """

    rho = cycle_permutation(n)
    nonzero = range(1, field.order)
    patterns = _support_patterns(n, l)
    if pattern is not None:
        patterns = [patterns[pattern]]

    for supp in patterns:
        for a in nonzero:
            d1 = (a,) + (1,) * (n - 1)
            for vals in product(nonzero, repeat=l):
                d2 = [0] * n
                for p, v in zip(supp, vals):
                    d2[p] = v
                yield DlsSpec(rho, d1, d2, field)


def _scan_dls_partition(task):
    # Worker: scan one D2 support, stopping when every power has a hit
    n, l, r, modulus, index, live_k = task
    field = FieldSpec.get(r, modulus)
    threshold = n * n - n

    hits = {}
    examined = 0
    rejected = 0
    for spec in reduced_dls_domain(n, l, field, pattern=index):
        examined += 1
        B = spec.matrix()
        P = mat_pow(B, live_k[0])
        k = live_k[0]
        for kk in live_k:
            while k < kk:
                P = mat_mul(P, B)
                k += 1
            if kk in hits:
                continue
            if nonzero_count(P) < threshold:
                rejected += 1
                continue
            if is_nmds(P):
                hits[kk] = spec.to_dict()
        if len(hits) == len(live_k):
            break

    return {
        "index": index,
        "hits": {str(k): v for k, v in hits.items()},
        "examined": examined,
        "rejected": rejected,
    }


def _load_checkpoint(path, signature):
    if path is None or not os.path.isfile(path):
        return {}
    with open(path) as f:
        data = json.load(f)
    if data.get("signature") != signature:
        logging.warning(
            "Checkpoint {0} belongs to a different campaign; ignoring it".format(path)
        )
        return {}
    return {int(k): v for k, v in data.get("partitions", {}).items()}


def _save_checkpoint(path, signature, done):
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        json.dump(
            {"signature": signature, "partitions": {str(k): v for k, v in done.items()}},
            f,
            sort_keys=True,
            indent=2,
        )
    os.replace(tmp, path)


def _spec_from_dict(d, field):
    if d["kind"] == "dls":
        return DlsSpec(
            d["rho"], [int(v, 0) for v in d["d1"]], [int(v, 0) for v in d["d2"]], field
        )
    return GdlsSpec(
        d["rho1"],
        d["rho2"],
        [int(v, 0) for v in d["d1"]],
        [int(v, 0) for v in d["d2"]],
        field,
    )


def _consume(results, live_k):
    # Supports in order, as a sequential run would take them: stop at a gap
    # or as soon as every power has a hit
    consumed = []
    found = {}
    i = 0
    while i in results:
        res = results[i]
        consumed.append(res)
        for k, spec in sorted(res["hits"].items(), key=lambda x: int(x[0])):
            found.setdefault(int(k), spec)
        if all(k in found for k in live_k):
            break
        i += 1
    return consumed, found


def search_k_nmds_dls(campaign, jobs=1, checkpoint=None, use_mpi=False):
    """Exhaustive search of k-NMDS DLS matrices over the reduced domain

    Powers k < n - 2 are settled as DNE without enumeration. Candidates are
    filtered by the nonzero count of B^k before the full NMDS check. The
    domain is split by D2 support; a support is scanned until every power
    has a hit, and supports are consumed in order until every power is
    settled or the budget can not cover the next one.

    Arguments:
        campaign {SearchCampaign} -- Campaign in reduced-dls mode

    Keyword Arguments:
        jobs {int} -- Worker processes
        checkpoint {str} -- JSON file recording finished supports
        use_mpi {bool} -- Distribute supports over MPI ranks

    Returns:
        SearchReport -- Verdict per power, identical for any number of jobs

    Raises:
        SearchError -- If the domain is above the long-run threshold and the
                       campaign does not allow it
    """

    if campaign.mode != "reduced-dls":
        raise SearchError("Campaign mode is not reduced-dls")

    t0 = time.time()
    n, l, field = campaign.n, campaign.l, campaign.field
    size = reduced_dls_domain_size(n, l, field)
    logging.info(
        "Reduced DLS search: n = {0}, K = {1}, {2}; {3} candidates "
        "(unreduced {4})".format(
            n, l, field, size, unreduced_dls_domain_size(n, l, field.r)
        )
    )

    if size > LONG_THRESHOLD and not campaign.long:
        raise SearchError(
            "Domain of {0} candidates needs the long-run option".format(size)
        )

    verdicts = {}
    for k in campaign.k_set:
        if k < n - 2:
            verdicts[k] = SearchVerdict(n, l, k, DNE, note="k < n - 2")
    live_k = [k for k in campaign.k_set if k not in verdicts]

    report = SearchReport(campaign)
    if live_k:
        part_size = (field.order - 1) ** (1 + l)
        npart = len(_support_patterns(n, l))
        runnable = npart
        if campaign.budget is not None:
            runnable = min(npart, campaign.budget // part_size)
            if runnable < npart:
                logging.warning(
                    "Budget covers {0} of {1} supports".format(runnable, npart)
                )

        signature = campaign.signature()
        done = _load_checkpoint(checkpoint, signature)
        if done:
            logging.info("Resuming from {0} finished supports".format(len(done)))

        results = {i: done[i] for i in range(runnable) if i in done}
        consumed, found = _consume(results, live_k)

        pending = [i for i in range(runnable) if i not in results]
        if pending and not all(k in found for k in live_k):
            tasks = [(n, l, field.r, field.modulus, i, live_k) for i in pending]

            def stop(new):
                for res in new:
                    results[res["index"]] = res
                if checkpoint is not None:
                    _save_checkpoint(checkpoint, signature, results)
                _, f = _consume(results, live_k)
                return all(k in f for k in live_k)

            for res in run_tasks(_scan_dls_partition, tasks, jobs, use_mpi, stop):
                results[res["index"]] = res
            if checkpoint is not None and mpi_controller.is_root:
                _save_checkpoint(checkpoint, signature, results)
            consumed, found = _consume(results, live_k)

        for res in consumed:
            logging.info(
                "Support {0}: {1} candidates, {2} filtered, hits for k = {3}".format(
                    res["index"],
                    res["examined"],
                    res["rejected"],
                    sorted(int(k) for k in res["hits"]),
                )
            )

        report.candidates_examined = sum(res["examined"] for res in consumed)
        report.stats = {
            "domain_size": size,
            "supports": npart,
            "supports_scanned": len(consumed),
            "filtered": sum(res["rejected"] for res in consumed),
        }

        for k in live_k:
            if k in found:
                verdicts[k] = SearchVerdict(
                    n, l, k, EXISTS, witness=_spec_from_dict(found[k], field)
                )
            elif len(consumed) == npart:
                verdicts[k] = SearchVerdict(n, l, k, DNE)
            else:
                verdicts[k] = SearchVerdict(n, l, k, UNRESOLVED, note="budget")

    report.verdicts = [verdicts[k] for k in campaign.k_set]
    report.elapsed = time.time() - t0
    logging.info("Search completed in {0:.3f} seconds".format(report.elapsed))

    return report


# Random GDLS search


def default_entry_set(field):
    """{1, alpha, alpha^-1, alpha^2, alpha^-2}, without repeats"""
    a = field.alpha.value
    vals = [1, a, field.inv(a), field.pow(a, 2), field.pow(a, -2)]
    out = []
    for v in vals:
        if v not in out:
            out.append(v)
    return tuple(out)


def _random_candidate(i, n, l, field, seed, entries, rho1, rho2, d1_mode):
    rng = np.random.default_rng([seed, i])

    if rho2 is None:
        r1 = np.array(rho1.zero_based)
        while True:
            p = rng.permutation(n)
            if np.all(p != r1):
                break
        rho2_ = Permutation(p + 1)
    else:
        rho2_ = rho2

    ent = np.array(entries)
    if d1_mode == "identity":
        d1 = [1] * n
    else:
        d1 = [int(v) for v in rng.choice(ent, n)]

    supp = sorted(int(s) for s in rng.choice(n, l, replace=False))
    vals = rng.choice(ent, l)
    d2 = [0] * n
    for s, v in zip(supp, vals):
        d2[s] = int(v)

    return GdlsSpec(rho1, rho2_, d1, d2, field)


def _scan_random_chunk(task):
    # Worker: evaluate the candidates with iteration numbers in [start, stop)
    (n, l, r, modulus, seed, entries, rho1, rho2, d1_mode, k_set, start, stop) = task
    field = FieldSpec.get(r, modulus)
    rho1 = Permutation(rho1)
    rho2 = None if rho2 is None else Permutation(rho2)

    hits = []
    for i in range(start, stop):
        spec = _random_candidate(i, n, l, field, seed, entries, rho1, rho2, d1_mode)
        B = spec.matrix()
        for k in k_set:
            if is_k_nmds(B, k):
                hits.append(
                    {
                        "iteration": i,
                        "k": k,
                        "spec": spec.to_dict(),
                        "cost": matrix_cost(B).total,
                    }
                )
    return hits


def random_gdls_search(campaign, entry_set=None, structure=None, jobs=1, use_mpi=False):
    """Seeded random search of k-NMDS GDLS matrices

    Candidate i is drawn from its own generator seeded with (seed, i), so
    the stream does not depend on the number of workers. rho1 defaults to
    [n, 1, ..., n-1]; rho2 is drawn among the permutations disagreeing with
    rho1 everywhere unless fixed; D2 has exactly K nonzero entries.

    Arguments:
        campaign {SearchCampaign} -- Campaign in random-gdls mode; its budget
                                     is the number of candidates

    Keyword Arguments:
        entry_set {[int]} -- Allowed nonzero entries (default: 1, a, a^-1,
                             a^2, a^-2)
        structure {dict} -- Overrides of rho1, rho2 and d1 ('identity' or
                            'free')
        jobs {int} -- Worker processes

    Returns:
        SearchReport -- Hits sorted by (cost, k, iteration); a power is
                        Exists with its cheapest hit, or Unresolved
    """

    if campaign.mode != "random-gdls":
        raise SearchError("Campaign mode is not random-gdls")
    if campaign.budget is None:
        raise SearchError("A random search needs a budget")

    t0 = time.time()
    n, l, field = campaign.n, campaign.l, campaign.field
    structure = dict(structure or {})

    entries = entry_set if entry_set is not None else campaign.entries
    if entries is None:
        entries = default_entry_set(field)
    entries = tuple(int(e) for e in entries)
    if len(entries) == 0 or any(not (0 < e < field.order) for e in entries):
        raise SearchError("Invalid entry set")

    rho1 = structure.get("rho1", campaign.rho1) or cycle_permutation(n, -1)
    rho1 = Permutation(rho1)
    rho2 = structure.get("rho2", campaign.rho2)
    if rho2 is not None:
        rho2 = Permutation(rho2)
    d1_mode = structure.get("d1", campaign.d1)

    report = SearchReport(campaign)
    budget = campaign.budget
    if budget == 0:
        report.elapsed = time.time() - t0
        return report

    logging.info(
        "Random GDLS search: n = {0}, K = {1}, {2}, {3} candidates".format(
            n, l, field, budget
        )
    )

    tasks = [
        (
            n,
            l,
            field.r,
            field.modulus,
            campaign.seed,
            entries,
            rho1.images,
            None if rho2 is None else rho2.images,
            d1_mode,
            campaign.k_set,
            s,
            min(budget, s + RANDOM_CHUNK),
        )
        for s in range(0, budget, RANDOM_CHUNK)
    ]

    results = run_tasks(_scan_random_chunk, tasks, jobs, use_mpi)

    hits = []
    seen = set()
    for chunk in results:
        for h in chunk:
            key = (json.dumps(h["spec"], sort_keys=True), h["k"])
            if key in seen:
                continue
            seen.add(key)
            hits.append(h)
    hits.sort(key=lambda h: (h["cost"], h["k"], h["iteration"]))

    report.hits = hits
    report.candidates_examined = budget
    for k in campaign.k_set:
        best = next((h for h in hits if h["k"] == k), None)
        if best is None:
            report.verdicts.append(SearchVerdict(n, l, k, UNRESOLVED, note="budget"))
        else:
            report.verdicts.append(
                SearchVerdict(
                    n,
                    l,
                    k,
                    EXISTS,
                    witness=_spec_from_dict(best["spec"], field),
                    cost=best["cost"],
                )
            )

    report.elapsed = time.time() - t0
    logging.info(
        "{0} distinct hits; search completed in {1:.3f} seconds".format(
            len(hits), report.elapsed
        )
    )

    return report


# K = 1 impossibility


def k1_structures(n):
    """Nonzero patterns of K = 1 candidates: a permutation pattern plus one
    extra cell in the first row

    Yields:
        (tuple, int) -- Columns of the permutation cells (row by row, 0-based)
                        and the column of the extra cell
    """

    for sigma in permutations(range(n)):
        for c in range(n):
            if c != sigma[0]:
                yield sigma, c


def k1_candidates(n, field):
    """All K = 1 candidates in normal form, as FieldMatrix objects"""

    nonzero = range(1, field.order)
    for sigma, c in k1_structures(n):
        for vals in product(nonzero, repeat=n + 1):
            a = np.zeros((n, n), dtype=np.uint8)
            a[range(n), sigma] = vals[:n]
            a[0, c] = vals[n]
            yield FieldMatrix(a, field)


def _k1_stack(n, field, sigma, c, values):
    N = values.shape[0]
    M = np.zeros((N, n, n), dtype=np.uint8)
    M[:, np.arange(n), np.array(sigma)] = values[:, :n]
    M[:, 0, c] = values[:, n]
    return M


def _k1_scan(stack, n, field, kmax):
    # First (index, k) with stack[index]^k NMDS, or None
    threshold = n * n - n
    P = stack
    for k in range(1, kmax + 1):
        if k > 1:
            P = batch_mul(P, stack, field)
        counts = np.count_nonzero(P, axis=(1, 2))
        for i in np.nonzero(counts >= threshold)[0]:
            if is_nmds(FieldMatrix(P[i], field)):
                return int(i), k
    return None


def k1_candidate_count(n, field):
    q = field.order
    return factorial(n) * (n - 1) * (q - 1) ** (n + 1)


def find_k1_witness(n, field, kmax=None, budget=None, sample=None, seed=0):
    """Look for a K = 1 matrix B with B^k NMDS for some k <= kmax

    Arguments:
        n {int} -- Order
        field {FieldSpec} -- Field of the entries

    Keyword Arguments:
        kmax {int} -- Largest power (default: n)
        budget {int} -- Cap on the candidates of an exhaustive run
        sample {int} -- Check this many random candidates instead
        seed {int} -- Seed of the sampling

    Returns:
        (FieldMatrix, int) -- A witness and its power, or None

    Raises:
        BudgetExhaustedError -- If the exhaustive run exceeds the budget
    """

    kmax = n if kmax is None else kmax
    q = field.order

    if sample is not None:
        rng = np.random.default_rng(seed)
        structs = list(k1_structures(n))
        for s0 in range(0, sample, SCAN_CHUNK):
            N = min(SCAN_CHUNK, sample - s0)
            picks = rng.integers(0, len(structs), N)
            values = rng.integers(1, q, (N, n + 1)).astype(np.uint8)
            stack = np.zeros((N, n, n), dtype=np.uint8)
            for idx in range(N):
                sigma, c = structs[picks[idx]]
                stack[idx] = _k1_stack(n, field, sigma, c, values[idx : idx + 1])[0]
            hit = _k1_scan(stack, n, field, kmax)
            if hit is not None:
                return FieldMatrix(stack[hit[0]], field), hit[1]
        return None

    total = k1_candidate_count(n, field)
    if budget is not None and total > budget:
        raise BudgetExhaustedError(
            "{0} candidates of order {1} exceed the budget of {2}".format(
                total, n, budget
            )
        )

    logging.info("K = 1 check: {0} candidates of order {1}".format(total, n))
    values = np.array(list(product(range(1, q), repeat=n + 1)), dtype=np.uint8)
    for sigma, c in k1_structures(n):
        for s0 in range(0, len(values), SCAN_CHUNK):
            stack = _k1_stack(n, field, sigma, c, values[s0 : s0 + SCAN_CHUNK])
            hit = _k1_scan(stack, n, field, kmax)
            if hit is not None:
                return FieldMatrix(stack[hit[0]], field), hit[1]

    return None


def exhaustive_k1_check(n, field, budget=None, sample=None, seed=0):
    """True if no K = 1 matrix of order n is k-NMDS for any k <= n

    Raises:
        BudgetExhaustedError -- If the exhaustive run exceeds the budget
    """
    return find_k1_witness(n, field, budget=budget, sample=sample, seed=seed) is None


# Binary matrices


def binary_branch_numbers(n):
    """Differential branch number of every n x n binary matrix, n <= 4

    The matrix with index i has entry (a, b) equal to bit a*n + b of i.

    Returns:
        np.ndarray -- Array of 2^(n^2) branch numbers
    """

    if n > 4:
        raise SearchError("Exhaustive binary search is limited to n <= 4")

    nm = 2 ** (n * n)
    idx = np.arange(nm, dtype=np.int64)
    mats = ((idx[:, None] >> np.arange(n * n)[None, :]) & 1).reshape((nm, n, n))
    xs = (np.arange(1, 2 ** n)[:, None] >> np.arange(n)[None, :]) & 1

    y = np.einsum("mij,xj->mxi", mats, xs) % 2
    weights = xs.sum(axis=1)[None, :] + y.sum(axis=2)

    return weights.min(axis=1)


def max_binary_branch(n):
    """Largest differential branch number of an n x n binary matrix"""
    return int(binary_branch_numbers(n).max())


# Structured families


def _family_chunk(task):
    # Worker: classify one block of parameter vectors
    family, n, r, modulus, predicate, start, stop, params = task
    field = FieldSpec.get(r, modulus)
    q = field.order
    npar = family_params(family, n)

    if params is None:
        ids = np.arange(start, stop, dtype=np.int64)
        params = (ids[:, None] // (q ** np.arange(npar, dtype=np.int64))[None, :]) % q
    params = np.asarray(params, dtype=np.uint8)

    mats = params[:, family_index(family, n)]
    eye = np.eye(n, dtype=np.uint8)

    if predicate == "involutory":
        keep = np.all(batch_mul(mats, mats, field) == eye, axis=(1, 2))
    elif predicate == "orthogonal":
        keep = np.all(
            batch_mul(mats, np.swapaxes(mats, 1, 2), field) == eye, axis=(1, 2)
        )
    else:
        keep = np.ones(len(mats), dtype=bool)

    matched = int(keep.sum())
    keep &= np.count_nonzero(mats, axis=(1, 2)) >= n * n - n

    hits = []
    for i in np.nonzero(keep)[0]:
        if is_nmds(FieldMatrix(mats[i], field)):
            hits.append([hexstr(v) for v in params[i]])

    return {"scanned": len(mats), "matched": matched, "hits": hits}


def involutory_toeplitz_params(n, field, count, rng):
    """Random Toeplitz parameter vectors solving the first row of M^2 = I

    The first row is drawn at random, with a nonzero top right entry u; the
    first column then follows one entry at a time, since entry (0, n-1-m) of
    M^2 is u times the m-th subdiagonal plus terms already known. Vectors
    whose other rows of M^2 differ from I are left for the scan to discard.

    Arguments:
        n {int} -- Order
        field {FieldSpec} -- Field of the entries
        count {int} -- Number of vectors
        rng {np.random.Generator} -- Source of the random first rows

    Returns:
        np.ndarray -- Array of shape (count, 2n-1), laid out as family_index
                      expects
    """

    T = field.mul_table
    q = field.order

    params = np.zeros((count, 2 * n - 1), dtype=np.uint8)
    params[:, : n - 1] = rng.integers(0, q, (count, n - 1))
    params[:, n - 1] = rng.integers(1, q, count)
    lead_inv = field.inv_table[params[:, n - 1]]

    def diag(d):
        # Parameters of the diagonal j - i = d
        return params[:, d] if d >= 0 else params[:, n - 1 - d]

    for m in range(1, n):
        j = n - 1 - m
        acc = np.full(count, int(j == 0), dtype=np.uint8)
        for k in range(n - 1):
            acc ^= T[diag(k), diag(j - k)]
        params[:, n - 1 + m] = T[acc, lead_inv]

    return params


class FamilyWitness(object):
    """Parameters of a family matrix found by a scan"""

    def __init__(self, family, params):
        self.family = family
        self.params = list(params)

    def to_dict(self):
        return {"kind": self.family, "row": self.params}

    def to_string(self):
        return "{0}({1})".format(self.family, ",".join(self.params))


def structured_family_scan(
    family, n, field, predicate="any", budget=None, sample=None, seed=0, jobs=1
):
    """Classify the members of a matrix family satisfying a structural
    predicate by NMDS status

    Arguments:
        family {str} -- circulant, left-circulant, toeplitz, hankel or
                        hadamard
        n {int} -- Order
        field {FieldSpec} -- Field of the entries

    Keyword Arguments:
        predicate {str} -- any, involutory or orthogonal
        budget {int} -- Cap on the size of an exhaustive scan
        sample {int} -- Scan this many random parameter vectors instead
        seed {int} -- Seed of the sampling
        jobs {int} -- Worker processes

    Returns:
        SearchReport -- Hits (parameter vectors of NMDS members) and a verdict
                        that is DNE only for a complete scan

    Raises:
        BudgetExhaustedError -- If an exhaustive scan exceeds the budget
    """

    if predicate not in PREDICATES:
        raise SearchError("Invalid predicate '{0}'".format(predicate))

    t0 = time.time()
    q = field.order
    npar = family_params(family, n)
    total = q ** npar

    campaign = SearchCampaign(
        n,
        0,
        field,
        [1],
        mode="family-scan",
        seed=seed,
        budget=budget,
        family=family,
        predicate=predicate,
        sample=sample,
    )

    if sample is None:
        if budget is not None and total > budget:
            raise BudgetExhaustedError(
                "{0} {1} matrices exceed the budget of {2}".format(total, family, budget)
            )
        tasks = [
            (family, n, field.r, field.modulus, predicate, s, min(total, s + SCAN_CHUNK), None)
            for s in range(0, total, SCAN_CHUNK)
        ]
    else:
        rng = np.random.default_rng(seed)
        if family == "toeplitz" and predicate == "involutory":
            # Uniform Toeplitz matrices are almost never involutory
            params = involutory_toeplitz_params(n, field, sample, rng)
        else:
            params = rng.integers(0, q, (sample, npar))
        tasks = [
            (family, n, field.r, field.modulus, predicate, 0, 0, params[s : s + SCAN_CHUNK])
            for s in range(0, sample, SCAN_CHUNK)
        ]

    logging.info(
        "Scanning {0} {1} matrices of order {2} over {3} ({4})".format(
            total if sample is None else sample, family, n, field, predicate
        )
    )

    results = run_tasks(_family_chunk, tasks, jobs)

    report = SearchReport(campaign)
    hits = [h for res in results for h in res["hits"]]
    report.hits = [{"row": h} for h in hits]
    report.candidates_examined = sum(res["scanned"] for res in results)
    report.stats = {
        "predicate_matches": sum(res["matched"] for res in results),
        "nmds_hits": len(hits),
        "exhaustive": sample is None,
    }

    if hits:
        status = EXISTS
    elif sample is None:
        status = DNE
    else:
        status = UNRESOLVED
    report.verdicts = [
        SearchVerdict(
            n,
            None,
            None,
            status,
            witness=FamilyWitness(family, hits[0]) if hits else None,
            note=predicate,
        )
    ]
    report.elapsed = time.time() - t0

    return report


def run_campaign(campaign, jobs=1, checkpoint=None, use_mpi=False):
    """Dispatch a campaign to the search of its mode"""

    if campaign.mode == "reduced-dls":
        return search_k_nmds_dls(campaign, jobs, checkpoint, use_mpi)
    elif campaign.mode == "random-gdls":
        return random_gdls_search(campaign, jobs=jobs, use_mpi=use_mpi)
    elif campaign.mode == "family-scan":
        return structured_family_scan(
            campaign.family,
            campaign.n,
            campaign.field,
            campaign.predicate,
            campaign.budget,
            campaign.sample,
            campaign.seed,
            jobs,
        )

    t0 = time.time()
    report = SearchReport(campaign)
    if campaign.mode == "exhaustive-k1":
        hit = find_k1_witness(
            campaign.n,
            campaign.field,
            kmax=max(campaign.k_set),
            budget=campaign.budget,
            sample=campaign.sample,
            seed=campaign.seed,
        )
        if hit is None:
            status = UNRESOLVED if campaign.sample is not None else DNE
            report.verdicts = [SearchVerdict(campaign.n, 1, None, status)]
        else:
            report.verdicts = [
                SearchVerdict(campaign.n, 1, hit[1], EXISTS, note=str(hit[0].to_rows()))
            ]
    else:
        best = max_binary_branch(campaign.n)
        report.stats = {
            "max_branch": best,
            "bound": (2 * campaign.n + 4) // 3,
        }
        report.verdicts = [
            SearchVerdict(campaign.n, None, None, EXISTS, note="max branch {0}".format(best))
        ]
    report.elapsed = time.time() - t0

    return report
