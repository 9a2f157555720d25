import os
import json
import unittest
import tempfile

import numpy as np

from nmdslab.gf import FieldSpec, GF16, GF256
from nmdslab.linalg import batch_mul, nonzero_count
from nmdslab.construct import DlsSpec, family_index
from nmdslab.branch import is_k_nmds
from nmdslab.search import (
    EXISTS,
    DNE,
    UNRESOLVED,
    SearchCampaign,
    SearchError,
    BudgetExhaustedError,
    reduced_dls_domain,
    reduced_dls_domain_size,
    unreduced_dls_domain_size,
    search_k_nmds_dls,
    random_gdls_search,
    default_entry_set,
    find_k1_witness,
    exhaustive_k1_check,
    k1_candidates,
    k1_candidate_count,
    max_binary_branch,
    structured_family_scan,
    involutory_toeplitz_params,
    run_campaign,
)

GF4 = FieldSpec.get(2, 0x7)
GF2 = FieldSpec.get(1, 0x3)


class TestCampaign(unittest.TestCase):
    def test_validation(self):

        f = FieldSpec.get(*GF16)
        c = SearchCampaign(5, 3, f, [5, 4, 4], name="t")

        self.assertEqual(c.k_set, (4, 5))
        self.assertEqual(c.signature()["field"], "4:0x13")
        self.assertEqual(c.to_dict()["name"], "t")
        self.assertNotIn("entries", c.to_dict())

        with self.assertRaises(SearchError):
            SearchCampaign(5, 3, f, [4], mode="annealing")
        with self.assertRaises(SearchError):
            SearchCampaign(5, 6, f, [4])
        with self.assertRaises(SearchError):
            SearchCampaign(5, 3, f, [0])
        with self.assertRaises(SearchError):
            SearchCampaign(5, 3, f, [4], budget=-1)
        with self.assertRaises(SearchError):
            SearchCampaign(5, 3, (4, 0x13), [4])
        with self.assertRaises(SearchError):
            SearchCampaign(5, 3, f, [4], d1="diagonal")


class TestReducedDls(unittest.TestCase):
    def test_domain(self):

        f = FieldSpec.get(*GF16)

        self.assertEqual(reduced_dls_domain_size(4, 2, f), 20250)
        self.assertEqual(unreduced_dls_domain_size(6, 3, 4), 265 * 20 * 2 ** 36)

        dom = list(reduced_dls_domain(4, 2, GF4))
        self.assertEqual(len(dom), reduced_dls_domain_size(4, 2, GF4))
        self.assertEqual(len(dom), 162)
        self.assertEqual(dom[0].d1, (1, 1, 1, 1))
        self.assertEqual(dom[0].d2, (1, 1, 0, 0))
        self.assertTrue(all(s.rho.images == (2, 3, 4, 1) for s in dom))
        self.assertTrue(all(s.fixed_xor == 2 for s in dom))
        self.assertTrue(all(s.d1[1:] == (1, 1, 1) for s in dom))

    def test_exists(self):

        c = SearchCampaign(4, 2, GF4, [1, 3])
        rep = search_k_nmds_dls(c)

        v1 = rep.verdict(1)
        self.assertEqual(v1.status, DNE)
        self.assertEqual(v1.note, "k < n - 2")

        v3 = rep.verdict(3)
        self.assertEqual(v3.status, EXISTS)
        self.assertIsInstance(v3.witness, DlsSpec)
        self.assertTrue(is_k_nmds(v3.witness.matrix(), 3))
        self.assertFalse(rep.unresolved)
        self.assertGreater(rep.candidates_examined, 0)
        self.assertEqual(rep.stats["supports"], 6)

        d = rep.to_dict(timing=False)
        self.assertNotIn("elapsed", d)
        self.assertEqual(d["verdicts"][1]["witness"]["kind"], "dls")

    def test_dne(self):

        # A monomial matrix has monomial powers
        c = SearchCampaign(4, 0, GF4, [3, 4])
        rep = search_k_nmds_dls(c)

        self.assertEqual(rep.verdict(3).status, DNE)
        self.assertEqual(rep.verdict(4).status, DNE)
        self.assertEqual(rep.candidates_examined, 3)
        self.assertEqual(rep.stats["filtered"], 6)

    def test_budget(self):

        c = SearchCampaign(4, 2, GF4, [3], budget=10)
        rep = search_k_nmds_dls(c)

        self.assertEqual(rep.verdict(3).status, UNRESOLVED)
        self.assertTrue(rep.unresolved)
        self.assertEqual(rep.candidates_examined, 0)

        big = SearchCampaign(8, 4, FieldSpec.get(*GF256), [7, 8])
        with self.assertRaises(SearchError):
            search_k_nmds_dls(big)

        with self.assertRaises(SearchError):
            search_k_nmds_dls(SearchCampaign(4, 2, GF4, [3], mode="random-gdls"))

    def test_jobs(self):

        c = SearchCampaign(4, 2, GF4, [3])
        rep1 = search_k_nmds_dls(c)
        rep2 = search_k_nmds_dls(c, jobs=2)

        self.assertEqual(rep1.to_dict(timing=False), rep2.to_dict(timing=False))

    def test_checkpoint(self):

        c = SearchCampaign(4, 2, GF4, [3])

        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "run.json")
            rep1 = search_k_nmds_dls(c, checkpoint=path)

            self.assertTrue(os.path.isfile(path))
            with open(path) as f:
                data = json.load(f)
            self.assertEqual(data["signature"], c.signature())
            self.assertIn("0", data["partitions"])

            rep2 = search_k_nmds_dls(c, checkpoint=path)
            self.assertEqual(rep1.to_dict(timing=False), rep2.to_dict(timing=False))

            # A checkpoint of another campaign is ignored
            other = SearchCampaign(4, 2, GF4, [3, 4], budget=10)
            rep3 = search_k_nmds_dls(other, checkpoint=path)
            self.assertEqual(rep3.verdict(3).status, UNRESOLVED)


class TestRandomGdls(unittest.TestCase):
    def test_search(self):

        f = FieldSpec.get(*GF16)
        c = SearchCampaign(
            4,
            2,
            f,
            [3],
            mode="random-gdls",
            seed=7,
            budget=64,
            entries=[1],
            rho1=[2, 3, 4, 1],
            rho2=[1, 2, 3, 4],
        )
        rep = random_gdls_search(c)

        v = rep.verdict(3)
        self.assertEqual(v.status, EXISTS)
        self.assertEqual(v.cost, 8)
        self.assertTrue(is_k_nmds(v.witness.matrix(), 3))
        self.assertEqual(rep.candidates_examined, 64)

        # Hits are distinct and sorted by cost, then by iteration
        keys = [(h["cost"], h["k"], h["iteration"]) for h in rep.hits]
        self.assertEqual(keys, sorted(keys))
        specs = [json.dumps(h["spec"], sort_keys=True) for h in rep.hits]
        self.assertEqual(len(specs), len(set(specs)))

        # The stream does not depend on the number of workers
        rep2 = random_gdls_search(c, jobs=2)
        self.assertEqual(rep.hits, rep2.hits)

    def test_free_structure(self):

        f = FieldSpec.get(*GF16)
        c = SearchCampaign(5, 3, f, [4, 5], mode="random-gdls", seed=3, budget=20)
        rep = random_gdls_search(c, structure={"d1": "free"})

        self.assertEqual(len(rep.verdicts), 2)
        for h in rep.hits:
            self.assertEqual(sum(1 for v in h["spec"]["d2"] if v != "0x0"), 3)
        for v in rep.verdicts:
            self.assertIn(v.status, (EXISTS, UNRESOLVED))

        self.assertEqual(default_entry_set(f), (1, 2, 9, 4, 0xD))

        with self.assertRaises(SearchError):
            random_gdls_search(c, entry_set=[0, 1])
        with self.assertRaises(SearchError):
            random_gdls_search(SearchCampaign(5, 3, f, [4], mode="random-gdls"))

        empty = SearchCampaign(5, 3, f, [4], mode="random-gdls", budget=0)
        self.assertEqual(random_gdls_search(empty).verdicts, [])


class TestExhaustiveChecks(unittest.TestCase):
    def test_k1(self):

        self.assertEqual(k1_candidate_count(3, GF2), 12)
        cands = list(k1_candidates(3, GF2))
        self.assertEqual(len(cands), 12)
        self.assertTrue(all(nonzero_count(C) == 4 for C in cands))

        W, k = find_k1_witness(3, GF2)
        self.assertLessEqual(k, 3)
        self.assertTrue(is_k_nmds(W, k))
        self.assertFalse(exhaustive_k1_check(3, GF2))

        with self.assertRaises(BudgetExhaustedError):
            find_k1_witness(4, FieldSpec.get(*GF16), budget=10)

    def test_binary_branch(self):

        self.assertEqual(max_binary_branch(2), 2)
        self.assertEqual(max_binary_branch(3), 3)
        self.assertEqual(max_binary_branch(4), 4)

        with self.assertRaises(SearchError):
            max_binary_branch(5)

        rep = run_campaign(SearchCampaign(4, 0, GF2, [1], mode="binary-branch-bound"))
        self.assertEqual(rep.stats["max_branch"], 4)
        self.assertEqual(rep.stats["bound"], 4)

    def test_family_scan(self):

        rep = structured_family_scan("circulant", 4, GF4, predicate="involutory")

        self.assertEqual(rep.verdicts[0].status, EXISTS)
        self.assertIn({"row": ["0x0", "0x1", "0x1", "0x1"]}, rep.hits)
        self.assertEqual(rep.candidates_examined, 256)
        self.assertTrue(rep.stats["exhaustive"])
        self.assertTrue(rep.verdicts[0].witness.to_string().startswith("circulant("))

        with self.assertRaises(BudgetExhaustedError):
            structured_family_scan("circulant", 4, FieldSpec.get(*GF16), budget=100)
        with self.assertRaises(SearchError):
            structured_family_scan("circulant", 4, GF4, predicate="symmetric")

        # Every member matches 'any', sparse ones included
        rep = structured_family_scan("circulant", 3, GF4)
        self.assertEqual(rep.stats["predicate_matches"], 64)

    def test_involutory_toeplitz(self):

        P = involutory_toeplitz_params(5, GF4, 200, np.random.default_rng(3))
        self.assertEqual(P.shape, (200, 9))
        self.assertTrue(np.all(P[:, 4] != 0))

        M = P[:, family_index("toeplitz", 5)]
        M2 = batch_mul(M, M, GF4)
        self.assertTrue(np.all(M2[:, 0, :4] == [1, 0, 0, 0]))

        for n in (5, 6):
            rep = structured_family_scan(
                "toeplitz", n, GF4, predicate="involutory", sample=2000, seed=1
            )
            self.assertEqual(rep.candidates_examined, 2000)
            self.assertGreater(rep.stats["predicate_matches"], 0)
            self.assertFalse(rep.stats["exhaustive"])

    def test_run_campaign(self):

        rep = run_campaign(SearchCampaign(3, 1, GF2, [3], mode="exhaustive-k1"))
        self.assertEqual(rep.verdicts[0].status, EXISTS)

        rep = run_campaign(
            SearchCampaign(4, 0, GF4, [1], mode="family-scan", predicate="orthogonal")
        )
        self.assertEqual(rep.verdicts[0].status, EXISTS)


class TestImpossibility(unittest.TestCase):
    def test_k1(self):

        for n in (4, 5):
            for f in (GF2, GF4):
                self.assertTrue(exhaustive_k1_check(n, f))

    def test_involutory_families(self):

        rep = structured_family_scan("circulant", 5, GF4, predicate="involutory")
        self.assertEqual(rep.verdicts[0].status, DNE)
        self.assertEqual(rep.stats["nmds_hits"], 0)
        # The identity
        self.assertGreater(rep.stats["predicate_matches"], 0)

        for n in (5, 6):
            rep = structured_family_scan(
                "toeplitz", n, GF4, predicate="involutory", sample=2000, seed=2
            )
            self.assertEqual(rep.stats["nmds_hits"], 0)
            self.assertEqual(rep.verdicts[0].status, UNRESOLVED)


# Cells that take up to a minute each
LONG_TESTS = os.environ.get("NMDSLAB_LONG_TESTS", "0") not in ("", "0")


@unittest.skipUnless(LONG_TESTS, "set NMDSLAB_LONG_TESTS=1 to run")
class TestExistenceTable(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)

    def test_order5(self):

        rep = search_k_nmds_dls(SearchCampaign(5, 2, self.f, [4, 5]), jobs=4)
        self.assertEqual(rep.verdict(4).status, DNE)
        self.assertEqual(rep.verdict(5).status, DNE)

        rep = search_k_nmds_dls(SearchCampaign(5, 3, self.f, [4, 5]), jobs=4)
        for k in (4, 5):
            v = rep.verdict(k)
            self.assertEqual(v.status, EXISTS)
            self.assertTrue(is_k_nmds(v.witness.matrix(), k))

    def test_involutory_families(self):

        rep = structured_family_scan("circulant", 5, self.f, predicate="involutory")
        self.assertEqual(rep.verdicts[0].status, DNE)
        self.assertEqual(rep.candidates_examined, 16 ** 5)

        for n in (5, 6):
            rep = structured_family_scan(
                "toeplitz", n, self.f, predicate="involutory", sample=10 ** 5
            )
            self.assertGreater(rep.stats["predicate_matches"], 0)
            self.assertEqual(rep.stats["nmds_hits"], 0)
