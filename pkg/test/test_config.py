import unittest
from io import StringIO

from nmdslab.gf import FieldSpec, GF16
from nmdslab.input import CampaignInput
from nmdslab.config import CampaignConfig, CampaignConfigError


def _config(text, overrides={}):
    return CampaignConfig(CampaignInput(StringIO(text)).evaluate(), overrides)


class TestConfig(unittest.TestCase):
    def test_config(self):

        stest = StringIO(
            """
name
    table n5
order
    5
fixed_xor
    3
powers
    n-1 n
"""
        )

        itest = CampaignInput(stest)

        cfg = CampaignConfig(itest.evaluate())
        c = cfg.campaign

        self.assertEqual(cfg.name, "table n5")
        self.assertEqual(c.mode, "reduced-dls")
        self.assertEqual(c.n, 5)
        self.assertEqual(c.l, 3)
        self.assertEqual(c.k_set, (4, 5))
        self.assertEqual(c.field, FieldSpec.get(*GF16))
        self.assertEqual(c.seed, 0)
        self.assertIsNone(c.budget)

        # Command line overrides
        cfg = CampaignConfig(itest.evaluate(), {"seed": 5, "budget": None})
        self.assertEqual(cfg.campaign.seed, 5)
        self.assertIsNone(cfg.campaign.budget)

    def test_random(self):

        cfg = _config(
            """
mode
    random-gdls
order
    4
fixed_xor
    2
budget
    100
entries
    a^-1 1 a 1
rho1
    [2,3,4,1]
d1
    free
"""
        )
        c = cfg.campaign

        self.assertEqual(cfg.name, "nmdslab")
        self.assertEqual(c.k_set, (4,))
        self.assertEqual(c.budget, 100)
        self.assertEqual(c.entries, (1, 2, 9))
        self.assertEqual(c.rho1.images, (2, 3, 4, 1))
        self.assertIsNone(c.rho2)
        self.assertEqual(c.d1, "free")

    def test_modes(self):

        cfg = _config(
            """
mode
    exhaustive-k1
order
    3
"""
        )
        c = cfg.campaign
        self.assertEqual(c.field.r, 1)
        self.assertEqual(c.l, 1)
        self.assertEqual(c.k_set, (3,))

        cfg = _config(
            """
mode
    family-scan
order
    4
field
    2:0x7
family
    circulant
predicate
    involutory
"""
        )
        c = cfg.campaign
        self.assertEqual(c.field.r, 2)
        self.assertEqual(c.k_set, (1,))
        self.assertEqual(c.predicate, "involutory")

    def test_errors(self):

        # Fixed XOR larger than the order
        with self.assertRaises(CampaignConfigError):
            _config("order\n    5\nfixed_xor\n    7\n")

        # Non-integer order
        with self.assertRaises(CampaignConfigError):
            _config("order\n    2.5\n")

        with self.assertRaises(CampaignConfigError):
            _config("order\n    1\n")

        with self.assertRaises(CampaignConfigError):
            _config("order\n    4\nbudget\n    -1\n")

        with self.assertRaises(CampaignConfigError):
            _config("order\n    4\npowers\n    0\n")

        with self.assertRaises(CampaignConfigError):
            _config("order\n    4\nsample\n    0\n")

        with self.assertRaises(CampaignConfigError):
            _config("mode\n    random-gdls\norder\n    4\nentries\n    0 1\n")

        with self.assertRaises(CampaignConfigError):
            _config("mode\n    random-gdls\norder\n    4\nentries\n    a^x\n")

        with self.assertRaises(CampaignConfigError):
            _config("mode\n    random-gdls\norder\n    4\nrho1\n    [1,1,2,3]\n")
