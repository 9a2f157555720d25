import os
import unittest
from io import StringIO
from tempfile import TemporaryDirectory

from nmdslab.gf import FieldSpec, GF16
from nmdslab.linalg import BinaryMatrix, BlockMatrix, FieldMatrix
from nmdslab.input.larkeval import (
    LarkExpression,
    LarkExpressionError,
    FieldExpression,
    lark_tokenize,
    parse_element,
)
from nmdslab.input.keyword import (
    CampaignKeyword,
    EvaluateKeyword,
    FieldKeyword,
    InputKeywords,
)
from nmdslab.input.specs import (
    SpecParseError,
    split_top,
    parse_permutation,
    parse_entry,
    parse_element_list,
    parse_dls_spec,
    parse_gdls_spec,
)
from nmdslab.input.matrixio import (
    MatrixFormatError,
    matrix_to_dict,
    matrix_from_dict,
    load_matrix,
    save_matrix,
)
from nmdslab.input import CampaignInput
from nmdslab.input.input import CampaignInputError


class TestInput(unittest.TestCase):
    def test_larkexpr(self):

        # Start by testing proper precedence order
        e1 = LarkExpression("3+2*6^2/9")

        self.assertEqual(e1.evaluate(), 11)

        e2 = LarkExpression("n-1", variables="n")

        self.assertEqual(e2.variables, {"n"})
        self.assertEqual(e2.evaluate(n=5), 4)

        e3 = LarkExpression("max(n, 3)", variables="n", functions={"max": max})
        self.assertEqual(e3.functions, {"max"})
        self.assertEqual(e3.evaluate(n=2), 3)

        # Errors
        with self.assertRaises(LarkExpressionError):
            LarkExpression("print(666)")

        with self.assertRaises(LarkExpressionError):
            LarkExpression("x+1", variables="n")

        with self.assertRaises(LarkExpressionError):
            e2.evaluate()

        with self.assertRaises(LarkExpressionError):
            LarkExpression("3x%5")

        # Test tokenization
        self.assertEqual(lark_tokenize("1 a a^-1"), ["1", "a", "a^-1"])
        self.assertEqual(lark_tokenize("max(n, 3) n"), ["max(n,3)", "n"])

    def test_field_expr(self):

        f = FieldSpec.get(*GF16)

        self.assertEqual(FieldExpression("a^3+a+1", f).evaluate(), 0xB)
        self.assertEqual(parse_element("a^-2", f), 0xD)
        self.assertEqual(parse_element("alpha^2", f), 4)
        self.assertEqual(parse_element("inv(a+1)", f), 0xE)
        self.assertEqual(parse_element("0x9", f), 9)
        self.assertEqual(parse_element("a*(a+1)", f), 6)
        self.assertEqual(parse_element("3", f), 3)

        with self.assertRaises(LarkExpressionError):
            parse_element("a^x", f)
        with self.assertRaises(LarkExpressionError):
            parse_element("a/0", f)
        with self.assertRaises(LarkExpressionError):
            parse_element("16", f)
        with self.assertRaises(LarkExpressionError):
            parse_element("a^1.5", f)

    def test_keyword(self):

        # Basic keyword
        kw = CampaignKeyword(["a b c"])

        self.assertEqual(kw.evaluate(), [["a", "b", "c"]])
        self.assertEqual(len(kw), 1)

        with self.assertRaises(RuntimeError):
            CampaignKeyword(["a b c", "d e f"])

        class RangeKeyword(CampaignKeyword):
            accept_range = True

        rkw = RangeKeyword(["a b c", "d e f"])
        self.assertEqual(rkw.evaluate(), [["a", "b", "c"], ["d", "e", "f"]])
        self.assertEqual(len(rkw), 2)

        # Test that the default works

        class DefKeyword(CampaignKeyword):
            default = "1"

        dkw = DefKeyword()

        self.assertEqual(dkw.evaluate()[0][0], "1")

        # Numerical ones, with the order as variable
        nkw = EvaluateKeyword(["n-1 n 2^2"])

        self.assertEqual(nkw.evaluate(n=5)[0], [4, 5, 4])

        fkw = FieldKeyword(["1 a a^-1"])
        self.assertEqual(fkw.evaluate()[0], ["1", "a", "a^-1"])
        self.assertEqual(fkw.evaluate(FieldSpec.get(*GF16))[0], [1, 2, 9])

        # Some failure cases
        with self.assertRaises(RuntimeError):
            CampaignKeyword([], args=["a"])  # One argument too much

    def test_input_keywords(self):

        nkw = InputKeywords["name"]()
        self.assertEqual(nkw.evaluate()[0], ["nmdslab"])

        pkw = InputKeywords["powers"]()
        self.assertEqual(pkw.evaluate(n=6), [[5, 6]])

        fkw = InputKeywords["field"]()
        self.assertEqual(fkw.evaluate(), [["4:0x13"]])

        with self.assertRaises(ValueError):
            InputKeywords["mode"](["annealing"])
        with self.assertRaises(ValueError):
            InputKeywords["field"](["4:0x15"])
        with self.assertRaises(ValueError):
            InputKeywords["predicate"](["symmetric"])
        with self.assertRaises(RuntimeError):
            InputKeywords["order"](["4", "5"])

    def test_input(self):

        e1 = StringIO(
            """
name
    table-n5
order
    5
fixed_xor
    3
# Both powers
powers
    n-1 n
"""
        )

        i1 = CampaignInput(e1)
        ev = i1.evaluate()

        self.assertEqual(ev["name"].value, [["table-n5"]])
        self.assertEqual(ev["order"].value, [[5]])
        self.assertEqual(ev["fixed_xor"].value, [[3]])
        self.assertEqual(ev["powers"].value, [[4, 5]])
        self.assertEqual(ev["mode"].value, [["reduced-dls"]])
        self.assertEqual(ev["field"].value, [["4:0x13"]])
        self.assertNotIn("budget", ev)

        # Mode defaults, overridden by the file
        e2 = StringIO(
            """
mode
    exhaustive-k1
order
    4
field
    2:0x7
"""
        )

        ev = CampaignInput(e2).evaluate()
        self.assertEqual(ev["field"].value, [["2:0x7"]])
        self.assertEqual(ev["fixed_xor"].value, [[1]])
        self.assertEqual(ev["powers"].value, [[4]])

        # Errors
        with self.assertRaises(CampaignInputError):
            CampaignInput(StringIO("fixed_xor\n    3\n")).evaluate()
        with self.assertRaises(CampaignInputError):
            CampaignInput(StringIO("order\n    4\nspins\n    mu\n"))
        with self.assertRaises(CampaignInputError):
            CampaignInput(StringIO("order\n    4\norder\n    5\n"))
        with self.assertRaises(CampaignInputError):
            CampaignInput(StringIO("order\n    4\n      5\n"))
        with self.assertRaises(CampaignInputError):
            CampaignInput(StringIO("    4\norder\n"))
        with self.assertRaises(CampaignInputError):
            CampaignInput(StringIO("mode\n    annealing\norder\n    4\n"))


class TestSpecs(unittest.TestCase):
    def setUp(self):
        self.f = FieldSpec.get(*GF16)

    def test_split(self):

        self.assertEqual(split_top("[1,2],3"), ["[1,2]", "3"])
        self.assertEqual(split_top("inv(a, 1);2", ";"), ["inv(a, 1)", "2"])
        self.assertEqual(split_top(""), [])

        with self.assertRaises(SpecParseError):
            split_top("(1,2")
        with self.assertRaises(SpecParseError):
            split_top("1,2]")

    def test_permutation(self):

        self.assertEqual(parse_permutation("[2,3,4,1]").images, (2, 3, 4, 1))
        self.assertEqual(parse_permutation("2 3 4 1").images, (2, 3, 4, 1))

        with self.assertRaises(SpecParseError):
            parse_permutation("[1,1]")
        with self.assertRaises(SpecParseError):
            parse_permutation("[a,b]")

    def test_entries(self):

        self.assertEqual(parse_entry("a^2", self.f), 4)
        self.assertEqual(parse_element_list("[1, a, a^-1]", self.f), [1, 2, 9])
        self.assertEqual(parse_entry("1", m=4), 1)
        self.assertEqual(
            parse_entry("[[2],[1]]", m=2), BinaryMatrix.from_positions([[2], [1]])
        )

        with self.assertRaises(SpecParseError):
            parse_entry("b", self.f)
        with self.assertRaises(SpecParseError):
            parse_entry("[[3],[1]]", m=2)

    def test_dls(self):

        spec = parse_dls_spec("rho=[2,3,4,1];d1=1,1,1,1;d2=a,0,0,1", self.f)

        self.assertEqual(spec.d2, (2, 0, 0, 1))
        self.assertEqual(spec.fixed_xor, 2)

        with self.assertRaises(SpecParseError):
            parse_dls_spec("rho=[2,3,4,1];d1=1,1,1,1", self.f)
        with self.assertRaises(SpecParseError):
            parse_dls_spec("rho=[1,3,4,2];d1=1,1,1,1;d2=0,0,0,0", self.f)
        with self.assertRaises(SpecParseError):
            parse_dls_spec("rho=[2,3,4,1];d1=1,1,1,1;d2=0,0,0,0;x=1", self.f)

    def test_gdls(self):

        spec = parse_gdls_spec(
            "rho1=[2,3,4,1];rho2=[1,2,3,4];d1=1,1,1,1;d2=0,1,0,1", self.f
        )
        self.assertEqual(spec.matrix().to_rows()[3], [0, 0, 1, 1])

        spec = parse_gdls_spec(
            "rho1=[2,3,4,1];rho2=[1,2,3,4];d1=1,1,1,1;d2=0,[[2],[3],[4],[1,2]],0,1",
            m=4,
        )
        M = spec.matrix()
        self.assertIsInstance(M, BlockMatrix)
        self.assertEqual(M.block(1, 1).positions(), [[2], [3], [4], [1, 2]])

        with self.assertRaises(SpecParseError):
            parse_gdls_spec(
                "rho1=[2,3,4,1];rho2=[2,1,3,4];d1=1,1,1,1;d2=0,1,0,1", self.f
            )


class TestMatrixIO(unittest.TestCase):
    def test_dicts(self):

        f = FieldSpec.get(*GF16)
        M = FieldMatrix([[0, 2], [0xD, 1]], f)

        d = matrix_to_dict(M)
        self.assertEqual(d["field"], {"r": 4, "poly": "0x13"})
        self.assertEqual(d["rows"], [["0x0", "0x2"], ["0xd", "0x1"]])
        self.assertEqual(matrix_from_dict(d), M)

        B = BlockMatrix([[1, BinaryMatrix.from_positions([[2], [1]])], [0, 1]], 2)
        d = matrix_to_dict(B)
        self.assertEqual(d["rows"], [[[[1], [2]], [[2], [1]]], [0, [[1], [2]]]])
        self.assertEqual(matrix_from_dict(d), B)

        self.assertEqual(
            matrix_to_dict(BinaryMatrix.identity(2))["field"], {"r": 1, "poly": "0x3"}
        )

        with self.assertRaises(MatrixFormatError):
            matrix_from_dict({"rows": [["0x1"]]})
        with self.assertRaises(MatrixFormatError):
            matrix_from_dict({"field": {"r": 4, "poly": "0x15"}, "rows": [["0x1"]]})
        with self.assertRaises(MatrixFormatError):
            matrix_from_dict({"field": {"r": 4, "poly": "0x13"}, "rows": [["0x10"]]})

    def test_files(self):

        f = FieldSpec.get(*GF16)
        M = FieldMatrix([[1, 2], [3, 4]], f)

        with TemporaryDirectory() as d:
            path = os.path.join(d, "m.json")
            save_matrix(M, path)
            self.assertEqual(load_matrix(path), M)

            with open(path, "w") as fh:
                fh.write("[[1, 2]")
            with self.assertRaises(MatrixFormatError):
                load_matrix(path)
