"""keyword.py

Classes to define and read conveniently individual keywords of a campaign file
"""

import re
import sys
import inspect

from nmdslab.gf import parse_field, FieldError
from nmdslab.construct import FAMILIES
from nmdslab.input.larkeval import (
    LarkExpression,
    LarkExpressionError,
    lark_tokenize,
    parse_element,
)


def _valid_field(s):
    try:
        parse_field(" ".join(s))
    except FieldError:
        return False
    return True


class CampaignKeyword(object):
    """Generic class used to parse a keyword from a campaign file"""

    name = "keyword"
    block_size = 1
    accept_range = False
    default = None
    _validators = {}

    def __init__(self, block=[], args=[]):
        """Create an instance of a given keyword, passing the raw block of
        text as well as the arguments.

        Arguments:
            block {[str]} -- Lines of text defining the value of the keyword
            args {[any]} -- Any arguments appearing after the keyword

        """

        self._store_args(args)

        block = list(block)
        if len(block) % self.block_size != 0:
            raise RuntimeError(
                "Invalid block length for keyword {0}".format(self.name)
            )
        if not self.accept_range and len(block) > self.block_size:
            raise RuntimeError(
                "Can not accept more than one value for keyword {0}".format(self.name)
            )

        if len(block) == 0 and self.has_default:
            block = [l for l in self.default.split("\n") if l.strip()]

        self._store_values(block)

        self._validate_values()

    def _default_args(self):
        # Dummy function, used for type signature and processing of arguments
        return {}

    def _store_args(self, args):
        try:
            self._args = self._default_args(*args)
        except TypeError:
            raise RuntimeError(
                "Wrong number of arguments passed to keyword {0}".format(self.name)
            )

    def _store_values(self, block):
        self._values = [l.split() for l in block]

    def _validate_values(self):

        for rule, vfunc in self._validators.items():
            if not all([vfunc(b) for b in self._values]):
                raise ValueError(
                    "Invalid block for keyword {0}: {1}".format(self.name, rule)
                )

    @property
    def arguments(self):
        return {**self._args}

    @property
    def id(self):
        return self.name

    @property
    def has_default(self):
        return self.default is not None

    def evaluate(self):
        return [list(v) for v in self._values]

    def __len__(self):
        return len(self._values)


class EvaluateKeyword(CampaignKeyword):
    """Specialised class for keywords with integer expression values, which
    may refer to the matrix order n"""

    name = "evaluate_keyword"
    _variables = ("n",)
    _functions = {"min": min, "max": max}

    def _store_values(self, block):
        try:
            self._values = [
                [
                    LarkExpression(
                        tk, variables=self._variables, functions=self._functions
                    )
                    for tk in lark_tokenize(l)
                ]
                for l in block
            ]
        except LarkExpressionError as e:
            raise ValueError("Invalid block for keyword {0}: {1}".format(self.name, e))

    def _validate_values(self):
        pass

    def evaluate(self, **variables):
        allvars = {k: v for k, v in variables.items() if k in self._variables}
        return [[expr.evaluate(**allvars) for expr in line] for line in self._values]


class FieldKeyword(CampaignKeyword):
    """Specialised class for keywords whose values are elements of the
    campaign field, written as expressions in a"""

    name = "field_keyword"

    def _store_values(self, block):
        try:
            self._values = [lark_tokenize(l) for l in block]
        except LarkExpressionError as e:
            raise ValueError("Invalid block for keyword {0}: {1}".format(self.name, e))

    def evaluate(self, field=None):
        if field is None:
            return super(FieldKeyword, self).evaluate()
        return [[parse_element(tk, field) for tk in line] for line in self._values]


# Now on to defining the actual keywords that are admitted in campaign files
class KWName(CampaignKeyword):

    name = "name"
    default = "nmdslab"


class KWMode(CampaignKeyword):

    name = "mode"
    default = "reduced-dls"
    _validators = {
        "Invalid value": lambda s: len(s) == 1
        and s[0]
        in (
            "reduced-dls",
            "random-gdls",
            "exhaustive-k1",
            "binary-branch-bound",
            "family-scan",
        )
    }


class KWOrder(EvaluateKeyword):

    name = "order"
    _variables = ()


class KWFixedXor(EvaluateKeyword):

    name = "fixed_xor"
    default = "0"


class KWField(CampaignKeyword):

    name = "field"
    default = "4:0x13"
    _validators = {"Invalid field": _valid_field}


class KWPowers(EvaluateKeyword):

    name = "powers"
    accept_range = True
    default = "n-1 n"


class KWSeed(EvaluateKeyword):

    name = "seed"
    default = "0"


class KWBudget(EvaluateKeyword):

    name = "budget"


class KWSample(EvaluateKeyword):

    name = "sample"


class KWEntries(FieldKeyword):

    name = "entries"
    accept_range = True


class KWD1(CampaignKeyword):

    name = "d1"
    default = "identity"
    _validators = {"Invalid value": lambda s: s in (["identity"], ["free"])}


class KWRho1(CampaignKeyword):

    name = "rho1"


class KWRho2(CampaignKeyword):

    name = "rho2"


class KWFamily(CampaignKeyword):

    name = "family"
    default = "circulant"
    _validators = {"Invalid value": lambda s: len(s) == 1 and s[0] in FAMILIES}


class KWPredicate(CampaignKeyword):

    name = "predicate"
    default = "any"
    _validators = {
        "Invalid value": lambda s: s in (["any"], ["involutory"], ["orthogonal"])
    }


# Compile all KW classes into a single dictionary automatically
InputKeywords = {
    obj.name: obj
    for name, obj in inspect.getmembers(sys.modules[__name__])
    if (inspect.isclass(obj) and re.match("KW[0-9a-zA-Z]+", name))
}
