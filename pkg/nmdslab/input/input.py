"""input.py

Class to read in campaign files for the nmdslab search command
"""

import re
from io import StringIO
from collections import namedtuple

from nmdslab.input.keyword import InputKeywords, EvaluateKeyword
from nmdslab.input.larkeval import LarkExpressionError


class CampaignInputError(Exception):
    pass


CampaignInputValue = namedtuple("CampaignInputValue", ["name", "args", "value"])

# Mode defaults as campaign files
_mode_defaults = {
    "exhaustive-k1": """
field
    1:0x3
fixed_xor
    1
powers
    n
""",
    "binary-branch-bound": """
field
    1:0x3
powers
    1
""",
    "family-scan": """
powers
    1
""",
    "random-gdls": """
powers
    n
""",
}


def _read_blocks(lines):
    # Split lines in blocks: a keyword line followed by indented values
    raw_blocks = {}
    curr_block = None

    indre = re.compile("(\\s+)[^\\s]")
    indent = None

    for l in lines:

        l = l.split("#", 1)[0]

        if l.strip() == "":
            continue
        m = indre.match(l)
        if m:
            if indent is None:
                indent = m.groups()[0]
            if m.groups()[0] != indent:
                raise CampaignInputError("Invalid indent in campaign file")
            try:
                raw_blocks[curr_block].append(l.strip())
            except KeyError:
                raise CampaignInputError("Badly formatted campaign file")
        else:
            curr_block = l.strip()
            if curr_block in raw_blocks:
                raise CampaignInputError(
                    "Keyword {0} defined twice".format(curr_block)
                )
            raw_blocks[curr_block] = []
            indent = None

    return raw_blocks


class CampaignInput(object):
    def __init__(self, fs=None):
        """Read in a campaign file

        Read in a campaign file from an opened file stream

        Arguments:
            fs {TextIOBase} -- I/O stream (should be file, can be StringIO)
        """

        self._keywords = {}

        if fs is None:
            return

        raw_blocks = _read_blocks(fs.readlines())

        # The mode sets some defaults, overridden by anything in the file
        if "mode" in raw_blocks:
            kw = self._make_keyword("mode", raw_blocks["mode"])
            mode = kw.evaluate()[0][0]
            if mode in _mode_defaults:
                mock_i = CampaignInput(StringIO(_mode_defaults[mode]))
                self._keywords.update(mock_i._keywords)

        for header, block in raw_blocks.items():
            self._keywords[header.split()[0]] = self._make_keyword(header, block)

    def _make_keyword(self, header, block):
        hsplit = header.split()
        name = hsplit[0]
        args = hsplit[1:]

        try:
            KWClass = InputKeywords[name]
        except KeyError:
            raise CampaignInputError(
                "Invalid keyword {0} found in campaign file".format(name)
            )

        try:
            return KWClass(block, args=args)
        except (RuntimeError, ValueError) as e:
            raise CampaignInputError(str(e))

    @property
    def keywords(self):
        return {**self._keywords}

    def evaluate(self):
        """Produce a full dictionary with a value for every keyword that is
        either defined or has a default. Field-element keywords are returned
        as unevaluated tokens, since they need the campaign field."""

        if "order" not in self._keywords or len(self._keywords["order"]) == 0:
            raise CampaignInputError("Campaign file must define the order")

        result = {}

        order = self._keywords["order"]
        n = order.evaluate()[0][0]
        result["order"] = CampaignInputValue("order", order.arguments, [[n]])

        for name, KWClass in InputKeywords.items():
            if name == "order":
                continue

            if name in self._keywords:
                kw = self._keywords[name]
            elif KWClass.default is not None:
                kw = KWClass()
            else:
                continue

            try:
                if issubclass(KWClass, EvaluateKeyword):
                    val = kw.evaluate(n=n)
                else:
                    val = kw.evaluate()
            except (LarkExpressionError, ValueError) as e:
                raise CampaignInputError(
                    "Can not evaluate keyword {0}: {1}".format(name, e)
                )

            result[name] = CampaignInputValue(name, kw.arguments, val)

        return result
