"""specs.py

Parsing of the inline forms of permutations, element lists and DLS / GDLS
blueprints used on the command line and in the catalog, e.g.

    rho=[2,3,4,1];d1=0x2,0x1,0x1,0x1;d2=0x0,0x1,0x0,0x1
"""

import json

from nmdslab.construct import Permutation, DlsSpec, GdlsSpec, ConstructionError
from nmdslab.linalg import BinaryMatrix, MatrixError
from nmdslab.input.larkeval import parse_element, LarkExpressionError


class SpecParseError(ValueError):
    pass


def split_top(text, sep=","):
    """Split text at the separators not enclosed in brackets or parentheses"""

    parts = []
    depth = 0
    curr = ""
    for c in text:
        if c in "[(":
            depth += 1
        elif c in "])":
            depth -= 1
            if depth < 0:
                raise SpecParseError("Unbalanced brackets in '{0}'".format(text))
        if c == sep and depth == 0:
            parts.append(curr.strip())
            curr = ""
        else:
            curr += c
    if depth != 0:
        raise SpecParseError("Unbalanced brackets in '{0}'".format(text))
    if curr.strip() != "" or len(parts) > 0:
        parts.append(curr.strip())
    return parts


def parse_permutation(text):
    """Parse '[2,3,4,1]', '2,3,4,1' or '2 3 4 1' as a 1-based permutation"""

    t = text.strip()
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    try:
        images = [int(v) for v in t.replace(",", " ").split()]
        return Permutation(images)
    except (ValueError, ConstructionError) as e:
        raise SpecParseError("Invalid permutation '{0}': {1}".format(text, e))


def parse_entry(text, field=None, m=None):
    """A field element expression, or, in the ring of m x m binary matrices,
    0, 1 or a list of nonzero positions such as [[2],[3],[1,3]]"""

    t = text.strip()
    if m is not None:
        if t in ("0", "1"):
            return int(t)
        try:
            return BinaryMatrix.from_positions(json.loads(t), m)
        except (ValueError, TypeError, MatrixError) as e:
            raise SpecParseError("Invalid block '{0}': {1}".format(text, e))

    try:
        return parse_element(t, field).value
    except LarkExpressionError as e:
        raise SpecParseError(str(e))


def parse_element_list(text, field=None, m=None):
    t = text.strip()
    if t.startswith("[") and t.endswith("]") and m is None:
        t = t[1:-1]
    return [parse_entry(v, field, m) for v in split_top(t)]


parse_row = parse_element_list


def _fields(text, names):
    vals = {}
    for part in split_top(text, ";"):
        if "=" not in part:
            raise SpecParseError("Expected name=value, got '{0}'".format(part))
        k, v = part.split("=", 1)
        vals[k.strip()] = v.strip()

    if set(vals) != set(names):
        raise SpecParseError(
            "Expected fields {0}, got {1}".format(", ".join(names), ", ".join(vals))
        )
    return vals


def parse_dls_spec(text, field):
    """Parse 'rho=..;d1=..;d2=..'"""

    v = _fields(text, ("rho", "d1", "d2"))
    try:
        return DlsSpec(
            parse_permutation(v["rho"]),
            parse_element_list(v["d1"], field),
            parse_element_list(v["d2"], field),
            field,
        )
    except ConstructionError as e:
        raise SpecParseError(str(e))


def parse_gdls_spec(text, field=None, m=None):
    """Parse 'rho1=..;rho2=..;d1=..;d2=..' over a field, or over the ring of
    m x m binary matrices"""

    v = _fields(text, ("rho1", "rho2", "d1", "d2"))
    try:
        return GdlsSpec(
            parse_permutation(v["rho1"]),
            parse_permutation(v["rho2"]),
            parse_element_list(v["d1"], field, m),
            parse_element_list(v["d2"], field, m),
            field=field,
            m=m,
        )
    except ConstructionError as e:
        raise SpecParseError(str(e))
