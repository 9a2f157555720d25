"""larkeval.py

Expressions read with a Lark grammar: integer expressions in the order n for
campaign keywords, and expressions over GF(2^r) in the generator a for matrix
entries"""

from functools import lru_cache

from lark import Lark
from lark.exceptions import UnexpectedInput

from nmdslab.gf import FieldElement, FieldError

_expr_parser = Lark(
    """
    ?start: sum

    ?function: NAME "(" (sum ("," sum)*)? ")" -> fun

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> sub

    ?product: power
        | product "*" power  -> mul
        | product "/" power  -> div

    ?power: atom
        | power "^" atom -> pow

    ?atom: HEXNUMBER        -> hex
         | NUMBER           -> num
         | "-" atom         -> neg
         | NAME             -> var
         | "(" sum ")"
         | function

    HEXNUMBER.2: /0[xX][0-9a-fA-F]+/

    %import common.CNAME -> NAME
    %import common.NUMBER
    %import common.WS_INLINE

    %ignore WS_INLINE
""",
    parser="lalr",
)

FIELD_VARIABLES = ("a", "alpha")

_BINARY = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
    "pow": lambda x, y: x ** y,
}


class LarkExpressionError(Exception):
    pass


def lark_tokenize(line):
    """Split a line in space-separated expressions. Pieces are glued back
    together until they parse, so 'max(n, 3) n' gives ['max(n,3)', 'n']."""

    tokens = []
    pending = ""
    for piece in line.split():
        pending += piece
        try:
            _expr_parser.parse(pending)
        except UnexpectedInput:
            continue
        tokens.append(pending)
        pending = ""

    if pending:
        raise LarkExpressionError(
            "Line '{0}' can not be split into valid expressions".format(line)
        )

    return tokens


def _number(text):
    v = float(text)
    return int(v) if v.is_integer() and "." not in text and "e" not in text.lower() else v


def _names(tree, rule):
    return set(t.children[0].value for t in tree.find_data(rule))


class LarkExpression(object):
    def __init__(self, source, variables=(), functions={}):
        """Parse an expression, accepting only the given variables and
        functions. Expressions without variables are evaluated at once.

        Arguments:
            source {str} -- Source code of the expression

        Keyword Arguments
            variables {[str]} -- Names of acceptable variables
            functions {{str: callable}} -- Names and bodies of acceptable
                                           functions

        Raises:
            LarkExpressionError -- If the expression does not parse, uses
                                   anything not allowed, or can not be
                                   evaluated
        """

        self._source = source
        try:
            self._tree = _expr_parser.parse(source)
        except UnexpectedInput:
            raise LarkExpressionError("Invalid expression '{0}'".format(source))

        self._variables = _names(self._tree, "var")
        self._functions = _names(self._tree, "fun")
        self._all_variables = set(variables)

        unknown = self._variables - self._all_variables
        if unknown:
            raise LarkExpressionError(
                "Invalid variable {0} used in '{1}'".format(
                    ", ".join(sorted(unknown)), source
                )
            )
        unknown = self._functions - set(functions)
        if unknown:
            raise LarkExpressionError(
                "Invalid function {0} used in '{1}'".format(
                    ", ".join(sorted(unknown)), source
                )
            )

        self._function_bodies = {fn: functions[fn] for fn in self._functions}

        self._store_eval = None
        if not self._variables:
            self._store_eval = self._run({})

    def _walk(self, root, variables):
        if not hasattr(root, "data"):
            return root.value

        d = root.data
        if d == "num":
            return _number(root.children[0].value)
        elif d == "hex":
            return int(root.children[0].value, 16)
        elif d == "var":
            return variables[root.children[0].value]

        args = [self._walk(c, variables) for c in root.children]
        if d == "neg":
            return -args[0]
        elif d == "fun":
            return self._function_bodies[args[0]](*args[1:])
        return _BINARY[d](*args)

    def _run(self, variables):
        try:
            return self._walk(self._tree, variables)
        except (ZeroDivisionError, TypeError, FieldError) as e:
            raise LarkExpressionError(
                "Can not evaluate '{0}': {1}".format(self._source, e)
            )

    @property
    def source(self):
        return self._source

    @property
    def functions(self):
        return self._functions

    @property
    def variables(self):
        return self._variables

    def evaluate(self, **variables):
        """Evaluate the expression for the given values of its variables

        Keyword Arguments:
            All the variable names appearing in self.variables, and possibly
            any other acceptable one.

        Returns:
            result {any} -- Result of evaluating the expression.
        """

        given = set(variables)
        if self._variables - given:
            raise LarkExpressionError(
                "Missing values for {0} when evaluating '{1}'".format(
                    ", ".join(sorted(self._variables - given)), self._source
                )
            )
        if given - self._all_variables:
            raise LarkExpressionError(
                "Unexpected values for {0} when evaluating '{1}'".format(
                    ", ".join(sorted(given - self._all_variables)), self._source
                )
            )

        if self._store_eval is not None:
            return self._store_eval
        return self._run(variables)


class FieldExpression(LarkExpression):
    def __init__(self, source, field):
        """A constant expression over GF(2^r) in the generator a (or alpha)

        Integer and hexadecimal literals stand for the field element with
        that polynomial-basis value. Exponents are integers and may be
        negative, e.g. 'a^-2', 'a^3+a+1', '0x9', 'inv(a+1)'.

        Arguments:
            source {str} -- Source code of the expression
            field {FieldSpec} -- The field
        """

        self._field = field
        super(FieldExpression, self).__init__(
            source, variables=FIELD_VARIABLES, functions={"inv": lambda x: x.inverse()}
        )
        if self._store_eval is None:
            self._store_eval = self._run({})

    def _exponent(self, root):
        d = getattr(root, "data", None)
        if d == "num":
            v = _number(root.children[0].value)
            if isinstance(v, int):
                return v
        elif d == "hex":
            return int(root.children[0].value, 16)
        elif d == "neg":
            return -self._exponent(root.children[0])
        elif d in ("add", "sub", "mul"):
            return _BINARY[d](*[self._exponent(c) for c in root.children])

        raise LarkExpressionError("Invalid exponent in '{0}'".format(self._source))

    def _walk(self, root, variables):
        d = getattr(root, "data", None)
        if d == "pow":
            return self._walk(root.children[0], variables) ** self._exponent(
                root.children[1]
            )
        elif d in ("num", "hex"):
            return self._field.element(self._exponent(root))
        elif d == "var":
            return self._field.alpha
        elif d == "neg":
            # -x = x in characteristic 2
            return self._walk(root.children[0], variables)
        return super(FieldExpression, self)._walk(root, variables)

    def evaluate(self):
        return self._store_eval


@lru_cache(maxsize=4096)
def parse_element(source, field):
    """Evaluate a field expression such as 'a^-2' to a FieldElement"""

    v = FieldExpression(source.strip(), field).evaluate()
    if not isinstance(v, FieldElement):
        raise LarkExpressionError("'{0}' is not a field element".format(source))
    return v
