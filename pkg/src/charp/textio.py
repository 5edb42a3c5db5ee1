"""Canonical text printing and a recursive-descent parser for all object kinds.

Grammar (loosest to tightest binding)::

    expr   := term (('+' | '-') term)*
    term   := wedge (('*' | '/') wedge)*
    wedge  := unary ('^' unary)*          -- '^' not followed by an integer
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)*        -- right-associative
    atom   := INT | '[' INT ']' | NAME | '(' expr ')'
            | 'd' '(' expr ')' | 'dlog' '(' expr ')'
            | 'gen' '(' INT ',' INT ')' | '{' expr (',' expr)* '}'

``[k]`` is the F_q element with integer code k (only meaningful when q > p).
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from .errors import ConfigError, MathError, ParseError
from .fields import FieldConfig
from .forms import DifferentialForm, LogTermSum, exterior_d, log_to_form
from .poly import Polynomial
from .rational import RationalFunction

if TYPE_CHECKING:
    from .laurent import LaurentClass, LaurentField

# ---------------------------------------------------------------------------
# printing


def format_coefficient(gf, c) -> str:
    return gf.format(c)


def _monomial_text(config, exps) -> str:
    parts = []
    for name, k in zip(config.variables, exps):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    gf = f.config.gf
    out = []
    for e, c in f.sorted_terms():
        mono = _monomial_text(f.config, e)
        if not mono:
            out.append(gf.format(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{gf.format(c)}*{mono}")
    return " + ".join(out)


def _needs_parens_den(den: Polynomial) -> bool:
    if len(den.terms) > 1:
        return True
    (e, c), = den.terms.items()
    return c != 1 or sum(1 for k in e if k) > 1


def format_rational(f: RationalFunction) -> str:
    num = format_polynomial(f.num)
    if f.den.is_one():
        return num
    if len(f.num.terms) > 1:
        num = f"({num})"
    den = format_polynomial(f.den)
    if _needs_parens_den(f.den):
        den = f"({den})"
    return f"{num}/{den}"


def _with_coefficient(g: RationalFunction, piece: str) -> str:
    if g.is_one():
        return piece
    text = format_rational(g)
    if g.den.is_one() and len(g.num.terms) == 1:
        return f"{text}*{piece}"
    return f"({text})*{piece}"


def form_terms(omega: DifferentialForm):
    """Terms (coefficient on the dlog basis, variable names) in basis order."""
    config = omega.config
    out = []
    for I in sorted(omega.coeffs):
        g = omega.coeffs[I]
        for i in I:
            g = g * RationalFunction.variable(config, i)
        out.append((g, [config.variables[i] for i in I]))
    return out


def format_form(omega: DifferentialForm) -> str:
    if omega.degree == 0:
        return format_rational(omega.scalar_value())
    if omega.is_zero():
        return "0"
    out = []
    for g, names in form_terms(omega):
        piece = "^".join(f"dlog({v})" for v in names)
        out.append(_with_coefficient(g, piece))
    return " + ".join(out)


def format_logsum(t: LogTermSum) -> str:
    canon = t.canonical()
    if not canon.terms:
        return "0"
    out = []
    for a, bs in canon.terms:
        if not bs:
            out.append(format_rational(a))
            continue
        piece = "^".join(f"dlog({format_rational(b)})" for b in bs)
        out.append(_with_coefficient(a, piece))
    return " + ".join(out)


def format_laurent(cls) -> str:
    pi = cls.field.pi
    out = []
    for i in sorted(cls.components, reverse=True):
        omega, nu = cls.components[i]
        prefix = f"{pi}^-{i}*" if i else ""
        if not omega.is_zero():
            body = format_form(omega)
            out.append(f"{prefix}({body})" if i or " + " in body else body)
        if nu is not None and not nu.is_zero():
            out.append(f"{prefix}({format_form(nu)})^dlog({pi})")
    return " + ".join(out) if out else "0"


def format_milnor(s) -> str:
    if not s.terms:
        return "0"
    out = []
    for entries, k in s.terms:
        body = "{" + ", ".join(format_rational(e) for e in entries) + "}"
        if k == 1:
            text = body
        elif k == -1:
            text = f"-{body}"
        else:
            text = f"{k}*{body}"
        out.append(text)
    joined = out[0]
    for text in out[1:]:
        joined += f" - {text[1:]}" if text.startswith("-") else f" + {text}"
    return joined


def format_value(value) -> str:
    from .laurent import LaurentClass
    from .symbols import MilnorSymbol

    if isinstance(value, RationalFunction):
        return format_rational(value)
    if isinstance(value, Polynomial):
        return format_polynomial(value)
    if isinstance(value, DifferentialForm):
        return format_form(value)
    if isinstance(value, LogTermSum):
        return format_logsum(value)
    if isinstance(value, LaurentClass):
        return format_laurent(value)
    if isinstance(value, MilnorSymbol):
        return format_milnor(value)
    raise TypeError(f"cannot format {type(value).__name__}")


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\]{},]))")
KEYWORDS = ("d", "dlog", "gen")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text}"


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                break
            skip = len(rest) - len(rest.lstrip())
            line, col = _position(text, pos + skip)
            raise ParseError(f"unexpected character {rest.lstrip()[0]!r}", line, col,
                             ("integer", "name", "operator"))
        kind = m.lastgroup
        start = m.start(kind)
        line, col = _position(text, start)
        tokens.append(_Token(kind, m.group(kind), line, col))
        pos = m.end()
    line, col = _position(text, len(text))
    tokens.append(_Token("end", "", line, col))
    return tokens


def expression_names(text: str):
    """Variable names used by an expression (keywords excluded).

    ``gen(n, l)`` contributes the generic-symbol variables x_i, y_ij.
    """
    tokens = tokenize(text)
    names = []
    for k, tok in enumerate(tokens):
        nxt = tokens[k + 1] if k + 1 < len(tokens) else None
        if tok.kind != "name":
            continue
        if tok.text in KEYWORDS and nxt is not None and nxt.text == "(":
            if tok.text == "gen":
                ints = [t.text for t in tokens[k + 2:k + 6] if t.kind == "int"]
                if len(ints) >= 2:
                    from .symbols import generic_variables

                    names.extend(generic_variables(int(ints[0]), int(ints[1])))
            continue
        names.append(tok.text)
    return list(dict.fromkeys(names))


def natural_key(name: str):
    m = re.match(r"([a-z_]*)(\d*)(.*)\Z", name)
    head, digits, tail = m.groups()
    return (head, int(digits) if digits else -1, tail)


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str, config: FieldConfig, pi: str | None):
        self.text = text
        self.tokens = tokenize(text)
        self.k = 0
        self.config = config
        self.pi = pi
        self.in_symbol = False

    # token helpers ----------------------------------------------------------
    @property
    def tok(self):
        return self.tokens[self.k]

    def peek(self, offset=1):
        return self.tokens[min(self.k + offset, len(self.tokens) - 1)]

    def error(self, message, expected=(), tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col, expected)

    def expect(self, text):
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"found {found!r}", (repr(text),))
        self.k += 1

    def expect_int(self):
        if self.tok.kind != "int":
            raise self.error(f"found {self.tok.text or 'end of input'!r}", ("integer",))
        value = int(self.tok.text)
        self.k += 1
        return value

    # grammar ----------------------------------------------------------------
    def parse(self):
        value = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}", ("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return value

    def expr(self):
        value = self.term()
        while self.tok.text in ("+", "-"):
            op, tok = self.tok.text, self.tok
            self.k += 1
            rhs = self.term()
            value = self.combine(op, value, rhs, tok)
        return value

    def term(self):
        value = self.wedge()
        while self.tok.text in ("*", "/"):
            op, tok = self.tok.text, self.tok
            self.k += 1
            rhs = self.wedge()
            value = self.combine(op, value, rhs, tok)
        return value

    def wedge(self):
        value = self.unary()
        while self.tok.text == "^" and not self._power_follows():
            tok = self.tok
            self.k += 1
            rhs = self.unary()
            value = self.combine("^", value, rhs, tok)
        return value

    def _power_follows(self):
        nxt = self.peek()
        return nxt.kind == "int" or (nxt.text == "-" and self.peek(2).kind == "int")

    def unary(self):
        if self.tok.text == "-":
            tok = self.tok
            self.k += 1
            return self.negate(self.unary(), tok)
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "^" and self._power_follows():
            tok = self.tok
            exponent = self.exponent()
            return self.raise_power(base, exponent, tok)
        return base

    def exponent(self):
        self.expect("^")
        sign = 1
        if self.tok.text == "-":
            sign = -1
            self.k += 1
        value = sign * self.expect_int()
        if self.tok.text == "^" and self._power_follows():
            value = value ** self.exponent()
        return value

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.k += 1
            return int(tok.text)
        if tok.text == "[":
            self.k += 1
            code = self.expect_int()
            self.expect("]")
            if code >= self.config.q:
                raise self.error(f"field element [{code}] outside F_{self.config.q}", tok=tok)
            return RationalFunction.constant(self.config, code)
        if tok.text == "(":
            self.k += 1
            value = self.expr()
            self.expect(")")
            return value
        if tok.text == "{":
            return self.symbol()
        if tok.kind == "name":
            if tok.text in KEYWORDS and self.peek().text == "(":
                return self.call()
            self.k += 1
            if tok.text == self.pi and self.in_symbol:
                raise self.error(f"uniformizer {tok.text!r} cannot appear in a Milnor symbol", tok=tok)
            try:
                return RationalFunction.variable(self.config, tok.text)
            except ConfigError as exc:
                raise self.error(str(exc), tuple(self.config.variables), tok=tok) from None
        raise self.error(f"found {tok.text or 'end of input'!r}",
                         ("integer", "name", "'('", "'['", "'{'", "d(", "dlog(", "gen("))

    def call(self):
        tok = self.tok
        name = tok.text
        self.k += 1
        self.expect("(")
        if name == "gen":
            n = self.expect_int()
            self.expect(",")
            l = self.expect_int()
            self.expect(")")
            from .symbols import GenericSymbolSpec, make_generic_symbol

            try:
                spec = GenericSymbolSpec(n, l, self.config.p, self.config.e)
                return make_generic_symbol(spec).reindex(self.config)
            except (ConfigError, ValueError) as exc:
                raise self.error(f"gen({n},{l}): {exc}", tok=tok) from None
        arg = self.expr()
        self.expect(")")
        if name == "dlog":
            arg = self.as_rational(arg, tok)
            if arg.is_zero():
                raise self.error("dlog of zero", tok=tok)
            return LogTermSum.dlog(arg)
        return exterior_d(self.as_form(arg))

    def symbol(self):
        from .symbols import MilnorSymbol

        tok = self.tok
        self.expect("{")
        saved = self.in_symbol
        self.in_symbol = True
        entries = [self.as_rational(self.expr(), tok)]
        while self.tok.text == ",":
            self.k += 1
            entries.append(self.as_rational(self.expr(), tok))
        self.in_symbol = saved
        self.expect("}")
        try:
            return MilnorSymbol.from_entries(self.config, entries)
        except MathError as exc:
            raise self.error(str(exc), tok=tok) from None

    # value algebra ----------------------------------------------------------
    def as_rational(self, value, tok):
        if isinstance(value, int):
            return RationalFunction.from_int(self.config, value)
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, LogTermSum) and value.degree == 0:
            return log_to_form(value).scalar_value()
        if isinstance(value, DifferentialForm) and value.degree == 0:
            return value.scalar_value()
        raise self.error(f"expected a function, found a {self.kind(value)}", tok=tok)

    def as_form(self, value, tok=None):
        from .symbols import MilnorSymbol

        if isinstance(value, (int, RationalFunction)):
            return DifferentialForm.scalar(self.as_rational(value, tok))
        if isinstance(value, LogTermSum):
            return log_to_form(value)
        if isinstance(value, MilnorSymbol):
            raise self.error("Milnor symbols cannot be mixed with forms", tok=tok)
        return value

    @staticmethod
    def kind(value):
        if isinstance(value, (int, RationalFunction)):
            return "function"
        if isinstance(value, LogTermSum):
            return f"{value.degree}-form"
        if isinstance(value, DifferentialForm):
            return f"{value.degree}-form"
        return "Milnor symbol"

    def negate(self, value, tok):
        from .symbols import MilnorSymbol

        if isinstance(value, int):
            return -value
        if isinstance(value, MilnorSymbol):
            return value.scale(-1)
        return -value

    def raise_power(self, base, exponent, tok):
        if isinstance(base, int):
            if exponent >= 0:
                return base**exponent
            base = RationalFunction.from_int(self.config, base)
        if not isinstance(base, RationalFunction):
            raise self.error(f"integer power of a {self.kind(base)}", tok=tok)
        try:
            return base**exponent
        except MathError as exc:
            raise self.error(str(exc), tok=tok) from None

    def combine(self, op, a, b, tok):
        from .symbols import MilnorSymbol

        if isinstance(a, MilnorSymbol) or isinstance(b, MilnorSymbol):
            return self.combine_symbols(op, a, b, tok)
        if isinstance(a, int) and isinstance(b, int) and op in "+-*":
            return {"+": a + b, "-": a - b, "*": a * b}[op]
        if op in "+-":
            return self.add(a, b, op, tok)
        if op == "/":
            d = self.as_rational(b, tok)
            if d.is_zero():
                raise self.error("division by zero", tok=tok)
            if isinstance(a, (int, RationalFunction)):
                return self.as_rational(a, tok) / d
            return self.scale(a, d.inverse())
        if op == "*":
            if isinstance(a, (int, RationalFunction)):
                return self.scale(b, self.as_rational(a, tok))
            if isinstance(b, (int, RationalFunction)):
                return self.scale(a, self.as_rational(b, tok))
            raise self.error("use '^' for the wedge product of forms", tok=tok)
        # wedge
        if isinstance(a, (int, RationalFunction)):
            return self.scale(b, self.as_rational(a, tok))
        if isinstance(b, (int, RationalFunction)):
            return self.scale(a, self.as_rational(b, tok))
        if isinstance(a, LogTermSum) and isinstance(b, LogTermSum):
            return a.wedge(b)
        return self.as_form(a, tok).wedge(self.as_form(b, tok))

    def scale(self, value, f):
        if isinstance(value, (int, RationalFunction)):
            return self.as_rational(value, None) * f
        return value.scale(f)

    def add(self, a, b, op, tok):
        if isinstance(a, (int, RationalFunction)) and isinstance(b, (int, RationalFunction)):
            a, b = self.as_rational(a, tok), self.as_rational(b, tok)
            return a + b if op == "+" else a - b
        if isinstance(a, (int, RationalFunction)):
            a = LogTermSum.scalar(self.as_rational(a, tok))
        if isinstance(b, (int, RationalFunction)):
            b = LogTermSum.scalar(self.as_rational(b, tok))
        if a.degree != b.degree:
            raise self.error(f"cannot add a {a.degree}-form and a {b.degree}-form", tok=tok)
        if op == "-":
            b = -b
        if isinstance(a, LogTermSum) and isinstance(b, LogTermSum):
            return a + b
        return self.as_form(a, tok) + self.as_form(b, tok)

    def combine_symbols(self, op, a, b, tok):
        from .symbols import MilnorSymbol

        if op in "+-" and isinstance(a, MilnorSymbol) and isinstance(b, MilnorSymbol):
            return a + b if op == "+" else a + b.scale(-1)
        if op == "*":
            if isinstance(a, int) and isinstance(b, MilnorSymbol):
                return b.scale(a)
            if isinstance(b, int) and isinstance(a, MilnorSymbol):
                return a.scale(b)
        raise self.error("Milnor symbols only combine by '+', '-' and integer multiples", tok=tok)


def _finish(value, config):
    if isinstance(value, int):
        return RationalFunction.from_int(config, value)
    return value


def parse_value(text: str, config: FieldConfig, pi: str | None = None):
    """Parse into a RationalFunction, LogTermSum, DifferentialForm or MilnorSymbol."""
    return _finish(_Parser(text, config, pi).parse(), config)


def uses_variable(value, name) -> bool:
    from .symbols import MilnorSymbol

    config = value.config
    if name not in config.variables:
        return False
    j = config.index(name)
    if isinstance(value, MilnorSymbol):
        return any(j in e.support() for entries, _ in value.terms for e in entries)
    if isinstance(value, RationalFunction):
        return j in value.support()
    if isinstance(value, LogTermSum):
        value = log_to_form(value)
    return any(j in I or j in f.support() for I, f in value.coeffs.items())


def parse_expression(text: str, config: FieldConfig, pi: str | None = None):
    """Parse any object kind.

    If ``pi`` names a variable of ``config`` and the expression uses it, the
    result is a LaurentClass over (config without pi)((pi)).
    """
    value = parse_value(text, config, pi)
    if pi is not None and uses_variable(value, pi):
        from .laurent import LaurentClass, LaurentField

        field = LaurentField(config.without(pi), pi)
        form = value if isinstance(value, DifferentialForm) else _to_form(value)
        return LaurentClass.from_form(field, form)
    return value


def _to_form(value):
    if isinstance(value, RationalFunction):
        return DifferentialForm.scalar(value)
    if isinstance(value, LogTermSum):
        return log_to_form(value)
    return value


def parse_rational(text: str, config: FieldConfig) -> RationalFunction:
    value = parse_value(text, config)
    if isinstance(value, LogTermSum) and value.degree == 0:
        return log_to_form(value).scalar_value()
    if isinstance(value, DifferentialForm) and value.degree == 0:
        return value.scalar_value()
    if not isinstance(value, RationalFunction):
        raise ParseError("expected a rational function", 1, 1, ("function",))
    return value


def parse_form(text: str, config: FieldConfig) -> DifferentialForm:
    value = parse_value(text, config)
    from .symbols import MilnorSymbol

    if isinstance(value, MilnorSymbol):
        raise ParseError("expected a differential form", 1, 1, ("form",))
    return _to_form(value)


def parse_laurent(text: str, field: LaurentField) -> LaurentClass:
    from .laurent import LaurentClass

    value = parse_value(text, field.ambient, field.pi)
    from .symbols import MilnorSymbol

    if isinstance(value, MilnorSymbol):
        raise ParseError("expected a Laurent class", 1, 1, ("form",))
    return LaurentClass.from_form(field, _to_form(value))
