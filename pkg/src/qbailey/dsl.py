"""A small expression language for q-series.

``parse`` turns text into an immutable AST, ``pretty`` prints it back in a form
that reparses to the same tree, and ``evaluate`` expands it to a ``QSeries``.
The grammar is documented in the README.

Evaluation keeps products of monomials, Pochhammer symbols and Gaussian
polynomials as exact :class:`Term` values for as long as possible; only
infinite sums and theta functions are materialized as truncated series.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DslError, UnboundIndex
from .qfactory import SCAN_GUARD, Monomial, Term, qbinom_term, term_sum, theta_f
from .rings import INTEGERS, RingTag
from .series import QSeries

KEYWORDS = {"poch", "qbin", "inv", "sum", "theta", "inf", "auto"}
VARIABLES = {"q", "z"}


# AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / //
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: object


@dataclass(frozen=True)
class Poch:
    arg: object
    base: int
    bound: object  # None for an infinite product


@dataclass(frozen=True)
class QBin:
    n: object
    k: object


@dataclass(frozen=True)
class Inv:
    arg: object


@dataclass(frozen=True)
class Theta:
    a: object
    b: object


@dataclass(frozen=True)
class Sum:
    """``indices`` has one name, or several for ``n1 >= n2 >= ... >= 0``.

    ``lo`` is None for a bilateral sum; ``hi`` is None for an unbounded one.
    """

    indices: tuple
    lo: object
    hi: object
    body: object


# tokens ---------------------------------------------------------------------

TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>\.\.|>=|//|[-+*/^();,_=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, i + 1
        else:
            out.append(Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - line_start + 1))
    return out


# parser ---------------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Tok | None = None):
        tok = tok or self.tok
        return DslError(message, tok.line, tok.col)

    def at(self, *texts) -> bool:
        return self.tok.kind != "eof" and self.tok.text in texts

    def take(self, text: str | None = None) -> Tok:
        tok = self.tok
        if text is not None and tok.text != text:
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    # expr := term (('+' | '-') term)*
    def expr(self):
        e = self.term()
        while self.at("+", "-"):
            op = self.take().text
            e = BinOp(op, e, self.term())
        return e

    # term := unary (('*' | '/' | '//') unary)*
    def term(self):
        e = self.unary()
        while self.at("*", "/", "//"):
            op = self.take().text
            e = BinOp(op, e, self.unary())
        return e

    # unary := '-' unary | power
    def unary(self):
        if self.at("-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    # power := atom ('^' exponent)?
    def power(self):
        e = self.atom()
        if self.at("^"):
            self.take()
            e = Pow(e, self.exponent())
        return e

    # exponent := '-' exponent | INT | NAME | '(' expr ')'
    def exponent(self):
        if self.at("-"):
            self.take()
            return Neg(self.exponent())
        tok = self.tok
        if tok.kind == "int":
            self.take()
            return Num(int(tok.text))
        if tok.kind == "name" and tok.text not in KEYWORDS:
            self.take()
            return Var(tok.text)
        if self.at("("):
            self.take()
            e = self.expr()
            self.take(")")
            return e
        raise self.error("expected an exponent")

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.take()
            return Num(int(tok.text))
        if self.at("("):
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok.kind != "name":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}")
        if tok.text == "poch":
            return self.poch()
        if tok.text == "qbin":
            self.take()
            self.take("(")
            n = self.expr()
            self.take(",")
            k = self.expr()
            self.take(")")
            return QBin(n, k)
        if tok.text == "inv":
            self.take()
            self.take("(")
            e = self.expr()
            self.take(")")
            return Inv(e)
        if tok.text == "theta":
            self.take()
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(")")
            return Theta(a, b)
        if tok.text == "sum":
            return self.sum()
        if tok.text in KEYWORDS:
            raise self.error(f"unexpected keyword {tok.text!r}")
        self.take()
        return Var(tok.text)

    # poch := 'poch' '(' expr (';' INT)? ')' '_' (INT | NAME | 'inf' | '(' expr ')')
    def poch(self):
        self.take("poch")
        self.take("(")
        arg = self.expr()
        base = 1
        if self.at(";"):
            self.take()
            tok = self.tok
            if tok.kind != "int" or int(tok.text) < 1:
                raise self.error("the base exponent must be a positive integer")
            base = int(self.take().text)
        self.take(")")
        self.take("_")
        tok = self.tok
        if tok.text == "inf":
            self.take()
            return Poch(arg, base, None)
        if tok.kind == "int":
            self.take()
            return Poch(arg, base, Num(int(tok.text)))
        if tok.kind == "name" and tok.text not in KEYWORDS:
            self.take()
            return Poch(arg, base, Var(tok.text))
        if self.at("("):
            self.take()
            bound = self.expr()
            self.take(")")
            return Poch(arg, base, bound)
        raise self.error("expected a Pochhammer length")

    # sum := 'sum' '(' NAME '=' lower '..' upper ';' expr ')'
    #      | 'sum' '(' NAME ('>=' NAME)* '>=' '0' ';' expr ')'
    def sum(self):
        self.take("sum")
        self.take("(")
        first = self.index_name()
        if self.at(">="):
            names = [first]
            while self.at(">="):
                self.take()
                if self.tok.kind == "int":
                    zero = self.take()
                    if zero.text != "0":
                        raise self.error("an index chain must end in '>= 0'", zero)
                    break
                names.append(self.index_name())
            else:
                raise self.error("an index chain must end in '>= 0'")
            self.take(";")
            body = self.expr()
            self.take(")")
            return Sum(tuple(names), Num(0), None, body)
        self.take("=")
        if self.at("-") and self.toks[self.i + 1].text == "inf":
            self.take()
            self.take()
            lo = None
        else:
            lo = self.expr()
        self.take("..")
        if self.at("auto", "inf"):
            self.take()
            hi = None
        else:
            hi = self.expr()
        if lo is None and hi is not None:
            raise self.error("a sum from -inf must run to inf")
        self.take(";")
        body = self.expr()
        self.take(")")
        return Sum((first,), lo, hi, body)

    def index_name(self) -> str:
        tok = self.tok
        if tok.kind != "name" or tok.text in KEYWORDS or tok.text in VARIABLES:
            raise self.error("expected an index name")
        self.take()
        return tok.text


def parse(text: str):
    """Parse expression text; every index must be bound by an enclosing sum."""
    tree = Parser(text).parse()
    check_bound(tree)
    check_auto(tree)
    return tree


# static checks --------------------------------------------------------------


def children(e):
    if isinstance(e, (Neg, Inv)):
        return [e.arg]
    if isinstance(e, BinOp):
        return [e.left, e.right]
    if isinstance(e, Pow):
        return [e.base, e.exp]
    if isinstance(e, Poch):
        return [e.arg] + ([e.bound] if e.bound is not None else [])
    if isinstance(e, QBin):
        return [e.n, e.k]
    if isinstance(e, Theta):
        return [e.a, e.b]
    if isinstance(e, Sum):
        return [x for x in (e.lo, e.hi, e.body) if x is not None]
    return []


def check_bound(e, env: frozenset = frozenset()):
    if isinstance(e, Var):
        if e.name not in VARIABLES and e.name not in env:
            raise UnboundIndex(f"index {e.name!r} is not bound by an enclosing sum")
        return
    if isinstance(e, Sum):
        for x in (e.lo, e.hi):
            if x is not None:
                check_bound(x, env)
        check_bound(e.body, env | set(e.indices))
        return
    for c in children(e):
        check_bound(c, env)


def uses_z(e) -> bool:
    if isinstance(e, Var):
        return e.name == "z"
    return any(uses_z(c) for c in children(e))


def polynomial(e) -> dict | None:
    """Exponent expression as ``{sorted tuple of index names: coefficient}``."""
    if isinstance(e, Num):
        return {(): Fraction(e.value)}
    if isinstance(e, Var):
        return None if e.name in VARIABLES else {(e.name,): Fraction(1)}
    if isinstance(e, Neg):
        p = polynomial(e.arg)
        return None if p is None else {k: -v for k, v in p.items()}
    if isinstance(e, BinOp):
        a, b = polynomial(e.left), polynomial(e.right)
        if a is None or b is None:
            return None
        if e.op in "+-":
            s = 1 if e.op == "+" else -1
            out = dict(a)
            for k, v in b.items():
                out[k] = out.get(k, 0) + s * v
            return {k: v for k, v in out.items() if v}
        if e.op == "*":
            out = {}
            for ka, va in a.items():
                for kb, vb in b.items():
                    key = tuple(sorted(ka + kb))
                    out[key] = out.get(key, 0) + va * vb
            return {k: v for k, v in out.items() if v}
        if e.op == "/" and set(b) <= {()} and b:
            return {k: v / b[()] for k, v in a.items()}
        return None
    if isinstance(e, Pow):
        base, exp = polynomial(e.base), polynomial(e.exp)
        if base is None or exp is None or set(exp) - {()}:
            return None
        k = exp.get((), 0)
        if k.denominator != 1 or k < 0:
            return None
        out = {(): Fraction(1)}
        for _ in range(int(k)):
            out = polynomial_mul(out, base)
        return out
    return None


def polynomial_mul(a: dict, b: dict) -> dict:
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(sorted(ka + kb))
            out[key] = out.get(key, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def q_exponents(e, sign: int = 1):
    """Exponent polynomials of ``q^(...)`` factors in numerator position."""
    if isinstance(e, Neg):
        yield from q_exponents(e.arg, sign)
    elif isinstance(e, BinOp) and e.op == "*":
        yield from q_exponents(e.left, sign)
        yield from q_exponents(e.right, sign)
    elif isinstance(e, BinOp) and e.op == "/":
        yield from q_exponents(e.left, sign)
        yield from q_exponents(e.right, -sign)
    elif isinstance(e, Inv):
        yield from q_exponents(e.arg, -sign)
    elif isinstance(e, Sum) and e.hi is not None:
        yield from q_exponents(e.body, sign)
    elif isinstance(e, Pow) and e.base == Var("q"):
        p = polynomial(e.exp)
        if p is not None:
            yield {k: sign * v for k, v in p.items()}


def check_auto(e):
    """Unbounded sums need a ``q^(quadratic)`` factor growing in every index."""
    if isinstance(e, Sum) and e.hi is None:
        exps = list(q_exponents(e.body))
        for name in e.indices:
            if not any(p.get((name, name), 0) > 0 for p in exps):
                raise DslError(
                    f"cannot infer the upper bound of {name!r}: the summand has no q-power quadratic in {name!r}"
                )
    for c in children(e):
        check_auto(c)


# pretty printer -------------------------------------------------------------

PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "//": 2}


def pretty(e) -> str:
    return _pp(e, 0)


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def _wrap(e, need: int) -> str:
    s = _pp(e, need)
    return f"({s})" if _prec(e) < need else s


def _pp(e, ctx: int) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, BinOp):
        p = PREC[e.op]
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, 3)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 5)}^{_exp(e.exp)}"
    if isinstance(e, Poch):
        base = "" if e.base == 1 else f"; {e.base}"
        if e.bound is None:
            bound = "inf"
        elif isinstance(e.bound, (Num, Var)):
            bound = _pp(e.bound, 5)
        else:
            bound = f"({_pp(e.bound, 0)})"
        return f"poch({_pp(e.arg, 0)}{base})_{bound}"
    if isinstance(e, QBin):
        return f"qbin({_pp(e.n, 0)}, {_pp(e.k, 0)})"
    if isinstance(e, Inv):
        return f"inv({_pp(e.arg, 0)})"
    if isinstance(e, Theta):
        return f"theta({_pp(e.a, 0)}, {_pp(e.b, 0)})"
    if isinstance(e, Sum):
        body = _pp(e.body, 0)
        if len(e.indices) > 1:
            return f"sum({' >= '.join(e.indices)} >= 0; {body})"
        lo = "-inf" if e.lo is None else _pp(e.lo, 0)
        hi = "auto" if e.hi is None else _pp(e.hi, 0)
        return f"sum({e.indices[0]} = {lo}..{hi}; {body})"
    raise TypeError(f"not an expression node: {e!r}")


def _exp(e) -> str:
    if isinstance(e, (Num, Var)):
        return _pp(e, 5)
    if isinstance(e, Neg):
        return "-" + _exp(e.arg)
    return f"({_pp(e, 0)})"


# evaluation -----------------------------------------------------------------


class Evaluator:
    def __init__(self, ring: RingTag, order: int):
        self.ring = ring
        self.order = order

    # integer context: exponents, lengths, bounds
    def integer(self, e, env: dict) -> int:
        v = self._int(e, env)
        if v.denominator != 1:
            raise DslError(f"{pretty(e)} is not an integer ({v})")
        return int(v)

    def _int(self, e, env) -> Fraction:
        if isinstance(e, Num):
            return Fraction(e.value)
        if isinstance(e, Var):
            if e.name in VARIABLES:
                raise DslError(f"{e.name} cannot appear in an integer expression")
            return Fraction(env[e.name])
        if isinstance(e, Neg):
            return -self._int(e.arg, env)
        if isinstance(e, BinOp):
            a, b = self._int(e.left, env), self._int(e.right, env)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if not b:
                raise DslError(f"division by zero in {pretty(e)}")
            if e.op == "/":
                return a / b
            return Fraction(math.floor(a / b))
        if isinstance(e, Pow):
            k = self.integer(e.exp, env)
            base = self._int(e.base, env)
            if k < 0 and not base:
                raise DslError(f"division by zero in {pretty(e)}")
            return base**k
        raise DslError(f"{pretty(e)} is not an integer expression")

    # value context: list of Terms (exact) or a QSeries
    def value(self, e, env: dict):
        if isinstance(e, Num):
            return [Term(Monomial(e.value))] if e.value else []
        if isinstance(e, Var):
            if e.name == "q":
                return [Term(Monomial(1, 0, 1))]
            if e.name == "z":
                return [Term(Monomial(1, 1, 0))]
            return self.value(Num(0), env) if not env[e.name] else [Term(Monomial(env[e.name]))]
        if isinstance(e, Neg):
            v = self.value(e.arg, env)
            return [-t for t in v] if isinstance(v, list) else -v
        if isinstance(e, BinOp):
            if e.op == "//":
                return [Term(Monomial(self.integer(e, env)))]
            a = self.value(e.left, env)
            b = self.value(e.right, env)
            if e.op == "+":
                return self.add(a, b)
            if e.op == "-":
                return self.add(a, [-t for t in b] if isinstance(b, list) else -b)
            if e.op == "*":
                return self.mul(a, b)
            return self.mul(a, self.inverse(b, e))
        if isinstance(e, Pow):
            k = self.integer(e.exp, env)
            base = self.value(e.base, env)
            if isinstance(base, list) and len(base) == 1:
                return [base[0] ** k]
            if k < 0:
                base, k = self.inverse(base, e), -k
            out = [Term()]
            for _ in range(k):
                out = self.mul(out, base)
            return out
        if isinstance(e, Inv):
            return self.inverse(self.value(e.arg, env), e)
        if isinstance(e, Poch):
            a = self.monomial(e.arg, env)
            if e.bound is None:
                return [Term.pinf(a, e.base)]
            return [Term.poch(a, self.integer(e.bound, env), e.base)]
        if isinstance(e, QBin):
            t = qbinom_term(self.integer(e.n, env), self.integer(e.k, env))
            return [] if t is None else [t]
        if isinstance(e, Theta):
            return theta_f(self.monomial(e.a, env), self.monomial(e.b, env), self.order, self.ring)
        if isinstance(e, Sum):
            return self.sum(e, env)
        raise TypeError(f"not an expression node: {e!r}")

    def monomial(self, e, env) -> Monomial:
        v = self.value(e, env)
        if isinstance(v, list) and not v:
            return Monomial(0)
        if isinstance(v, list) and len(v) == 1 and not v[0].fin and not v[0].inf:
            return v[0].pre
        raise DslError(f"{pretty(e)} must be a single monomial c*z^a*q^b")

    def series(self, v) -> QSeries:
        if isinstance(v, QSeries):
            return v
        total = QSeries.zero(self.ring, self.order)
        for t in v:
            total = total + t.expand(self.ring, self.order)
        return total

    def add(self, a, b):
        if isinstance(a, list) and isinstance(b, list):
            return a + b
        return self.series(a) + self.series(b)

    def mul(self, a, b):
        if isinstance(a, list) and isinstance(b, list):
            return [x * y for x in a for y in b]
        return self.series(a) * self.series(b)

    def inverse(self, v, e):
        if isinstance(v, list) and len(v) == 1:
            if v[0].pre.is_zero():
                raise DslError(f"division by zero in {pretty(e)}")
            return [Term() / v[0]]
        if isinstance(v, list) and len(v) == 2:
            t = binomial_factor(*v)
            if t is not None:
                return [Term() / t]
        if isinstance(v, list) and not v:
            raise DslError(f"division by zero in {pretty(e)}")
        return self.series(v).inverse(self.order)

    def terms(self, e, env) -> list:
        v = self.value(e, env)
        if not isinstance(v, list):
            raise DslError("the summand of an unbounded sum must be a product of monomials, Pochhammer symbols and Gaussian polynomials")
        return v

    def sum(self, e: Sum, env: dict):
        name = e.indices[0]
        if len(e.indices) > 1:
            return self.chain(e, env)
        if e.hi is not None:
            lo = self.integer(e.lo, env)
            hi = self.integer(e.hi, env)
            total = []
            for n in range(lo, hi + 1):
                total = self.add(total, self.value(e.body, {**env, name: n}))
            return total
        if e.lo is None:
            return term_sum(lambda n: self.terms(e.body, {**env, name: n}), self.ring, self.order, bilateral=True)
        start = self.integer(e.lo, env)
        return term_sum(lambda n: self.terms(e.body, {**env, name: n}), self.ring, self.order, start=start)

    def chain(self, e: Sum, env: dict) -> QSeries:
        """``sum_{n1 >= n2 >= ... >= nk >= 0}``, scanned by the top index."""
        names = e.indices
        total = QSeries.zero(self.ring, self.order)
        misses, top = 0, 0
        while misses < SCAN_GUARD:
            hit = False
            for tail in _chains(len(names) - 1, top):
                local = {**env, **dict(zip(names, (top,) + tail))}
                for t in self.terms(e.body, local):
                    v = t.valuation(self.ring)
                    if v is not None and v <= self.order:
                        hit = True
                        total = total + t.expand(self.ring, self.order)
            misses = 0 if hit else misses + 1
            top += 1
        return total


def binomial_factor(a: Term, b: Term) -> Term | None:
    """``a + b`` as ``u (1 - m)`` with a unit monomial u, if the two terms are monomials."""
    if a.fin or a.inf or b.fin or b.inf or a.pre.coeff not in (1, -1):
        return None
    m = -(b.pre / a.pre)
    if m.coeff not in (1, -1) or (m.zexp == 0 and m.qexp == 0):
        return None
    return Term(a.pre) * Term.factor(m)


def _chains(k: int, hi: int):
    """Non-increasing k-tuples with entries in ``0..hi``."""
    if k == 0:
        yield ()
        return
    for n in range(hi, -1, -1):
        for rest in _chains(k - 1, n):
            yield (n,) + rest


def evaluate(e, ring: RingTag = INTEGERS, order: int = 50) -> QSeries:
    if isinstance(e, str):
        e = parse(e)
    if ring == INTEGERS and uses_z(e):
        raise DslError("z is not available over the integers; use the laurent or a cyclotomic ring")
    ev = Evaluator(ring, order)
    return ev.series(ev.value(e, {})).truncate(order)
