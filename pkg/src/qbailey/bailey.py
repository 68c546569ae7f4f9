"""Bilateral Bailey pairs at ``a = 1`` and the transforms acting on them.

A pair stores ``alpha(n)`` (every integer n) and ``beta(n)`` (n >= 0) as
lists of :class:`~qbailey.qfactory.Term`, i.e. exact sums of products.  The
coefficient ring is chosen only when a side is expanded, so a pair written
over ``Z[z, 1/z]`` can be evaluated at a root of unity without rebuilding it.

When a pair's true alpha carries a non-unit denominator (seed B has
``1/(1 - z)``), both stored sequences are multiplied by that factor, kept in
``clear``.  Every relation below is linear in (alpha, beta), so the scaled
pair satisfies the same relations and every lemma side comes out multiplied
by ``clear``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .errors import BaseMismatch, ErrorTermRequired, SingularB
from .qfactory import ONE, Monomial, Q, Term, binom2, expand_terms, term_sum
from .rings import LAURENT, RingTag
from .series import QSeries


class _Infinity:
    """The parameter value ``x -> infinity``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__


INF = _Infinity()


def _cached(fn):
    return lru_cache(maxsize=None)(fn)


@dataclass(frozen=True)
class BaileyPair:
    lam: int
    alpha: Callable[[int], list]
    beta: Callable[[int], list]
    base: int = 1
    label: str = ""
    clear: Term = field(default_factory=Term)

    def alpha_series(self, n: int, order: int, ring: RingTag = LAURENT) -> QSeries:
        return expand_terms(self.alpha(n), ring, order)

    def beta_series(self, n: int, order: int, ring: RingTag = LAURENT) -> QSeries:
        return expand_terms(self.beta(n), ring, order)

    def map_terms(self, fn: Callable[[Term], Term], label: str) -> BaileyPair:
        """Apply ``fn`` to every stored term (e.g. a substitution for z)."""
        return BaileyPair(
            self.lam,
            _cached(lambda n: [fn(t) for t in self.alpha(n)]),
            _cached(lambda n: [fn(t) for t in self.beta(n)]),
            self.base,
            label,
            fn(self.clear),
        )


def _scale(terms, t: Term):
    return [t * x for x in terms]


def seed_pair_A(base: int = 1) -> BaileyPair:
    b = base

    def alpha(n):
        return [Term(Monomial(1, n, b * binom2(n + 1)))]

    def beta(n):
        return [
            Term.poch(Monomial(-1, -1, 0), n + 1, b)
            * Term.poch(Monomial(-1, 1, b), n, b)
            / Term.poch(Q(b), 2 * n + 1, b)
        ]

    return BaileyPair(1, _cached(alpha), _cached(beta), b, "seedA" if b == 1 else f"seedA[q^{b}]")


def seed_pair_B(base: int = 1) -> BaileyPair:
    b = base
    clear = Term.factor(Monomial(1, 1, 0))

    def alpha(n):
        return [Term(Monomial(1, -n, b * binom2(n))) * Term.factor(Q(b * (2 * n + 1)))]

    def beta(n):
        return [
            clear
            * Term.poch(Monomial(-1, 1, 0), n, b)
            * Term.poch(Monomial(-1, -1, 0), n, b)
            / Term.poch(Q(b), 2 * n, b)
        ]

    return BaileyPair(1, _cached(alpha), _cached(beta), b, "seedB" if b == 1 else f"seedB[q^{b}]", clear)


def relation_kernel(n: int, k: int, lam: int, base: int) -> Term:
    """``1 / ((q^b;q^b)_{n-k} (q^b;q^b)_{n+k+lam})``."""
    qb = Q(base)
    return Term() / (Term.poch(qb, n - k, base) * Term.poch(qb, n + k + lam, base))


def relation_rhs(p: BaileyPair, n: int) -> list:
    out = []
    for k in range(-n - p.lam, n + 1):
        out.extend(_scale(p.alpha(k), relation_kernel(n, k, p.lam, p.base)))
    return out


@dataclass(frozen=True)
class PairReport:
    ok: bool
    n: int | None = None
    exponent: int | None = None
    lhs: object = None
    rhs: object = None

    def __bool__(self):
        return self.ok


def pair_relation_check(p: BaileyPair, n_max: int, order: int, ring: RingTag = LAURENT) -> PairReport:
    """Compare ``beta_n`` with the defining alpha-sum for ``0 <= n <= n_max``."""
    for n in range(n_max + 1):
        lhs = p.beta_series(n, order, ring)
        rhs = expand_terms(relation_rhs(p, n), ring, order)
        bad = lhs.first_mismatch(rhs)
        if bad is not None:
            e, a, b = bad
            return PairReport(False, n, e, a, b)
    return PairReport(True)


# parameters -----------------------------------------------------------------


def _c(lam: int, base: int) -> Monomial:
    return Q(base * (1 + lam))


def _poch_or_one(a, n: int, base: int) -> Term:
    return Term() if a is INF else Term.poch(a, n, base)


def _ratio(x, c: Monomial):
    return INF if x is INF else c / x


def _weight(x, y, c: Monomial, n: int, base: int) -> Term:
    """``(x, y)_n (c/(xy))^n`` with the limits for infinite x or y."""
    if x is INF and y is INF:
        return Term(Q(2 * base * binom2(n)) * c**n)
    if x is INF or y is INF:
        fin = y if x is INF else x
        return Term(Monomial((-1) ** (n % 2), 0, base * binom2(n)) * (c / fin) ** n) * Term.poch(fin, n, base)
    return Term((c / (x * y)) ** n) * Term.poch(x, n, base) * Term.poch(y, n, base)


def _check_ratio(num: Term, den: Term):
    if num.has_zero_factor(-1) and den.has_zero_factor(-1):
        raise ValueError("parameter gives a 0/0 ratio of Pochhammer symbols; use the sign rule")


def _alpha_coeff(x, y, c: Monomial, n: int, base: int) -> Term:
    w = _weight(x, y, c, n, base)
    den = _poch_or_one(_ratio(x, c), n, base) * _poch_or_one(_ratio(y, c), n, base)
    _check_ratio(w, den)
    return w / den


def chain_step(p: BaileyPair, x, y) -> BaileyPair:
    """One step of the bilateral Bailey chain with parameters x, y (Monomial or INF)."""
    if p.lam >= 2:
        raise ErrorTermRequired(f"lambda = {p.lam}: the chain carries an error term; use lemma_eval_bilateral")
    b = p.base
    c = _c(p.lam, b)
    cx, cy = _ratio(x, c), _ratio(y, c)
    cxy = INF if (x is INF or y is INF) else c / (x * y)
    qb = Q(b)

    def alpha(n):
        return _scale(p.alpha(n), _alpha_coeff(x, y, c, n, b))

    def beta(n):
        pre = Term() / (_poch_or_one(cx, n, b) * _poch_or_one(cy, n, b))
        out = []
        for k in range(n + 1):
            t = pre * _poch_or_one(cxy, n - k, b) * _weight(x, y, c, k, b) / Term.poch(qb, n - k, b)
            out.extend(_scale(p.beta(k), t))
        return out

    return BaileyPair(p.lam, _cached(alpha), _cached(beta), b, f"chain({p.label}; {x}, {y})", p.clear)


def lattice_step(p: BaileyPair, b: Monomial) -> BaileyPair:
    """Lattice step through the ``a = q`` bridge: a lambda = 1 pair becomes a lambda = 0 pair."""
    if p.lam != 1:
        raise ValueError("the lattice step takes a lambda = 1 pair")
    B = p.base
    if not b.is_zero() and b.zexp == 0 and b.coeff == 1 and b.qexp <= 0 and b.qexp % B == 0:
        raise SingularB(f"b = {b} makes (b; q^{B})_n vanish")
    inv1b = Term.factor(b, -1)

    def alpha(n):
        return _scale(lattice_alpha_terms(p, b, n), inv1b)

    def beta(n):
        return _scale(p.beta(n), inv1b * Term.factor(b * Q(B * n)))

    return BaileyPair(0, _cached(alpha), _cached(beta), B, f"lattice({p.label}; b={b})", p.clear)


# lemma evaluations ----------------------------------------------------------


def _prefactor(x, y, c: Monomial, base: int) -> Term:
    """``(c/x, c/y)_inf / (q^b, c/xy)_inf``."""
    t = Term() / Term.pinf(Q(base), base)
    for v in (_ratio(x, c), _ratio(y, c)):
        if v is not INF:
            t = t * Term.pinf(v, base)
    if x is not INF and y is not INF:
        t = t / Term.pinf(c / (x * y), base)
    return t


def _is_sign_rule(p: BaileyPair, x, y) -> bool:
    return p.lam == 1 and x is INF and isinstance(y, Monomial) and y == Q(p.base)


def lemma_eval_bilateral(
    p: BaileyPair, x, y, order: int, ring: RingTag = LAURENT, include_error: bool = True
) -> tuple[QSeries, QSeries]:
    """Both sides of the n -> infinity chain identity, to ``order``.

    ``y = q^base`` with infinite ``x`` (lambda = 1) uses the sign-split right
    side instead of a Pochhammer ratio.
    """
    b = p.base
    c = _c(p.lam, b)
    if _is_sign_rule(p, x, y):
        return sign_rule_eval(p, order, ring)
    lhs = term_sum(lambda n: _scale(p.beta(n), _weight(x, y, c, n, b)), ring, order)
    if include_error and p.lam >= 2:
        lhs = lhs + error_term_R(p, x, y, order, ring)
    pre = _prefactor(x, y, c, b)
    cx, cy = _ratio(x, c), _ratio(y, c)

    def rhs_term(n):
        t = _weight(x, y, c, n, b) / (_poch_or_one(cx, n, b) * _poch_or_one(cy, n, b))
        return _scale(p.alpha(n), pre * t)

    rhs = term_sum(rhs_term, ring, order, bilateral=True)
    return lhs, rhs


def sign_rule_eval(p: BaileyPair, order: int, ring: RingTag = LAURENT) -> tuple[QSeries, QSeries]:
    """x -> infinity, y = q^base for a lambda = 1 pair (sign-split right side)."""
    b = p.base
    qb = Q(b)

    def lhs_term(n):
        w = Term(Monomial((-1) ** (n % 2), 0, b * binom2(n + 1))) * Term.poch(qb, n, b)
        return _scale(p.beta(n), w)

    def rhs_term(n):
        w = Term(Monomial((-1) ** (n % 2), 0, b * binom2(n + 1)))
        return _scale(p.alpha(n) + p.alpha(-n - 1), w)

    return term_sum(lhs_term, ring, order), term_sum(rhs_term, ring, order)


def error_term_R(p: BaileyPair, x, y, order: int, ring: RingTag = LAURENT) -> QSeries:
    """``sum_{1 <= i <= n < lam} q^{i^2 - i lam} alpha_{-n} / ((q)_{n-i} (q)_{lam-n-i} (q/x, q/y)_i)``."""
    b = p.base
    qb = Q(b)
    lam = p.lam
    terms = []
    for n in range(1, lam):
        for i in range(1, n + 1):
            t = Term(Q(b * (i * i - i * lam)))
            t = t / (Term.poch(qb, n - i, b) * Term.poch(qb, lam - n - i, b))
            t = t / (_poch_or_one(_ratio(x, qb), i, b) * _poch_or_one(_ratio(y, qb), i, b))
            terms.extend(_scale(p.alpha(-n), t))
    return expand_terms(terms, ring, order)


def lattice_alpha_terms(p: BaileyPair, b: Monomial, n: int) -> list:
    """``(1 - b q^n)/(1 - q^{2n+1}) alpha_n - q^{n-1}(q^n - b)/(1 - q^{2n-1}) alpha_{n-1}``."""
    B = p.base
    first = Term.factor(b * Q(B * n)) / Term.factor(Q(B * (2 * n + 1)))
    second = -(Term(Q(B * (2 * n - 1))) * Term.factor(b / Q(B * n)) / Term.factor(Q(B * (2 * n - 1))))
    return _scale(p.alpha(n), first) + _scale(p.alpha(n - 1), second)


def asym_lemma_eval(p: BaileyPair, x, y, b: Monomial, order: int, ring: RingTag = LAURENT) -> tuple[QSeries, QSeries]:
    """Both sides of the asymmetric bilateral lemma obtained through the lattice."""
    if p.lam != 1:
        raise ValueError("the asymmetric lemma takes a lambda = 1 pair")
    B = p.base
    c = Q(B)

    def lhs_term(n):
        return _scale(p.beta(n), _weight(x, y, c, n, B) * Term.factor(b * Q(B * n)))

    pre = _prefactor(x, y, c, B)
    cx, cy = _ratio(x, c), _ratio(y, c)

    def rhs_term(n):
        t = _weight(x, y, c, n, B) / (_poch_or_one(cx, n, B) * _poch_or_one(cy, n, B))
        return _scale(lattice_alpha_terms(p, b, n), pre * t)

    return term_sum(lhs_term, ring, order), term_sum(rhs_term, ring, order, bilateral=True)


def aw_transform_eval(p: BaileyPair, variant: str, order: int, ring: RingTag = LAURENT) -> tuple[QSeries, QSeries]:
    """The two Andrews-Warnaar transforms for a lambda = 1 pair in base q^2."""
    if p.base != 2:
        raise BaseMismatch(f"the transforms need a pair in base q^2, got q^{p.base}")
    if p.lam != 1:
        raise ValueError("the transforms take a lambda = 1 pair")
    if variant == "H1":

        def lhs_term(n):
            w = Term(Q(n)) * Term.poch(Q(2), 2 * n + 1, 2) / Term.poch(Q(1, -1), 2 * n + 2)
            return _scale(p.beta(n), w)

        def rhs_term(n):
            out = []
            for j in range(-n - 1, n + 1):
                out.extend(_scale(p.alpha(j), Term(Q(n * (n + 2) - j * (j + 1)))))
            return out

    elif variant == "H2":

        def lhs_term(n):
            return _scale(p.beta(n), Term(Q(n)) * Term.poch(Q(1), 2 * n + 1))

        def rhs_term(n):
            out = []
            h = n // 2
            for j in range(-h - 1, h + 1):
                out.extend(_scale(p.alpha(j), Term(Q(n * (n + 3) // 2 - 2 * j * (j + 1)))))
            return out

    else:
        raise ValueError(f"unknown transform {variant!r}; expected H1 or H2")
    return term_sum(lhs_term, ring, order), term_sum(rhs_term, ring, order)


def substitute_z(p: BaileyPair, value: Monomial) -> BaileyPair:
    """The pair with ``z`` replaced by a monomial such as ``-q**t``."""
    return p.map_terms(lambda t: t.subs_z(value), f"{p.label}[z={value}]")


def constructed_pair(lam: int, alpha: Callable[[int], list], base: int = 1, label: str = "") -> BaileyPair:
    """Pair whose beta is defined by brute force from alpha through the relation."""
    alpha = _cached(alpha)
    stub = BaileyPair(lam, alpha, lambda n: [], base)
    return BaileyPair(lam, alpha, _cached(lambda n: relation_rhs(stub, n)), base, label or f"constructed(lam={lam})")


__all__ = [
    "INF",
    "ONE",
    "BaileyPair",
    "PairReport",
    "seed_pair_A",
    "seed_pair_B",
    "pair_relation_check",
    "chain_step",
    "lattice_step",
    "lemma_eval_bilateral",
    "sign_rule_eval",
    "error_term_R",
    "asym_lemma_eval",
    "aw_transform_eval",
    "substitute_z",
    "constructed_pair",
    "relation_rhs",
]
