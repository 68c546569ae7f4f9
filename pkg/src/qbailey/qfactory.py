"""Constructors for q-objects: Pochhammer symbols, q-binomials, theta functions, sums.

Everything is built from two pieces:

* :class:`Monomial` -- ``c * z**f * q**e`` with an integer coefficient.
* :class:`Term` -- a monomial prefactor times a product of factors
  ``(1 - m)**k`` (finite Pochhammer pieces) and ``(m; q^b)_inf**k``.

A Term knows its exact q-valuation without being expanded, which is what the
truncated sums below use as their order bound.  Expansion rewrites a factor
with negative q-exponent as ``q^e * (-c z^f + q^-e)`` first, so every factor
left over has valuation zero and truncation at a single order is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .errors import DivergentProduct, NonTruncating, NotInvertible, TruncationUnsound
from .rings import INTEGERS, LAURENT, RingTag
from .series import QSeries

SCAN_GUARD = 3
MAX_SCAN = 200_000


@dataclass(frozen=True)
class Monomial:
    """``coeff * z**zexp * q**qexp``."""

    coeff: int = 1
    zexp: int = 0
    qexp: int = 0

    def __mul__(self, other):
        if isinstance(other, int):
            return Monomial(self.coeff * other, self.zexp, self.qexp)
        if isinstance(other, Monomial):
            return Monomial(self.coeff * other.coeff, self.zexp + other.zexp, self.qexp + other.qexp)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Monomial(-self.coeff, self.zexp, self.qexp)

    def inv(self):
        if self.coeff not in (1, -1):
            raise NotInvertible(f"monomial coefficient {self.coeff} is not a unit")
        return Monomial(self.coeff, -self.zexp, -self.qexp)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Monomial(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return Monomial(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return Monomial(self.coeff**k, self.zexp * k, self.qexp * k)

    def is_zero(self):
        return self.coeff == 0

    def subs_z(self, value: Monomial) -> Monomial:
        """Replace ``z`` by another monomial (e.g. ``-q**t`` or a root-of-unity marker)."""
        return Monomial(self.coeff, 0, self.qexp) * value**self.zexp

    def __str__(self):
        parts = []
        if self.coeff != 1 or (not self.zexp and not self.qexp):
            parts.append(str(self.coeff))
        if self.zexp:
            parts.append("z" if self.zexp == 1 else f"z^{self.zexp}")
        if self.qexp:
            parts.append("q" if self.qexp == 1 else f"q^{self.qexp}")
        return "*".join(parts)


ONE = Monomial()
Z = Monomial(1, 1, 0)


def Q(e: int = 1, c: int = 1) -> Monomial:
    """``c * q**e``."""
    return Monomial(c, 0, e)


def binom2(n: int) -> int:
    """``n*(n-1)/2`` for any integer n."""
    return n * (n - 1) // 2


class Term:
    """Monomial prefactor times ``prod (1 - m)^k`` times ``prod (m; q^b)_inf^k``."""

    __slots__ = ("pre", "fin", "inf")

    def __init__(self, pre: Monomial = ONE, fin=None, inf=None):
        if isinstance(pre, int):
            pre = Monomial(pre)
        self.pre = pre
        self.fin = fin or {}
        self.inf = inf or {}

    # building -------------------------------------------------------------

    @staticmethod
    def _merge(a: dict, b: dict, sign: int = 1) -> dict:
        out = dict(a)
        for key, k in b.items():
            v = out.get(key, 0) + sign * k
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Monomial)):
            return Term(self.pre * other, self.fin, self.inf)
        if isinstance(other, Term):
            return Term(self.pre * other.pre, self._merge(self.fin, other.fin), self._merge(self.inf, other.inf))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Monomial)):
            return self * (Monomial(other) if isinstance(other, int) else other).inv()
        if isinstance(other, Term):
            return Term(self.pre / other.pre, self._merge(self.fin, other.fin, -1), self._merge(self.inf, other.inf, -1))
        return NotImplemented

    def __rtruediv__(self, other):
        return Term(other) / self

    def __neg__(self):
        return Term(-self.pre, self.fin, self.inf)

    def subs_z(self, value: Monomial) -> Term:
        """Substitute a monomial for ``z`` in every factor."""
        inf = {}
        for (m, b), k in self.inf.items():
            key = (m.subs_z(value), b)
            inf[key] = inf.get(key, 0) + k
        fin = {}
        for m, k in self.fin.items():
            key = m.subs_z(value)
            fin[key] = fin.get(key, 0) + k
        return Term(
            self.pre.subs_z(value),
            {m: k for m, k in fin.items() if k},
            {m: k for m, k in inf.items() if k},
        )

    def has_zero_factor(self, sign: int) -> bool:
        """True if ``(1 - 1)`` occurs with multiplicity of the given sign."""
        k = self.fin.get(ONE, 0)
        return k * sign > 0

    def __pow__(self, k: int):
        return Term(
            self.pre**k,
            {m: v * k for m, v in self.fin.items()} if k else {},
            {m: v * k for m, v in self.inf.items()} if k else {},
        )

    @classmethod
    def factor(cls, m: Monomial, k: int = 1) -> Term:
        """``(1 - m)**k``."""
        if m.is_zero() or not k:
            return cls()
        return cls(ONE, {m: k})

    @classmethod
    def poch(cls, a: Monomial, n: int, base: int = 1) -> Term:
        """``(a; q^base)_n`` for any integer n (negative n: reciprocal of a shifted product)."""
        fin = {}
        if a.is_zero():
            return cls()
        if n >= 0:
            for j in range(n):
                m = a * Q(base * j)
                fin[m] = fin.get(m, 0) + 1
        else:
            for j in range(-n):
                m = a * Q(base * (n + j))
                fin[m] = fin.get(m, 0) - 1
        return cls(ONE, {m: k for m, k in fin.items() if k})

    @classmethod
    def pinf(cls, a: Monomial, base: int = 1, power: int = 1) -> Term:
        """``(a; q^base)_inf ** power``."""
        if base < 1:
            raise ValueError("base must be a positive integer")
        if a.is_zero() or not power:
            return cls()
        return cls(ONE, None, {(a, base): power})

    # evaluation -----------------------------------------------------------

    def _factors(self, ring: RingTag):
        """Yield ``(r, e, k)`` for every factor ``(1 - r q^e)^k`` with e <= 0, plus
        ``(r, e, k)`` lazily for positive ones via ``_positive``."""
        for m, k in self.fin.items():
            yield ring.monomial(m.coeff, m.zexp), m.qexp, k
        for (m, b), k in self.inf.items():
            e, j = m.qexp, 0
            while e + b * j <= 0:
                yield ring.monomial(m.coeff, m.zexp), e + b * j, k
                j += 1

    def _normalize(self, ring: RingTag):
        """Split off the q-shift and scalar; returns (shift, scalar, ops) or None if zero."""
        if self.pre.is_zero():
            return None
        shift = self.pre.qexp
        scalar = ring.monomial(self.pre.coeff, self.pre.zexp)
        ops = []
        for r, e, k in self._factors(ring):
            if e > 0:
                ops.append((1, -r, e, k))
            elif e < 0:
                shift += e * k
                ops.append((-r, 1, -e, k))
            else:
                u = 1 - r
                if not u:
                    if k > 0:
                        return None
                    raise NotInvertible("a denominator factor vanishes identically")
                if k > 0:
                    scalar = scalar * u**k
                else:
                    if not ring.is_unit(u):
                        raise NotInvertible(f"denominator factor {u} is not a unit in {ring.name}")
                    scalar = scalar * ring.unit_inverse(u) ** (-k)
        for (m, b), k in self.inf.items():
            j = 0
            while m.qexp + b * j <= 0:
                j += 1
            ops.append(("inf", ring.monomial(m.coeff, m.zexp), (m.qexp + b * j, b), k))
        return shift, scalar, ops

    def valuation(self, ring: RingTag):
        """Exact lowest q-exponent, or None when the term is identically zero."""
        norm = self._normalize(ring)
        return None if norm is None else norm[0]

    def expand(self, ring: RingTag, order: int) -> QSeries:
        norm = self._normalize(ring)
        if norm is None:
            return QSeries.zero(ring, order)
        shift, scalar, ops = norm
        top = order - shift
        if top < 0:
            return QSeries.zero(ring, order)
        zero = ring.zero()
        a = [zero] * (top + 1)
        a[0] = ring.normalize(scalar)
        for op in ops:
            if op[0] == "inf":
                _, r, (e0, b), k = op
                e = e0
                while e <= top:
                    _apply(a, ring, 1, -r, e, k)
                    e += b
            else:
                u, v, e, k = op
                _apply(a, ring, u, v, e, k)
        return QSeries(ring, shift, a, order)


def _apply(a: list, ring: RingTag, u, v, e: int, k: int):
    """In place: ``a *= (u + v q^e)**k`` modulo ``q^len(a)``; e >= 1."""
    top = len(a) - 1
    if k > 0:
        for _ in range(k):
            if u == 1:
                for i in range(top, e - 1, -1):
                    x = a[i - e]
                    if x:
                        a[i] = a[i] + v * x
            else:
                for i in range(top, e - 1, -1):
                    x = a[i - e]
                    a[i] = u * a[i] + v * x if x else u * a[i]
                for i in range(min(e, top + 1)):
                    a[i] = u * a[i]
    else:
        if u == 1:
            uinv = 1
        elif not ring.is_unit(u):
            raise NotInvertible(f"denominator factor with constant term {u} is not invertible")
        else:
            uinv = ring.unit_inverse(u)
        w = -v
        for _ in range(-k):
            if uinv == 1:
                for i in range(e, top + 1):
                    x = a[i - e]
                    if x:
                        a[i] = a[i] + w * x
            else:
                for i in range(top + 1):
                    x = a[i - e] if i >= e else 0
                    a[i] = uinv * (a[i] + w * x) if x else uinv * a[i]


def expand_terms(terms, ring: RingTag, order: int) -> QSeries:
    """Sum of the expansions of a list of Terms."""
    total = QSeries.zero(ring, order)
    for t in terms:
        total = total + t.expand(ring, order)
    return total


def terms_valuation(terms, ring: RingTag):
    vals = [v for v in (t.valuation(ring) for t in terms) if v is not None]
    return min(vals) if vals else None


def default_ring(*monomials: Monomial) -> RingTag:
    return LAURENT if any(m.zexp for m in monomials) else INTEGERS


# named constructors ---------------------------------------------------------


def poch_finite(a: Monomial, n: int, base: int = 1, order: int = 50, ring: RingTag | None = None) -> QSeries:
    """``(a; q^base)_n`` truncated at ``order``."""
    ring = ring or default_ring(a)
    return Term.poch(a, n, base).expand(ring, order)


def poch_infinite(a: Monomial, base: int = 1, order: int = 50, ring: RingTag | None = None) -> QSeries:
    if a.zexp == 0 and a.qexp <= 0:
        raise DivergentProduct(f"({a}; q^{base})_inf has a factor of q-order <= 0")
    ring = ring or default_ring(a)
    return Term.pinf(a, base).expand(ring, order)


def qbinom_term(n: int, k: int, base: int = 1) -> Term | None:
    if k < 0 or k > n:
        return None
    qb = Q(base)
    return Term.poch(qb, n, base) / (Term.poch(qb, k, base) * Term.poch(qb, n - k, base))


def qbinom(n: int, k: int, order: int = 50, ring: RingTag = INTEGERS, base: int = 1) -> QSeries:
    """Gaussian polynomial ``[n, k]`` in ``q^base``; zero outside ``0 <= k <= n``."""
    t = qbinom_term(n, k, base)
    if t is None:
        return QSeries.zero(ring, order)
    return t.expand(ring, order)


def theta_terms(a: Monomial, b: Monomial):
    """Summand of Ramanujan's ``f(a, b)``."""
    if a.qexp + b.qexp < 1:
        raise NonTruncating(f"f({a}, {b}): q-orders sum to {a.qexp + b.qexp} < 1")

    def term(n):
        return Term(a ** (n * (n + 1) // 2) * b ** (n * (n - 1) // 2))

    return term


def theta_f(a: Monomial, b: Monomial, order: int = 50, ring: RingTag | None = None) -> QSeries:
    ring = ring or default_ring(a, b)
    return term_sum(theta_terms(a, b), ring, order, bilateral=True)


def theta_product(a: Monomial, b: Monomial) -> Term:
    """``(-a, -b, ab; ab)_inf`` as a Term; ``ab`` must be free of z."""
    ab = a * b
    if ab.zexp or ab.coeff != 1 or ab.qexp < 1:
        raise NonTruncating(f"theta product needs ab = q^k with k >= 1, got {ab}")
    k = ab.qexp
    return Term.pinf(-a, k) * Term.pinf(-b, k) * Term.pinf(ab, k)


# sums -----------------------------------------------------------------------


@dataclass(frozen=True)
class SumSpec:
    """A single-index sum.

    ``term(n, N)`` returns the n-th summand to order N; ``ord_lb(n)`` is a
    lower bound on its q-order (None: the summand vanishes).  The bound must
    be eventually nondecreasing once it exceeds the working order, which
    holds for every quadratic-exponent sum.
    """

    term: Callable[[int, int], QSeries]
    ord_lb: Callable[[int], int | None]
    bilateral: bool = False
    start: int = 0


def _scan(indices, ord_lb, order):
    """Indices whose bound is within the window; stops after SCAN_GUARD misses in a row."""
    out = []
    misses = 0
    last = None
    for count, n in enumerate(indices):
        if count > MAX_SCAN:
            raise TruncationUnsound("order bound never exceeded the truncation order")
        lb = ord_lb(n)
        if lb is None or lb > order:
            if lb is not None and last is not None and lb < last:
                misses = 0
            else:
                misses += 1
            if lb is not None:
                last = lb
            if misses >= SCAN_GUARD:
                return out
            continue
        misses = 0
        last = lb
        out.append(n)
    return out


def _count_up(n):
    while True:
        yield n
        n += 1


def _count_down(n):
    while True:
        yield n
        n -= 1


def sum_indices(spec_lb, order, bilateral=False, start=0):
    idx = _scan(_count_up(start), spec_lb, order)
    if bilateral:
        idx = _scan(_count_down(start - 1), spec_lb, order) + idx
    return idx


def bilateral_sum(spec: SumSpec, order: int, ring: RingTag) -> QSeries:
    total = QSeries.zero(ring, order)
    for n in sum_indices(spec.ord_lb, order, spec.bilateral, spec.start):
        s = spec.term(n, order)
        lb = spec.ord_lb(n)
        v = s.valuation()
        if v is not None and v < lb:
            raise TruncationUnsound(f"summand {n} has q-order {v} below its declared bound {lb}")
        total = total + s
    return total


def _as_terms(x):
    if x is None:
        return []
    if isinstance(x, Term):
        return [x]
    return list(x)


def term_sum(fn, ring: RingTag, order: int, bilateral: bool = False, start: int = 0) -> QSeries:
    """Sum of ``fn(n)`` (a Term, list of Terms, or None) using exact Term valuations."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = _as_terms(fn(n))
        return cache[n]

    spec = SumSpec(
        term=lambda n, N: expand_terms(get(n), ring, N),
        ord_lb=lambda n: terms_valuation(get(n), ring),
        bilateral=bilateral,
        start=start,
    )
    return bilateral_sum(spec, order, ring)


@lru_cache(maxsize=4096)
def inv_qfac(m: int, base: int, ring: RingTag, order: int) -> QSeries:
    """``1/(q^base; q^base)_m``."""
    return (Term() / Term.poch(Q(base), m, base)).expand(ring, order)


def ag_multisum(
    k: int,
    exponent: Callable[[int, int], int],
    tail: Callable[[int, int], QSeries],
    order: int,
    ring: RingTag,
    sign: Callable[[int, int], int] | None = None,
    base: int = 1,
    tail_lb: int = 0,
) -> QSeries:
    """``sum over n_1 >= ... >= n_k >= 0`` of
    ``(+-) q^(sum exponent(i, n_i)) / prod (q^b;q^b)_{n_i - n_{i+1}} * tail(n_k)``.

    ``exponent(i, n)`` (i is the 1-based position) must be nonnegative and
    nondecreasing in n; ``tail_lb`` bounds the q-order of every tail value
    from below (it may be negative).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    budget = order - tail_lb
    total = QSeries.zero(ring, order)
    tails = {}

    def tail_at(n, rem):
        if n not in tails:
            tails[n] = tail(n, order - tail_lb)
        return tails[n].truncate(rem)

    def leaf(idx, exp_total, s):
        rem = order - exp_total
        t = tail_at(idx[-1], rem)
        ext = rem - min(0, tail_lb)
        for a, b in zip(idx, idx[1:]):
            if a != b:
                t = t * inv_qfac(a - b, base, ring, ext)
        t = t.shift(exp_total)
        return -t if s < 0 else t

    def walk(i, hi, acc, s, idx):
        nonlocal total
        n = 0
        while hi is None or n <= hi:
            e = exponent(i, n)
            if acc + e > budget:
                if exponent(i, n + 1) < e:
                    raise TruncationUnsound(f"exponent at position {i} is not monotone")
                break
            sn = s * (sign(i, n) if sign else 1)
            if i == k:
                total = total + leaf(idx + [n], acc + e, sn)
            else:
                walk(i + 1, n, acc + e, sn, idx + [n])
            n += 1
            if n > MAX_SCAN:
                raise TruncationUnsound("multisum index bound never reached")

    walk(1, None, 0, 1, [])
    return total
