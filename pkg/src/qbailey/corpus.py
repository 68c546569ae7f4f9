"""Registry of q-series identities with executable sides.

Each :class:`Identity` carries two builders ``order -> QSeries``.  When an
identity has a non-unit denominator such as ``1/(1 - z)`` on its right side,
the right builder omits it and ``clear`` holds the omitted factor, which is
multiplied onto the left side before the comparison.
"""

from __future__ import annotations

import fnmatch
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .bailey import INF, _weight
from .errors import DuplicateIdentity, QSeriesError, UnknownIdentity
from .qfactory import Monomial, Q, Term, ag_multisum, binom2, term_sum, theta_f
from .rings import INTEGERS, LAURENT, RingTag
from .series import QSeries

P = Term.poch
PI = Term.pinf
F = Term.factor

MULTISUM_ORDER = {1: 50, 2: 50, 3: 30}


def M(c: int = 1, ze: int = 0, qe: int = 0) -> Monomial:
    return Monomial(c, ze, qe)


def sgn(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class Identity:
    id: str
    title: str
    group: str
    ring: RingTag
    lhs: Callable[[int], QSeries]
    rhs: Callable[[int], QSeries]
    clear: Term | None = None
    order: int = 50
    params: dict = field(default_factory=dict)
    oracle: tuple | None = None


@dataclass(frozen=True)
class Report:
    id: str
    order: int
    status: str
    mismatch: tuple | None = None
    millis: int = 0
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"id": self.id, "order": self.order, "status": self.status}
        if self.mismatch is not None:
            e, a, b = self.mismatch
            out["firstMismatch"] = {"exponent": e, "lhs": str(a), "rhs": str(b)}
        out["millis"] = self.millis
        if self.message:
            out["message"] = self.message
        return out


# builders -------------------------------------------------------------------


def single(fn, ring: RingTag, bilateral: bool = False, start: int = 0):
    return lambda N: term_sum(fn, ring, N, bilateral=bilateral, start=start)


def product(term: Term, ring: RingTag):
    return lambda N: term.expand(ring, N)


def split(fn, ring: RingTag):
    """``(sum_{n >= 0} - sum_{n < 0}) fn(n)``."""
    return single(lambda n: fn(n) if n >= 0 else -fn(n), ring, bilateral=True)


def combo(*parts):
    """Sum of ``coeff * builder`` pairs."""

    def build(N):
        total = None
        for c, b in parts:
            s = b(N) * c
            total = s if total is None else total + s
        return total

    return build


def multisum(k: int, exponent, tail: Callable[[int], Term], ring: RingTag, sign=None, base: int = 1):
    """Builder for ``sum_{n_1 >= ... >= n_k >= 0}`` with a Term-valued tail."""

    def build(N):
        vals = [tail(n).valuation(ring) for n in range(N + 2)]
        lb = min([0] + [v for v in vals if v is not None])
        return ag_multisum(k, exponent, lambda n, R: tail(n).expand(ring, R), N, ring, sign=sign, base=base, tail_lb=lb)

    return build


def n_np1(i, n):
    return n * (n + 1)


def tri(i, n):
    return binom2(n + 1)


def alt_sign(i, n):
    return sgn(n)


def theta(a: Monomial, b: Monomial, ring: RingTag = INTEGERS):
    return lambda N: theta_f(a, b, N, ring)


def jtp3(a: Monomial, b: Monomial, k: int) -> Term:
    """``(a, b, q^k; q^k)_inf``."""
    return PI(a, k) * PI(b, k) * PI(Q(k), k)


QINF = PI(Q(1))


# registry -------------------------------------------------------------------


class Registry:
    def __init__(self):
        self._items: dict[str, Identity] = {}

    def add(self, ident: Identity):
        if ident.id in self._items:
            raise DuplicateIdentity(ident.id)
        self._items[ident.id] = ident

    def get(self, ident_id: str) -> Identity:
        try:
            return self._items[ident_id]
        except KeyError:
            raise UnknownIdentity(ident_id) from None

    def ids(self) -> list[str]:
        return sorted(self._items)

    def __iter__(self):
        return iter(self._items[i] for i in self.ids())

    def __len__(self):
        return len(self._items)

    def __contains__(self, ident_id):
        return ident_id in self._items

    def select(self, pattern: str | None) -> list[Identity]:
        """Filter by ``key=value`` (group, ring, or a parameter) or an id glob."""
        if not pattern:
            return list(self)
        out = []
        clauses = [c.strip() for c in pattern.split(",") if c.strip()]
        for ident in self:
            if all(_matches(ident, c) for c in clauses):
                out.append(ident)
        return out


def _matches(ident: Identity, clause: str) -> bool:
    if "=" in clause:
        key, value = (s.strip() for s in clause.split("=", 1))
        if key == "group":
            return ident.group == value
        if key == "ring":
            return ident.ring.name == value
        if key == "id":
            return fnmatch.fnmatchcase(ident.id, value)
        return str(ident.params.get(key)) == value
    if any(ch in clause for ch in "*?["):
        return fnmatch.fnmatchcase(ident.id, clause)
    return clause in ident.id


def _classic(reg: Registry):
    for i in (0, 1):
        reg.add(
            Identity(
                f"rr-classic-i{i}",
                f"Rogers-Ramanujan, i={i}",
                "classic",
                INTEGERS,
                single(lambda n, i=i: Term(Q(n * n + (1 - i) * n)) / P(Q(1), n), INTEGERS),
                product(Term() / (PI(Q(2 - i), 5) * PI(Q(3 + i), 5)), INTEGERS),
                params={"i": i},
                oracle=("congruence", (2 - i, 3 + i), 5),
            )
        )
    for k in (2, 3, 4):
        for i in range(1, k + 1):
            reg.add(
                Identity(
                    f"ag-k{k}-i{i}",
                    f"Andrews-Gordon, k={k}, i={i}",
                    "classic",
                    INTEGERS,
                    multisum(k - 1, lambda j, n, i=i: n * n + (n if j >= i else 0), lambda n: Term() / P(Q(1), n), INTEGERS),
                    product(jtp3(Q(i), Q(2 * k - i + 1), 2 * k + 1) / QINF, INTEGERS),
                    order=50,
                    params={"k": k, "i": i},
                    oracle=("gordon", k, i),
                )
            )
    for k, i in ((3, 2), (5, 2), (5, 4)):

        def lin(j, i=i):
            return sgn(j + 1) if j <= i - 2 else 1

        reg.add(
            Identity(
                f"ag-even-k{k}-i{i}",
                f"Andrews-Gordon with even modulus, k={k}, i={i}",
                "classic",
                INTEGERS,
                multisum(k - 1, lambda j, n, lin=lin: n * n + lin(j) * n, lambda n: Term() / P(Q(2), n, 2), INTEGERS, base=2),
                product(PI(Q(2, -1), 2) * jtp3(Q(i), Q(2 * k + 2 - i), 2 * k + 2) / PI(Q(2), 2), INTEGERS),
                order=50,
                params={"k": k, "i": i},
            )
        )


def finite_jtp_a(n: int):
    """``(-1/z)_{n+1}(-zq)_n`` against its expansion in Gaussian polynomials."""
    from .qfactory import qbinom_term

    lhs = product(P(M(-1, -1), n + 1) * P(M(-1, 1, 1), n), LAURENT)

    def term(j):
        t = qbinom_term(2 * n + 1, n - j)
        return None if t is None else t * Term(M(1, j, binom2(j + 1)))

    rhs = lambda N: sum_range(term, -n - 1, n, LAURENT, N)
    return lhs, rhs


def finite_jtp_b(n: int):
    """Cleared form: ``(1-z)(1-q^{2n+1})(-z,-1/z)_n`` as a Gaussian-polynomial sum."""
    from .qfactory import qbinom_term

    lhs = product(F(M(1, 1)) * F(Q(2 * n + 1)) * P(M(-1, 1), n) * P(M(-1, -1), n), LAURENT)

    def term(j):
        t = qbinom_term(2 * n + 1, n - j)
        return None if t is None else t * Term(M(1, -j, binom2(j))) * F(Q(2 * j + 1))

    rhs = lambda N: sum_range(term, -n - 1, n, LAURENT, N)
    return lhs, rhs


def sum_range(fn, lo: int, hi: int, ring: RingTag, N: int) -> QSeries:
    total = QSeries.zero(ring, N)
    for j in range(lo, hi + 1):
        t = fn(j)
        if t is not None:
            total = total + t.expand(ring, N)
    return total


def _finite(reg: Registry):
    for n in (3, 6, 10):
        for form, make in (("a", finite_jtp_a), ("b", finite_jtp_b)):
            lhs, rhs = make(n)
            reg.add(
                Identity(
                    f"finite-jtp-{form}-n{n}",
                    f"truncated triple product, form {form.upper()}, n={n}",
                    "finite",
                    LAURENT,
                    lhs,
                    rhs,
                    order=max(50, 2 * n * n + 4 * n + 4),
                    params={"n": n},
                )
            )


def _seed_a(reg: Registry):
    L = LAURENT
    reg.add(
        Identity(
            "seedA-inf-inf",
            "seed A, both parameters infinite",
            "seedA",
            L,
            single(lambda n: P(M(-1, -1, 1), n) * P(M(-1, 1, 1), n) * Term(Q(n * (n + 1))) / P(Q(1), 2 * n + 1), L),
            product(jtp3(M(-1, -1, 3), M(-1, 1, 3), 3) / QINF, L),
        )
    )
    reg.add(
        Identity(
            "seedA-inf-inf-z1",
            "seed A, both parameters infinite, z = 1",
            "seedA",
            INTEGERS,
            single(lambda n: P(Q(1, -1), n) ** 2 * Term(Q(n * (n + 1))) / P(Q(1), 2 * n + 1), INTEGERS),
            product(jtp3(Q(3, -1), Q(3, -1), 3) / QINF, INTEGERS),
        )
    )
    reg.add(
        Identity(
            "seedA-inf-negq",
            "seed A, x infinite, y = -q",
            "seedA",
            L,
            single(
                lambda n: P(M(-1, -1, 1), n) * P(M(-1, 1, 1), n) * P(Q(1, -1), n) * Term(Q(binom2(n + 1))) / P(Q(1), 2 * n + 1),
                L,
            ),
            product(PI(M(-1, -1, 2), 2) * PI(M(-1, 1, 2), 2) / PI(Q(1), 2) ** 2, L),
        )
    )
    reg.add(
        Identity(
            "seedA-signrule",
            "seed A, false theta from the sign rule",
            "seedA",
            L,
            single(
                lambda n: Term(M(sgn(n), 0, binom2(n + 1))) * P(M(-1, -1), n + 1) * P(M(-1, 1, 1), n) * P(Q(1), n) / P(Q(1), 2 * n + 1),
                L,
            ),
            split(lambda n: Term(M(sgn(n), n, n * (n + 1))), L),
        )
    )
    Z = INTEGERS
    lhs_common = lambda n: Term(M(sgn(n), 0, binom2(n + 1)))
    reg.add(
        Identity(
            "falsetheta-310",
            "false theta, z = 1",
            "seedA",
            Z,
            single(lambda n: lhs_common(n) * P(Q(1, -1), n) / P(Q(1), n + 1, 2), Z),
            single(lambda n: Term(M(sgn(n), 0, n * (n + 1))), Z),
        )
    )
    reg.add(
        Identity(
            "falsetheta-311",
            "false theta, z = i",
            "seedA",
            Z,
            single(lambda n: lhs_common(n) * P(Q(2, -1), n, 2) / P(Q(n + 1), n + 1), Z),
            single(lambda n: Term(M(sgn(n), 0, 2 * n * (2 * n + 1))) * F(Q(4 * n + 2, -1)), Z),
        )
    )
    reg.add(
        Identity(
            "falsetheta-312",
            "false theta, z = exp(i pi/3)",
            "seedA",
            Z,
            single(lambda n: lhs_common(n) * P(Q(3), n, 3) / P(Q(1), 2 * n + 1), Z),
            single(lambda n: Term(Q(3 * n * (3 * n + 1))) * F(Q(12 * n + 6)), Z),
        )
    )
    reg.add(
        Identity(
            "falsetheta-313",
            "false theta, z = exp(2 i pi/3)",
            "seedA",
            Z,
            single(lambda n: lhs_common(n) * P(Q(3, -1), n, 3) / (P(Q(n + 1), n + 1) * P(Q(1, -1), n)), Z),
            single(
                lambda n: [
                    Term(M(sgn(n), 0, 3 * n * (3 * n + 1))),
                    Term(M(2 * sgn(n), 0, 3 * n * (3 * n + 1) + 6 * n + 2)),
                    Term(M(sgn(n), 0, 3 * n * (3 * n + 1) + 12 * n + 6)),
                ],
                Z,
            ),
        )
    )


def _one_plus(fn):
    """``1 + sum_{n >= 1} fn(n)`` as a Term-list summand."""
    return lambda n: Term() if n == 0 else fn(n)


def _seed_b(reg: Registry):
    L, Z = LAURENT, INTEGERS
    clear = F(M(1, 1))
    pz = lambda n: P(M(-1, -1), n) * P(M(-1, 1), n)
    reg.add(
        Identity(
            "seedB-inf-inf",
            "seed B, both parameters infinite",
            "seedB",
            L,
            single(lambda n: pz(n) * Term(Q(n * (n + 1))) / P(Q(1), 2 * n), L),
            combo(
                (1, product(jtp3(M(-1, -1, 2), M(-1, 1, 1), 3) / QINF, L)),
                (L.monomial(-1, 1), product(jtp3(M(-1, -1, 1), M(-1, 1, 2), 3) / QINF, L)),
            ),
            clear=clear,
        )
    )
    reg.add(
        Identity(
            "seedB-inf-negq",
            "seed B, x infinite, y = -q",
            "seedB",
            L,
            single(lambda n: pz(n) * Term(Q(binom2(n + 1))) / (P(Q(1), n) * P(Q(1), n, 2)), L),
            product(PI(Q(1, -1)) / QINF * jtp3(M(-1, -1, 1), M(-1, 1, 1), 2) / PI(Q(2), 2) * PI(Q(2), 2), L),
        )
    )
    reg.add(
        Identity(
            "seedB-signrule",
            "seed B, false theta from the sign rule",
            "seedB",
            L,
            single(lambda n: Term(M(sgn(n), 0, binom2(n + 1))) * pz(n) / (P(Q(1, -1), n) * P(Q(1), n, 2)), L),
            split(lambda n: Term(M(-sgn(n), n + 1, n * n)) * F(Q(2 * n + 1)), L),
            clear=clear,
        )
    )
    # theta-function forms
    reg.add(
        Identity(
            "seedB-theta-m4",
            "seed B theta form, z = i",
            "seedB",
            Z,
            single(lambda n: P(M(-1), n, 2) * Term(Q(n * (n + 1))) / P(Q(1), 2 * n), Z),
            _over_qinf(combo((1, theta(Q(5, -1), Q(7, -1))), (-1, _shift(theta(Q(1, -1), Q(11, -1)), 1)))),
        )
    )
    reg.add(
        Identity(
            "seedB-theta-m6",
            "seed B theta form, z = exp(i pi/3)",
            "seedB",
            Z,
            single(
                _one_plus(lambda n: Term(M(3, 0, n * (n + 1))) * P(Q(3), n - 1, 3) / (P(Q(1), n - 1) * P(Q(1), 2 * n))),
                Z,
            ),
            _over_qinf(
                combo(
                    (1, theta(Q(12, -1), Q(15, -1))),
                    (-1, _shift(theta(Q(6, -1), Q(21, -1)), 1)),
                    (2, _shift(theta(Q(3, -1), Q(24, -1)), 2)),
                )
            ),
        )
    )
    reg.add(
        Identity(
            "seedB-theta-m3",
            "seed B theta form, z = exp(2 i pi/3)",
            "seedB",
            Z,
            single(
                _one_plus(lambda n: Term(Q(n * (n + 1))) * P(Q(3, -1), n - 1, 3) / (P(Q(1, -1), n - 1) * P(Q(1), 2 * n))),
                Z,
            ),
            _over_qinf(combo((1, theta(Q(12), Q(15))), (-1, _shift(theta(Q(6), Q(21)), 1)))),
        )
    )
    # Rogers-Ramanujan type forms
    den = lambda n: P(Q(1), n) * P(Q(1), n, 2)
    reg.add(
        Identity(
            "seedB-rr-m1",
            "seed B product form, z = 1",
            "seedB",
            Z,
            single(lambda n: P(M(-1), n) ** 2 * Term(Q(binom2(n + 1))) / den(n), Z),
            product(PI(Q(1, -1)) ** 2 * PI(Q(1, -1), 2) ** 2, Z),
        )
    )
    reg.add(
        Identity(
            "seedB-rr-m4",
            "seed B product form, z = i",
            "seedB",
            Z,
            single(lambda n: P(M(-1), n, 2) * Term(Q(binom2(n + 1))) / den(n), Z),
            product(PI(Q(1, -1)) ** 2 * PI(Q(2, -1), 4), Z),
        )
    )
    reg.add(
        Identity(
            "seedB-rr-m6",
            "seed B product form, z = exp(i pi/3)",
            "seedB",
            Z,
            single(_one_plus(lambda n: Term(M(3, 0, binom2(n + 1))) * P(Q(3), n - 1, 3) / (P(Q(1), n - 1) * den(n))), Z),
            product(PI(Q(1, -1)) ** 3 * PI(Q(3), 6), Z),
        )
    )
    reg.add(
        Identity(
            "seedB-rr-m3",
            "seed B product form, z = exp(2 i pi/3)",
            "seedB",
            Z,
            single(_one_plus(lambda n: Term(Q(binom2(n + 1))) * P(Q(3, -1), n - 1, 3) / (P(Q(1, -1), n - 1) * den(n))), Z),
            product(Term() / (PI(Q(1), 2) * PI(Q(2), 12) * PI(Q(3), 12) * PI(Q(9), 12) * PI(Q(10), 12)), Z),
        )
    )
    # false theta forms
    fden = lambda n: P(Q(1, -1), n) * P(Q(1), n, 2)
    reg.add(
        Identity(
            "seedB-falsetheta-m4",
            "seed B false theta, z = i",
            "seedB",
            Z,
            single(lambda n: Term(M(sgn(n), 0, binom2(n + 1))) * P(M(-1), n, 2) / fden(n), Z),
            single(
                lambda n: [Term(M(sgn(n), 0, 4 * n * n)), Term(M(-2 * sgn(n), 0, 4 * n * n + 4 * n + 1)), Term(M(sgn(n), 0, 4 * n * n + 8 * n + 4))],
                Z,
            ),
        )
    )
    reg.add(
        Identity(
            "seedB-falsetheta-m6",
            "seed B false theta, z = exp(i pi/3)",
            "seedB",
            Z,
            single(
                _one_plus(lambda n: Term(M(3 * sgn(n), 0, binom2(n + 1))) * P(Q(3), n - 1, 3) / (P(Q(1), n - 1) * fden(n))),
                Z,
            ),
            single(
                lambda n: [
                    Term(Q(9 * n * n)),
                    Term(M(-3, 0, 9 * n * n + 6 * n + 1)),
                    Term(M(3, 0, 9 * n * n + 12 * n + 4)),
                    Term(M(-1, 0, 9 * n * n + 18 * n + 9)),
                ],
                Z,
            ),
        )
    )
    reg.add(
        Identity(
            "seedB-falsetheta-m3",
            "seed B false theta, z = exp(2 i pi/3)",
            "seedB",
            Z,
            single(
                _one_plus(lambda n: Term(M(sgn(n), 0, binom2(n + 1))) * P(Q(3, -1), n - 1, 3) / (P(Q(1, -1), n - 1) * fden(n))),
                Z,
            ),
            single(
                lambda n: [
                    Term(M(sgn(n), 0, 9 * n * n)),
                    Term(M(-sgn(n), 0, 9 * n * n + 6 * n + 1)),
                    Term(M(-sgn(n), 0, 9 * n * n + 12 * n + 4)),
                    Term(M(sgn(n), 0, 9 * n * n + 18 * n + 9)),
                ],
                Z,
            ),
        )
    )


def _shift(builder, e: int):
    return lambda N: builder(N - e).shift(e)


def _over_qinf(builder):
    return lambda N: builder(N) * (Term() / QINF).expand(INTEGERS, N)


def _appell(reg: Registry):
    L, Z = LAURENT, INTEGERS
    reg.add(
        Identity(
            "appell-z1",
            "lattice lemma with seed A, b = 0, z = 1",
            "appell",
            Z,
            single(lambda n: P(Q(1, -1), n) ** 2 * Term(Q(n * n)) / P(Q(1), 2 * n + 1), Z),
            product(jtp3(Q(1, -1), Q(2, -1), 3) / QINF, Z),
        )
    )
    reg.add(
        Identity(
            "appell-zq",
            "lattice lemma with seed A, b = 0, z = q",
            "appell",
            Z,
            single(lambda n: P(M(-1), n) * P(Q(1, -1), n + 1) * Term(Q(n * n)) / P(Q(1), 2 * n + 1), Z),
            combo(
                (1, product(jtp3(Q(1, -1), Q(2, -1), 3) / QINF, Z)),
                (2, _shift(product(PI(Q(3, -1), 3) * PI(Q(3, -1), 3) * PI(Q(3), 3) / QINF, Z), 1)),
            ),
        )
    )
    reg.add(
        Identity(
            "appell-series",
            "Appell-Lerch series from the lattice lemma in base q^2",
            "appell",
            Z,
            single(lambda n: P(Q(2, -1), n, 2) * Term(Q(n * n)) / (F(Q(2 * n + 1, -1)) * P(Q(1), 2 * n + 1)), Z),
            _times(
                product(PI(Q(1, -1), 2) / PI(Q(2), 2), Z),
                single(lambda n: Term(Q(n * (2 * n + 1))) / F(Q(4 * n + 2)), Z, bilateral=True),
            ),
        )
    )
    reg.add(
        Identity(
            "seedB-lattice-b1",
            "lattice lemma with seed B, b = 1",
            "appell",
            L,
            single(lambda n: P(M(-1, -1), n) * P(M(-1, 1), n) * Term(Q(n * n)) / P(Q(1), 2 * n), L),
            combo(
                (1, product(jtp3(M(-1, -1, 1), M(-1, 1, 2), 3) / QINF, L)),
                (L.monomial(-1, 1), product(jtp3(M(-1, -1, 2), M(-1, 1, 1), 3) / QINF, L)),
            ),
            clear=F(M(1, 1)),
        )
    )
    cases = (("inf-inf-b0", INF, INF, M(0)), ("inf-inf-bq", INF, INF, Q(1)), ("inf-m1-bnegq", INF, M(-1), Q(1, -1)))
    for tag, x, y, b in cases:
        reg.add(_appell_general_a(tag, x, y, b))
        reg.add(_appell_general_b(tag, x, y, b))


def _times(a, b):
    return lambda N: a(N) * b(N)


def _pref(x, y) -> Term:
    """``(q/x, q/y)_inf / (q, q/xy)_inf`` with infinite parameters dropped."""
    t = Term() / QINF
    for v in (x, y):
        if v is not INF:
            t = t * PI(Q(1) / v)
    if x is not INF and y is not INF:
        t = t / PI(Q(1) / (x * y))
    return t


def _den(x, y, n) -> Term:
    t = Term()
    for v in (x, y):
        if v is not INF:
            t = t * P(Q(1) / v, n)
    return t


def _appell_general_a(tag, x, y, b):
    L = LAURENT
    beta = lambda n: P(M(-1, -1), n + 1) * P(M(-1, 1, 1), n) / P(Q(1), 2 * n + 1)

    def rhs_term(n):
        w = _weight(x, y, Q(1), n, 1) * Term(M(1, n, binom2(n + 1))) / _den(x, y, n)
        first = F(b * Q(n)) / F(Q(2 * n + 1))
        # (q^n - b)/(z q (1 - q^{2n-1})) = q^{n-1} z^{-1} (1 - b q^{-n}) / (1 - q^{2n-1})
        second = Term(M(-1, -1, n - 1)) * F(b / Q(n)) / F(Q(2 * n - 1))
        return [_pref(x, y) * w * first, _pref(x, y) * w * second]

    return Identity(
        f"appell-general-A-{tag}",
        f"lattice lemma with seed A, general parameters ({tag})",
        "appell",
        L,
        single(lambda n: _weight(x, y, Q(1), n, 1) * F(b * Q(n)) * beta(n), L),
        single(rhs_term, L, bilateral=True),
        params={"x": str(x), "y": str(y), "b": str(b)},
    )


def _appell_general_b(tag, x, y, b):
    L = LAURENT
    beta = lambda n: P(M(-1, -1), n) * P(M(-1, 1), n) / P(Q(1), 2 * n)

    def rhs_term(n):
        w = _weight(x, y, Q(1), n, 1) * Term(M(1, -n, binom2(n))) / _den(x, y, n)
        # (1 - b q^n) - z (q^n - b) = (1 - b q^n) - z q^n (1 - b q^{-n})
        return [_pref(x, y) * w * F(b * Q(n)), -(_pref(x, y) * w * Term(M(1, 1, n)) * F(b / Q(n)))]

    return Identity(
        f"appell-general-B-{tag}",
        f"lattice lemma with seed B, general parameters ({tag})",
        "appell",
        L,
        single(lambda n: _weight(x, y, Q(1), n, 1) * F(b * Q(n)) * beta(n), L),
        single(rhs_term, L, bilateral=True),
        clear=F(M(1, 1)),
        params={"x": str(x), "y": str(y), "b": str(b)},
    )


# multisums ------------------------------------------------------------------


def _multisum_inf(reg: Registry, k: int):
    L, Z = LAURENT, INTEGERS
    K = 2 * k + 1
    N0 = MULTISUM_ORDER[k]
    d = lambda n: P(Q(1), 2 * n + 1)
    reg.add(
        Identity(
            f"multisum-inf-k{k}",
            f"multisum with exponents n(n+1), k={k}",
            "multisum",
            L,
            multisum(k, n_np1, lambda n: P(M(-1, -1, 1), n) * P(M(-1, 1, 1), n) / d(n), L),
            product(jtp3(M(-1, -1, K), M(-1, 1, K), K) / QINF, L),
            order=N0,
            params={"k": k},
        )
    )
    specs = {
        1: (lambda n: P(Q(1, -1), n) ** 2 / d(n), jtp3(Q(K, -1), Q(K, -1), K)),
        4: (lambda n: P(Q(2, -1), n, 2) / d(n), PI(Q(K), 8 * k + 4) * PI(Q(6 * k + 3), 8 * k + 4) * PI(Q(8 * k + 4), 8 * k + 4)),
        2: (lambda n: P(Q(1), n) / P(Q(n + 1), n + 1), PI(Q(K), K) ** 3),
        6: (lambda n: P(Q(3), n, 3) / (d(n) * P(Q(1), n)), PI(Q(3 * K), 3 * K)),
        3: (
            lambda n: P(Q(3, -1), n, 3) / (d(n) * P(Q(1, -1), n)),
            PI(Q(K), K) * PI(Q(K), 6 * K) * PI(Q(5 * K), 6 * K),
        ),
    }
    for m, (tail, prod) in specs.items():
        reg.add(
            Identity(
                f"multisum-inf-k{k}-m{m}",
                f"multisum with exponents n(n+1), k={k}, z a primitive {m}-th root of unity",
                "multisum",
                Z,
                multisum(k, n_np1, tail, Z),
                product(prod / QINF, Z),
                order=N0,
                params={"k": k, "m": m},
            )
        )
    for t in range(1, k + 1):
        reg.add(
            Identity(
                f"multisum-inf-k{k}-t{t}",
                f"multisum with exponents n(n+1), k={k}, z = -q^{t}",
                "multisum",
                Z,
                multisum(k, n_np1, lambda n, t=t: P(Q(1 - t), n) * P(Q(t), n + 1) / d(n), Z),
                product(jtp3(Q(t), Q(K - t), K) / QINF, Z),
                order=N0,
                params={"k": k, "t": t},
            )
        )


def _multisum_negq(reg: Registry, k: int):
    L, Z = LAURENT, INTEGERS
    K = k + 1
    N0 = MULTISUM_ORDER[k]
    d = lambda n: P(Q(1), 2 * n + 1)
    mq = PI(Q(1, -1)) / QINF
    reg.add(
        Identity(
            f"multisum-negq-k{k}",
            f"multisum with exponents n(n+1)/2, k={k}",
            "multisum",
            L,
            multisum(k, tri, lambda n: P(M(-1, -1, 1), n) * P(M(-1, 1, 1), n) * P(Q(1, -1), n) / d(n), L),
            product(mq * jtp3(M(-1, -1, K), M(-1, 1, K), K), L),
            order=N0,
            params={"k": k},
        )
    )
    specs = {
        1: (lambda n: P(Q(1, -1), n) ** 3 / d(n), jtp3(Q(K, -1), Q(K, -1), K)),
        4: (lambda n: P(Q(1, -1), n) * P(Q(2, -1), n, 2) / d(n), PI(Q(K), 4 * K) * PI(Q(3 * K), 4 * K) * PI(Q(4 * K), 4 * K)),
        2: (lambda n: P(Q(1), n) / P(Q(1), n + 1, 2), PI(Q(K), K) ** 3),
        6: (lambda n: P(Q(1, -1), n) * P(Q(3), n, 3) / (d(n) * P(Q(1), n)), PI(Q(3 * K), 3 * K)),
        3: (lambda n: P(Q(3, -1), n, 3) / d(n), PI(Q(K), K) * PI(Q(K), 6 * K) * PI(Q(5 * K), 6 * K)),
    }
    for m, (tail, prod) in specs.items():
        reg.add(
            Identity(
                f"multisum-negq-k{k}-m{m}",
                f"multisum with exponents n(n+1)/2, k={k}, z a primitive {m}-th root of unity",
                "multisum",
                Z,
                multisum(k, tri, tail, Z),
                product(mq * prod, Z),
                order=N0,
                params={"k": k, "m": m},
            )
        )
    for t in range(1, 2 * k + 2):
        reg.add(
            Identity(
                f"multisum-negq-k{k}-agev-t{t}",
                f"multisum in base q^2, k={k}, z = -q^({t}-2k-2)",
                "multisum",
                Z,
                multisum(
                    k,
                    lambda i, n: n * (n + 1),
                    lambda n, t=t: P(Q(t - 2 * k), n, 2) * P(Q(2, -1), n, 2) * P(Q(2 * k + 2 - t), n + 1, 2) / P(Q(2), 2 * n + 1, 2),
                    Z,
                    base=2,
                ),
                product(PI(Q(2, -1), 2) * jtp3(Q(t), Q(2 * k + 2 - t), 2 * k + 2) / PI(Q(2), 2), Z),
                order=N0,
                params={"k": k, "t": t},
            )
        )


def _multisum_sign(reg: Registry, k: int):
    L, Z = LAURENT, INTEGERS
    K = k + 1
    N0 = MULTISUM_ORDER[k]
    top = lambda n: P(Q(n + 1), n + 1)
    reg.add(
        Identity(
            f"multisum-signrule-k{k}",
            f"alternating multisum, k={k}",
            "multisum",
            L,
            multisum(k, tri, lambda n: P(M(-1, -1), n + 1) * P(M(-1, 1, 1), n) / top(n), L, sign=alt_sign),
            single(lambda n: [Term(M(sgn(k * n), n, K * binom2(n + 1))), Term(M(sgn(k * n), -n - 1, K * binom2(n + 1)))], L),
            order=N0,
            params={"k": k},
        )
    )
    specs = {
        1: (
            lambda n: P(Q(1, -1), n) ** 2 / top(n),
            lambda n: Term(M(sgn(k * n), 0, K * binom2(n + 1))),
        ),
        4: (
            lambda n: P(Q(2, -1), n, 2) / top(n),
            lambda n: [
                Term(M(sgn(n), 0, K * binom2(2 * n + 1))),
                Term(M(sgn(n) * sgn(k + 1), 0, K * binom2(2 * n + 1) + K * (2 * n + 1))),
            ],
        ),
        6: (
            lambda n: P(Q(3), n, 3) / P(Q(1), 2 * n + 1),
            lambda n: Term(M(sgn((k + 1) * n), 0, K * binom2(3 * n + 1))) * F(Q(K * (6 * n + 3))),
        ),
        3: (
            lambda n: P(Q(3, -1), n, 3) / (top(n) * P(Q(1, -1), n)),
            lambda n: [
                Term(M(sgn(k * n), 0, K * binom2(3 * n + 1))),
                Term(M(-2 * sgn(k) * sgn(k * n), 0, K * binom2(3 * n + 1) + K * (3 * n + 1))),
                Term(M(sgn(k * n), 0, K * binom2(3 * n + 1) + K * (6 * n + 3))),
            ],
        ),
    }
    for m, (tail, rhs) in specs.items():
        reg.add(
            Identity(
                f"multisum-signrule-k{k}-m{m}",
                f"alternating multisum, k={k}, z a primitive {m}-th root of unity",
                "multisum",
                Z,
                multisum(k, tri, tail, Z, sign=alt_sign),
                single(rhs, Z),
                order=N0,
                params={"k": k, "m": m},
            )
        )


# generalized Hecke-type -----------------------------------------------------


def _hecke_lhs_h1(n: int) -> Term:
    return Term(Q(n)) * P(M(-1, -1), n + 1, 2) * P(M(-1, 1, 2), n, 2) / P(Q(1, -1), 2 * n + 2)


def _hecke_lhs_h2(n: int) -> Term:
    return Term(Q(n)) * P(M(-1, -1), n + 1, 2) * P(M(-1, 1, 2), n, 2) / P(Q(1, -1), 2 * n + 1)


def _jsum(n_exp: int, lo: int, hi: int, fn) -> list:
    return [Term(M(c, ze, n_exp + qe)) for c, ze, qe in (fn(j) for j in range(lo, hi + 1))]


def _hecke(reg: Registry):
    L, Z = LAURENT, INTEGERS
    reg.add(
        Identity(
            "hecke1-z",
            "first Andrews-Warnaar transform of seed A in base q^2",
            "hecke",
            L,
            single(_hecke_lhs_h1, L),
            single(lambda n: _jsum(n * (n + 2), -n - 1, n, lambda j: (1, j, 0)), L),
        )
    )
    d1 = lambda n: Term(Q(n)) / P(Q(1, -1), 2 * n + 2)
    reg.add(
        Identity(
            "hecke1-m1",
            "first transform, z = 1",
            "hecke",
            Z,
            single(lambda n: d1(n) * P(Q(2, -1), n, 2) ** 2, Z),
            single(lambda n: Term(M(n + 1, 0, n * (n + 2))), Z),
        )
    )
    reg.add(
        Identity(
            "hecke1-m4",
            "first transform, z = i",
            "hecke",
            Z,
            single(lambda n: d1(n) * P(Q(4, -1), n, 4), Z),
            single(lambda n: Term(Q(4 * n * (4 * n + 2))) * F(Q(16 * n + 8)), Z),
        )
    )
    reg.add(
        Identity(
            "hecke1-m6",
            "first transform, z = exp(i pi/3)",
            "hecke",
            Z,
            single(lambda n: d1(n) * P(Q(6), n, 6) / P(Q(2), n, 2), Z),
            single(lambda n: Term(M(sgn(n), 0, 3 * n * (3 * n + 2))) * F(Q(6 * n + 3, -1)), Z),
        )
    )
    reg.add(
        Identity(
            "hecke1-m3",
            "first transform, z = exp(2 i pi/3)",
            "hecke",
            Z,
            single(lambda n: d1(n) * P(Q(6, -1), n, 6) / P(Q(2, -1), n, 2), Z),
            single(lambda n: Term(Q(3 * n * (3 * n + 2))) * F(Q(6 * n + 3)), Z),
        )
    )
    reg.add(
        Identity(
            "hecke1-relation",
            "two left sides related by q -> -q",
            "hecke",
            Z,
            single(lambda n: Term(M(sgn(n), 0, n)) * P(Q(6), n, 6) / (P(Q(1), 2 * n + 1) * P(Q(2, -1), n + 1, 2)), Z),
            single(lambda n: d1(n) * P(Q(6, -1), n, 6) / P(Q(2, -1), n, 2), Z),
        )
    )
    reg.add(
        Identity(
            "hecke2-z",
            "second Andrews-Warnaar transform of seed A in base q^2",
            "hecke",
            L,
            single(_hecke_lhs_h2, L),
            single(lambda n: _jsum(n * (n + 3) // 2, -(n // 2) - 1, n // 2, lambda j: (1, j, -j * (j + 1))), L),
        )
    )
    d2 = lambda n: Term(Q(n)) / P(Q(1, -1), 2 * n + 1)
    reg.add(
        Identity(
            "hecke2-m1",
            "second transform, z = 1",
            "hecke",
            Z,
            single(lambda n: d2(n) * P(Q(2, -1), n, 2) ** 2 * 2, Z),
            single(lambda n: _jsum(n * (n + 3) // 2, -((n + 2) // 2), n // 2, lambda j: (1, 0, -j * (j + 1))), Z),
        )
    )
    reg.add(
        Identity(
            "hecke2-m4",
            "second transform, z = i",
            "hecke",
            Z,
            single(lambda n: d2(n) * P(Q(4, -1), n, 4), Z),
            single(
                lambda n: _jsum(n * (n + 3) // 2, -((n + 2) // 4), n // 4, lambda j: (sgn(j), 0, -2 * j * (2 * j + 1))), Z
            ),
        )
    )
    reg.add(
        Identity(
            "hecke2-m6",
            "second transform, z = exp(i pi/3)",
            "hecke",
            Z,
            single(lambda n: d2(n) * P(Q(6), n, 6) / P(Q(2), n, 2), Z),
            single(
                lambda n: _jsum(n * (n + 3) // 2, -((n + 2) // 12), n // 12, lambda j: (1, 0, -6 * j * (6 * j + 1)))
                + _jsum(n * (n + 3) // 2, -((n + 6) // 12), (n - 4) // 12, lambda j: (-1, 0, -(6 * j + 2) * (6 * j + 3))),
                Z,
            ),
        )
    )
    reg.add(
        Identity(
            "hecke2-m3",
            "second transform, z = exp(2 i pi/3)",
            "hecke",
            Z,
            single(lambda n: d2(n) * P(Q(6, -1), n, 6) / P(Q(2, -1), n, 2), Z),
            single(
                lambda n: _jsum(n * (n + 3) // 2, -((n + 2) // 6), n // 6, lambda j: (1, 0, -3 * j * (3 * j + 1)))
                + _jsum(n * (n + 3) // 2, -((n + 4) // 6), (n - 2) // 6, lambda j: (-1, 0, -(3 * j + 1) * (3 * j + 2))),
                Z,
            ),
        )
    )


@lru_cache(maxsize=1)
def register_all() -> Registry:
    reg = Registry()
    _classic(reg)
    _finite(reg)
    _seed_a(reg)
    _seed_b(reg)
    _appell(reg)
    for k in (1, 2, 3):
        _multisum_inf(reg, k)
        _multisum_negq(reg, k)
        _multisum_sign(reg, k)
    _hecke(reg)
    return reg


# verification ---------------------------------------------------------------


def compare_sides(ident: Identity, order: int) -> tuple[QSeries, QSeries]:
    lhs = ident.lhs(order)
    rhs = ident.rhs(order)
    if ident.clear is not None:
        lhs = lhs * ident.clear.expand(ident.ring, order)
    return lhs.truncate(order), rhs.truncate(order)


def verify_identity(ident_id: str, order: int | None = None, timing: bool = False, registry: Registry | None = None) -> Report:
    reg = registry or register_all()
    ident = reg.get(ident_id) if isinstance(ident_id, str) else ident_id
    order = ident.order if order is None else order
    start = time.perf_counter()
    try:
        lhs, rhs = compare_sides(ident, order)
        bad = lhs.first_mismatch(rhs)
        status = "pass" if bad is None else "fail"
        message = ""
    except QSeriesError as exc:
        bad, status, message = None, "error", f"{type(exc).__name__}: {exc}"
    millis = int((time.perf_counter() - start) * 1000) if timing else 0
    return Report(ident.id, order, status, bad, millis, message)


def _verify_by_id(args) -> Report:
    ident_id, order, timing = args
    return verify_identity(ident_id, order, timing)


def verify_all(order: int | None = None, filter: str | None = None, jobs: int = 1, timing: bool = False) -> list[Report]:
    """Verify every selected identity; reports are ordered by id."""
    reg = register_all()
    ids = [i.id for i in reg.select(filter)]
    if jobs is None or jobs <= 0:
        jobs = os.cpu_count() or 1
    work = [(i, order, timing) for i in ids]
    if jobs == 1 or len(ids) <= 1:
        reports = [_verify_by_id(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_by_id, work))
    return sorted(reports, key=lambda r: r.id)


# consistency between records ------------------------------------------------

# k = 1 members of the multisum families against the single-sum seed identities
REDUCTIONS = (
    ("multisum-inf-k1", "seedA-inf-inf"),
    ("multisum-negq-k1", "seedA-inf-negq"),
    ("multisum-signrule-k1", "seedA-signrule"),
)


def _specialization_scale(family: str, m: int, ring: RingTag):
    """Factor between a general-z side at ``z = zeta_m`` and the specialized record.

    The specialized records divide out ``1 + zeta^{-1}``; hecke2-m1 keeps the 2
    on its left side, so there the factor is 1.
    """
    if family == "hecke2" and m == 1:
        return ring.from_int(1)
    return ring.from_int(1) + ring.monomial(1, -1)


def consistency_checks(order: int = 40) -> list[tuple[str, bool]]:
    """Cross-record checks: k = 1 reductions, root-of-unity specializations, the q -> -q relation."""
    from .rings import cyclotomic
    from .series import specialize_series

    reg = register_all()
    out = []
    for multi, single_id in REDUCTIONS:
        a, b = reg.get(multi), reg.get(single_id)
        ok = a.lhs(order) == b.lhs(order) and a.rhs(order) == b.rhs(order)
        out.append((f"{multi} == {single_id}", ok))
    for family in ("hecke1", "hecke2"):
        general = reg.get(f"{family}-z")
        sides = {s: getattr(general, s)(order) for s in ("lhs", "rhs")}
        for m in (1, 4, 6, 3):
            ring = cyclotomic(m)
            special = reg.get(f"{family}-m{m}")
            scale = _specialization_scale(family, m, ring)
            ok = all(
                specialize_series(sides[s], m) == getattr(special, s)(order).map_coeffs(ring.from_int, ring).scale(scale)
                for s in ("lhs", "rhs")
            )
            out.append((f"{family}-z at zeta_{m} == {family}-m{m}", ok))
    out.append(("hecke1-relation", verify_identity("hecke1-relation", order).passed))
    return out
