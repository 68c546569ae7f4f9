"""Truncated formal Laurent series in q over an exact coefficient ring."""

from __future__ import annotations

from .errors import NotInvertible, OutOfWindow, RingMismatch
from .rings import INTEGERS, RingTag, cyclotomic, specialize_z


class QSeries:
    """``sum(c_k q^k for k in min_exp..order) + O(q^(order+1))``.

    Coefficients are stored densely from ``min_exp`` on; the stored run may be
    shorter than the window, missing entries are zero.  Values are immutable.
    Equality (``==``) is window equality: two series are compared on the
    exponents both of them know, i.e. up to the smaller truncation order.
    """

    __slots__ = ("ring", "min_exp", "coeffs", "order")

    def __init__(self, ring: RingTag, min_exp: int, coeffs, order: int):
        coeffs = tuple(coeffs)
        keep = max(0, order - min_exp + 1)
        if len(coeffs) > keep:
            coeffs = coeffs[:keep]
        self.ring = ring
        self.min_exp = min_exp
        self.coeffs = coeffs
        self.order = order

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingTag, order: int) -> QSeries:
        return cls(ring, min(0, order + 1), (), order)

    @classmethod
    def one(cls, ring: RingTag, order: int) -> QSeries:
        return cls.monomial(ring, 1, 0, order)

    @classmethod
    def monomial(cls, ring: RingTag, c, e: int, order: int) -> QSeries:
        if e > order:
            return cls.zero(ring, order)
        return cls(ring, e, (ring.normalize(c),), order)

    @classmethod
    def from_dict(cls, ring: RingTag, terms: dict, order: int) -> QSeries:
        terms = {e: c for e, c in terms.items() if e <= order}
        if not terms:
            return cls.zero(ring, order)
        lo, hi = min(terms), max(terms)
        zero = ring.zero()
        run = [zero] * (hi - lo + 1)
        for e, c in terms.items():
            run[e - lo] = ring.normalize(c)
        return cls(ring, lo, run, order)

    @classmethod
    def from_list(cls, ring: RingTag, coeffs, order: int, min_exp: int = 0) -> QSeries:
        return cls(ring, min_exp, [ring.normalize(c) for c in coeffs], order)

    # inspection -----------------------------------------------------------

    def coeff(self, k: int):
        if k > self.order:
            raise OutOfWindow(f"q^{k} lies beyond the truncation order {self.order}")
        i = k - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero()

    __getitem__ = coeff

    def valuation(self):
        """Exponent of the lowest nonzero coefficient, or None if zero in the window."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.min_exp + i
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def items(self):
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        return [(self.min_exp + i, c) for i, c in enumerate(self.coeffs) if c]

    def to_dict(self) -> dict:
        return dict(self.items())

    def to_list(self, lo: int = 0) -> list:
        return [self.coeff(k) for k in range(lo, self.order + 1)]

    # arithmetic -----------------------------------------------------------

    def _check(self, other: QSeries):
        if self.ring != other.ring:
            raise RingMismatch(f"tag mismatch: {self.ring.name} vs {other.ring.name}")

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + QSeries.monomial(self.ring, other, 0, self.order)
        self._check(other)
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        hi = min(order, max(self.min_exp + len(self.coeffs), other.min_exp + len(other.coeffs)) - 1)
        if hi < lo:
            return QSeries.zero(self.ring, order)
        zero = self.ring.zero()
        run = [zero] * (hi - lo + 1)
        for s in (self, other):
            off = s.min_exp - lo
            for i, c in enumerate(s.coeffs):
                j = off + i
                if j >= len(run):
                    break
                if c:
                    run[j] = run[j] + c
        return QSeries(self.ring, lo, run, order)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.ring, self.min_exp, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        self._check(other)
        a, b = self, other
        order = min(a.order + b.min_exp, b.order + a.min_exp)
        lo = a.min_exp + b.min_exp
        n = order - lo + 1
        if n <= 0 or not a.coeffs or not b.coeffs:
            return QSeries.zero(self.ring, order)
        ac, bc = a.coeffs[:n], b.coeffs[:n]
        zero = self.ring.zero()
        run = [zero] * min(n, len(ac) + len(bc) - 1)
        nb = len(bc)
        for i, x in enumerate(ac):
            if not x:
                continue
            lim = min(nb, n - i)
            for j in range(lim):
                y = bc[j]
                if y:
                    run[i + j] = run[i + j] + x * y
        return QSeries(self.ring, lo, run, order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QSeries:
        if k < 0:
            return self.inverse() ** (-k)
        out = QSeries.one(self.ring, self.order)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> QSeries:
        c = self.ring.normalize(c)
        if not c:
            return QSeries.zero(self.ring, self.order)
        return QSeries(self.ring, self.min_exp, [x * c for x in self.coeffs], self.order)

    def shift(self, e: int) -> QSeries:
        """Multiply by ``q**e``; the window moves with the series."""
        return QSeries(self.ring, self.min_exp + e, self.coeffs, self.order + e)

    def truncate(self, order: int) -> QSeries:
        return QSeries(self.ring, self.min_exp, self.coeffs, min(order, self.order))

    def inverse(self, order: int | None = None) -> QSeries:
        """Multiplicative inverse; the lowest nonzero coefficient must be a unit."""
        v = self.valuation()
        if v is None:
            raise NotInvertible("series vanishes on its whole window")
        start = v - self.min_exp
        u = self.coeffs[start:]
        lead = u[0]
        if not self.ring.is_unit(lead):
            raise NotInvertible(f"leading coefficient {lead} is not a unit in {self.ring.name}")
        linv = self.ring.unit_inverse(lead)
        avail = self.order - 2 * v
        out_order = avail if order is None else min(order, avail)
        n = out_order + v + 1
        if n <= 0:
            return QSeries.zero(self.ring, out_order)
        zero = self.ring.zero()
        w = [zero] * n
        w[0] = linv
        for k in range(1, n):
            acc = zero
            for j in range(1, min(k, len(u) - 1) + 1):
                if u[j]:
                    acc = acc + u[j] * w[k - j]
            w[k] = -(acc * linv) if acc else zero
        return QSeries(self.ring, -v, w, out_order)

    def map_coeffs(self, fn, ring: RingTag) -> QSeries:
        return QSeries(ring, self.min_exp, [fn(c) for c in self.coeffs], self.order)

    # comparison -----------------------------------------------------------

    def first_mismatch(self, other: QSeries):
        """``(exponent, mine, theirs)`` at the lowest differing exponent, or None."""
        self._check(other)
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        for k in range(lo, order + 1):
            a, b = self.coeff(k), other.coeff(k)
            if a != b:
                return k, a, b
        return None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.ring != other.ring:
            return False
        return self.first_mismatch(other) is None

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*q^{e}" for e, c in self.items()) or "0"
        return f"QSeries[{self.ring.name}]({body} + O(q^{self.order + 1}))"

    def lines(self) -> list[str]:
        return [f"{e}: {self.ring.format(c)}" for e, c in self.items()]


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def qs_inverse(a: QSeries, order: int | None = None) -> QSeries:
    return a.inverse(order)


def qs_coeff(a: QSeries, k: int):
    return a.coeff(k)


def qs_shift(a: QSeries, e: int) -> QSeries:
    return a.shift(e)


def qs_scale(a: QSeries, c) -> QSeries:
    return a.scale(c)


def specialize_series(s: QSeries, m: int) -> QSeries:
    """Send ``z`` to a primitive m-th root of unity, coefficient by coefficient."""
    if s.ring.kind != "laurent":
        raise RingMismatch("only Laurent-coefficient series can be specialized")
    return s.map_coeffs(lambda c: specialize_z(c, m), cyclotomic(m))


def to_integers(s: QSeries) -> QSeries:
    """Map a series over Z[zeta_1] or Z[zeta_2] (both equal to Z) onto INTEGERS."""
    if s.ring == INTEGERS:
        return s
    if s.ring.kind == "cyclotomic" and s.ring.m in (1, 2):
        return s.map_coeffs(lambda c: c.c[0], INTEGERS)
    if s.ring.kind == "cyclotomic":

        def down(c):
            if any(c.c[1:]):
                raise RingMismatch(f"{c} is not an integer")
            return c.c[0]

        return s.map_coeffs(down, INTEGERS)
    raise RingMismatch(f"cannot map {s.ring.name} coefficients to integers")
