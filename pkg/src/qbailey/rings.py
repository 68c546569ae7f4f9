"""Exact coefficient rings.

Three rings are supported, selected by a :class:`RingTag`:

* ``INTEGERS`` -- plain Python ``int`` (arbitrary precision already).
* ``LAURENT`` -- :class:`ZLaurent`, sparse Laurent polynomials in ``z``.
* ``cyclotomic(m)`` -- :class:`CycloElem`, ``Z[z]/Phi_m(z)`` for m in 1, 2, 3, 4, 6.

Plain ints are accepted as constants by the two structured element types, so
``ZLaurent.z() + 1`` works.  Mixing a Laurent element with a cyclotomic one,
or cyclotomic elements of different moduli, raises :class:`RingMismatch`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotInvertible, RingMismatch, UnsupportedModulus

SUPPORTED_MODULI = (1, 2, 3, 4, 6)

# z^k mod Phi_m for 0 <= k < m, as coefficient vectors of length deg Phi_m.
_POWERS = {
    1: ((1,),),
    2: ((1,), (-1,)),
    3: ((1, 0), (0, 1), (-1, -1)),
    4: ((1, 0), (0, 1), (-1, 0), (0, -1)),
    6: ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)),
}


class ZLaurent:
    """Laurent polynomial in ``z`` with integer coefficients, stored sparsely."""

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        if terms is None:
            self._t = {}
        elif isinstance(terms, int):
            self._t = {0: terms} if terms else {}
        else:
            self._t = {e: c for e, c in dict(terms).items() if c}

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._t = terms
        return obj

    @classmethod
    def z(cls, e=1, c=1):
        return cls._raw({e: c} if c else {})

    @property
    def terms(self):
        return dict(self._t)

    def __iter__(self):
        return iter(sorted(self._t.items()))

    def __bool__(self):
        return bool(self._t)

    def _coerce(self, other):
        if isinstance(other, ZLaurent):
            return other
        if isinstance(other, int):
            return ZLaurent(other)
        if isinstance(other, CycloElem):
            raise RingMismatch("cannot combine a Laurent polynomial with a cyclotomic element")
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, int):
            if not other:
                return self
            t = dict(self._t)
            c = t.get(0, 0) + other
            if c:
                t[0] = c
            else:
                t.pop(0, None)
            return ZLaurent._raw(t)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t = dict(a)
        for e, c in b.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                del t[e]
        return ZLaurent._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return ZLaurent._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, (int, ZLaurent)):
            return self + (-other)
        other = self._coerce(other)
        return other if other is NotImplemented else self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZLaurent._raw({})
            if other == 1:
                return self
            return ZLaurent._raw({e: c * other for e, c in self._t.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((eb, cb),) = b.items()
            return ZLaurent._raw({e + eb: c * cb for e, c in a.items()})
        t = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                t[e] = t.get(e, 0) + ca * cb
        return ZLaurent._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return unit_inverse_laurent(self) ** (-k)
        out = ZLaurent(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            if not other:
                return not self._t
            return self._t == {0: other}
        if isinstance(other, ZLaurent):
            return self._t == other._t
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def is_unit(self):
        if len(self._t) != 1:
            return False
        (c,) = self._t.values()
        return c in (1, -1)

    def evaluate(self, value):
        """Substitute an integer (or any ring value supporting ** and +) for z."""
        total = 0
        for e, c in self._t.items():
            total = total + c * value**e
        return total

    def __repr__(self):
        return f"ZLaurent({self})"

    def __str__(self):
        return format_laurent(self._t)


def format_laurent(terms):
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms):
        c = terms[e]
        if e == 0:
            mono = str(abs(c))
        else:
            zp = "z" if e == 1 else f"z^{e}"
            mono = zp if abs(c) == 1 else f"{abs(c)}*{zp}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, mono))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, mono in parts[1:]:
        out += f" {sign} {mono}"
    return out


def unit_inverse_laurent(a):
    if not a.is_unit():
        raise NotInvertible(f"{a} is not a unit of Z[z, 1/z]")
    ((e, c),) = a._t.items()
    return ZLaurent._raw({-e: c})


class CycloElem:
    """Element of Z[z]/Phi_m(z), kept reduced to degree < deg Phi_m."""

    __slots__ = ("m", "c")

    def __init__(self, m, coeffs):
        if m not in _POWERS:
            raise UnsupportedModulus(f"cyclotomic modulus {m} not in {SUPPORTED_MODULI}")
        d = len(_POWERS[m][0])
        coeffs = tuple(coeffs)
        if len(coeffs) != d:
            raise ValueError(f"expected {d} coefficients for modulus {m}")
        self.m = m
        self.c = coeffs

    @classmethod
    def power(cls, m, e, c=1):
        """``c * zeta_m ** e``."""
        vec = _POWERS[m][e % m]
        return cls(m, tuple(c * v for v in vec))

    @classmethod
    def constant(cls, m, c):
        d = len(_POWERS[m][0])
        return cls(m, (c,) + (0,) * (d - 1))

    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.m != self.m:
                raise RingMismatch(f"cyclotomic moduli differ: {self.m} vs {other.m}")
            return other
        if isinstance(other, int):
            return CycloElem.constant(self.m, other)
        if isinstance(other, ZLaurent):
            raise RingMismatch("cannot combine a cyclotomic element with a Laurent polynomial")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.m, tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, tuple(-a for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.m, tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElem(self.m, tuple(a * other for a in self.c))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.c) == 1:
            return CycloElem(self.m, (self.c[0] * other.c[0],))
        a0, a1 = self.c
        b0, b1 = other.c
        hi = a1 * b1
        r0, r1 = _POWERS[self.m][2]
        return CycloElem(self.m, (a0 * b0 + hi * r0, a0 * b1 + a1 * b0 + hi * r1))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloElem.constant(self.m, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.c == CycloElem.constant(self.m, other).c
        if isinstance(other, CycloElem):
            return self.m == other.m and self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash((self.m, self.c))

    def __bool__(self):
        return any(self.c)

    def _unit_table(self):
        table = {}
        for e in range(self.m):
            for s in (1, -1):
                table[CycloElem.power(self.m, e, s).c] = CycloElem.power(self.m, -e, s)
        return table

    def is_unit(self):
        return self.c in self._unit_table()

    def inverse(self):
        inv = self._unit_table().get(self.c)
        if inv is None:
            raise NotInvertible(f"{self} is not a unit of Z[zeta_{self.m}]")
        return inv

    def __repr__(self):
        return f"CycloElem({self.m}, {self.c})"

    def __str__(self):
        if len(self.c) == 1:
            return str(self.c[0])
        return format_laurent({i: v for i, v in enumerate(self.c) if v})


@dataclass(frozen=True)
class RingTag:
    """Discriminant for the coefficient ring of a series."""

    kind: str
    m: int = 0

    def __post_init__(self):
        if self.kind not in ("integers", "laurent", "cyclotomic"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "cyclotomic" and self.m not in SUPPORTED_MODULI:
            raise UnsupportedModulus(f"cyclotomic modulus {self.m} not in {SUPPORTED_MODULI}")

    @property
    def name(self):
        if self.kind == "cyclotomic":
            return f"cyclo{self.m}"
        return self.kind

    @property
    def has_z(self):
        return self.kind != "integers"

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, c):
        if self.kind == "integers":
            return c
        if self.kind == "laurent":
            return ZLaurent(c)
        return CycloElem.constant(self.m, c)

    def monomial(self, c, e=0):
        """The ring element ``c * z**e``."""
        if self.kind == "integers":
            if e:
                raise RingMismatch("z is unavailable in the integer ring")
            return c
        if self.kind == "laurent":
            return ZLaurent.z(e, c)
        return CycloElem.power(self.m, e, c)

    def owns(self, x):
        if self.kind == "integers":
            return isinstance(x, int)
        if self.kind == "laurent":
            return isinstance(x, (int, ZLaurent))
        return isinstance(x, int) or (isinstance(x, CycloElem) and x.m == self.m)

    def normalize(self, x):
        """Coerce a compatible value (e.g. an int constant) to this ring's type."""
        if not self.owns(x):
            raise RingMismatch(f"{x!r} is not an element of {self.name}")
        if isinstance(x, int):
            return self.from_int(x)
        return x

    def is_unit(self, x):
        x = self.normalize(x)
        if self.kind == "integers":
            return x in (1, -1)
        return x.is_unit()

    def unit_inverse(self, x):
        x = self.normalize(x)
        if self.kind == "integers":
            if x not in (1, -1):
                raise NotInvertible(f"{x} is not a unit of Z")
            return x
        if self.kind == "laurent":
            return unit_inverse_laurent(x)
        return x.inverse()

    def format(self, x):
        return str(x)

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        if text in ("integers", "int", "z-int", "zz"):
            return INTEGERS
        if text in ("laurent", "laurentz"):
            return LAURENT
        if text.startswith("cyclo"):
            return cyclotomic(int(text[5:]))
        raise ValueError(f"unknown ring {text!r}")


INTEGERS = RingTag("integers")
LAURENT = RingTag("laurent")


def cyclotomic(m):
    return RingTag("cyclotomic", m)


def ring_of(x):
    if isinstance(x, ZLaurent):
        return LAURENT
    if isinstance(x, CycloElem):
        return cyclotomic(x.m)
    if isinstance(x, int):
        return INTEGERS
    raise TypeError(f"not a ring element: {x!r}")


def ring_add(a, b):
    ra, rb = ring_of(a), ring_of(b)
    if ra != rb:
        raise RingMismatch(f"tag mismatch: {ra.name} vs {rb.name}")
    return a + b


def ring_mul(a, b):
    ra, rb = ring_of(a), ring_of(b)
    if ra != rb:
        raise RingMismatch(f"tag mismatch: {ra.name} vs {rb.name}")
    return a * b


def cyclotomic_polynomial(m):
    """Phi_m as a ZLaurent."""
    table = {
        1: {1: 1, 0: -1},
        2: {1: 1, 0: 1},
        3: {2: 1, 1: 1, 0: 1},
        4: {2: 1, 0: 1},
        6: {2: 1, 1: -1, 0: 1},
    }
    if m not in table:
        raise UnsupportedModulus(f"cyclotomic modulus {m} not in {SUPPORTED_MODULI}")
    return ZLaurent(table[m])


def specialize_z(p, target):
    """Substitute a value for ``z`` in a Laurent polynomial.

    ``target`` is either an int ``m`` (``z`` becomes a primitive m-th root of
    unity; returns a :class:`CycloElem`) or a pair ``(sign, t)`` meaning
    ``z = sign * q**t``; the result is then ``{q_shift: int_coefficient}``.
    """
    if isinstance(p, int):
        p = ZLaurent(p)
    if isinstance(target, int):
        if target not in SUPPORTED_MODULI:
            raise UnsupportedModulus(f"cyclotomic modulus {target} not in {SUPPORTED_MODULI}")
        out = CycloElem.constant(target, 0)
        for e, c in p._t.items():
            out = out + CycloElem.power(target, e, c)
        return out
    sign, t = target
    if sign not in (1, -1):
        raise ValueError("monomial target must be +q^t or -q^t")
    out = {}
    for e, c in p._t.items():
        s = t * e
        out[s] = out.get(s, 0) + c * sign ** abs(e)
    return {s: c for s, c in sorted(out.items()) if c}
