"""Partition-counting oracles for product sides.

Everything here works on plain integers and never touches the series engine,
so agreement with an expanded product is an independent check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, NotOracleable

MAX_N = 60


@dataclass(frozen=True)
class Congruence:
    """Parts restricted to the given residues modulo ``modulus``."""

    residues: frozenset
    modulus: int

    def __init__(self, residues, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "residues", frozenset(r % modulus for r in residues))
        object.__setattr__(self, "modulus", modulus)

    def __str__(self):
        return f"parts in {sorted(self.residues)} mod {self.modulus}"


@dataclass(frozen=True)
class Gordon:
    """Frequency conditions ``f_1 <= i-1`` and ``f_j + f_{j+1} <= k-1``."""

    k: int
    i: int

    def __post_init__(self):
        if not 1 <= self.i <= self.k:
            raise ValueError("need 1 <= i <= k")

    def __str__(self):
        return f"Gordon(k={self.k}, i={self.i})"


def count_partitions(n: int, f) -> int:
    if n < 0:
        return 0
    if n > MAX_N:
        raise BudgetExceeded(f"n={n} exceeds the enumeration budget {MAX_N}")
    if isinstance(f, Congruence):
        return _congruence_table(f.residues, f.modulus, n)[n]
    if isinstance(f, Gordon):
        return _gordon(f.k, f.i, 1, n, 0)
    raise TypeError(f"unknown partition filter {f!r}")


@lru_cache(maxsize=None)
def _congruence_table(residues: frozenset, modulus: int, n: int) -> tuple:
    # table[m] = partitions of m into allowed parts, filled part by part
    table = [1] + [0] * n
    for part in range(1, n + 1):
        if part % modulus not in residues:
            continue
        for m in range(part, n + 1):
            table[m] += table[m - part]
    return tuple(table)


@lru_cache(maxsize=None)
def _gordon(k: int, i: int, part: int, rest: int, prev: int) -> int:
    """Choose frequencies of ``part, part+1, ...`` summing to ``rest``."""
    if rest == 0:
        return 1
    if part > rest:
        return 0
    cap = (i - 1) if part == 1 else (k - 1 - prev)
    total = 0
    for f in range(0, min(cap, rest // part) + 1):
        total += _gordon(k, i, part + 1, rest - f * part, f)
    return total


def enumerate_partitions(n: int, largest: int | None = None):
    """All partitions of ``n`` as non-increasing tuples (small n only)."""
    if n > MAX_N:
        raise BudgetExceeded(f"n={n} exceeds the enumeration budget {MAX_N}")
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in enumerate_partitions(n - p, p):
            yield (p,) + rest


def filters_for(ident) -> list:
    """Partition filters whose generating function is the identity's product side."""
    spec = getattr(ident, "oracle", None)
    if spec is None:
        raise NotOracleable(f"{ident.id} has no partition-theoretic product side")
    kind = spec[0]
    if kind == "congruence":
        _, residues, modulus = spec
        i = ident.params.get("i")
        out = [Congruence(residues, modulus)]
        if modulus == 5 and i is not None:
            out.append(Gordon(2, i + 1))
        return out
    if kind == "gordon":
        _, k, i = spec
        M = 2 * k + 1
        allowed = [r for r in range(M) if r not in (0, i % M, (M - i) % M)]
        return [Gordon(k, i), Congruence(allowed, M)]
    raise NotOracleable(f"unknown oracle kind {kind!r}")


@dataclass(frozen=True)
class OracleReport:
    id: str
    nmax: int
    status: str
    filters: tuple
    mismatch: tuple | None = None
    millis: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"id": self.id, "order": self.nmax, "status": self.status}
        if self.mismatch is not None:
            n, series, count, label = self.mismatch
            out["firstMismatch"] = {"exponent": n, "lhs": str(series), "rhs": str(count), "filter": label}
        out["millis"] = self.millis
        return out


def oracle_check_product(ident_id: str, nmax: int = 30, timing: bool = False) -> OracleReport:
    from .corpus import register_all
    from .series import to_integers

    ident = register_all().get(ident_id)
    filters = filters_for(ident)
    start = time.perf_counter()
    side = to_integers(ident.rhs(nmax))
    mismatch = None
    for n in range(nmax + 1):
        c = side.coeff(n)
        for f in filters:
            count = count_partitions(n, f)
            if c != count:
                mismatch = (n, c, count, str(f))
                break
        if mismatch:
            break
    millis = int((time.perf_counter() - start) * 1000) if timing else 0
    return OracleReport(ident.id, nmax, "fail" if mismatch else "pass", tuple(str(f) for f in filters), mismatch, millis)
