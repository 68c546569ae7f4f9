import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbailey.errors import DivergentProduct, NonTruncating, TruncationUnsound
from qbailey.qfactory import (
    Monomial,
    Q,
    SumSpec,
    Term,
    ag_multisum,
    bilateral_sum,
    binom2,
    poch_finite,
    poch_infinite,
    qbinom,
    term_sum,
    theta_f,
    theta_product,
)
from qbailey.rings import INTEGERS, LAURENT, ZLaurent
from qbailey.series import QSeries

monomials = st.builds(Monomial, st.sampled_from([1, -1]), st.integers(-2, 2), st.integers(-2, 3))
positive = st.builds(Monomial, st.sampled_from([1, -1]), st.just(0), st.integers(1, 4))


def ints(coeffs, order):
    return QSeries.from_list(INTEGERS, coeffs, order)


def test_poch_finite_examples():
    assert poch_finite(Monomial(-1, 1, 1), 0, order=5, ring=LAURENT) == QSeries.one(LAURENT, 5)
    got = poch_finite(Monomial(-1, 1, 1), 1, order=5, ring=LAURENT)
    assert got.to_dict() == {0: ZLaurent(1), 1: ZLaurent.z(1)}
    assert poch_finite(Q(1), 2, order=5) == ints([1, -1, -1, 1], 5)


def test_poch_infinite_examples():
    assert poch_infinite(Q(1), 1, 5) == ints([1, -1, -1, 0, 0, 1], 5)
    assert poch_infinite(Q(3), 3, 5) == ints([1, 0, 0, -1], 5)
    with pytest.raises(DivergentProduct):
        poch_infinite(Monomial(-1), 1, 10)


@given(monomials, st.integers(0, 5), st.integers(0, 5), st.integers(1, 3))
def test_poch_concatenation(a, n, m, base):
    ring = LAURENT
    left = poch_finite(a, n, base, 25, ring) * poch_finite(a * Q(base * n), m, base, 25, ring)
    assert left == poch_finite(a, n + m, base, 25, ring)


def test_qbinom_examples():
    assert qbinom(2, 1, 10) == ints([1, 1], 10)
    assert qbinom(7, 0, 10) == QSeries.one(INTEGERS, 10)
    assert qbinom(4, 2, 10) == ints([1, 1, 2, 1, 1], 10)
    assert qbinom(3, 5, 10).is_zero() and qbinom(3, -1, 10).is_zero()


@given(st.integers(1, 12), st.data())
def test_qbinom_pascal(n, data):
    k = data.draw(st.integers(1, n))
    lhs = qbinom(n, k, 80)
    rhs = qbinom(n - 1, k - 1, 80) + qbinom(n - 1, k, 80).shift(k).truncate(80)
    assert lhs == rhs


@pytest.mark.parametrize("n", range(0, 13))
def test_cauchy_binomial_theorem(n):
    order = binom2(n + 1) + 1
    lhs = poch_finite(Monomial(1, 1, 0), n, order=order, ring=LAURENT)
    rhs = QSeries.zero(LAURENT, order)
    for j in range(n + 1):
        coeff = qbinom(n, j, order, LAURENT).shift(binom2(j)).truncate(order)
        rhs = rhs + coeff.scale(LAURENT.monomial((-1) ** j, j))
    assert lhs == rhs


def test_theta_examples():
    assert theta_f(Q(1), Q(1), 9) == ints([1, 2, 0, 0, 2, 0, 0, 0, 0, 2], 9)
    assert theta_f(Q(1), Q(2), 7) == ints([1, 1, 1, 0, 0, 1, 0, 1], 7)
    with pytest.raises(NonTruncating):
        theta_f(Q(1), Q(-1), 5)


@given(positive, positive)
def test_theta_product_form(a, b):
    # the product form needs ab = q^k with coefficient +1
    b = Monomial(a.coeff, 0, b.qexp)
    assert theta_f(a, b, 40) == theta_product(a, b).expand(INTEGERS, 40)


@given(positive, positive)
def test_theta_splitting(a, b):
    N = 40
    rhs = theta_f(a**3 * b, a * b**3, N) + theta_f(b / a, a**5 * b**3, N) * Term(a).expand(INTEGERS, N)
    assert theta_f(a, b, N) == rhs


def test_jacobi_triple_product():
    N = 30
    z = Monomial(1, 1, 0)
    lhs = (Term.pinf(z) * Term.pinf(Q(1) / z) * Term.pinf(Q(1))).expand(LAURENT, N)
    rhs = term_sum(lambda n: Term(Monomial((-1) ** (n % 2), n, binom2(n))), LAURENT, N, bilateral=True)
    assert lhs == rhs


def test_bilateral_sum_examples():
    z3 = bilateral_sum(SumSpec(lambda n, N: Term(Monomial((-1) ** (n % 2), n, binom2(n))).expand(LAURENT, N), lambda n: binom2(n), True), 3, LAURENT)
    jtp = (Term.pinf(Monomial(1, 1, 0)) * Term.pinf(Monomial(1, -1, 1)) * Term.pinf(Q(1))).expand(LAURENT, 3)
    assert z3 == jtp
    one = bilateral_sum(SumSpec(lambda n, N: Term(Q(n * (n + 1))).expand(INTEGERS, N), lambda n: n * (n + 1)), 1, INTEGERS)
    assert one == QSeries.one(INTEGERS, 1)
    spec = SumSpec(lambda n, N: (Term(Q(3 * n * (3 * n + 1))) * Term.factor(Q(12 * n + 6))).expand(INTEGERS, N), lambda n: 3 * n * (3 * n + 1))
    assert bilateral_sum(spec, 6, INTEGERS) == ints([1, 0, 0, 0, 0, 0, -1], 6)


def test_bilateral_sum_rejects_false_bound():
    spec = SumSpec(lambda n, N: Term(Q(n)).expand(INTEGERS, N), lambda n: n * n)
    with pytest.raises(TruncationUnsound):
        bilateral_sum(spec, 10, INTEGERS)


def inv_qpoch(n, N):
    return (Term() / Term.poch(Q(1), n)).expand(INTEGERS, N)


def test_ag_multisum_trivial_order():
    for k in (1, 2, 4):
        assert ag_multisum(k, lambda i, n: n * n, lambda n, N: inv_qpoch(n, N), 0, INTEGERS) == QSeries.one(INTEGERS, 0)


def test_ag_multisum_matches_gordon_product():
    N = 30
    lhs = ag_multisum(2, lambda i, n: n * n + n, lambda n, R: inv_qpoch(n, R), N, INTEGERS)
    prod = Term() / (Term.pinf(Q(2), 7) * Term.pinf(Q(3), 7) * Term.pinf(Q(4), 7) * Term.pinf(Q(5), 7))
    assert lhs == prod.expand(INTEGERS, N)


def test_ag_multisum_matches_brute_force():
    N = 25

    def brute():
        total = QSeries.zero(INTEGERS, N)
        for a in range(6):
            for b in range(a + 1):
                t = Term(Q(a * a + b * b)) / (Term.poch(Q(1), a - b) * Term.poch(Q(1), b))
                total = total + t.expand(INTEGERS, N)
        return total

    assert ag_multisum(2, lambda i, n: n * n, lambda n, R: inv_qpoch(n, R), N, INTEGERS) == brute()


def test_negative_length_pochhammer():
    # 1/(q)_{-n} vanishes for n >= 1
    t = Term() / Term.poch(Q(1), -2)
    assert t.valuation(INTEGERS) is None
    assert (Term.poch(Q(1), 3) * Term.poch(Q(4), -1)).expand(INTEGERS, 10) == poch_finite(Q(1), 2, order=10)


def test_term_cancellation_is_exact():
    t = Term.poch(Q(1), 5) / Term.poch(Q(1), 5)
    assert t.expand(INTEGERS, 10) == QSeries.one(INTEGERS, 10)
    assert (Term.factor(Monomial(1, 1)) / Term.factor(Monomial(1, 1))).expand(LAURENT, 3) == QSeries.one(LAURENT, 3)
