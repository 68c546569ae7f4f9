import pytest

from qbailey.bailey import (
    INF,
    BaileyPair,
    asym_lemma_eval,
    aw_transform_eval,
    chain_step,
    constructed_pair,
    error_term_R,
    lattice_step,
    lemma_eval_bilateral,
    pair_relation_check,
    seed_pair_A,
    seed_pair_B,
)
from qbailey.errors import BaseMismatch, ErrorTermRequired, SingularB
from qbailey.qfactory import Monomial, Q, Term, binom2
from qbailey.rings import LAURENT, ZLaurent
from qbailey.series import QSeries

NEG_Q = Q(1, -1)
PARAMS = [(INF, INF), (INF, NEG_Q), (INF, Monomial(-1)), (INF, Q(-1)), (INF, Monomial(1, 1, 0)), (NEG_Q, Monomial(1, 1, 0))]


def test_seed_values():
    A = seed_pair_A()
    assert A.alpha_series(1, 5) == QSeries.monomial(LAURENT, ZLaurent.z(1), 1, 5)
    beta0 = A.beta_series(0, 8)
    expected = (Term.factor(Monomial(-1, -1, 0)) / Term.factor(Q(1))).expand(LAURENT, 8)
    assert beta0 == expected


def test_seed_b_relation_at_zero():
    B = seed_pair_B()
    assert B.beta_series(0, 10) == B.clear.expand(LAURENT, 10)
    assert pair_relation_check(B, 0, 10)


@pytest.mark.parametrize("seed", [seed_pair_A, seed_pair_B])
def test_seed_relation(seed):
    assert pair_relation_check(seed(), 10, 25)


def test_mutated_seed_fails_at_zero():
    A = seed_pair_A()
    bad = BaileyPair(1, lambda n: [t * Q(1) for t in A.alpha(n)], A.beta, 1)
    rep = pair_relation_check(bad, 5, 20)
    assert not rep and rep.n == 0


def test_chain_alpha_infinite():
    A1 = chain_step(seed_pair_A(), INF, INF)
    assert A1.alpha_series(1, 5) == QSeries.monomial(LAURENT, ZLaurent.z(1), 3, 5)
    for n in range(-4, 5):
        expect = Term(Q(n * (n + 1))) * seed_pair_A().alpha(n)[0]
        assert A1.alpha_series(n, 40) == expect.expand(LAURENT, 40)


@pytest.mark.parametrize("seed", [seed_pair_A, seed_pair_B])
@pytest.mark.parametrize("x,y", PARAMS)
def test_chain_closure(seed, x, y):
    assert pair_relation_check(chain_step(seed(), x, y), 8, 20)


@pytest.mark.parametrize("b", [Monomial(0), Q(1), NEG_Q])
def test_lattice_closure(b):
    for seed in (seed_pair_A, seed_pair_B):
        p = lattice_step(seed(), b)
        assert p.lam == 0
        assert pair_relation_check(p, 8, 20)
        assert p.beta_series(0, 10) == (seed().beta_series(0, 10))


def test_lattice_singular_b():
    for b in (Monomial(1), Q(-1), Q(-3)):
        with pytest.raises(SingularB):
            lattice_step(seed_pair_A(), b)


def test_chain_requires_small_lambda():
    p = constructed_pair(2, lambda n: [Term(Monomial(1, n, binom2(n + 1)))])
    with pytest.raises(ErrorTermRequired):
        chain_step(p, INF, INF)


@pytest.mark.parametrize("seed", [seed_pair_A, seed_pair_B])
@pytest.mark.parametrize("x,y", [(INF, INF), (INF, NEG_Q), (INF, Q(1))])
def test_lemma_balances(seed, x, y):
    lhs, rhs = lemma_eval_bilateral(seed(), x, y, 30)
    assert lhs == rhs


def test_error_term_vanishes_for_small_lambda():
    for p in (seed_pair_A(), lattice_step(seed_pair_A(), Monomial(0))):
        assert error_term_R(p, INF, INF, 20).is_zero()
        assert error_term_R(p, INF, NEG_Q, 20).is_zero()


def test_error_term_required_for_lambda_two():
    p = constructed_pair(2, lambda n: [Term(Monomial(1, n, binom2(n + 1)))])
    lhs, rhs = lemma_eval_bilateral(p, INF, INF, 25)
    assert lhs == rhs
    lhs, rhs = lemma_eval_bilateral(p, INF, INF, 25, include_error=False)
    assert lhs != rhs


@pytest.mark.parametrize("seed", [seed_pair_A, seed_pair_B])
@pytest.mark.parametrize("b", [Monomial(0), Q(1), Monomial(1)])
def test_asym_lemma(seed, b):
    lhs, rhs = asym_lemma_eval(seed(), INF, INF, b, 30)
    assert lhs == rhs


@pytest.mark.parametrize("variant", ["H1", "H2"])
def test_aw_transforms(variant):
    lhs, rhs = aw_transform_eval(seed_pair_A(2), variant, 30)
    assert lhs == rhs
    with pytest.raises(BaseMismatch):
        aw_transform_eval(seed_pair_A(), variant, 10)
