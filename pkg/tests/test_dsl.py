import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbailey.corpus import compare_sides, register_all
from qbailey.dsl import BinOp, Inv, Neg, Num, Poch, Pow, QBin, Sum, Theta, Var, evaluate, parse, pretty
from qbailey.errors import DslError, UnboundIndex
from qbailey.rings import INTEGERS, LAURENT, RingTag
from qbailey.series import QSeries

THM31 = "sum(n=0..auto; q^(n*(n+1)) * inv(poch(q;1)_(2*n+1)) * poch(-q*z;1)_n * poch(-q/z;1)_n)"

# id -> (side, expression); each is compared with the corpus' own builder
TRANSCRIPTIONS = {
    "rr-classic-i0": [
        ("lhs", "sum(n=0..auto; q^(n^2+n)/poch(q)_n)"),
        ("rhs", "inv(poch(q^2;5)_inf*poch(q^3;5)_inf)"),
    ],
    "rr-classic-i1": [("lhs", "sum(n=0..auto; q^(n^2)/poch(q)_n)")],
    "ag-k3-i1": [("lhs", "sum(n1>=n2>=0; q^(n1^2+n2^2+n1+n2)/(poch(q)_(n1-n2)*poch(q)_n2))")],
    "seedA-inf-inf": [
        ("lhs", THM31),
        ("rhs", "poch(-q^3/z;3)_inf*poch(-z*q^3;3)_inf*poch(q^3;3)_inf/poch(q)_inf"),
    ],
    "falsetheta-310": [
        ("lhs", "sum(n=0..auto; (-1)^n*q^(n*(n+1)/2)*poch(-q)_n/poch(q;2)_(n+1))"),
        ("rhs", "sum(n=0..auto; (-1)^n*q^(n*(n+1)))"),
    ],
    "finite-jtp-a-n3": [
        ("lhs", "poch(-1/z)_4*poch(-z*q)_3"),
        ("rhs", "sum(j=-4..3; qbin(7, 3-j)*q^(j*(j+1)/2)*z^j)"),
    ],
    "hecke1-m1": [("rhs", "sum(n=0..auto; (n+1)*q^(n*(n+2)))")],
    "hecke2-z": [("rhs", "sum(n=0..auto; sum(j=-(n//2)-1..n//2; z^j*q^(n*(n+3)/2-j*(j+1))))")],
    "seedB-rr-m1": [
        ("lhs", "sum(n=0..auto; poch(-1)_n^2*q^(n*(n+1)/2)/(poch(q)_n*poch(q;2)_n))"),
        ("rhs", "poch(-q)_inf^2*poch(-q;2)_inf^2"),
    ],
    "multisum-inf-k2-m2": [
        ("lhs", "sum(n1>=n2>=0; q^(n1*(n1+1)+n2*(n2+1))*poch(q)_n2/(poch(q)_(n1-n2)*poch(q^(n2+1))_(n2+1)))"),
        ("rhs", "poch(q^5;5)_inf^3/poch(q)_inf"),
    ],
    "appell-series": [
        ("lhs", "sum(n=0..auto; poch(-q^2;2)_n*q^(n^2)/(1+q^(2*n+1))/poch(q)_(2*n+1))"),
        ("rhs", "poch(-q;2)_inf/poch(q^2;2)_inf*sum(n=-inf..inf; q^(n*(2*n+1))/(1-q^(4*n+2)))"),
    ],
    "seedB-theta-m4": [
        ("lhs", "sum(n=0..auto; poch(-1;2)_n*q^(n*(n+1))/poch(q)_(2*n))"),
        ("rhs", "inv(poch(q)_inf)*(theta(-q^5,-q^7) - q*theta(-q,-q^11))"),
    ],
}


@pytest.mark.parametrize("ident_id", sorted(TRANSCRIPTIONS))
def test_transcriptions_match_corpus(ident_id):
    ident = register_all().get(ident_id)
    N = min(ident.order, 30)
    native = {"lhs": ident.lhs(N), "rhs": ident.rhs(N)}
    for side, text in TRANSCRIPTIONS[ident_id]:
        got = evaluate(parse(text), ident.ring, N)
        assert got == native[side].truncate(N), (ident_id, side)


def test_transcription_count():
    assert len(TRANSCRIPTIONS) >= 10


def test_examples():
    assert evaluate(parse("poch(q;1)_inf"), INTEGERS, 5).to_dict() == {0: 1, 1: -1, 2: -1, 5: 1}
    assert evaluate("qbin(4,2)", INTEGERS, 10).to_list() == [1, 1, 2, 1, 1, 0, 0, 0, 0, 0, 0]
    assert parse("qbin(4,2)") == QBin(Num(4), Num(2))
    tree = parse(THM31)
    assert isinstance(tree, Sum) and tree.indices == ("n",) and tree.hi is None


def test_auto_requires_quadratic_growth():
    with pytest.raises(DslError, match="upper bound"):
        parse("sum(n=0..auto; q^n)")
    with pytest.raises(DslError, match="upper bound"):
        parse("sum(n=0..auto; inv(q^(n^2)))")


def test_unbound_index():
    with pytest.raises(UnboundIndex):
        parse("q^n")
    with pytest.raises(UnboundIndex):
        parse("sum(n=0..m; q^n)")


def test_z_unavailable_over_integers():
    with pytest.raises(DslError):
        evaluate(parse("z"), INTEGERS, 5)
    assert evaluate(parse("z"), LAURENT, 5) == QSeries.monomial(LAURENT, LAURENT.monomial(1, 1), 0, 5)


def test_syntax_errors_have_positions():
    with pytest.raises(DslError) as info:
        parse("poch(q;1)_n +\n  * 2")
    assert (info.value.line, info.value.column) == (2, 3)
    with pytest.raises(DslError) as info:
        parse("qbin(1 2)")
    assert info.value.column == 8


def test_non_integral_exponent():
    with pytest.raises(DslError, match="not an integer"):
        evaluate("sum(n=0..3; q^(n/2))", INTEGERS, 10)
    assert evaluate("sum(n=0..3; q^(n*(n+3)/2))", INTEGERS, 10).to_dict() == {0: 1, 2: 1, 5: 1, 9: 1}


def test_floor_division_rounds_down():
    assert evaluate("q^((-3)//2)", INTEGERS, 3).to_dict() == {-2: 1}


def test_precedence():
    assert parse("-q^2") == Neg(Pow(Var("q"), Num(2)))
    assert parse("1 - q * z") == BinOp("-", Num(1), BinOp("*", Var("q"), Var("z")))
    assert parse("a - b - c".replace("a", "1").replace("b", "q").replace("c", "z")) == BinOp(
        "-", BinOp("-", Num(1), Var("q")), Var("z")
    )


def test_cyclotomic_evaluation():
    ring = RingTag.parse("cyclo3")
    assert evaluate("(1-z)*(1-z^2)", ring, 5).to_dict() == {0: ring.from_int(3)}
    assert evaluate("1+z+z^2", ring, 5).is_zero()


# pretty-printer round trip ---------------------------------------------------

leaves = st.one_of(st.builds(Num, st.integers(0, 30)), st.sampled_from([Var("q"), Var("z")]))
exponents = st.one_of(st.builds(Num, st.integers(0, 5)), st.builds(lambda k: Neg(Num(k)), st.integers(1, 5)))


def extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/"]), children, children),
        st.builds(Pow, children, exponents),
        st.builds(Poch, children, st.integers(1, 3), st.one_of(st.none(), st.builds(Num, st.integers(0, 5)))),
        st.builds(QBin, st.builds(Num, st.integers(0, 6)), st.builds(Num, st.integers(0, 6))),
        st.builds(Inv, children),
        st.builds(Theta, children, children),
        st.builds(
            lambda body, hi: Sum(("n",), Num(0), Num(hi), BinOp("*", body, Pow(Var("q"), Var("n")))),
            children,
            st.integers(0, 4),
        ),
    )


trees = st.recursive(leaves, extend, max_leaves=12)


@given(trees)
def test_pretty_round_trip(tree):
    assert parse(pretty(tree)) == tree


@given(st.text(alphabet="qz0123456789+-*/^();,_=. npochinfsumautobt\n", max_size=40))
def test_parse_total(text):
    try:
        parse(text)
    except DslError:
        pass
