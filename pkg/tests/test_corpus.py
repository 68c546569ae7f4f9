import dataclasses

import pytest

from qbailey.corpus import Identity, Registry, compare_sides, register_all, verify_all, verify_identity
from qbailey.errors import DuplicateIdentity, UnknownIdentity
from qbailey.rings import INTEGERS
from qbailey.series import QSeries


def test_registry_size_and_ids():
    reg = register_all()
    assert len(reg) >= 45
    for ident_id in ("rr-classic-i0", "rr-classic-i1", "ag-even-k3-i2", "falsetheta-310", "hecke2-m3"):
        assert ident_id in reg


def test_every_family_instantiated_for_k_up_to_three():
    reg = register_all()
    for k in (1, 2, 3):
        for stem in ("multisum-inf", "multisum-negq", "multisum-signrule"):
            assert f"{stem}-k{k}" in reg
        assert reg.get(f"multisum-inf-k{k}").order == (30 if k == 3 else 50)


def test_duplicate_id_rejected():
    reg = Registry()
    ident = register_all().get("rr-classic-i0")
    reg.add(ident)
    with pytest.raises(DuplicateIdentity):
        reg.add(ident)


def test_unknown_id():
    with pytest.raises(UnknownIdentity):
        verify_identity("no-such-id")


def test_falsetheta_small_window():
    ident = register_all().get("falsetheta-310")
    lhs, rhs = compare_sides(ident, 4)
    assert lhs.to_list() == rhs.to_list() == [1, 0, -1, 0, 0]
    assert verify_identity("falsetheta-310", 4).passed


def test_rr_coefficient():
    ident = register_all().get("rr-classic-i1")
    lhs, rhs = compare_sides(ident, 4)
    assert lhs[4] == rhs[4] == 2


@pytest.mark.parametrize("e", [0, 7, 23])
def test_perturbed_identity_fails_at_perturbation(e):
    ident = register_all().get("rr-classic-i0")
    bad = dataclasses.replace(ident, rhs=lambda N: ident.rhs(N) + QSeries.monomial(INTEGERS, 1, e, N))
    rep = verify_identity(bad, 30)
    assert rep.status == "fail"
    exponent, lhs, rhs = rep.mismatch
    assert exponent == e and rhs == lhs + 1


def test_clear_factor_applied_to_lhs():
    ident = register_all().get("seedB-inf-inf")
    assert ident.clear is not None
    unclear = dataclasses.replace(ident, clear=None)
    assert verify_identity(ident, 20).passed
    assert not verify_identity(unclear, 20).passed


def test_filters():
    assert verify_all(filter="no-such-thing") == []
    multis = register_all().select("group=multisum")
    assert multis and all(i.group == "multisum" for i in multis)
    k2 = register_all().select("group=multisum,k=2")
    assert k2 and all(i.params["k"] == 2 for i in k2)
    assert [i.id for i in register_all().select("rr-classic-*")] == ["rr-classic-i0", "rr-classic-i1"]


def test_multisum_group_at_order_30():
    reports = verify_all(30, "group=multisum", jobs=1)
    assert reports and all(r.passed for r in reports)


def test_reports_sorted_and_deterministic():
    a = verify_all(20, "group=seedB", jobs=1)
    b = verify_all(20, "group=seedB", jobs=2)
    assert [r.id for r in a] == sorted(r.id for r in a)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_report_json_shape():
    rep = verify_identity("rr-classic-i0", 10)
    assert rep.to_json() == {"id": "rr-classic-i0", "order": 10, "status": "pass", "millis": 0}
    assert verify_identity("rr-classic-i0", 10, timing=True).millis >= 0


@pytest.mark.parametrize("ident", register_all(), ids=lambda i: i.id)
def test_identity_holds_at_small_order(ident):
    assert verify_identity(ident.id, 15).passed
