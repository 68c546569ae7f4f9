import io
import json

import pytest

from qbailey.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_verify_json():
    code, text = call("verify", "--id", "falsetheta-310", "--order", "40", "--format", "json")
    assert code == 0
    assert json.loads(text) == {"id": "falsetheta-310", "order": 40, "status": "pass", "millis": 0}


def test_expand():
    code, text = call("expand", "--expr", "qbin(2,1)", "--order", "5")
    assert code == 0 and text == "0: 1\n1: 1\n"


def test_expand_laurent_text():
    code, text = call("expand", "--expr", "poch(z)_2", "--ring", "laurent", "--order", "2")
    assert code == 0 and text.splitlines()[0].startswith("0: ")


def test_unknown_id_exit_code(capsys):
    code, _ = call("verify", "--id", "no-such-id")
    assert code == 2
    assert "no-such-id" in capsys.readouterr().err


def test_bad_expression_exit_code(capsys):
    code, _ = call("expand", "--expr", "poch(q")
    assert code == 2
    assert "column" in capsys.readouterr().err


def test_bad_flags_exit_code():
    with pytest.raises(SystemExit) as info:
        run(["verify", "--order", "-3", "--id", "x"])
    assert info.value.code == 2


def test_list():
    code, text = call("list", "--filter", "group=hecke")
    assert code == 0 and "hecke1-z" in text and "rr-classic" not in text


def test_verify_all_json_schema():
    code, text = call("verify-all", "--filter", "group=finite", "--format", "json", "--jobs", "1")
    assert code == 0
    data = json.loads(text)
    assert [d["id"] for d in data] == sorted(d["id"] for d in data)
    for d in data:
        assert set(d) <= {"id", "order", "status", "firstMismatch", "millis"}
        assert d["status"] in ("pass", "fail", "error") and isinstance(d["order"], int)


def test_oracle_command():
    code, text = call("oracle", "--check", "rr-classic-i0", "--nmax", "20")
    assert code == 0 and text.startswith("PASS")
    code, _ = call("oracle", "--check", "falsetheta-310")
    assert code == 2
