import json

import pytest

from pfaffrig import cli
from pfaffrig import exclusion as ex
from pfaffrig.pfaffian import get_family, sample_member


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_degree(capsys):
    assert run(capsys, "degree", "deg12")[:2] == (0, "1/12\n")


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert out.count("\n") == 5
    assert "1/5(1,2,3): link" in out


def test_hilbert(capsys):
    code, out, _ = run(capsys, "hilbert", "deg12", "--terms", "8")
    assert out.split() == ["1", "1", "1", "2", "3", "5", "7", "9", "12"]


def test_basket(capsys):
    code, out, _ = run(capsys, "basket", "deg4", "--seed", "2")
    assert code == 0
    assert out.strip() == "3 x 1/2(1,1,1); 3 x 1/3(1,1,2); 1/4(1,1,3)"


def test_member_file_roundtrip(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    code, out1, _ = run(capsys, "pfaffians", "deg20", "--emit-member", str(a))
    assert code == 0
    code, out2, _ = run(capsys, "pfaffians", "--member", str(a), "--emit-member", str(b))
    assert out1 == out2
    assert a.read_text() == b.read_text()
    spec, M, p = cli.load_spec(str(a))
    assert spec is get_family("deg20") and p == 10007
    assert M == sample_member(spec, 1, 10007)


def test_member_file_errors():
    with pytest.raises(cli.SpecFileError, match="line 2"):
        cli.parse_spec_text("id: deg12\nweights: 1 2 3\n")
    with pytest.raises(cli.SpecFileError, match="line 1"):
        cli.parse_spec_text("just words\n")
    with pytest.raises(cli.SpecFileError, match="missing field"):
        cli.parse_spec_text("weights: 1 1 1 1 1 1 1\n")
    text = cli.member_to_text(get_family("deg12"), sample_member(get_family("deg12"), 1, 10007))
    lines = text.splitlines()
    bad = [l if not l.startswith("m12:") else "m12: x^2" for l in lines]
    with pytest.raises(cli.SpecFileError, match="degree"):
        cli.parse_spec_text("\n".join(bad))
    with pytest.raises(cli.SpecFileError, match="missing m45"):
        cli.parse_spec_text("\n".join(l for l in lines if not l.startswith("m45")))


def test_bad_prime(capsys):
    code, _, err = run(capsys, "degree", "deg4", "--prime", "10")
    assert code == 2 and "prime" in err


def test_env_prime_is_echoed(monkeypatch, capsys):
    monkeypatch.setenv(cli.PRIME_ENV, "10009")
    code, out, _ = run(capsys, "exclude", "deg42", "--centre", "1/2")
    doc = json.loads(out)
    assert doc["metadata"]["prime"] == 10009
    assert doc["metadata"]["prime_source"] == "env:PFAFFRIG_PRIME"
    assert doc["certificates"][0]["verdict"] == "excluded"


def test_exclude_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["exclude", "deg12", "--centre", "1/5(1,2,3)", "--out", str(a)]) == 0
    assert cli.main(["exclude", "deg12", "--centre", "5/(1,2,3)#1", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    (c,) = ex.certificates_from_json(a.read_text())
    assert c.verdict == ex.LINK


def test_gencond_pass_and_fail(capsys):
    code, out, _ = run(capsys, "gencond", "cd:deg42-5")
    assert code == 0 and json.loads(out)["result"] == "pass"
    code, out, _ = run(capsys, "gencond", "cd:deg42-5", "--zero-named")
    assert code == 1 and json.loads(out)["result"] == "fail"


def test_unknown_condition(capsys):
    assert run(capsys, "gencond", "cd:nope")[0] == 2


def test_verify_table(tmp_path, capsys):
    out_file = tmp_path / "certs.json"
    code, out, _ = run(capsys, "verify-table", "--out", str(out_file))
    assert code == 0
    assert out.count(": match") == 5
    certs = ex.certificates_from_json(out_file.read_text())
    assert len(certs) == 36
