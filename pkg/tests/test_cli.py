import json

import pytest

from s3degree.cli import run


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_degrees_tstar(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "tstar", "--emit", "json"])
    d = json.loads(cap.out)
    assert code == 0 and d["modulus"] == 24 and d["residues"] == [0, 1, 16]


def test_degrees_zp2(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "zp", "--p", "2", "--emit", "json"])
    d = json.loads(cap.out)
    assert code == 0 and d["modulus"] == 2 and d["residues"] == [0, 1]


def test_degrees_istar(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "istar", "--emit", "json"])
    d = json.loads(cap.out)
    assert d["modulus"] == 120 and d["residues"] == [0, 1, 49]


def test_table_and_csv(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "ostar"])
    assert code == 0 and "{0, 1, 25}" in cap.out
    code, cap = out_of(capsys, ["degrees", "--family", "ostar", "--emit", "csv"])
    assert cap.out.splitlines()[0] == "residue,provenance"


def test_conflict_exit_code(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "dstar", "--n", "2", "--emit", "json"])
    d = json.loads(cap.out)
    assert code == 1 and any(f["kind"] == "conflict" for f in d["findings"])
    code, _ = out_of(capsys, ["degrees", "--family", "dstar", "--n", "2", "--allow-findings"])
    assert code == 0


def test_usage_errors(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "dprime", "--nprime", "4", "--q", "2"])
    assert code == 2 and "error" in cap.err
    code, _ = out_of(capsys, ["degrees"])
    assert code == 2
    code, _ = out_of(capsys, ["oracle", "--map", "NoSuchMap"])
    assert code == 2
    with pytest.raises(SystemExit):
        run(["frobnicate"])


def test_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("S3DEGREE_ORDER_CAP", "100")
    code, cap = out_of(capsys, ["census", "--family", "istar"])
    assert code == 3
    code, _ = out_of(capsys, ["census", "--family", "istar", "--cap", "200"])
    assert code == 0


def test_census_json(capsys):
    code, cap = out_of(capsys, ["census", "--family", "zp", "--p", "6", "--emit", "json"])
    d = json.loads(cap.out)
    assert d["count"] == 6
    assert d["counts"] == {"Trivial (automorphisms)": 2, "Full (trivial map)": 1, "Z_2": 2, "Z_3": 1}


def test_verify_kernels(capsys):
    code, cap = out_of(capsys, ["verify-kernels", "--family", "ostar", "--emit", "json"])
    d = json.loads(cap.out)
    assert d["kernel_check"] and d["observed"] == ["T*_24"]


def test_dump_group(capsys):
    code, cap = out_of(capsys, ["dump-group", "--family", "dstar", "--n", "3", "--emit", "json"])
    d = json.loads(cap.out)
    assert d["order"] == 12


def test_product_and_lens_flags(capsys):
    code, cap = out_of(capsys, ["degrees", "--family", "product", "--m", "5", "--inner", "dstar", "--n", "2",
                                "--emit", "json", "--allow-findings"])
    assert json.loads(cap.out)["modulus"] == 40
    code, cap = out_of(capsys, ["degrees", "--family", "zp", "--p", "7", "--q", "3", "--emit", "json"])
    assert json.loads(cap.out)["residues"] == [0, 1, 2, 4]


def test_determinism_and_output_file(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    for f in (f1, f2):
        run(["audit", "--family", "tprime", "--q", "2", "--emit", "json", "-o", str(f)])
    assert f1.read_text() == f2.read_text()
    assert json.loads(f1.read_text())["modulus"] == 72


def test_sweep_restricted(capsys):
    code, cap = out_of(capsys, ["sweep", "--family", "zp", "--grid", "p=2..9", "--emit", "json"])
    d = json.loads(cap.out)
    assert code == 0 and len(d["rows"]) == 8 and all(r["agree"] for r in d["rows"])


def test_oracle_small(capsys):
    code, cap = out_of(capsys, ["oracle", "--map", "CaseI:k=2", "--samples", "500", "--targets", "1",
                                "--starts", "1000", "--emit", "json"])
    d = json.loads(cap.out)
    assert code == 0 and d["maps"][0]["degree"] == 4
    assert d["maps"][0]["equivariance"]["passed"]
