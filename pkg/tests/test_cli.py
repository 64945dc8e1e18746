from __future__ import annotations

import json
import subprocess
import sys

import pytest

from mocktheta.cli import main


def _rows(text):
    return [tuple(map(int, line.split(","))) for line in text.splitlines() if not line.startswith("#")]


def test_coeffs_cesaro(capsys):
    assert main(["coeffs", "--series", "cesaro", "--count", "4"]) == 0
    assert _rows(capsys.readouterr().out) == [(0, 1), (1, 3), (2, -7), (3, 14)]


def test_coeffs_omega(capsys):
    main(["coeffs", "--series", "omega", "--count", "6"])
    assert [c for _, c in _rows(capsys.readouterr().out)] == [1, 2, 3, 4, 6, 8]
    main(["coeffs", "--series", "omega", "--count", "6", "--mod", "5"])
    assert [c for _, c in _rows(capsys.readouterr().out)] == [1, 2, 3, 4, 1, 3]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["coeffs", "--series", "cesaro", "--count", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    assert main(["verify", "--claim", "cesaro-3", "--p", "3"]) == 2
    assert main(["verify", "--series", "cesaro", "--p", "4", "--A", "3", "--B", "1"]) == 2
    assert main(["verify", "--series", "cesaro", "--p", "3", "--A", "3"]) == 2
    assert main(["verify", "--claim", "cesaro-3", "--bound", "huge"]) == 2
    assert main(["coeffs", "--series", "f", "--count", "3", "--mod", "-2"]) == 2


def test_sturm_command(capsys):
    assert main(["sturm", "--weight", "37/2", "--index", "9216"]) == 0
    assert capsys.readouterr().out.strip() == "7104"
    main(["sturm", "--weight", "97/2", "--sieve", "56"])
    assert capsys.readouterr().out.strip() == "260736"
    main(["sturm", "--weight", "289/2", "--gamma0", "86400"])
    assert capsys.readouterr().out.strip() == "1248480"


def test_verify_cesaro3(tmp_path, capsys):
    out = tmp_path / "cert.json"
    fig = tmp_path / "res.png"
    lfig = tmp_path / "ledger.png"
    code = main(["verify", "--claim", "cesaro-3", "--out", str(out), "--figure", str(fig),
                 "--ledger-figure", str(lfig)])
    assert code == 0
    cert = json.loads(out.read_text())
    assert cert["sturmBound"] == 7104 and cert["pass"] is True
    assert fig.stat().st_size > 0 and lfig.stat().st_size > 0
    assert "pass\tTrue" in capsys.readouterr().out


def test_verify_false_claim(capsys):
    code = main(["verify", "--series", "cesaro", "--p", "3", "--A", "3", "--B", "0", "--json"])
    assert code == 1
    cert = json.loads(capsys.readouterr().out)
    assert cert["firstFailure"] == 0 and cert["pass"] is False


def test_verify_omega_max(capsys):
    assert main(["verify", "--claim", "omega-5", "--bound", "max"]) == 0
    out = capsys.readouterr().out
    assert "sturmBound\t1248480 (computed)" in out


def test_evidence_only_exit_code(capsys):
    assert main(["verify", "--series", "cesaro", "--p", "3", "--A", "6", "--B", "1,4", "--bound", "500"]) == 3


def test_roundtrip_csv(tmp_path, capsys):
    csv = tmp_path / "c.csv"
    assert main(["coeffs", "--series", "cesaro", "--count", "889", "--mod", "3", "--out", str(csv)]) == 0
    direct = main(["verify", "--claim", "cesaro-3", "--bound", "published", "--json", "--no-timings"])
    a = json.loads(capsys.readouterr().out)
    again = main(["verify", "--claim", "cesaro-3", "--bound", "published", "--coeffs-csv", str(csv),
                  "--json", "--no-timings"])
    b = json.loads(capsys.readouterr().out)
    assert direct == again == 0
    assert a == b
    bad = main(["verify", "--series", "cesaro", "--p", "3", "--A", "3", "--B", "0", "--bound", "published",
                "--coeffs-csv", str(csv), "--skip-ledger"])
    assert bad == 1


def test_cusps_command(tmp_path, capsys):
    js = tmp_path / "ledger.json"
    fig = tmp_path / "margins.svg"
    code = main(["cusps", "--family", "cesaro", "--m", "24", "--eta", "24:12,1:24", "--level", "1152",
                 "--group", "gamma1", "--json", str(js), "--figure", str(fig)])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("cusp\twidth")
    assert lines[-1].endswith("pass=True")
    payload = json.loads(js.read_text())
    assert len(payload["entries"]) == 2560
    assert fig.read_text().lstrip().startswith("<?xml")


def test_cusps_adversarial(capsys):
    code = main(["cusps", "--family", "cesaro", "--m", "24", "--level", "1152", "--group", "gamma1"])
    assert code == 3
    assert "pass=False" in capsys.readouterr().out


def test_scan_command(capsys):
    assert main(["scan", "--series", "cesaro", "--count", "10000", "--pmax", "7", "--amax", "8"]) == 0
    rows = {tuple(line.split("\t")[1:4]) for line in capsys.readouterr().out.splitlines()[1:]}
    assert {("3", "3", "1"), ("7", "7", "2"), ("7", "7", "3"), ("7", "7", "5")} <= rows


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mocktheta", "sturm", "--weight", "24", "--index", "1"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.strip() == "1"
