import json

import pytest

from starnet.cli import main

ZERO = """\
n = 3
[source 1]
state = maximally_mixed
[source 2]
state = maximally_mixed
[source 3]
state = maximally_mixed
"""

OPT = """\
n = 2
[source 1]
state = horodecki
p = 0.2
theta = 0.4585
[source 2]
state = werner
v = 0.9
[optimizer]
restarts = 3
seed = 11
"""


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _cfg(tmp_path, text, name="s.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_certify_verdicts(capsys):
    code, out, _ = _run(capsys, "certify", "--state", "werner v=0.5", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["chsh_local"] and not rec["hidden_nonlocal"]
    rec = json.loads(_run(capsys, "certify", "--state", "horodecki p=0.2169 theta=0.4585", "--format", "json")[1])
    assert rec["chsh_local"] and rec["hidden_nonlocal"]
    rec = json.loads(_run(capsys, "certify", "--state", "singlet", "--format", "json")[1])
    assert not rec["chsh_local"] and rec["chsh_value"] == pytest.approx(2)


def test_certify_bd_slocc(capsys):
    rec = json.loads(_run(capsys, "certify", "--state", "bell_diagonal w1=0.4 w2=0.3 w3=0.2", "--format", "json")[1])
    assert rec["bd_local_up_to_slocc"]


def test_bound_zero(tmp_path, capsys):
    code, out, _ = _run(capsys, "bound", "--config", _cfg(tmp_path, ZERO), "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["B"] == 0 and rec["B_seq"] == 0 and rec["success"] == 1


def test_exit_codes(tmp_path, capsys):
    code, _, err = _run(capsys, "bound", "--config", _cfg(tmp_path, ZERO + "bogus = 1\n"))
    assert code == 2 and "line 8" in err
    assert _run(capsys, "bound", "--config", str(tmp_path / "missing.cfg"))[0] == 2
    assert _run(capsys, "reproduce", "nosuch")[0] == 2
    joint = OPT + "[central]\nfilter = fns2\nalpha3 = 1\nalpha4 = 1\nqubits = 1 2\n"
    code, _, err = _run(capsys, "bound", "--config", _cfg(tmp_path, joint))
    assert code == 3 and "optimize" in err
    zero = ZERO + "[edge 1]\nfilter = matrix\nentries = 0 0 0 0\n"
    assert _run(capsys, "bound", "--config", _cfg(tmp_path, zero))[0] == 3
    assert _run(capsys, "reproduce", "all-filter")[0] == 4


def test_reproduce_pass(capsys):
    code, out, _ = _run(capsys, "reproduce", "edges-only", "local-pair")
    assert code == 0 and out.count("PASS") == 6


def test_csv_and_out(tmp_path, capsys):
    out_path = tmp_path / "o.csv"
    code, out, _ = _run(capsys, "evaluate", "--config", _cfg(tmp_path, OPT), "--format", "csv", "--out", str(out_path))
    assert code == 0 and out == ""
    header, row = out_path.read_text().splitlines()
    assert header.startswith("n,S,S_raw,success")
    assert row.startswith("2,")


def test_evaluate_settings(tmp_path, capsys):
    path = _cfg(tmp_path, OPT)
    code, _, err = _run(capsys, "evaluate", "--config", path, "--settings", "1 2 3")
    assert code == 2 and "12 numbers" in err
    z = "1 0 0 0 0 1 " * 2
    rec = json.loads(_run(capsys, "evaluate", "--config", path, "--settings", z, "--format", "json")[1])
    assert rec["m1_1"] == [0, 0, 1]


def test_optimize_deterministic(tmp_path, capsys):
    path = _cfg(tmp_path, OPT)
    first = _run(capsys, "optimize", "--config", path, "--workers", "1")[1]
    second = _run(capsys, "optimize", "--config", path, "--workers", "3")[1]
    assert first == second
    assert "restart" in first


def test_scan_requires_blocks(tmp_path, capsys):
    code, _, err = _run(capsys, "scan", "--config", _cfg(tmp_path, OPT))
    assert code == 2 and "scan" in err
