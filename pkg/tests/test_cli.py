import csv
import io
import json
from decimal import Decimal

import pytest

from hyperell import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bad_q_exits_2(capsys):
    code, _, err = run(["constants", "--q", "6"], capsys)
    assert code == 2
    assert "q must be a prime ≡ 1 mod 4" in err


@pytest.mark.parametrize("argv", [
    ["moment", "--g", "0"],
    ["moment", "--threads", "0"],
    ["moment", "--g", "9"],
    ["lvalue", "--D", "1,0,1"],
    ["verify", "bzw", "--point", "5^-3,5^-4"],
])
def test_config_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_constants_json(capsys):
    code, out, _ = run(["constants", "--q", "5", "--cutoff", "30"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"C1", "CprimeC_over_logq", "dproduct", "dlogsum", "zeta", "R_coeffs"}
    assert doc["C1"]["value"].startswith("0.82869423157735")


def test_lvalue(capsys):
    code, out, _ = run(["lvalue", "--q", "5", "--D", "1,1,0,1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["S"] == [1, 3, 5] and doc["fe"] and doc["rh"]
    assert doc["L_half"] == {"a": "2", "b": "3/5", "decimal": "3.34164078649987"}


def test_moment_csv_and_thread_invariance(capsys, monkeypatch):
    outs = []
    for threads in ("1", "3"):
        code, out, _ = run(["moment", "--q", "5", "--g", "1..2", "--threads", threads], capsys)
        assert code == 0
        outs.append(rows(out))
    a, b = outs
    assert [r["moment_a_num"] for r in a] == ["200", "7096"]
    for ra, rb in zip(a, b):
        ra.pop("wall_seconds"), rb.pop("wall_seconds")
        assert ra == rb


def test_thread_default_from_environment(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    ns = cli.build_parser().parse_args(["moment"])
    assert ns.threads == 3


def test_predict(capsys):
    code, out, _ = run(["predict", "--g", "3"], capsys)
    assert code == 0
    r = rows(out)[0]
    assert r["main"] == "229214.990806072"


def test_report_identity(capsys, tmp_path):
    target = tmp_path / "report.csv"
    code, _, _ = run(["report", "--q", "5", "--g", "1..2", "--out", str(target)], capsys)
    assert code == 0
    table = rows(target.read_text(encoding="utf-8"))
    assert list(table[0]) == ["g", "measured", "predicted_main", "predicted_secondary",
                              "residual", "residual_over_q^0.55g", "ratio"]
    for r in table:
        total = Decimal(r["predicted_main"]) + Decimal(r["predicted_secondary"]) + Decimal(r["residual"])
        assert total == Decimal(r["measured"])


def test_verify_poisson(capsys):
    code, out, _ = run(["verify", "poisson", "--q", "5", "--max-deg", "2"], capsys)
    assert code == 0
    table = rows(out)
    assert len(table) == 5 * 1 + 25 * 2
    assert list(table[0]) == ["f", "m", "lhs_a", "lhs_b", "rhs_a", "rhs_b", "equal"]
    assert all(r["equal"] == "True" for r in table)


@pytest.mark.parametrize("suite", ["gauss", "firstpoint"])
def test_verify_exact_suites(suite, capsys):
    code, out, _ = run(["verify", suite, "--max-deg", "2", "--g", "1"], capsys)
    assert code == 0 and rows(out)


@pytest.mark.parametrize("suite", ["fe", "rh"])
def test_verify_lfunction_suites(suite, capsys):
    code, out, _ = run(["verify", suite, "--g", "1"], capsys)
    assert code == 0 and len(rows(out)) == 100


def test_verify_bzw_in_domain(capsys):
    code, out, _ = run(["verify", "bzw", "--point", "5^-1.9,5^-2.2"], capsys)
    assert code == 0
    assert [r["trunc"] for r in rows(out)] == ["10", "12"]


def test_verify_failure_writes_manifest(capsys, tmp_path):
    target = tmp_path / "bzw.csv"
    code, _, err = run(["verify", "bzw", "--point", "5^-1.5,5^-0.75", "--out", str(target)], capsys)
    assert code == 1
    manifest = json.loads(target.with_suffix(".failures.json").read_text(encoding="utf-8"))
    assert manifest["suite"] == "bzw" and len(manifest["failures"]) == 2
    assert "failure" in err


def test_parse_helpers():
    assert cli.parse_g("1..3") == [1, 2, 3]
    assert cli.parse_g("2,4") == [2, 4]
    assert cli.parse_real("5^-2") == pytest.approx(0.04)
    assert cli.fmt(Decimal("1.23456789012345678")) == "1.23456789012346"
