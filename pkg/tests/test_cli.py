import csv
import io
import json

import pytest

from semiprime.cli import CSV_HEADER, geometric_grid, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (("compute", "upsilon", "10"), "2.302585092994"),
        (("compute", "psi", "4"), "0.693147180560"),
        (("compute", "semiprime-count", "100"), "34"),
        (("compute", "pi", "100"), "25"),
        (("compute", "theta", "10"), "5.347107530717"),
        (("compute", "psi", "10"), "5.886104031450"),
        (("compute", "upsilon", "9"), "1.098612288668"),
        (("compute", "upsilon", "7"), "0.000000000000"),
    ],
)
def test_compute(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


@pytest.mark.parametrize(
    "argv", [("compute", "psi", "3"), ("compute", "upsilon", "2.5"), ("compute", "psi", "abc")]
)
def test_compute_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_geometric_grid():
    g = geometric_grid(1e4, 1e8, 10**0.5)
    assert len(g) == 9 and g[0] == 1e4 and g[-1] == 1e8 and g[2] == 1e5


def test_table_csv_row(capsys):
    code, out, _ = run(capsys, "table", "--grid", "10", "--limit", "10", "--statistic", "psi")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 2
    x, stat, actual, main_t, *_ = rows[1]
    assert stat == "psi"
    assert float(actual) == pytest.approx(5.886104, abs=1e-6)
    assert float(main_t) == pytest.approx(8.340324, abs=1e-6)


def test_table_all_statistics_and_json(capsys, tmp_path):
    base = ["table", "--limit", "1e5", "--grid-start", "1e3", "--segment-size", "20000"]
    code, csv_out, _ = run(capsys, *base)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    assert {r["statistic"] for r in rows} == {
        "psi", "sum_logn", "sum_log2n", "sum_recip", "sum_logn_over_n", "sum_upsilon_over_n"
    }
    keys = [(float(r["x"]), r["statistic"]) for r in rows]
    assert keys == sorted(keys)

    path = tmp_path / "t.json"
    assert main(base + ["--format", "json", "--out", str(path)]) == 0
    objs = json.loads(path.read_text())
    assert len(objs) == len(rows)
    for o, r in zip(objs, rows):
        for k in CSV_HEADER:
            if k == "statistic":
                assert o[k] == r[k]
            else:
                assert o[k] == float(r[k])


def test_table_crlf_free(tmp_path):
    path = tmp_path / "t.csv"
    assert main(["table", "--grid", "10,100", "--limit", "100", "--out", str(path)]) == 0
    assert b"\r" not in path.read_bytes()


def test_workers_env_fallback(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["table", "--limit", "3e5", "--grid-start", "1e3", "--segment-size", "50000"]
    assert main(argv + ["--out", str(a)]) == 0
    monkeypatch.setenv("SEMIPRIME_WORKERS", "2")
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_default_passes(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--out", str(report))
    assert code == 0, out
    data = json.loads(report.read_text())
    assert data["passed"] is True
    assert data["relations"]["failed"] == 0


def test_verify_zero_tolerance_fails(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--tolerance", "0", "--out", str(tmp_path / "r.json"))
    assert code == 1
    assert "failing" in out


def test_verify_rejects_small_grid(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--grid", "3,10", "--limit", "100", "--out", str(tmp_path / "r.json"))
    assert code == 2
    assert not (tmp_path / "r.json").exists()


@pytest.mark.parametrize("limit", ["10", "1e4"])
def test_oracle_passes(capsys, limit):
    code, out, _ = run(capsys, "oracle", "--limit", limit)
    assert code == 0
    if limit == "10":
        assert "max relative deviation 0.000e+00" in out


def test_oracle_scale_guard(capsys):
    code, _, err = run(capsys, "oracle", "--limit", "1e7")
    assert code == 2 and "oracle limit" in err
