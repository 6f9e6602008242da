import csv
import json

import pytest

from dsd.cli import BENCH_COLUMNS, main
from dsd.generators import fixture_f_edges

K4 = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.txt"
    p.write_text(K4)
    return p


@pytest.fixture
def f_file(tmp_path):
    p = tmp_path / "fixture.txt"
    p.write_text("".join(f"{u} {v}\n" for u, v in fixture_f_edges()))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_stats(tmp_path, capsys):
    p = tmp_path / "tiny.txt"
    p.write_text("0 1\n1 0\n1 2\n")
    code, out, _ = run(capsys, "stats", "--input", p)
    s = json.loads(out)
    assert code == 0
    assert (s["num_vertices"], s["num_edges"], s["raw_line_count"]) == (3, 2, 3)
    assert s["dataset"] == "tiny"


def test_missing_file(tmp_path, capsys):
    code, out, err = run(capsys, "stats", "--input", tmp_path / "nope.txt")
    assert code == 2 and out == "" and "nope.txt" in err


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("0 1\n1 two\n")
    code, _, err = run(capsys, "peel", "--input", p)
    assert code == 2 and ":2:" in err


def test_peel_k4(k4_file, capsys):
    code, out, _ = run(capsys, "peel", "--input", k4_file, "--epsilon", "0.5", "--threads", "2")
    r = json.loads(out)
    assert code == 0
    assert r["density"] == 1.5 and r["passes"] == 1 and r["epsilon"] == 0.5
    assert list(r) == ["dataset", "algorithm", "epsilon", "workers", "density", "density_num",
                       "density_den", "vertices", "edges", "passes", "eligible", "legit",
                       "max_density_core", "ms"]


def test_negative_epsilon(k4_file, capsys):
    code, _, err = run(capsys, "peel", "--input", k4_file, "--epsilon", "-0.1")
    assert code == 3 and "epsilon" in err


def test_bad_threads(k4_file, capsys):
    code, _, _ = run(capsys, "cbds", "--input", k4_file, "--threads", "0")
    assert code == 3


def test_cbds_fixture(f_file, capsys):
    code, out, _ = run(capsys, "cbds", "--input", f_file, "--members")
    r = json.loads(out)
    assert code == 0
    assert (r["density_num"], r["density_den"]) == (18, 7)
    assert (r["eligible"], r["legit"], r["max_density_core"]) == (41, 1, 4)
    assert r["members"] == [0, 1, 2, 3, 4, 5, 6]


def test_exact_methods(k4_file, f_file, capsys):
    code, out, _ = run(capsys, "exact", "--input", k4_file, "--method", "bruteforce")
    assert code == 0 and json.loads(out)["rational"] == "3/2"
    code, out, _ = run(capsys, "exact", "--input", f_file)
    assert code == 0 and json.loads(out)["rational"] == "18/7"
    code, _, err = run(capsys, "exact", "--input", f_file, "--method", "bruteforce")
    assert code == 3 and "16" in err


def test_csv_format(k4_file, capsys):
    code, out, _ = run(capsys, "cbds", "--input", k4_file, "--format", "csv")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and len(rows) == 1
    assert tuple(rows[0]) == BENCH_COLUMNS
    assert rows[0]["density"] == "1.5"


def test_repeat_runs_identical(f_file, capsys):
    outs = []
    for _ in range(3):
        _, out, _ = run(capsys, "peel", "--input", f_file, "--members", "--epsilon", "0.05")
        r = json.loads(out)
        r.pop("ms")
        outs.append(r)
    assert outs[0] == outs[1] == outs[2]


def test_bench(k4_file, f_file, tmp_path, capsys):
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run(capsys, "bench", "--input", k4_file, f_file, "--algorithms", "peel", "cbds",
                     "exact", "--threads", "1", "2", "--epsilon", "0", "0.5", "--csv", out_csv)
    assert code == 0
    with open(out_csv) as fh:
        reader = csv.DictReader(fh)
        assert tuple(reader.fieldnames) == BENCH_COLUMNS
        rows = list(reader)
    # per dataset: peel x 2 eps x 2 workers, cbds x 2, exact x 2
    assert len(rows) == 2 * (4 + 2 + 2)
    k4_peel = [r for r in rows if r["dataset"] == "k4" and r["algorithm"] == "peel"]
    assert {r["density"] for r in k4_peel} == {"1.5"}
    assert {r["workers"] for r in k4_peel} == {"1", "2"}
    assert all(r["error"] == "" for r in rows)


def test_bench_records_bad_input(k4_file, tmp_path, capsys):
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run(capsys, "bench", "--input", tmp_path / "missing.txt", k4_file, "--csv", out_csv)
    assert code == 0
    with open(out_csv) as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["dataset"] == "missing" and rows[0]["error"]
    assert len(rows) == 3


def test_bench_without_inputs(tmp_path, capsys):
    code, _, _ = run(capsys, "bench", "--csv", tmp_path / "x.csv")
    assert code == 2


def test_console_script(k4_file):
    import shutil
    import subprocess

    exe = shutil.which("dsd")
    if exe is None:
        pytest.skip("console script not installed")
    proc = subprocess.run([exe, "peel", "--input", str(k4_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["density"] == 1.5
