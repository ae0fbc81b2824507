import csv
import filecmp

import pytest

from cantorfull import cli


def run(argv):
    return cli.main(argv)


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_decimal_rational_rejected():
    with pytest.raises(SystemExit) as exc:
        run(["sofic-check", "--eps", "0.5"])
    assert exc.value.code == 2


def test_rational_parser():
    from fractions import Fraction

    assert cli.rational("3/4") == Fraction(3, 4)
    assert cli.rational("2") == 2
    with pytest.raises(Exception):
        cli.rational("1.5")


def test_entropy_artifacts(tmp_path):
    out = tmp_path / "a"
    code = run(["entropy", "--n", "2", "--out", str(out), "--json", "--no-figure"])
    assert code == 0
    rows = read_csv(out / "entropy.csv")
    assert rows[0][0] == "n"
    assert rows[2][1] == "174"  # exact count at n = 2
    assert (out / "entropy.json").exists()


def test_artifacts_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["entropy", "--n", "2", "--out", str(d), "--json", "--no-figure"]) == 0
    assert filecmp.cmp(a / "entropy.csv", b / "entropy.csv", shallow=False)
    assert filecmp.cmp(a / "entropy.json", b / "entropy.json", shallow=False)


def test_lef_command(tmp_path):
    out = tmp_path / "lef"
    assert run(["lef", "--ball", "1", "--max-n", "4", "--out", str(out), "--no-figure"]) == 0
    rows = read_csv(out / "lef.csv")
    assert len(rows) == 5


def test_folner_bound_command(tmp_path):
    out = tmp_path / "fb"
    assert run(["folner-bound", "--out", str(out), "--no-figure"]) == 0
    rows = read_csv(out / "folner-bound.csv")
    assert rows[1][3] == "480" and rows[1][4] == "960"


def test_folner_extract_command(tmp_path):
    out = tmp_path / "fe"
    assert run([
        "folner-extract", "--n", "5", "--eps", "1/2", "--out", str(out), "--no-figure"
    ]) == 0
    rows = read_csv(out / "folner-extract.csv")
    header, data = rows[0], rows[1]
    assert data[header.index("pass")] == "True"


def test_sofic_check_command(tmp_path):
    out = tmp_path / "sc"
    assert run(["sofic-check", "--n", "6", "--out", str(out), "--no-figure"]) == 0


def test_freewords_command(tmp_path):
    out = tmp_path / "fw"
    assert run([
        "freewords", "--max-len", "3", "--out", str(out), "--no-figure"
    ]) == 0
    rows = read_csv(out / "freewords.csv")
    assert len(rows) == 1 + 3 + 6 + 12  # header + reduced words up to length 3


def test_quasitile_failure_exit(tmp_path):
    out = tmp_path / "qt"
    code = run([
        "quasitile", "--side", "16", "--tile", "8", "--eps", "1/10",
        "--out", str(out), "--no-figure", "--json",
    ])
    assert code == 1
    assert (out / "quasitile.csv").exists()
