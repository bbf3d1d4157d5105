import csv
import io
import json
import math
import subprocess
import sys

import pytest

from krein_spectra import cli, serialize
from krein_spectra import specfn as F
from krein_spectra.errors import BracketError


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_spectrum_csv(capsys):
    status, out, _ = run(capsys, "spectrum", "--model", "interval", "--nu", "0.25", "--theta", "1",
                         "--count", "20", "--format", "csv")
    assert status == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 20
    assert list(rows[0]) == ["n", "lambda", "bracket_lo", "bracket_hi", "residual"]
    assert float(rows[0]["lambda"]) == pytest.approx(5.3696833557887399731, rel=1e-12)
    for row in rows:
        assert float(row["bracket_lo"]) <= float(row["lambda"]) <= float(row["bracket_hi"])


def test_signed_spectrum_has_sign_column(capsys):
    status, out, _ = run(capsys, "spectrum", "--model", "ab", "--kappa", "0.25", "--beta", "1",
                         "--count", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert status == 0 and len(rows) == 6
    assert {row["sign"] for row in rows} == {"1", "-1"}


def test_poles_json(capsys):
    status, out, _ = run(capsys, "poles", "--model", "oscillator", "--nu", "0.3", "--theta", "1",
                         "--smin", "-3", "--format", "json")
    assert status == 0
    doc = serialize.loads(out)
    assert doc["kind"] == "poles"
    assert set(doc["rows"][0]) == {"s", "residue", "multiplicity", "source"}
    residues = {float(r["s"]): float(r["residue"]) for r in doc["rows"]}
    assert residues[-0.3] == pytest.approx(4 ** 0.3 / math.gamma(-0.3) ** 2, rel=1e-13)


def test_sample_rows(capsys):
    status, out, _ = run(capsys, "heat", "--model", "oscillator", "--nu", "0.3", "--theta", "0",
                         "--t", "0.5,1", "--format", "json")
    rows = json.loads(out)["rows"]
    assert status == 0 and len(rows) == 2
    assert set(rows[0]) == {"argument", "value", "bound", "terms"}
    expected = math.exp(-1.4) / -math.expm1(-4.0)
    assert float(rows[1]["value"]) == pytest.approx(expected, rel=1e-10)


def test_complex_arguments_are_split(capsys):
    status, out, _ = run(capsys, "resolvent", "--model", "dirac", "--nu", "0.25", "--beta", "inf",
                         "--z", "5", "--imag")
    header = out.splitlines()[0].split(",")
    assert status == 0
    assert header[:2] == ["argument", "argument_imag"]


def test_empty_stream_gives_header_only(capsys):
    status, out, _ = run(capsys, "spectrum", "--model", "interval", "--nu", "0.3", "--theta", "inf",
                         "--cutoff", "1")
    assert status == 0
    assert out == "n,lambda,bracket_lo,bracket_hi,residual\n"


def test_json_round_trip_is_byte_identical(capsys):
    _, out, _ = run(capsys, "zeta", "--model", "ab", "--kappa", "0.25", "--beta", "-1",
                    "--s", "2.5,3.5", "--format", "json")
    assert serialize.dumps(serialize.loads(out)) == out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "graded.csv"
    status, out, _ = run(capsys, "graded", "--alpha", "0.25", "--gamma", "0", "--t", "0.5",
                         "--output", str(path))
    assert status == 0 and out == ""
    rows = list(csv.DictReader(path.open()))
    assert float(rows[0]["value"]) == pytest.approx(1.0, abs=1e-8)


def test_thread_count_does_not_change_output(capsys):
    args = ("spectrum", "--model", "dirac", "--nu", "0.35", "--beta", "2", "--count", "500")
    _, one, _ = run(capsys, *args, "--threads", "1")
    _, four, _ = run(capsys, *args, "--threads", "4")
    assert one == four


@pytest.mark.parametrize("argv, needle", [
    (["spectrum", "--model", "interval", "--nu", "1.5", "--theta", "1"], "nu must lie"),
    (["spectrum", "--model", "interval", "--theta", "1"], "--nu"),
    (["zeta", "--model", "oscillator", "--nu", "0.3", "--theta", "0", "--s", "0.5"], "converges"),
    (["resolvent", "--model", "interval", "--nu", "0.5", "--theta", "0",
      "--z", "2.4674011002723395"], "eigenvalue"),
    (["verify", "--suite", "x"], "suite"),
])
def test_parameter_errors_exit_2(capsys, argv, needle):
    status, out, err = run(capsys, *argv)
    assert status == 2
    assert out == ""
    assert needle in err


def test_numerical_errors_exit_3_with_json(capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise BracketError("no sign change", [(1.0, 2.0), (3.0, 4.0)])

    monkeypatch.setattr(F, "heat_trace", fail)
    status, _, err = run(capsys, "heat", "--model", "oscillator", "--nu", "0.3", "--theta", "0",
                         "--t", "1")
    assert status == 3
    record = json.loads(err)
    assert record["error"] == "BracketError" and record["command"] == "heat"


def test_verify_reports_one_line_per_criterion(capsys):
    status, out, _ = run(capsys, "verify", "--suite", "3,4")
    lines = out.splitlines()
    assert status == 0
    assert [line.split(":")[0] for line in lines] == ["criterion 3", "criterion 4"]
    assert all(": PASS" in line for line in lines)


def test_verify_fails_when_a_criterion_fails(capsys):
    status, out, _ = run(capsys, "verify", "--suite", "5")
    assert status == 1
    assert out.startswith("criterion 5: FAIL")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "krein_spectra", "poles", "--model", "ab",
                           "--kappa", "0.25", "--beta", "0", "--smin", "-4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["s,residue,multiplicity,source", "2.0,0.5,1,regular"]
