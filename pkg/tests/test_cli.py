import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from altapprox.cli import main
from altapprox.files import (
    SampleTable,
    dumps_expansion,
    load_expansion,
    loads_expansion,
    sample_table_for,
    write_csv,
)
from altapprox.errors import SampleTableError
from altapprox.operators import omega_weak

from conftest import log1p


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    r = list(csv.reader(io.StringIO(text)))
    return r[0], np.array([[float(v) for v in row] for row in r[1:]])


def test_nodes(capsys):
    code, out, _ = run(["nodes", "--n", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,w"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "0.21132486540518713", "0.78867513459481287", "1"]
    assert [float(ln.split(",")[1]) for ln in lines[1:]] == pytest.approx([0, 0.5, 0.5, 0], abs=1e-15)


def test_fit_eval_ln(tmp_path, capsys):
    path = tmp_path / "ln.json"
    code, _, _ = run(["fit", "--expr", "ln(1+x)", "--n", "3", "--out", str(path)], capsys)
    assert code == 0
    code, out, _ = run(["eval", str(path), "--grid", "1:1:1", "--with-derivative"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == ["x", "value", "derivative"]
    ln2 = math.log(2)
    cubic = (342 - 492 * ln2) - (645 - 930 * ln2) + (1040 / 3 - 500 * ln2)
    assert data[0, 1] == pytest.approx(cubic, abs=1e-9)
    assert data[0, 1] == pytest.approx(0.691541, abs=1e-6)


def test_json_round_trip_is_byte_identical(tmp_path, capsys):
    for op in ("spectral", "weak", "projection", "w", "what"):
        path = tmp_path / f"{op}.json"
        assert main(["fit", "--expr", "sin(pi*x/2)", "--n", "6", "--operator", op, "--out", str(path)]) == 0
        text = path.read_text()
        e = load_expansion(path)
        assert dumps_expansion(e) == text
        g = np.linspace(0, 1, 11)
        again = loads_expansion(dumps_expansion(e))
        assert np.array_equal(again(g), e(g))
        doc = json.loads(text)
        assert list(doc) == ["schema_version", "n", "basis", "constant", "coeffs", "provenance", "generator"]


def test_expansion_file_validation():
    text = dumps_expansion(omega_weak(log1p(), 2))
    doc = json.loads(text)
    doc["schema_version"] = 99
    with pytest.raises(ValueError):
        loads_expansion(json.dumps(doc))
    del doc["coeffs"]
    with pytest.raises(ValueError):
        loads_expansion(json.dumps(doc))


def test_fit_csv(capsys):
    code, out, _ = run(["fit", "--expr", "x^2", "--n", "2", "--format", "csv", "--grid", "0:1:5"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == ["x", "value"]
    np.testing.assert_allclose(data[:, 1], data[:, 0] ** 2, atol=1e-12)


def test_auto_parity(capsys, tmp_path):
    path = tmp_path / "p.json"
    assert main(["fit", "--expr", "sin(pi*x)", "--n", "4", "--auto-parity", "--out", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["n"] == 5
    assert doc["generator"]["parity_rule"]["parity"] == "even"


def _samples(tmp_path, n, f):
    path = tmp_path / "s.csv"
    t = sample_table_for(f, n)
    with open(path, "w") as fh:
        write_csv(fh, ["x", "f"], [t.xs, t.fs])
    return path


@pytest.mark.parametrize("op", ["w", "what"])
def test_fit_samples_reproduces_polynomial(tmp_path, capsys, op):
    p = np.polynomial.Polynomial([0.3, -1.0, 2.0, 0.5, -0.25])
    path = _samples(tmp_path, 4, p)
    code, out, _ = run(["fit", "--samples", str(path), "--n", "4", "--operator", op,
                        "--format", "csv", "--grid", "0:1:101"], capsys)
    assert code == 0
    _, data = rows(out)
    assert np.max(np.abs(data[:, 1] - p(data[:, 0]))) < 1e-9


def test_samples_missing_abscissas(tmp_path, capsys):
    path = _samples(tmp_path, 3, np.sin)
    code, _, err = run(["fit", "--samples", str(path), "--n", "4", "--operator", "w"], capsys)
    assert code == 4
    assert "lacks" in err and "abscissa" in err


def test_sample_table_validation():
    with pytest.raises(SampleTableError):
        SampleTable([0.0, 0.5, 0.5, 1.0], [0, 1, 1, 0])
    with pytest.raises(SampleTableError):
        SampleTable([0.0, 0.7, 0.5, 1.0], [0, 1, 1, 0])
    with pytest.raises(SampleTableError):
        SampleTable.read(io.StringIO("t,f\n0,0\n"))
    with pytest.raises(SampleTableError):
        SampleTable.read(io.StringIO("x,f\n0,abc\n"))
    t = SampleTable.read(io.StringIO("x,f\n0,1\n0.5,2\n1,3\n"))
    assert t.missing(1) == []
    assert t.lookup(0.5 + 1e-13) == 2.0


def test_samples_rejected_for_spectral(tmp_path, capsys):
    path = _samples(tmp_path, 3, np.sin)
    code, _, err = run(["fit", "--samples", str(path), "--n", "3", "--operator", "spectral"], capsys)
    assert code == 2


def test_usage_errors(capsys):
    assert run(["fit", "--n", "3"], capsys)[0] == 2
    assert run(["fit", "--expr", "tan(x)", "--n", "3"], capsys)[0] == 2
    assert run(["fit", "--expr", "x", "--n", "0"], capsys)[0] == 2
    assert run(["nodes"], capsys)[0] == 2
    assert run(["basis", "--n", "3", "--grid", "0:1"], capsys)[0] == 2
    assert run(["eval", "/nonexistent/file.json"], capsys)[0] == 2
    assert run(["extrapolate"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["fit", "--operator", "bogus"])
    assert exc.value.code == 2


def test_numeric_failure_exit_code(capsys):
    # an interior singularity the graded panels do not resolve
    code, _, err = run(["fit", "--expr", "1/sqrt(abs(x-0.5))", "--n", "3", "--operator", "projection"], capsys)
    assert code == 3
    assert "quadrature" in err and "last estimates" in err


def test_extrapolate(capsys):
    code, out, _ = run(["extrapolate", "--expr", "sin(pi*x/2)", "--n", "9"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == ["x", "f", "omega_hat", "omega"]
    assert data.shape == (401, 4)
    assert data[0, 0] == -1.5 and data[-1, 0] == 2.5


def test_extrapolate_from_file(tmp_path, capsys):
    path = tmp_path / "e.json"
    assert main(["fit", "--expr", "sin(pi*x/2)", "--n", "9", "--out", str(path)]) == 0
    capsys.readouterr()
    code, out, _ = run(["extrapolate", str(path), "--grid=-1.5:2.5:9"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == ["x", "f", "value"]
    assert len(data) == 9


def test_wavelet(capsys):
    code, out, _ = run(["wavelet", "--n", "7"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == ["x", "Lambda_7_2", "Lambda_7_4", "Lambda_7_6"]
    assert data.shape == (201, 4)
    np.testing.assert_allclose(data[::-1, 1:], -data[:, 1:], atol=1e-10)


@pytest.mark.parametrize("system,ncols", [("A", 4), ("B", 4), ("S", 4), ("Lambda", 2)])
def test_basis(capsys, system, ncols):
    code, out, _ = run(["basis", "--system", system, "--n", "3", "--grid", "0:1:11"], capsys)
    assert code == 0
    header, data = rows(out)
    assert len(header) == ncols + 1
    if system == "A":
        np.testing.assert_allclose(data[-1, 1:], [-1, 1, -1, 1], atol=1e-14)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "altapprox", "nodes", "--n", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[2] == "0.5,1"
