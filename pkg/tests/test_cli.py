import json
import math
import subprocess
import sys

import pytest

from varregion import documents
from varregion.cli import FIGURE_PARAMS, main, parse_complex


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_complex():
    assert parse_complex("0.0737292,0.466706") == complex(0.0737292, 0.466706)
    assert parse_complex("-1") == -1
    with pytest.raises(Exception):
        parse_complex("1,2,3")


def test_boundary_csv(capsys):
    code, out, _ = run(capsys, "boundary", "--class", "P", "--gamma", "0", "--beta", "0",
                       "--lambda", "0,0", "--z0", "0.5,0", "--samples", "8",
                       "--method", "closed", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "theta,re,im" and len(lines) == 9
    row = [r for r in lines[1:] if float(r.split(",")[0]) == 0.0][0].split(",")
    assert float(row[1]) == pytest.approx(-0.5 + math.log(3), abs=1e-10)
    assert float(row[2]) == pytest.approx(0.0, abs=1e-15)


def test_boundary_degenerate_documents(capsys):
    code, out, _ = run(capsys, "boundary", "--z0", "0,0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["meta"]["kind"] == "point" and data["point"] == {"re": 0, "im": 0}
    code, out, _ = run(capsys, "boundary", "--lambda", "1,0", "--z0", "0.5,0", "--format", "json")
    assert json.loads(out)["point"]["re"] == pytest.approx(0.8862943611, abs=1e-10)


@pytest.mark.parametrize("cls", ["P", "R", "G"])
def test_boundary_both(capsys, cls):
    code, out, _ = run(capsys, "boundary", "--class", cls, "--beta", "0.3", "--lambda", "0.2,0.5",
                       "--z0", "-0.4,0.3", "--samples", "32", "--method", "both", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["max_deviation"] < 1e-9
    assert len(data["samples"]) == len(data["quadrature_samples"]) == 32
    assert data["meta"]["method"] == "both" and data["meta"]["samples"] == 32


def test_boundary_svg(capsys, tmp_path):
    path = tmp_path / "curve.svg"
    code, _, _ = run(capsys, "boundary", "--samples", "64", "--format", "svg", "--out", str(path))
    assert code == 0
    assert path.read_text().startswith("<svg")


def test_metadata(capsys):
    code, out, _ = run(capsys, "boundary", "--class", "G", "--alpha", "2,1", "--samples", "16",
                       "--format", "json")
    meta = json.loads(out)["meta"]
    assert meta["params"]["alpha"] == [2, 1]
    assert meta["version"] == "0.1.0" and meta["method"] == "closed" and meta["samples"] == 16


@pytest.mark.parametrize("argv", [
    ["boundary", "--class", "R", "--gamma", "0.2"],
    ["boundary", "--alpha", "1,0"],
    ["boundary", "--beta", "1.5"],
    ["boundary", "--z0", "1,0"],
    ["boundary", "--samples", "2"],
    ["boundary", "--lambda", "1,0", "--format", "svg"],
    ["growth"],
    ["verify", "--trials", "-1"],
    ["verify", "--trials", "0"],
])
def test_validation_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert len(err.strip().splitlines()) == 1


def test_unparseable_flag_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["boundary", "--lambda", "x,y"])
    assert exc.value.code == 2


def test_nonconvergence_exit_code(capsys, monkeypatch):
    import varregion.numerics as numerics
    monkeypatch.setattr(numerics, "_gk15", lambda f, a, b, lo, hi: (0j, 1.0))
    code, _, err = run(capsys, "boundary", "--method", "quadrature", "--samples", "3", "--threads", "1")
    assert code == 3 and "converge" in err


def test_tolerance_env(capsys, monkeypatch):
    monkeypatch.setenv("VARREGION_TOL", "1e-20")
    code, _, _ = run(capsys, "point", "--kind", "interior", "--lambda", "0.5,0")
    assert code == 2
    monkeypatch.setenv("VARREGION_TOL", "1e-10")
    code, out, _ = run(capsys, "point", "--kind", "interior", "--lambda", "0.5,0", "--z0", "0.5,0")
    assert code == 0
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(-0.5 + 4 * math.log(4 / 3))


def test_point_growth_diskbound(capsys):
    code, out, _ = run(capsys, "point", "--kind", "degenerate", "--lambda", "1,0", "--beta", "0.5")
    assert code == 0 and float(out.splitlines()[1].split(",")[1]) == pytest.approx(math.log(2))
    code, out, _ = run(capsys, "growth", "--z", "0.5,0")
    assert out.splitlines()[1].split(",") == ["1.1333333333333333", "0", "0.53333333333333333"]
    code, out, _ = run(capsys, "diskbound", "--z0", "0.5,0", "--format", "json")
    data = json.loads(out)
    assert data["radius"] == pytest.approx(math.atanh(0.5) - math.atan(0.5), abs=1e-13)


def test_table1(capsys, tmp_path):
    code, _, _ = run(capsys, "table1", "--out", str(tmp_path), "--format", "json", "--samples", "720")
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == sorted(f"row{i}_{c}.json" for i in range(1, 6) for c in "PG")
    doc = documents.from_json((tmp_path / "row4_P.json").read_text())
    z0, lam, beta, gamma = FIGURE_PARAMS[3]
    assert doc.meta["params"]["gamma"] == gamma and doc.meta["params"]["beta"] == beta
    assert doc.meta["dual_route_deviation"] <= 1e-9
    assert len(doc.payload["samples"]) == 720
    assert documents.from_json((tmp_path / "row4_G.json").read_text()).meta["params"]["gamma"] == 0


def test_verify_subset_json(capsys, monkeypatch):
    code, out, _ = run(capsys, "verify", "--seed", "7", "--trials", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["meta"]["seed"] == 7 and data["meta"]["all_passed"] is True


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "varregion", "growth", "--z", "0.5,0"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("re,im,radius\n")
