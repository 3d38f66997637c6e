import json
import math
import xml.etree.ElementTree as ET

import pytest

from distlab.cli import main
from distlab.config import RunConfig, _parse_float, merge, read_config_file, torus_res_u
from distlab.report import CSV_HEADER, dumps, read_csv, write_csv
from distlab.surfaces import read_off


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_float_expressions():
    assert _parse_float("1/(6*pi)") == pytest.approx(1 / (6 * math.pi))
    assert _parse_float("1/sqrt(10)") == pytest.approx(10**-0.5)
    assert _parse_float("0.25") == 0.25
    for bad in ("__import__('os')", "x+1", "1/"):
        with pytest.raises(ValueError):
            _parse_float(bad)


def test_flags_override_file(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("r = 0.3  # comment\nk = 5\naxes = 3,1,1\nbudget = 0\n")
    cfg = merge(read_config_file(cfg_file), {"r": 0.2, "k": None})
    assert cfg.r == 0.2 and cfg.k == 5 and cfg.axes == (3.0, 1.0, 1.0) and cfg.budget == 0


def test_config_file_errors(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("r 0.3\n")
    with pytest.raises(ValueError):
        read_config_file(f)


def test_resolution_defaults():
    assert RunConfig(surface="cone", r=0.169).resolved_res() % 8 == 0
    assert RunConfig(surface="cone", r=0.9).resolved_res() >= 24
    assert torus_res_u(0.1, 16) == 160
    assert RunConfig(surface="sphere").resolved_res() == 3


def test_gen_cone(tmp_path, capsys):
    out = tmp_path / "c.off"
    code, text, _ = run(capsys, "gen", "cone", "--r", "0.169", "--res", "128", "--out", str(out))
    assert code == 0
    info = json.loads(text)
    assert info["euler_characteristic"] == 2
    assert read_off(out).n_vertices == info["vertex_count"]


def test_gen_torus_logs_chi(tmp_path, capsys, caplog):
    caplog.set_level("INFO")
    code, text, _ = run(capsys, "gen", "torus", "--eps", "0.2", "--out", str(tmp_path), "-v")
    assert code == 0 and json.loads(text)["euler_characteristic"] == 0
    assert (tmp_path / "torus.off").exists()


@pytest.mark.parametrize(
    "argv,needle",
    [
        (("gen", "simplex", "--n", "3"), "n = 2 only"),
        (("gen", "cone", "--r", "1.2"), "(0, 1)"),
        (("estimate", "sphere", "--out", "/nonexistent/dir/x.json"), "does not exist"),
        (("gen", "torus", "--eps", "0.2", "--res", "4"), ">= 8"),
    ],
)
def test_errors_are_reported(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("distlab: error:") and needle in err


def test_estimate_json_is_byte_reproducible(tmp_path, capsys):
    args = ("estimate", "cone", "--r", "0.3", "--res", "24", "--k", "2", "--budget", "1")
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rec = json.loads(a.read_text())
    assert rec["schema"] == 1 and rec["surface"] == "cone"
    assert abs(rec["value"] / rec["analytic"] - 1) < 0.05
    assert rec["lower_bounds"][0]["passed"]


def test_root_command(capsys):
    code, text, _ = run(capsys, "root")
    d = json.loads(text)
    assert code == 0
    assert d["r0"] == pytest.approx(0.1699075149934689, abs=1e-9)
    assert d["threshold"] == pytest.approx((math.pi**2 - 8) / math.pi**2)


def test_simplex_command(capsys):
    d = json.loads(run(capsys, "simplex")[1])
    assert d["crossover_n"] == 5
    assert len(d["rows"]) == 10
    assert d["rows"][0]["distortion"] == 2.0


def test_eccentricity_command(capsys):
    d = json.loads(run(capsys, "eccentricity", "ellipsoid", "--axes", "5,1,1", "--res", "4")[1])
    assert d["ratio"] == pytest.approx(5.0, rel=0.02)


def test_lipschitz_command(capsys):
    code, text, _ = run(capsys, "lipschitz", "--r", "0.01", "--samples", "20000")
    assert code == 0 and json.loads(text)["checks"][0]["passed"]


def test_sweep_simplex_outputs(tmp_path, capsys):
    code, text, _ = run(capsys, "sweep", "simplex", "--out", str(tmp_path))
    assert code == 0
    rows = read_csv(tmp_path / "sweep_simplex.csv")
    assert len(rows) == 10 and rows[0][2] == 2.0
    root = ET.parse(tmp_path / "sweep_simplex.svg").getroot()
    assert root.tag.endswith("svg")


def test_sweep_missing_directory(capsys):
    code, _, err = run(capsys, "sweep", "simplex", "--out", "/nonexistent/dir")
    assert code == 2 and "does not exist" in err


def test_csv_roundtrip(tmp_path):
    p = write_csv([(0.1, 1.5, 1.6, None)], tmp_path / "x.csv")
    assert p.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert read_csv(p) == [(0.1, 1.5, 1.6, None)]


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": 2}) == dumps({"a": 2, "b": 1})
    assert json.loads(dumps({"a": 1}))["schema"] == 1
