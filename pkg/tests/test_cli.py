import csv
import json
import math

import pytest

from catenary import CatenaryState, catalog_surface, trace_catenary
from catenary.cli import emit_trace, run


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    return header, rows


def test_trace_command_writes_expected_csv(tmp_path):
    out = tmp_path / "trace.csv"
    code = run(["trace", "--surface", "sphere", "--alpha", "1", "--u0", "0.5",
                "--v0", "0", "--phi0", "1.2", "--smax", "20", "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["s", "u", "v", "phi", "kappa", "residual", "clairaut_c"]
    assert rows[0][:4] == [0.0, 0.5, 0.0, 1.2]
    assert len(rows) > 10


def test_unknown_surface_exits_2(tmp_path, capsys):
    code = run(["trace", "--surface", "torus", "--u0", "1", "--phi0", "1",
                "--smax", "1", "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "unknown surface kind" in capsys.readouterr().err


def test_bad_tolerance_exits_2(tmp_path):
    code = run(["trace", "--surface", "sphere", "--u0", "0.5", "--phi0", "1",
                "--smax", "1", "--tol", "1e-2", "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_csv_roundtrip_is_bit_exact(tmp_path):
    spec = catalog_surface("sphere")
    trace = trace_catenary(spec, 1.0, CatenaryState(0.7, 0.0, 1.0), s_max=3.0)
    out = tmp_path / "trace.csv"
    emit_trace(trace, "csv", str(out))
    _, rows = read_csv(out)
    assert len(rows) == len(trace.samples)
    for row, smp in zip(rows, trace.samples):
        assert row[0] == smp.s
        assert row[1] == smp.u
        assert row[2] == smp.v
        assert row[3] == smp.phi
        assert row[4] == smp.kappa
        assert row[5] == smp.residual


def test_identical_invocations_are_byte_identical(tmp_path):
    args = ["trace", "--surface", "catenoid", "--u0", "1", "--phi0", "0.8",
            "--smax", "5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_embed_columns_satisfy_sphere_identity(tmp_path):
    out = tmp_path / "emb.csv"
    code = run(["trace", "--surface", "sphere", "--u0", "0.7", "--phi0", "1.0",
                "--smax", "3", "--out", str(out), "--embed"])
    assert code == 0
    header, rows = read_csv(out)
    assert header[-3:] == ["x", "y", "z"]
    for row in rows:
        x, y, z = row[-3:]
        assert abs(x * x + y * y + z * z - 1.0) < 1e-9


def test_catenoid_json_reports_blow_up(tmp_path):
    out = tmp_path / "cat.json"
    code = run(["trace", "--surface", "catenoid", "--u0", "1", "--phi0",
                str(math.pi / 4), "--smax", "3e6", "--out", str(out),
                "--format", "json"])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["termination"] == "blow_up"
    assert doc["columns"][:6] == ["s", "u", "v", "phi", "kappa", "residual"]
    v_final = doc["samples"][-1][2]
    assert 0.3 < v_final < 0.5


def test_trace_graph_command(tmp_path):
    out = tmp_path / "graph.csv"
    code = run(["trace-graph", "--surface", "plane", "--u0", "1", "--du0", "0",
                "--v1", "1.0", "--out", str(out)])
    assert code == 0
    _, rows = read_csv(out)
    assert rows[-1][2] == pytest.approx(1.0, abs=1e-12)
    assert rows[-1][1] == pytest.approx(math.cosh(1.0), abs=1e-7)


def test_quadrature_command(capsys):
    code = run(["quadrature", "--surface", "cylinder", "--c", "1",
                "--u0", "1", "--u1", "2"])
    assert code == 0
    value = float(capsys.readouterr().out.strip())
    assert value == pytest.approx(math.acosh(2.0), abs=1e-9)


def test_quadrature_command_improper(capsys):
    code = run(["quadrature", "--surface", "catenoid", "--c", "0.5",
                "--u0", "1", "--u1", "inf"])
    assert code == 0
    value = float(capsys.readouterr().out.strip())
    assert value == pytest.approx(0.17705472353033189, abs=1e-8)


def test_clairaut_command(capsys):
    code = run(["clairaut", "--surface", "sphere", "--c", "0.5"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["critical_parallels"]) == 1
    assert doc["critical_parallels"][0]["u"] == pytest.approx(0.8603335890193798,
                                                              abs=1e-10)
    assert doc["critical_parallels"][0]["classification"] == "stable"
    assert len(doc["turning_points"]) == 2


def test_stability_command(capsys):
    code = run(["stability", "--surface", "sphere", "--ustar",
                "0.8603335890193798"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["parallels"][0]["classification"] == "stable"
    assert doc["parallels"][0]["lambda"] > 0.0


def test_stability_command_rejects_noncritical(capsys):
    code = run(["stability", "--surface", "sphere", "--ustar", "0.5"])
    assert code == 2


def test_profile_csv_input(tmp_path, capsys):
    profile = tmp_path / "prof.csv"
    lines = ["u,a"]
    for i in range(150):
        u = 0.05 + i * (1.45 / 149)
        lines.append(f"{u!r},{math.cos(u)!r}")
    profile.write_text("\n".join(lines) + "\n")
    code = run(["clairaut", "--profile", str(profile)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["critical_parallels"]) == 1
    assert doc["critical_parallels"][0]["u"] == pytest.approx(0.86033, abs=1e-3)


def test_validate_requires_all_flag(capsys):
    assert run(["validate"]) == 2


def test_log_env_var_enables_diagnostics(tmp_path):
    import subprocess
    import sys

    out = tmp_path / "t.csv"
    args = [sys.executable, "-m", "catenary.cli", "trace", "--surface", "sphere",
            "--u0", "0.7", "--phi0", "1.0", "--smax", "1", "--out", str(out)]
    quiet = subprocess.run(args, capture_output=True, text=True,
                           env={"PATH": "/usr/bin:/bin", "CATENARY_LOG": "error"})
    chatty = subprocess.run(args, capture_output=True, text=True,
                            env={"PATH": "/usr/bin:/bin", "CATENARY_LOG": "info"})
    assert quiet.returncode == 0 and chatty.returncode == 0
    assert "trace:" not in quiet.stderr
    assert "trace:" in chatty.stderr


def test_catalog_command(capsys):
    assert run(["catalog"]) == 0
    out = capsys.readouterr().out
    for kind in ("sphere", "grusin", "catenoid"):
        assert kind in out


def test_catalog_json(capsys):
    assert run(["catalog", "--json"]) == 0
    entries = json.loads(capsys.readouterr().out)
    kinds = {e["kind"] for e in entries}
    assert {"plane", "sphere", "grusin"} <= kinds


def test_single_sample_trace_emits_one_row(tmp_path):
    spec = catalog_surface("sphere")
    trace = trace_catenary(spec, 1.0, CatenaryState(0.7, 0.0, 1.0), s_max=3.0)
    trace.samples = trace.samples[:1]
    out = tmp_path / "one.csv"
    emit_trace(trace, "csv", str(out))
    header, rows = read_csv(out)
    assert header == ["s", "u", "v", "phi", "kappa", "residual", "clairaut_c"]
    assert len(rows) == 1


def test_empty_trace_emission_rejected(tmp_path):
    spec = catalog_surface("sphere")
    trace = trace_catenary(spec, 1.0, CatenaryState(0.7, 0.0, 1.0), s_max=1.0)
    trace.samples = []
    from catenary import ConfigError
    with pytest.raises(ConfigError):
        emit_trace(trace, "csv", str(tmp_path / "e.csv"))
