"""Command line interface: exit codes, report schemas, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from pseudocp.cli import main
from pseudocp.linalg import Signature, metric_signs


def run_cli(*argv):
    return main(list(argv))


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


GEODESIC_DOC = {
    "signature": {"n": 3, "p": 1},
    "kind": "closed_form",
    "data": {
        "family": "geodesic",
        "point": [[0, 0], [0, 0], [0, 0], [1, 0]],
        "velocity": [[0, 0], [0, 0], [1, 0], [0, 0]],
    },
}

CASE_C1_DOC = {
    "signature": {"n": 3, "p": 1},
    "kind": "closed_form",
    "data": {
        "family": "case_c1",
        "p0": [[0, 0], [1, 0], [0, 0], [0, 0]],
        "v0": [[0, 0], [0, 0], [1, 0], [0, 0]],
        "f2": [[1, 0], [0, 0], [0, 0], [1, 0]],
    },
}

CIRCLE_DOC = {
    "signature": {"n": 3, "p": 1},
    "kind": "closed_form",
    "data": {"family": "circle", "model": "rp2", "kappa1": 1.25},
}


class TestUsageErrors:
    def test_unknown_verify_target(self, capsys):
        assert run_cli("verify", "9") == 2

    def test_unknown_sample_id(self, capsys):
        assert run_cli("sample", "7") == 2

    def test_bad_grid_spec(self, capsys):
        assert run_cli("sample", "1", "--grid", "5x5") == 2

    def test_missing_subcommand(self, capsys):
        assert run_cli() == 2


class TestClassify:
    def test_geodesic_file(self, tmp_path, capsys):
        path = write_json(tmp_path / "geo.json", GEODESIC_DOC)
        assert run_cli("classify", path) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema"] == 1
        assert doc["case"] == "a"

    def test_case_c1_file(self, tmp_path, capsys):
        path = write_json(tmp_path / "c1.json", CASE_C1_DOC)
        assert run_cli("classify", path) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["case"] == "c"
        assert doc["kind"] == "b3_1"

    def test_circle_file(self, tmp_path, capsys):
        path = write_json(tmp_path / "circ.json", CIRCLE_DOC)
        assert run_cli("classify", path) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["case"] == "b"
        assert doc["kappa1"] == pytest.approx(1.25, abs=1e-6)
        assert doc["signs"] == {"eps1": 1.0, "eps2": 1.0}

    def test_builtin_flow_file(self, tmp_path, capsys):
        doc = {
            "signature": {"n": 3, "p": 1},
            "kind": "closed_form",
            "data": {"family": "builtin_flow", "example": 1, "seed_r": 0.7853981634},
        }
        path = write_json(tmp_path / "flow.json", doc)
        assert run_cli("classify", path) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["case"] == "c"

    def test_parse_failure(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run_cli("classify", str(bad)) == 2

    def test_missing_field(self, tmp_path, capsys):
        path = write_json(tmp_path / "missing.json", {"kind": "closed_form"})
        assert run_cli("classify", path) == 2

    def test_lightlike_velocity_rejected(self, tmp_path, capsys):
        doc = {
            "signature": {"n": 3, "p": 1},
            "kind": "closed_form",
            "data": {
                "family": "geodesic",
                "point": [[0, 0], [0, 0], [0, 0], [1, 0]],
                "velocity": [[1, 0], [0, 0], [1, 0], [0, 0]],
            },
        }
        path = write_json(tmp_path / "null.json", doc)
        assert run_cli("classify", path) == 3

    def test_sampled_lifts_input(self, tmp_path, capsys):
        from pseudocp.examples import example_integral_curve, example_spec

        curve = example_integral_curve(example_spec(1)).curve
        rows = [
            [[float(np.real(x)), float(np.imag(x))] for x in lift]
            for lift in curve.lifts[::1]
        ]
        doc = {
            "signature": {"n": 3, "p": 1},
            "kind": "samples",
            "data": {"s": [float(s) for s in curve.params], "lifts": rows},
        }
        path = write_json(tmp_path / "samples.json", doc)
        assert run_cli("classify", path) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["case"] == "b"

    def test_unclassifiable_curve_reports_failure(self, tmp_path, capsys):
        """A two-curvature helix matches no minimal case: exit code one."""
        a, p = 0.3, 1.0
        b = np.sqrt(1 - a * a)
        q = np.sqrt((1 + a * a * p * p) / (b * b))
        s_grid = np.arange(-0.5, 0.5 + 1e-12, 1e-3)
        rows = []
        for s in s_grid:
            lift = [a * np.sinh(p * s), a * np.cosh(p * s), b * np.cos(q * s), b * np.sin(q * s)]
            rows.append([[float(x), 0.0] for x in lift])
        doc = {
            "signature": {"n": 3, "p": 1},
            "kind": "samples",
            "data": {"s": [float(s) for s in s_grid], "lifts": rows},
        }
        path = write_json(tmp_path / "helix.json", doc)
        assert run_cli("classify", path) == 1


class TestSample:
    def test_row_count_and_header(self, tmp_path):
        out = tmp_path / "cloud.csv"
        assert run_cli("sample", "1", "--grid", "3x3x2", "--format", "csv", "--out", str(out)) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("s,t,c1,c2,c3,c4,re_z1,im_z1")
        assert len(lines) == 1 + 3 * 3 * 2

    def test_rows_on_sphere(self, tmp_path):
        """Re-read the file and confirm every row is a unit sphere point."""
        out = tmp_path / "cloud.csv"
        assert run_cli("sample", "1", "--grid", "2x3x2", "--format", "csv", "--out", str(out)) == 0
        sig = Signature(3, 1)
        signs = metric_signs(sig.p, sig.ambient_dim)
        lines = out.read_text().strip().split("\n")[1:]
        for line in lines:
            vals = [float(x) for x in line.split(",")]
            z = np.array(vals[6::2]) + 1j * np.array(vals[7::2])
            g = float(np.real(np.sum(signs * z * np.conj(z))))
            assert abs(g - 1.0) < 1e-9

    def test_deterministic_output(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for target in (a, b):
            assert run_cli(
                "sample", "1", "--grid", "2x2x2", "--format", "csv", "--out", str(target)
            ) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_format(self, tmp_path):
        out = tmp_path / "cloud.json"
        assert run_cli("sample", "2", "--grid", "2x2x2", "--out", str(out)) == 0
        doc = json.loads(out.read_text())
        assert doc["schema"] == 1
        assert len(doc["rows"]) == 8
        assert len(doc["header"]) == 2 + 6 + 2 * 5

    def test_io_failure(self, tmp_path, capsys):
        missing = tmp_path / "no" / "such" / "dir" / "x.csv"
        assert run_cli("sample", "1", "--grid", "2x2x2", "--out", str(missing)) == 4


class TestConfig:
    def test_env_config_is_picked_up(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"grid_s": 2, "grid_t": 2, "grid_leaf": 2, "fmt": "csv"}))
        monkeypatch.setenv("PSEUDOCP_CONFIG", str(cfg))
        out = tmp_path / "cloud.csv"
        assert run_cli("sample", "1", "--out", str(out)) == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 1 + 2 * 2 * 2

    def test_invalid_config_rejected(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"grid_s": 1}))
        monkeypatch.setenv("PSEUDOCP_CONFIG", str(cfg))
        assert run_cli("sample", "1") == 2


class TestVerify:
    def test_single_example_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = run_cli("verify", "3", "--grid", "2x2x2", "--out", str(out))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["schema"] == 1
        assert doc["pass"] is True
        assert doc["classifications"]["3"] == "case_b"
        assert len(doc["identities"]) >= 18
        assert all(item["pass"] for item in doc["identities"])

    def test_seed_parameter_switches_the_case(self, tmp_path, capsys):
        """The unit-modulus seed turns family one into the non-Frenet case."""
        out = tmp_path / "report.json"
        code = run_cli(
            "verify", "1", "--seed-r", "0.7853981634", "--grid", "2x2x2",
            "--out", str(out),
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["classifications"]["1"] == "case_c"

    def test_verify_all_line_count(self, tmp_path):
        """The full run reports well over forty identity lines and passes."""
        out = tmp_path / "all.json"
        assert run_cli("verify", "all", "--out", str(out)) == 0
        doc = json.loads(out.read_text())
        assert doc["pass"] is True
        assert len(doc["identities"]) >= 40
        assert set(doc["classifications"]) == {"1", "2", "3", "4"}

    def test_console_script_entry(self):
        """The installed entry point answers with the usage exit code."""
        proc = subprocess.run(
            [sys.executable, "-m", "pseudocp", "verify", "9"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
