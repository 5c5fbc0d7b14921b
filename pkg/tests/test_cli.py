"""Command-line surface: exit codes, JSON documents, artifacts, manifests,
and byte-level determinism."""

import hashlib
import json

import pytest

from quaddyn.cli import main


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_landing_pair_document(tmp_path, capsys):
    code, out, _ = _run(
        capsys, ["landing-pair", "--pq", "3/5", "--out", str(tmp_path), "--json"]
    )
    assert code == 0
    assert json.loads(out) == {"alpha_minus": "21/31", "alpha_plus": "22/31"}
    manifest = json.loads((tmp_path / "landing-pair-manifest.json").read_text())
    assert manifest["command"] == "landing-pair"
    assert manifest["parameters"]["pq"] == "3/5"


def test_default_output_is_a_summary_line(tmp_path, capsys):
    code, out, _ = _run(capsys, ["landing-pair", "--pq", "1/2", "--out", str(tmp_path)])
    assert code == 0
    assert out.startswith("landing-pair: wrote")


def test_invariant_violation_exits_4(tmp_path, capsys):
    code, _, err = _run(capsys, ["landing-pair", "--pq", "4/2", "--out", str(tmp_path)])
    assert code == 4
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "InvariantError"


def test_usage_errors_exit_2(tmp_path, capsys):
    assert _run(capsys, ["no-such-verb"])[0] == 2
    assert _run(capsys, [])[0] == 2
    assert _run(capsys, ["orbit", "--pq", "seven"])[0] == 2


def test_precision_failure_exits_3(tmp_path, capsys):
    code, _, err = _run(
        capsys,
        ["radius", "--cf", "1:rep=1", "--order", "200", "--prec", "8", "--out", str(tmp_path)],
    )
    assert code == 3
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "PrecisionError"


def test_angle_external_form(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        ["angle", "--cf", "1,1,1:rep=1", "--prec", "16", "--out", str(tmp_path), "--json"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["bound"] == "2^-15"
    assert doc["iterates"][:3] == ["1/3", "5/7", "21/31"]
    assert doc["approx"] == doc["iterates"][-1]


def test_angle_doubling_form(tmp_path, capsys):
    code, out, _ = _run(
        capsys, ["angle", "--value", "3/7", "--steps", "3", "--out", str(tmp_path), "--json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["purely_periodic"] is True
    assert doc["doubling_orbit"] == ["3/7", "6/7", "5/7", "3/7"]


def test_angle_requires_one_input_mode(tmp_path, capsys):
    assert _run(capsys, ["angle", "--out", str(tmp_path)])[0] == 2


def test_orbit_document(tmp_path, capsys):
    code, out, _ = _run(capsys, ["orbit", "--pq", "1/3", "--out", str(tmp_path), "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc == {"angles": ["1/7", "2/7", "4/7"], "period": 3, "rotation": "1/3"}


def test_brjuno_value_frozen(tmp_path, capsys):
    code, out, _ = _run(
        capsys, ["brjuno", "--cf", "1:rep=1", "--terms", "50", "--out", str(tmp_path), "--json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["nondecreasing"] is True
    assert doc["value"] == pytest.approx(1.2598289137496461, abs=1e-12)


def test_radius_estimate_frozen(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        ["radius", "--cf", "1:rep=1", "--order", "256", "--out", str(tmp_path), "--json"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["reliable"] is True
    assert doc["koebe_ok"] is True
    assert doc["r_hat"] == pytest.approx(0.33661267179925614, abs=1e-12)


def test_manifest_digests_match_artifacts(tmp_path, capsys):
    code, _, _ = _run(
        capsys, ["cantor", "--cf", "1:rep=1", "--depth", "6", "--out", str(tmp_path)]
    )
    assert code == 0
    manifest = json.loads((tmp_path / "cantor-manifest.json").read_text())
    assert manifest["artifacts"]
    for record in manifest["artifacts"]:
        blob = (tmp_path / record["name"]).read_bytes()
        assert hashlib.sha256(blob).hexdigest() == record["sha256"]
        assert len(blob) == record["bytes"]


def test_env_precision_feeds_handlers_and_manifest(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QUADDYN_PREC", "32")
    code, out, _ = _run(
        capsys, ["cf", "--value", "113/355", "--out", str(tmp_path), "--json"]
    )
    assert code == 0
    assert json.loads(out)["bracket_prec_bits"] == 32
    manifest = json.loads((tmp_path / "cf-manifest.json").read_text())
    assert manifest["precision_bits"] == 32


def test_cf_document_for_rational_value(tmp_path, capsys):
    code, out, _ = _run(capsys, ["cf", "--value", "113/355", "--out", str(tmp_path), "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["quotients"] == [3, 7, 16]
    assert doc["convergents"][-1] == "113/355"
    assert doc["convergents_from_second"] == doc["convergents"][1:]


def test_julia_renders_deterministically(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out_dir in (out_a, out_b):
        code, _, _ = _run(
            capsys, ["julia", "--c", "-2,0", "--res", "4", "--out", str(out_dir)]
        )
        assert code == 0
    assert (out_a / "julia.ppm").read_bytes() == (out_b / "julia.ppm").read_bytes()
    sidecar = json.loads((out_a / "julia.json").read_text())
    assert sidecar["resolution_exponent"] == 4
    assert sidecar["counts"]["near"] > 0


def test_ray_artifacts(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        ["ray", "--c", "0,0", "--angle", "1/8", "--tmin", "1e-3", "--out", str(tmp_path), "--json"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["angle"] == "1/8"
    lines = (tmp_path / "ray.csv").read_text().strip().splitlines()
    assert lines[0] == "t,re,im"
    potentials = [float(line.split(",")[0]) for line in lines[1:]]
    assert all(b < a for a, b in zip(potentials, potentials[1:]))
    assert potentials[-1] <= 1e-3 * (1 + 1e-9)


def test_omega_document_lists_exact_vertices(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        ["omega", "--a-seq", "builtin:toy", "--depth", "2", "--res", "32", "--out", str(tmp_path), "--json"],
    )
    assert code == 0
    doc = json.loads(out)
    gamma_1 = doc["boundary_curves"]["1"]
    assert gamma_1[0] == ["-1", "1"]
    assert ["-7/12", "8/9"] in gamma_1
    assert (tmp_path / "omega.ppm").exists()


def test_lavrentiev_single_mode(tmp_path, capsys):
    code, out, _ = _run(
        capsys,
        [
            "lavrentiev",
            "--endpoints", "1.09995,1.10005",
            "--distance", "1.0",
            "--out", str(tmp_path),
            "--json",
        ],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["holds"] is True
    assert doc["bound"] == pytest.approx(0.3, rel=1e-9)
