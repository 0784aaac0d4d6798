import json
import math
import subprocess
import sys

import pytest

from diamcurv.cli import build_parser, main, parse_alpha, run


def _strip(doc):
    doc = dict(doc)
    doc.pop("generated_at")
    return doc


def _load(path):
    return json.loads(path.read_text())


def test_parse_alpha():
    assert parse_alpha("2/3") == 2 / 3
    assert parse_alpha("0.6667") == 0.6667
    for bad in ("1", "0", "3/2", "abc", "1/0"):
        with pytest.raises(Exception):
            parse_alpha(bad)


def test_constants_row(tmp_path):
    status, doc = run(["constants", "--m", "2", "--alpha", "0.6667", "--out", str(tmp_path)])
    assert status == 0
    row = doc["results"]["table"][0]
    assert row["C_over_pi"] == pytest.approx(3888, rel=1e-4)
    status, doc = run(["constants", "--m", "2", "--alpha", "2/3", "--out", str(tmp_path)])
    assert doc["results"]["table"][0]["C"] == pytest.approx(3888 * math.pi, rel=1e-14)
    assert doc["results"]["optimum"]["2"]["alpha_star"] == pytest.approx(2 / 3, abs=1e-6)
    data = _load(tmp_path / "constants.json")
    assert data["schema"] == 1 and data["seed"] == 0
    assert (tmp_path / "constants.csv").read_text().startswith("m,alpha,c,delta,C,C_over_pi")


def test_admissible_equator_example(capsys):
    status = main(["admissible", "--m", "2", "--b", "1", "--vol", "12.566", "--inj", "3.1416"])
    assert status == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["admissible"] is False
    assert doc["results"]["reason"] == "VOLUME_TOO_LARGE"
    assert doc["verdicts"][0]["verdict"] == "NOT_APPLICABLE"


def test_admissible_imaginary_bound(capsys):
    assert main(["admissible", "--b", "0.5i", "--vol", "100"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["admissible"] is True


def test_verify_sphere_all_pass(tmp_path):
    status, doc = run(["verify", "--surface", "sphere(1)", "--alpha", "2/3", "--out", str(tmp_path)])
    assert status == 0
    assert len(doc["verdicts"]) == 5
    assert all(v["verdict"] in ("PASS", "WARN") for v in doc["verdicts"])
    assert (tmp_path / "verify.csv").exists()


def test_verify_equator_not_applicable(tmp_path):
    status, doc = run(["verify", "--surface", "equator", "--resolution", "2", "--out", str(tmp_path)])
    assert status == 0
    v = doc["verdicts"][0]
    assert v["verdict"] == "NOT_APPLICABLE" and v["note"] == "VOLUME_TOO_LARGE"


def test_deterministic_json(tmp_path):
    args = ["dichotomy", "--surface", "bumpy-sphere(1,0.1,3,1)", "--resolution", "2", "--n-centers", "3",
            "--n-radii", "4", "--seed", "7"]
    run(args + ["--out", str(tmp_path / "a")])
    run(args + ["--out", str(tmp_path / "b")])
    a, b = _load(tmp_path / "a" / "dichotomy.json"), _load(tmp_path / "b" / "dichotomy.json")
    assert _strip(a) == _strip(b)
    assert a["seed"] == 7 and a["config"]["seed"] == 7
    ta = (tmp_path / "a" / "dichotomy.json").read_text().splitlines()
    tb = (tmp_path / "b" / "dichotomy.json").read_text().splitlines()
    assert [l for l in ta if "generated_at" not in l] == [l for l in tb if "generated_at" not in l]
    assert (tmp_path / "a" / "dichotomy.csv").read_bytes() == (tmp_path / "b" / "dichotomy.csv").read_bytes()


def test_analyze_off_roundtrip(tmp_path):
    off1, off2 = tmp_path / "m1.off", tmp_path / "m2.off"
    status, _ = run(["analyze", "--surface", "torus(2,1)", "--resolution", "24", "--export", str(off1),
                     "--out", str(tmp_path / "g")])
    assert status == 0
    _, d1 = run(["analyze", "--surface", str(off1), "--export", str(off2), "--out", str(tmp_path / "r1")])
    _, d2 = run(["analyze", "--surface", str(off2), "--out", str(tmp_path / "r2")])
    r1, r2 = dict(d1["results"]), dict(d2["results"])
    for r in (r1, r2):
        r["surface"] = {k: v for k, v in r["surface"].items() if k not in ("name", "params")}
    assert r1 == r2
    assert off1.read_bytes() == off2.read_bytes()
    header = (tmp_path / "r1" / "profile_volume.csv").read_text().splitlines()[0]
    assert header == "r,V"
    assert (tmp_path / "r1" / "profile_maximal.csv").read_text().startswith("r,integrand")


def test_sweep_alpha_csv(tmp_path):
    status, doc = run(["sweep-alpha", "--surface", "sphere(1)", "--resolution", "2", "--alpha-grid", "4",
                       "--out", str(tmp_path)])
    assert status == 0
    lines = (tmp_path / "sweep_alpha.csv").read_text().splitlines()
    assert lines[0] == "alpha,C,ratio" and len(lines) == 5
    assert [row["alpha"] for row in doc["results"]["sweep"]] == [0.2, 0.4, 0.6, 0.8]


def test_cover_demo_command(tmp_path):
    status, doc = run(["cover-demo", "--surface", "sphere(1)", "--resolution", "2", "--max-candidates", "16",
                       "--out", str(tmp_path)])
    assert status == 0
    assert doc["results"]["cover"]["disjoint"] is True
    assert (tmp_path / "cover.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--surface", "klein(1)"],
        ["analyze", "--surface", "sphere(1)", "--resolution", "9"],
        ["analyze", "--surface", "/nonexistent/mesh.off"],
        ["analyze", "--surface", "sphere(1)", "--b", "1"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_bad_mesh_file_reports_line(tmp_path, capsys):
    p = tmp_path / "bad.off"
    p.write_text("OFF\n3 1 0\n0 0 0\n1 0 q\n0 1 0\n3 0 1 2\n")
    assert main(["analyze", "--surface", str(p)]) == 2
    assert "bad.off:4:" in capsys.readouterr().err


def test_fail_verdict_exits_1(monkeypatch, tmp_path):
    import diamcurv.cli as cli

    def fake(args):
        return cli._document(args, {}, [cli._verdict("x", "FAIL")])

    monkeypatch.setitem(cli.COMMANDS, "verify", fake)
    assert main(["verify", "--surface", "sphere(1)", "--out", str(tmp_path)]) == 1


def test_help_lists_commands():
    text = build_parser().format_help()
    for cmd in ("constants", "admissible", "analyze", "dichotomy", "verify", "sweep-alpha", "cover-demo"):
        assert cmd in text


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "diamcurv.cli", "constants", "--m", "3"], capture_output=True,
                         text=True, check=True)
    doc = json.loads(out.stdout)
    assert doc["results"]["table"][0]["alpha"] == 0.75
