import json

import pytest

from canring import cli
from canring import pipeline as pl


def _run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def _strip_times(report):
    for rec in report["checks"]:
        rec.pop("wall_time", None)
    return report


def test_hilbert_default_seed(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, cap = _run(["hilbert", "--seed", "1", "--out", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == pl.SCHEMA
    hil = [c for c in rep["checks"] if c["name"] == "hilbert"][0]
    assert hil["data"]["dims"] == [4, 12, 26, 47, 75, 110]
    assert "PASS" in cap.out


def test_report_field_order(tmp_path, capsys):
    out = tmp_path / "r.json"
    _run(["bpf", "--seed", "1", "--out", str(out)], capsys)
    rep = json.loads(out.read_text())
    assert list(rep) == ["schema", "backend", "status", "summary", "config", "checks"]
    assert list(rep["checks"][0]) == ["name", "status", "inputs", "data", "wall_time"]


def test_deterministic_modulo_wall_time(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _run(["pfaffians", "--seed", "2", "--out", str(a)], capsys)
    _run(["pfaffians", "--seed", "2", "--out", str(b)], capsys)
    assert _strip_times(json.loads(a.read_text())) == _strip_times(json.loads(b.read_text()))


def test_t_zero_records_baseline(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _ = _run(["deform", "--seed", "1", "--t", "0", "--out", str(out)], capsys)
    assert code == 0
    recs = {c["name"]: c for c in json.loads(out.read_text())["checks"]}
    assert recs["deformation.elimination"]["status"] == "skipped"
    assert recs["deformation.hilbert"]["data"]["dims"] == [4, 12, 26, 47, 75, 110]


def test_negative_control_names_monomial(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"seeds": [1], "checks": ["tacnode"], "family": {"B_extra": {"x0^3*x3": "1"}}}))
    out = tmp_path / "r.json"
    code, _ = _run(["verify-all", "--config", str(cfg), "--out", str(out)], capsys)
    assert code == 1
    rec = json.loads(out.read_text())["checks"][0]
    assert rec["name"] == "tacnode" and rec["status"] == "fail"
    assert "B:x0^3*x3" in rec["data"]["offending_monomials"]
    # the record carries the full input data needed to replay the check
    assert rec["inputs"]["family"]["B_extra"] == {"x0^3*x3": "1"}


def test_replay_from_recorded_inputs(tmp_path, capsys):
    out = tmp_path / "r.json"
    _run(["hilbert", "--seed", "3", "--out", str(out)], capsys)
    rec = json.loads(out.read_text())["checks"][0]
    from canring import families as fam

    data = fam.FamilyData.from_json(rec["inputs"]["family"])
    assert pl.check_hilbert(data, 6)[0]


@pytest.mark.parametrize("content", ["{not json", json.dumps({"seeds": []}), json.dumps({"max_degree": 2}),
                                     json.dumps({"bogus": 1}), json.dumps({"checks": ["nope"]}),
                                     json.dumps({"t_values": ["1/0"]})])
def test_config_errors_exit_2(tmp_path, capsys, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    code, cap = _run(["hilbert", "--config", str(cfg)], capsys)
    assert code == 2
    assert "config error" in cap.err


def test_missing_config_file(capsys):
    code, _ = _run(["bpf", "--config", "/nonexistent/cfg.json"], capsys)
    assert code == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["no-such-command"])
    assert err.value.code == 2


def test_check_equal_files(tmp_path, capsys):
    ring = {"variables": [["y0", 1], ["y1", 1]], "parameters": []}
    from canring.poly import RingSpec

    r = RingSpec.make([("y0", 1), ("y1", 1)])
    ring = r.to_json()
    left, right, other = tmp_path / "l.json", tmp_path / "r.json", tmp_path / "o.json"
    left.write_text(json.dumps({"ring": ring, "generators": ["y0", "y1^2"]}))
    right.write_text(json.dumps({"ring": ring, "generators": ["2*y0", "y1^2 + y0*y1"]}))
    other.write_text(json.dumps({"ring": ring, "generators": ["y0^2"]}))
    assert _run(["check-equal", "--left", str(left), "--right", str(right)], capsys)[0] == 0
    assert _run(["check-equal", "--left", str(left), "--right", str(other)], capsys)[0] == 1
    assert _run(["check-equal", "--left", str(left)], capsys)[0] == 2


def test_check_equal_format_triangle(capsys):
    code, cap = _run(["check-equal", "--seed", "1"], capsys)
    assert code == 0
    assert "formats" in cap.out


def test_build_artifacts(tmp_path, capsys):
    out = tmp_path / "art.json"
    code, _ = _run(["build", "--seed", "1", "--out", str(out)], capsys)
    assert code == 0
    art = json.loads(out.read_text())["seeds"][0]
    assert len(art["rolling"]["relations"]) == 9
    assert len(art["extrasym"]["selected_subsets"]) == 9


def test_opaque_pfaffians(capsys):
    code, _ = _run(["pfaffians", "--opaque", "--seed", "1"], capsys)
    assert code == 0


def test_verify_all_json(capsys):
    code, cap = _run(["verify-all", "--seed", "1", "--json"], capsys)
    assert code == 0
    rep = json.loads(cap.out)
    names = {c["name"] for c in rep["checks"]}
    assert {"formats", "hilbert", "rtilde", "tacnode", "pfaffians", "bpf", "degeneration"} <= names
    assert rep["status"] == "pass"
