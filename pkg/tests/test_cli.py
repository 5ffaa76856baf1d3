import json

import pytest

from twentyv import cli, identities
from twentyv.identities import IdentityResult


def invoke(capsys, *args):
    code = cli.run(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_m6(capsys):
    code, out, _ = invoke(capsys, "count", "--m", "6")
    data = json.loads(out)
    assert code == 0
    assert data["total"] == "1472"
    assert data["refined"] == ["80", "320", "504", "392", "152", "24"]
    assert data["routes"] == ["brute", "determinant", "transfer"]


def test_count_m10_and_dwbc2(capsys):
    code, out, _ = invoke(capsys, "count", "--m", "10", "--format", "csv")
    assert code == 0 and out.splitlines()[-1] == "total,645693440"
    code, out, _ = invoke(capsys, "count", "--m", "3", "--bc", "dwbc2")
    assert json.loads(out)["refined"] == ["1", "3", "2"]


def test_count_route_disagreement(capsys, monkeypatch):
    real = cli._routes

    def broken(m, bc, brute_max):
        out = real(m, bc, brute_max)
        out["transfer"] = tuple(v + 1 for v in out["transfer"])
        return out

    monkeypatch.setattr(cli, "_routes", broken)
    code, _, err = invoke(capsys, "count", "--m", "4")
    rec = json.loads(err)
    assert code == 1
    assert rec["status"] == "fail" and rec["reason"] == "route disagreement"


def test_output_is_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.run(["sample", "--m", "6", "--seed", "5", "--n", "3", "--format", "json",
                        "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_verify_selected(capsys):
    code, out, _ = invoke(capsys, "verify", "--identity", "inhom", "--m", "3", "--seed", "7")
    res = json.loads(out)["results"][0]
    assert code == 0 and res["max_residual"] <= 1e-10
    code, out, _ = invoke(capsys, "verify", "--identity", "evenodd")
    res = json.loads(out)["results"][0]
    assert code == 0 and res["exact"] and res["checked"] == 5


def test_verify_failure_exits_one(capsys, monkeypatch):
    monkeypatch.setitem(identities.REGISTRY, "evenodd",
                        lambda: IdentityResult("evenodd", False, True, checked=1,
                                               failures=[{"case": "n=1", "left": "1", "right": "2"}]))
    code, _, err = invoke(capsys, "verify", "--identity", "evenodd")
    assert code == 1
    assert json.loads(err)["failed"][0]["name"] == "evenodd"


def test_curve_uniform_report(capsys):
    code, out, _ = invoke(capsys, "curve", "--eta", "1/8", "--lambda", "5/8", "--mu", "0",
                          "--num-points", "21", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["report"]["degree10"] <= 1e-6
    assert sorted(data["branches"]) == ["NE", "NW", "SE"]


def test_curve_free_fermion_junctions(capsys):
    code, out, _ = invoke(capsys, "curve", "--eta", "1/4", "--lambda", "1/8", "--num-points", "21",
                          "--format", "json")
    rep = json.loads(out)["report"]
    assert code == 0
    assert all(j["position_gap"] <= 1e-6 and j["direction_gap"] <= 1e-6 for j in rep["junctions"])


def test_curve_csv_and_svg(capsys, tmp_path):
    code, out, _ = invoke(capsys, "curve", "--eta", "1/6", "--mu", "1/8", "--lambda", "5/12",
                          "--num-points", "11")
    assert code == 0 and out.startswith("branch,xi,X,Y,A,kappa\r\n")
    svg = tmp_path / "c.svg"
    assert cli.run(["curve", "--eta", "0.5", "--lambda", "1.5", "--radians", "--num-points", "11",
                    "--format", "svg", "--output", str(svg)]) == 0
    assert svg.read_text().count("<polyline") == 3


def test_curve_phase_violation(capsys):
    code, _, err = invoke(capsys, "curve", "--eta", "1/6", "--lambda", "1/8")
    rec = json.loads(err)
    assert code == 2 and "eta < lambda" in rec["violated"]


def test_sample_single_and_phases(capsys, tmp_path):
    code, out, _ = invoke(capsys, "sample", "--m", "1", "--format", "json")
    assert code == 0 and len(json.loads(out)["samples"]) == 1
    svg = tmp_path / "s.svg"
    assert cli.run(["sample", "--m", "10", "--phases", "--output", str(svg)]) == 0
    assert "<title>F" in svg.read_text()


def test_sample_histogram(capsys):
    code, out, _ = invoke(capsys, "sample", "--m", "8", "--seed", "1", "--n", "10000", "--histogram")
    rep = json.loads(out)["histogram"]
    assert code == 0 and rep["passed"] and sum(b["observed"] for b in rep["bins"]) == 10000


def test_sample_size_cap(capsys):
    code, _, err = invoke(capsys, "sample", "--m", "13")
    assert code == 2 and json.loads(err)["error"] == "SizeCapExceeded"


@pytest.mark.parametrize("text,want", [("1/8", 0.39269908169872414), ("0", 0.0), ("-1/4", -0.7853981633974483)])
def test_parse_angle(text, want):
    assert cli.parse_angle(text, False)[0] == pytest.approx(want, abs=1e-15)
