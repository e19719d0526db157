import json
import subprocess
import sys

import pytest

from quarticlab.cli import analyze, load_curves, run
from quarticlab.field import field_create
from quarticlab.quartic import fixture


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line]


def test_analyze_smooth_curve(capsys):
    assert run(["analyze", "--field", "7", "--curve", "expr:x^4 + 2*y^4 + 3*z^4 + x*y^3", "--seed", "1"]) == 0
    objs = jsonl(capsys.readouterr().out)
    sections = [o.get("section") for o in objs]
    assert sections == ["curve", "points", "flexes", "bitangents", "classification", "split", "pencil", "xc", None]
    head = objs[0]
    assert head["smooth"] and head["field"] == "7"
    flex = objs[2]
    assert flex["agree"] and set(flex["methods"]) == {"contact_order", "hessian"}
    assert flex["geometric"]["weight_sum"] == 24
    assert objs[-1]["summary"] == {"curves": 1, "smooth": 1}


def test_analyze_singular_curve(capsys):
    assert run(["analyze", "--field", "5", "--curve", "expr:y*z^3 + x^4 + z^4"]) == 0
    objs = jsonl(capsys.readouterr().out)
    assert objs[0]["smooth"] is False and objs[0]["singular_point"] == [0, 1, 0]
    assert objs[-1]["summary"]["smooth"] == 0


def test_analyze_char3_and_funny(capsys):
    assert run(["analyze", "--curve", "fixture:char3_orbit7"]) == 0
    objs = jsonl(capsys.readouterr().out)
    flex = objs[2]
    assert flex["methods"] == {"contact_order": 1, "conic": 1}
    assert run(["analyze", "--field", "3", "--curve", "fixture:fermat"]) == 0
    objs = jsonl(capsys.readouterr().out)
    assert objs[2]["geometric"]["count"] is None


def test_xc_command(capsys):
    assert run(["xc", "--curve", "fixture:klein_twist_2", "--ext", "2"]) == 0
    objs = jsonl(capsys.readouterr().out)
    assert [o["m"] for o in objs[:2]] == [1, 2]
    assert objs[2]["summary"]["verdict"] == "reducible"


def test_sweeps_and_csv(tmp_path, capsys):
    out = tmp_path / "t1.csv"
    assert run(["thm1", "--field", "31", "--samples", "4", "--csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("curve_id,coeffs,points") and len(lines) == 5
    assert run(["chebotarev", "--field", "31", "--samples", "3"]) == 0
    objs = jsonl(capsys.readouterr().out)
    assert objs[-1]["experiment"] == "chebotarev"


def test_repeated_runs_byte_identical(tmp_path):
    a, b, c = (tmp_path / n for n in "abc")
    args = ["flexprob", "--field", "13", "--samples", "5", "--seed", "9"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert run(args + ["--out", str(c), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_fixtures_listing(capsys):
    assert run(["fixtures"]) == 0
    objs = {o["name"]: o for o in jsonl(capsys.readouterr().out)}
    assert objs["galois_extremal"]["quarantined"] is True
    assert objs["char3_orbit6"]["field"] == "3:2:2,2,1"


@pytest.mark.parametrize("argv, message", [
    (["analyze", "--curve", "expr:x^4"], "--field is required"),
    (["analyze", "--field", "6", "--curve", "expr:x^4"], ""),
    (["analyze", "--field", "5", "--curve", "expr:x^4 + w^4"], ""),
    (["analyze", "--field", "5", "--curve", "fixture:klein_twist_1"], "defined over 2"),
    (["analyze", "--field", "5", "--curve", "fixture:nope"], "nope"),
    (["analyze", "--field", "5", "--curve", "bogus"], "must start with"),
    (["analyze", "--curve", "@/nonexistent/file"], ""),
    (["thm1", "--samples", "2"], "--field is required"),
    (["nosuchcommand"], ""),
])
def test_input_errors_exit_2(argv, message, capsys):
    assert run(argv) == 2
    err = capsys.readouterr().err
    assert message in err


def test_load_curves_sources(tmp_path, F5):
    p = tmp_path / "c.txt"
    p.write_text("5 expr:x^4 + y^4 + z^4\n2 coeffs:" + ",".join(["1"] * 15) + "\n")
    curves = load_curves("@" + str(p), None)
    assert curves[0] == fixture("fermat", F5) and curves[1].ctx.q == 2
    assert load_curves("fixture:char2_normal_form:3", None)[0].ctx.q == 2
    assert load_curves("coeffs:" + ",".join(["0"] * 14 + ["1"]), "5")[0].form.d == 4


def test_analyze_generator_on_nonsmooth_stops(F2):
    assert [s["section"] for s in analyze(fixture("fermat", F2))] == ["curve"]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "quarticlab.cli", "fixtures"], capture_output=True, text=True)
    assert r.returncode == 0 and "klein_twist_1" in r.stdout
