import json
import random

import pytest

from helpers import random_complex, random_correspondence, slope_line
from quiltkit import cli
from quiltkit import fixtures as fx
from quiltkit import graded as gr
from quiltkit import maslov as ms
from quiltkit import quilt as qc
from quiltkit import serialize as ser
from quiltkit import symplectic as sp


def _write(path, obj):
    path.write_text(ser.dumps(obj), encoding="utf-8")
    return str(path)


def _call(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_validate_ok_and_violations(tmp_path, capsys):
    code, out, _ = _call(capsys, "validate", "fixture:figure_two")
    assert code == 0 and out["violations"] == []
    d = ser.quilt_to_json(fx.strip())
    d["boundary_labels"] = d["boundary_labels"][:1]
    code, out, _ = _call(capsys, "validate", _write(tmp_path / "bad.json", d))
    assert code == 1 and out["violations"]
    code, out, _ = _call(capsys, "degree", str(tmp_path / "bad.json"))
    assert code == 1 and out["violations"]


def test_ends_euler_degree(capsys):
    code, out, _ = _call(capsys, "ends", "fixture:strip")
    assert code == 0 and len(out["incoming"]) == len(out["outgoing"]) == 1
    code, out, _ = _call(capsys, "euler", "fixture:annulus")
    assert code == 0 and out["total"] == 0
    code, out, _ = _call(capsys, "degree", "fixture:cap")
    assert code == 0 and out["degree_shift"] == qc.degree_shift(fx.cap())
    code, out, _ = _call(capsys, "--modulus", "8", "degree", "fixture:cap")
    assert out == {"degree_shift": 7, "modulus": 8}


def test_glue_and_type(tmp_path, capsys):
    code, out, _ = _call(capsys, "glue", "fixture:strip", "--minus", "0", "--plus", "0")
    assert code == 0
    glued = _write(tmp_path / "g.json", out)
    code, out, _ = _call(capsys, "type", glued, "fixture:annulus")
    assert code == 0 and out["equal"] is True
    code, out, _ = _call(capsys, "glue", "fixture:strip", "--minus", "3", "--plus", "0")
    assert code == 2 and out["error"] == "EndMismatch"


def test_shrink(capsys):
    code, out, _ = _call(capsys, "shrink", "fixture:three_strips", "--patch", "S1")
    assert code == 0 and out["shift"]["d"] == 0
    code, out, _ = _call(capsys, "shrink", "fixture:duality_disk", "--patch", "S")
    assert code == 2 and out["error"] == "BothSidesBoundary"
    code, out, _ = _call(capsys, "shrink", "fixture:duality_disk", "--patch", "S", "--allow-both-boundary")
    assert code == 0 and out["shift"]["d"] == -1


def test_maslov_and_kashiwara(tmp_path, capsys):
    loop = ms.LagrangianLoop.of([slope_line(s) for s in (0, 1, None, -1)])
    path = _write(tmp_path / "loop.json", ser.loop_to_json(loop))
    code, out, _ = _call(capsys, "maslov", path)
    assert code == 0 and out == {"maslov": 1}
    ref = _write(tmp_path / "ref.json", ser.lagrangian_to_json(slope_line(2)))
    assert _call(capsys, "maslov", path, "--reference", ref)[1] == {"maslov": 1}
    lines = [_write(tmp_path / f"l{i}.json", ser.lagrangian_to_json(slope_line(s))) for i, s in enumerate((0, 1, None))]
    assert _call(capsys, "kashiwara", *lines)[1] == {"kashiwara": 1}
    bad = _write(tmp_path / "perp.json", ser.loop_to_json(ms.LagrangianLoop.of([slope_line(0), slope_line(None)])))
    code, out, _ = _call(capsys, "maslov", bad)
    assert code == 2 and out["error"] == "DegenerateStep"


def test_compose_with_diagonal(tmp_path, capsys):
    rng = random.Random(0)
    V = sp.standard_space(1)
    L = random_correspondence(rng, V, V)
    diag = _write(tmp_path / "diag.json", ser.correspondence_to_json(sp.diagonal(V)))
    lpath = _write(tmp_path / "l.json", ser.correspondence_to_json(L))
    code, out, _ = _call(capsys, "compose", diag, lpath)
    assert code == 0 and out["transverse"] and out["embedded"]
    assert out["composition"] == ser.correspondence_to_json(L)


def test_cohomology_and_ring_override(tmp_path, capsys):
    rng = random.Random(3)
    c, expected = random_complex(rng, 4, gr.Z, 4)
    path = _write(tmp_path / "c.json", ser.complex_to_json(c))
    code, out, _ = _call(capsys, "cohomology", path)
    assert code == 0
    got = {int(k): (v["free"], v["torsion"]) for k, v in out["cohomology"].items()}
    assert got == {k: (f, list(t)) for k, (f, t) in expected.items()} or all(
        got[k] == (expected[k][0], list(expected[k][1])) for k in expected
    )
    A = gr.GradedModule.of([0, 1], 2)
    two = {"module": ser.module_to_json(A), "differential": [[0, 0], [2, 0]]}
    path = _write(tmp_path / "two.json", two)
    assert _call(capsys, "cohomology", path)[1]["cohomology"]["1"] == {"free": 0, "torsion": [2]}
    z2 = _call(capsys, "--ring", "z2", "cohomology", path)[1]["cohomology"]
    assert z2["0"]["free"] == 1 and z2["1"]["free"] == 1


def test_evaluate(tmp_path, capsys):
    A = gr.GradedModule.of([0, 1, 1], 4)
    expr = _write(tmp_path / "e.json", {"glue": {"fixture": "strip", "args": {"modulus": 4}}, "minus": 0, "plus": 0})
    asg = _write(
        tmp_path / "a.json",
        {"modulus": 4, "modules": [{"end": {"cyclic": False, "labels": ["L0", "L1"]}, "module": ser.module_to_json(A)}]},
    )
    code, out, _ = _call(capsys, "evaluate", expr, asg)
    assert code == 0 and out["map"]["matrix"] == [[-1]] and out["sign_exact"]
    empty = _write(tmp_path / "none.json", {"modulus": 4})
    code, out, _ = _call(capsys, "evaluate", expr, empty)
    assert code == 2 and out["error"] == "UnassignedGenerator"


@pytest.mark.parametrize("name", ["closed_surfaces", "trace_laws", "shrink", "section6"])
def test_demos(name, capsys):
    code, out, _ = _call(capsys, "demo", name)
    assert code == 0 and all(c["pass"] for c in out["checks"])


def test_input_errors(tmp_path, capsys):
    code, out, err = _call(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 3 and out is None and json.loads(err)["error"] == "InputError"
    (tmp_path / "junk.json").write_text("{not json")
    assert _call(capsys, "ends", str(tmp_path / "junk.json"))[0] == 3
    assert _call(capsys, "ends", _write(tmp_path / "empty.json", {}))[0] == 3
    assert _call(capsys, "ends", "fixture:nope")[0] == 3
    assert _call(capsys, "--modulus", "3", "ends", "fixture:strip")[0] == 3
    assert _call(capsys, "frobnicate")[0] == 3


def test_fixture_dir_and_output_file(tmp_path, capsys, monkeypatch):
    _write(tmp_path / "s.json", ser.quilt_to_json(fx.strip()))
    monkeypatch.setenv(cli.FIXTURE_DIR_ENV, str(tmp_path))
    monkeypatch.chdir(tmp_path.parent)
    target = tmp_path / "out.json"
    code, out, _ = _call(capsys, "-o", str(target), "euler", "s.json")
    assert code == 0 and out is None
    assert json.loads(target.read_text())["total"] == 1
