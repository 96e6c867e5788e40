import json
import subprocess
import sys

from artifact.modules_core import realize
from artifact.serialize import dumps
from artifact.twisted import apply_braid, projective
from artifact.workspace import load_object
from artifact.zigzag import zigzag


def run(*args, cwd=None):
    p = subprocess.run([sys.executable, "-m", "artifact", *args], capture_output=True,
                       text=True, cwd=cwd)
    return p.returncode, p.stdout


def test_central_shift_line():
    code, out = run("central-shift", "--m", "2", "--n", "2")
    assert code == 0
    assert out.strip() == "P_k → P_k[8]{12} for k=1,2: PASS"


def test_algebra_new(tmp_path):
    code, out = run("algebra", "new", "--m", "1", "--n", "2", "--out", str(tmp_path / "a.algebra.json"))
    assert code == 0 and json.loads(out)["dim"] == 2
    code, out = run("algebra", "new", "--m", "3", "--n", "2", cwd=tmp_path)
    assert code == 0 and json.loads(out)["dim"] == 10
    assert (tmp_path / "A3_2.algebra.json").exists()


def test_cardy_corpus_passes():
    code, out = run("cardy", "--corpus", "100", "--seed", "7", "--jobs", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 101
    assert all(l.endswith("PASS") for l in lines[1:])


def test_exit_codes(tmp_path):
    code, out = run("ext", "P1", "P5")
    assert code == 2 and json.loads(out)["error"]["exit_code"] == 2
    code, out = run("orbit", "--start", "P1", "--target", "P2", "--depth", "0")
    assert code == 3 and json.loads(out)["exhausted"]
    code, out = run("orbit", "--start", "P1", "--target", "P2", "--depth", "2")
    assert code == 0 and json.loads(out)["found"]
    bad = tmp_path / "bad.twc.json"
    bad.write_text('{"generators": [{"k": 1}]}')
    code, out = run("twist", "--word", "1", str(bad))
    assert code == 2 and "error" in json.loads(out)
    code, out = run("braid-relations", "--m", "3", "--n", "2")
    assert code == 0


def test_module_validate(tmp_path):
    M = realize(apply_braid("1 2", projective(zigzag(2, 2), 1)))
    path = tmp_path / "c.module.json"
    path.write_text(dumps(M.to_json()) + "\n")
    code, out = run("module", "validate", str(path))
    assert code == 0 and json.loads(out)["ok"]
    # one flipped coefficient breaks the module equations
    data = json.loads(path.read_text())
    e = next(e for e in data["mu"] if e["d"] == 1)
    e["coeff"] = str(-int(e["coeff"]))
    path.write_text(dumps(data) + "\n")
    code, out = run("module", "validate", str(path))
    assert code == 1 and not json.loads(out)["ok"]


def test_workspace_round_trip_is_bit_identical(tmp_path):
    ws = tmp_path / "ws"
    assert run("--workspace", str(ws), "twist", "--word", "1 2 -1", "P1")[0] == 0
    assert run("--workspace", str(ws), "equivariant", "run", "P1", "--no-strictify")[0] == 0
    M = realize(apply_braid("2", projective(zigzag(2, 2), 1)))
    (ws / "m.module.json").write_text(dumps(M.to_json()) + "\n")
    for path in ws.iterdir():
        if path.name == "manifest.json" or path.name.endswith(".report.json"):
            continue
        text = path.read_text()
        kind, obj, errs = load_object(str(path))
        assert errs == []
        assert dumps(obj.to_json()) + "\n" == text, path.name
    code, out = run("--workspace", str(ws), "report")
    assert code == 0
    assert all(r["valid"] for r in json.loads(out)["objects"])


def test_report_detects_tampering(tmp_path):
    ws = tmp_path / "ws"
    run("--workspace", str(ws), "twist", "--word", "1", "P2")
    f = ws / "twist_1.twc.json"
    f.write_text(f.read_text().replace('"coeff": "1"', '"coeff": "2"'))
    code, out = run("--workspace", str(ws), "report")
    assert code == 1
    rows = {r["name"]: r for r in json.loads(out)["objects"]}
    assert not rows["twist_1.twc.json"]["valid"]


def test_twc_file_arguments(tmp_path):
    C = apply_braid("1", projective(zigzag(2, 2), 2))
    path = tmp_path / "t.twc.json"
    path.write_text(dumps(C.to_json()) + "\n")
    code, out = run("hh", "class", str(path))
    assert code == 0
    code, out = run("ext", str(path), str(path))
    assert code == 0
