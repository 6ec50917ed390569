import io
import json
import subprocess
import sys

import pytest

from pathlab.cli import main


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tau_file(tmp_path, capsys, monkeypatch):
    path = tmp_path / "tau.json"
    assert run(capsys, monkeypatch, ["gallery", "emit", "tau", "-o", str(path)])[0] == 0
    return str(path)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_gallery_pipe_into_pathology(capsys, monkeypatch):
    code, emitted, _ = run(capsys, monkeypatch, ["gallery", "emit", "tau"])
    assert code == 0
    code, out, _ = run(capsys, monkeypatch, ["pathology", "-", "--jobs", "1"], stdin=emitted)
    assert code == 0 and json.loads(out)["p"] == "4/3"


def test_hull_with_set(capsys, monkeypatch, tau_file):
    code, out, _ = run(capsys, monkeypatch, ["hull", "--set", "0,1,2", tau_file])
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "3/2" and doc["verified"] is True
    code, out, _ = run(capsys, monkeypatch, ["sigma-hull", "--set", "0,1", tau_file])
    assert json.loads(out)["value"] == "1"


def test_pattern_hull(capsys, monkeypatch, tmp_path):
    path = tmp_path / "eta.json"
    run(capsys, monkeypatch, ["gallery", "emit", "eta", "-o", str(path)])
    code, out, _ = run(capsys, monkeypatch, ["hull", str(path)])
    assert code == 0 and json.loads(out)["value"] == "4"
    code, out, _ = run(capsys, monkeypatch, ["sigma-hull", str(path), "--set", "0"])
    assert json.loads(out)["value"] == "1"


def test_validate_bad_file_exits_2(capsys, monkeypatch, tmp_path):
    bad = write(tmp_path, "bad.json", {"ground": 2, "repr": {"type": "table", "values": ["0", "2", "1", "1"]}})
    code, out, _ = run(capsys, monkeypatch, ["validate", bad])
    doc = json.loads(out)
    assert code == 2 and not doc["valid"]
    assert doc["violations"][0]["sets"] == [[0], [0, 1]]


def test_validate_good(capsys, monkeypatch, tau_file):
    code, out, _ = run(capsys, monkeypatch, ["validate", tau_file])
    assert code == 0 and json.loads(out)["valid"]


def test_usage_and_io_errors(capsys, monkeypatch, tmp_path):
    assert run(capsys, monkeypatch, ["frobnicate"])[0] == 1
    assert run(capsys, monkeypatch, ["hull", "--bogus", "x"])[0] == 1
    code, _, err = run(capsys, monkeypatch, ["hull", str(tmp_path / "missing.json")])
    assert code == 1 and "cannot read" in err
    junk = tmp_path / "junk.json"
    junk.write_text("{")
    code, _, err = run(capsys, monkeypatch, ["pathology", str(junk)])
    assert code == 1 and "SCHEMA" in err


def test_csv_only_where_tabular(capsys, monkeypatch, tau_file):
    code, out, _ = run(capsys, monkeypatch, ["pathology", tau_file, "--format", "csv"])
    assert code == 0 and out.splitlines()[0] == "set,value,hull,ratio"
    code, _, err = run(capsys, monkeypatch, ["hull", tau_file, "--format", "csv"])
    assert code == 1 and "CSV" in err


def test_output_is_deterministic(capsys, monkeypatch, tau_file):
    a = run(capsys, monkeypatch, ["pathology", tau_file, "--ratios"])[1]
    b = run(capsys, monkeypatch, ["pathology", tau_file, "--ratios", "--jobs", "2"])[1]
    assert a == b


def test_table2(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["table2"])
    doc = json.loads(out)
    assert code == 0
    rows = {r["row"]: r for r in doc["rows"]}
    assert rows["tau3"]["computed"] == ["4/3", "4/3", "4/3"] and rows["tau3"]["match"]
    assert rows["eta"]["computed"] == ["1", "3/2", "6"]
    assert any(u["row"] == "delta-plus-chi" for u in doc["unsupported"])


def test_gallery_list_and_params(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["gallery", "list"])
    assert code == 0 and any(e["key"] == "mazur" for e in json.loads(out))
    code, out, _ = run(capsys, monkeypatch, ["gallery", "emit", "mazur", "--param", "n=2"])
    assert json.loads(out)["ground"] == 6
    assert run(capsys, monkeypatch, ["gallery", "emit", "nope"])[0] == 1
    assert run(capsys, monkeypatch, ["gallery", "emit"])[0] == 1


def test_cover(capsys, monkeypatch, tmp_path):
    code, out, _ = run(capsys, monkeypatch, ["cover", "mazur", "2"])
    doc = json.loads(out)
    assert doc["cover_number"] == "3" and doc["hull"] == "2" and doc["ratio"] == "3/2"
    K = write(tmp_path, "k.json", [0, 1, 2])
    fam = write(tmp_path, "f.json", [[0, 1], [1, 2]])
    code, out, _ = run(capsys, monkeypatch, ["cover", "delta", K, fam])
    assert json.loads(out)["delta"] == "1/2"
    bad = write(tmp_path, "g.json", [[0]])
    assert run(capsys, monkeypatch, ["cover", "delta", K, bad])[0] == 1


def test_matrix_verbs(capsys, monkeypatch, tmp_path):
    f = write(tmp_path, "f.json", [1, 2, 3, 4])
    code, out, _ = run(capsys, monkeypatch, ["matrix", "witness", f, "--i-max", "4"])
    M = json.loads(out)
    assert M["first_row"] == 1 and M["rows"][1] == ["0", "1/2", "1/2", "0", "0"]
    mpath = write(tmp_path, "m.json", M)
    code, out, _ = run(capsys, monkeypatch, ["matrix", "check", mpath, "--format", "csv"])
    assert code == 0 and out.splitlines()[1] == "row_sum,1,1"
    B = write(tmp_path, "b.json", [1, 2])
    code, out, _ = run(capsys, monkeypatch, ["matrix", "eval", mpath, "--set", B, "--rows", "3,4"])
    assert json.loads(out)["value"] == "2/3"


def test_density_and_summable(capsys, monkeypatch, tmp_path):
    evens = write(tmp_path, "e.json", {"predicate": "evens", "bound": 100})
    code, out, _ = run(capsys, monkeypatch, ["density", "prefix", evens, "10"])
    assert json.loads(out)["density"] == "1/2"
    code, out, _ = run(capsys, monkeypatch, ["density", "window", evens, "1", "10"])
    assert json.loads(out)["max_density"] == "1"
    sq = write(tmp_path, "s.json", {"predicate": "squares", "bound": 100})
    code, out, _ = run(capsys, monkeypatch, ["density", "exp", sq, "100"])
    assert json.loads(out)["lo"] == "1/2" and json.loads(out)["exact"]
    code, out, _ = run(capsys, monkeypatch, ["summable", "weight", evens, "4", "--weights", "geometric"])
    assert json.loads(out)["weight"] == "5/4"
    ms = write(tmp_path, "ms.json", [[0, 0, 0, 1], [0, 0, 0, 1]])
    code, out, _ = run(capsys, monkeypatch, ["summable", "from-measures", ms, "--i-max", "4"])
    assert json.loads(out)["g"] == ["0", "0", "0", "3/4"]
    fw = write(tmp_path, "fw.json", ["1"] * 6)
    g = write(tmp_path, "g.json", [0, 0, 1, 1, 2, 2])
    code, out, _ = run(capsys, monkeypatch, ["summable", "pushforward", fw, g])
    assert json.loads(out)["h"] == ["2", "2", "2"]


def test_vdw_verbs(capsys, monkeypatch, tmp_path):
    s = write(tmp_path, "a.json", [0, 1, 2, 4, 8])
    code, out, _ = run(capsys, monkeypatch, ["vdw", "longest-ap", s])
    assert json.loads(out)["length"] == 3
    code, out, _ = run(capsys, monkeypatch, ["vdw", "w-check", "3", "8"])
    assert json.loads(out)["holds"] is False
    v = write(tmp_path, "v.json", [1, 2, 4, 9])
    a = write(tmp_path, "b.json", [0, 2, 4, 6])
    code, out, _ = run(capsys, monkeypatch, ["vdw", "phi", "--vtable", v, "--set", a])
    assert json.loads(out)["phi"] == "3"
    code, out, _ = run(capsys, monkeypatch, ["vdw", "scaled-measure", "--set", a, "--vtable", v])
    doc = json.loads(out)
    assert code == 0 and doc["feasibility"]["feasible"]
    assert run(capsys, monkeypatch, ["vdw", "check-vtable", "--vtable", v])[0] == 2
    assert run(capsys, monkeypatch, ["vdw", "check-vtable"])[0] == 0


def test_pretty_format(capsys, monkeypatch, tau_file):
    code, out, _ = run(capsys, monkeypatch, ["pathology", tau_file, "--format", "pretty"])
    assert code == 0 and 'p: "4/3"' in out


def test_module_entry_point(tau_file):
    proc = subprocess.run([sys.executable, "-m", "pathlab", "hull", tau_file, "--jobs", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "3/2"
