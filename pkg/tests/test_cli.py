import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from lagrangian_knots.braid import BraidWord
from lagrangian_knots.cli import CACHE_ENV, cache_key, main, run_pool
from lagrangian_knots.ring import LaurentPoly

import reference_data as ref


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)


def test_invariant_json_trefoil():
    code, text = run(["invariant", "--braid", "1 1 1", "--strands", "2", "--color", "2", "--format", "json"])
    assert code == 0
    rec = json.loads(text)
    assert list(rec) == ["braid", "strands", "N", "gamma", "jones", "ado", "alexander", "timings"]
    assert LaurentPoly.from_json(rec["jones"], ("q",)) == ref.TREFOIL_JONES
    assert {(t["q"], t["c"]) for t in rec["jones"]} == {(-8, "-1"), (-6, "1"), (-2, "1")}
    assert LaurentPoly.from_json(rec["gamma"]) == ref.TREFOIL_GAMMA
    assert LaurentPoly.from_json(rec["alexander"], ("x",)) == ref.TREFOIL_ALEXANDER
    assert rec["ado"]["order"] == 4


def test_invariant_unlink_and_8_19():
    code, text = run(["invariant", "--braid", "", "--strands", "2", "--color", "2"])
    assert code == 0
    rec = json.loads(text)
    assert LaurentPoly.from_json(rec["jones"], ("q",)) == LaurentPoly({(1,): 1, (-1,): 1}, ("q",))
    assert rec["alexander"] == []
    code, text = run(["invariant", "--braid", ref.KNOT_8_19, "--strands", "3", "--color", "2"])
    rec = json.loads(text)
    assert LaurentPoly.from_json(rec["gamma"]) == ref.GAMMA_8_19
    assert LaurentPoly.from_json(rec["jones"], ("q",)) == ref.JONES_8_19
    assert LaurentPoly.from_json(rec["alexander"], ("x",)) == ref.ALEXANDER_8_19


def test_invariant_text_format():
    code, text = run(["invariant", "--braid", "1 1 1", "--strands", "2", "--format", "text"])
    assert code == 0
    assert "jones: -q^-2" not in text
    assert "alexander: x-1+x^-1" in text


def test_invariant_errors():
    assert run(["invariant", "--braid", "1 0", "--strands", "2"])[0] == 2
    assert run(["invariant", "--braid", "1", "--strands", "2", "--color", "1"])[0] == 2
    assert run(["invariant", "--strands", "2"])[0] == 2
    code, text = run(["invariant", "--braid", ref.KNOT_8_19, "--strands", "3", "--max-points", "5"])
    assert code == 3
    rec = json.loads(text)
    assert rec["gamma"] is None and rec["error"]["type"] == "cap"


def test_cache_hit_is_identical(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    argv = ["invariant", "--braid", "1 1 2 -1", "--strands", "3", "--color", "3"]
    cold = run(argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    hot = run(argv)
    assert cold == hot
    # trivially equal words share the entry
    _, other = run(["invariant", "--braid", "1 2 -2 1 2 -1", "--strands", "3", "--color", "3"])
    assert len(list(tmp_path.iterdir())) == 1
    assert json.loads(other)["braid"] == "1 2 -2 1 2 -1"
    assert json.loads(other)["gamma"] == json.loads(cold[1])["gamma"]


def test_cache_key_uses_free_reduction():
    a, b = BraidWord(3, (1, 2, -2, 1)), BraidWord(3, (1, 1))
    assert cache_key(a, 2) == cache_key(b, 2)
    assert cache_key(a, 2) != cache_key(a, 3)
    assert cache_key(b, 2) != cache_key(BraidWord(4, (1, 1)), 2)


def test_crosscheck_default_is_deterministic():
    first = run(["crosscheck", "--seed", "17"])
    second = run(["crosscheck", "--seed", "17", "--jobs", "2"])
    assert first[0] == 0
    assert first == second
    assert first[1].startswith("crosscheck seed=17 count=50 max_strands=3 max_length=6 colors=2,3")
    assert "summary: 50 pass, 0 mismatch, 0 capped" in first[1]


def test_crosscheck_prints_random_seed():
    code, text = run(["crosscheck", "--count", "2", "--max-length", "3"])
    assert code == 0
    assert text.startswith("crosscheck seed=")


def test_crosscheck_detects_corrupted_calibration():
    code, text = run(["crosscheck", "--seed", "3", "--count", "6", "--corrupt", "ray"])
    assert code == 1
    assert "MISMATCH" in text
    assert "eps=" in text and "lambda:" in text


def test_table(tmp_path):
    csv_path = tmp_path / "knots.csv"
    csv_path.write_text(f"name,strands,word\ntrefoil,2,{ref.TREFOIL}\n8_19,3,{ref.KNOT_8_19}\nbad,2,1 z\n")
    code, text = run(["table", str(csv_path)])
    assert code == 0
    recs = [json.loads(line) for line in text.splitlines()]
    assert [r["name"] for r in recs] == ["trefoil", "8_19", "bad"]
    assert LaurentPoly.from_json(recs[0]["jones"], ("q",)) == ref.TREFOIL_JONES
    assert LaurentPoly.from_json(recs[1]["alexander"], ("x",)) == ref.ALEXANDER_8_19
    assert recs[2]["error"]["type"] == "input" and "'z'" in recs[2]["error"]["message"]
    code3, text3 = run(["table", str(csv_path), "--jobs", "3"])
    assert code3 == 0
    assert [_untimed(line) for line in text3.splitlines()] == [_untimed(line) for line in text.splitlines()]


def _untimed(line):
    rec = json.loads(line)
    rec.pop("timings", None)
    return rec


def test_table_empty_and_unreadable(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(["table", str(empty)]) == (0, "")
    assert run(["table", str(tmp_path / "missing.csv")])[0] == 2


def test_pool_preserves_order():
    tasks = list(range(12, 0, -1))
    assert run_pool(_slow_square, tasks, 4) == [t * t for t in tasks]


def _slow_square(t):
    import time
    time.sleep(0.01 * t)
    return t * t


def _markers(svg):
    root = ET.fromstring(svg.split("\n", 1)[1])
    return [el for el in root.iter() if el.get("class") == "marker"]


def test_render_trefoil(tmp_path):
    out = tmp_path / "t.svg"
    assert run(["render", "--braid", "1 1 1", "--strands", "2", "--out", str(out)])[0] == 0
    svg = out.read_text()
    root = ET.fromstring(svg.split("\n", 1)[1])
    assert root.get("version") == "1.1"
    markers = _markers(svg)
    assert len(markers) == 5
    assert all(m.find("{http://www.w3.org/2000/svg}text").text for m in markers)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_render_identity(n):
    code, svg = run(["render", "--braid", "", "--strands", str(n)])
    assert code == 0
    pairs = {}
    for m in _markers(svg):
        key = (m.get("data-curve"), m.get("data-circle"))
        pairs[key] = pairs.get(key, 0) + 1
    assert pairs == {(str(k), str(k)): 2 for k in range(1, n)}


def test_render_bad_braid():
    assert run(["render", "--braid", "3", "--strands", "2"])[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lagrangian_knots", "invariant", "--braid", "1 1 1",
                           "--strands", "2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["strands"] == 2
