import csv
import io
import json
import math
import sys

import pytest
from loguru import logger

from polygon_extrema.cli.main import main
from polygon_extrema.core import optimizer
from polygon_extrema.core.config import OUTPUT_DIR_ENV
from polygon_extrema.core.optimizer import StartOutcome
from polygon_extrema.core.recorder import read_trace
from polygon_extrema.core.reinhardt import SymmetryKind, enumerate_signatures


def _csv(text):
    return {row["inequality"]: row for row in csv.DictReader(io.StringIO(text))}


def _census(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 1
    return rows[0]


@pytest.fixture(autouse=True)
def output_dir(tmp_path, monkeypatch):
    out = tmp_path / "out"
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(out))
    return out


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


def test_bounds_csv(capsys):
    assert main(["bounds", "--n", "6", "--d", "1", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert len(rows) == 7
    assert float(rows["ReinhardtPerimeterDiameter"]["bound"]) == pytest.approx(12 * math.sin(math.pi / 12))


def test_bounds_for_power_of_two(capsys):
    assert main(["bounds", "--n", "4", "--d", "1", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert rows["ReinhardtPerimeterDiameter"]["attainable"] == "no"
    assert rows["GashkovWidthDiameter"]["attainable"] == "no"
    assert rows["GashkovPerimeterWidth"]["attainable"] == "no"


def test_bounds_pal_row(capsys):
    assert main(["bounds", "--n", "3", "--w", "1"]) == 0
    line = next(l for l in capsys.readouterr().out.splitlines() if l.startswith("PalAreaWidth"))
    assert float(line.split()[2]) == pytest.approx(1 / math.sqrt(3))


def test_bounds_catalog(capsys):
    assert main(["bounds", "--catalog"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 12


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bounds", "--n", "2"],
        ["bounds"],
        ["bounds", "--n", "5", "--d", "-1"],
        ["construct", "regular"],
        ["optimize", "--objective", "area", "--constraint", "width=1", "--n", "5"],
        ["optimize", "--objective", "area", "--constraint", "diameter=1", "--n", "5", "--graham"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_construct_reinhardt_thirty_with_verify(tmp_path, capsys):
    path = tmp_path / "r30.json"
    code = main(["construct", "reinhardt", "--n", "30", "--signature", "auto-regular", "--verify", "--output", str(path)])
    assert code == 0
    out = capsys.readouterr().out
    rows = _csv(out.split(str(path))[0])
    assert rows["ReinhardtPerimeterDiameter"]["equality"] == "yes"
    assert rows["GashkovWidthDiameter"]["equality"] == "yes"
    doc = json.loads(path.read_text())
    assert doc["kind"] == "reinhardt"
    assert len(doc["vertices"]) == 30
    assert doc["signature"] == [10, 10, 10]
    assert len(doc["bounds"]) == 7


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "reinhardt", "--n", "4"],
        ["construct", "reinhardt", "--n", "4", "--signature", "2,1,1"],
        ["construct", "reuleaux", "--signature", "1,1"],
    ],
)
def test_invalid_signatures_exit_3(argv, capsys):
    assert main(argv) == 3
    assert "error:" in capsys.readouterr().err


def test_construct_audet_ninin_default_location(output_dir):
    assert main(["construct", "audet-ninin", "--n", "7", "--w", "1"]) == 0
    doc = json.loads((output_dir / "audet-ninin-n7.json").read_text())
    xs = [v[0] for v in doc["vertices"]]
    ys = [v[1] for v in doc["vertices"]]
    perimeter = sum(
        math.hypot(xs[i - 1] - xs[i], ys[i - 1] - ys[i]) for i in range(len(xs))
    )
    assert perimeter == pytest.approx(7 * 2 / math.sqrt(3))


def test_enumerate_census(capsys):
    assert main(["enumerate", "--n", "4", "--census"]) == 0
    row = _census(capsys.readouterr().out)
    assert (row["periodic"], row["sporadic"]) == ("0", "0")
    assert main(["enumerate", "--n", "3", "--census"]) == 0
    row = _census(capsys.readouterr().out)
    assert (row["periodic"], row["sporadic"]) == ("1", "0")
    assert main(["enumerate", "--n", "30", "--census", "--mode", "exact"]) == 0
    row = _census(capsys.readouterr().out)
    assert int(row["sporadic"]) >= 1


def test_enumerate_save(output_dir, capsys):
    assert main(["enumerate", "--n", "15", "--save"]) == 0
    printed = capsys.readouterr().out
    assert (output_dir / "signatures-n15.csv").read_text() == printed
    assert "15,3,5 5 5,periodic,3" in printed


def test_enumerate_cap(capsys):
    assert main(["enumerate", "--n", "101"]) == 4
    assert "cap" in capsys.readouterr().err


def test_enumerate_below_cap_but_past_table_limit_exits_4(capsys):
    assert main(["enumerate", "--n", "64", "--census"]) == 4
    err = capsys.readouterr().err
    assert "sign-pattern table limit" in err
    assert "Traceback" not in err


def test_optimize_quadrilateral(tmp_path, capsys):
    path = tmp_path / "quad.json"
    argv = ["optimize", "--objective", "area", "--constraint", "diameter=1", "--n", "4",
            "--profile", "quick", "--starts", "6", "--output", str(path)]
    assert main(argv) == 0
    doc = json.loads(path.read_text())
    assert doc["kind"] == "optimized"
    assert abs(doc["optimization"]["value"] - 0.5) <= 1e-6
    assert doc["provenance"]["seed"] == 0
    assert len(doc["provenance"]["config_hash"]) == 12
    first = path.read_bytes()
    assert main(argv) == 0
    assert path.read_bytes() == first


def test_optimize_triangle_perimeter(tmp_path, capsys):
    path = tmp_path / "tri.json"
    argv = ["optimize", "--objective", "perimeter", "--constraint", "diameter=1", "--n", "3",
            "--profile", "quick", "--starts", "4", "--output", str(path)]
    assert main(argv) == 0
    assert abs(json.loads(path.read_text())["optimization"]["value"] - 3.0) <= 1e-6


def test_optimize_graham_hexagon(output_dir, capsys):
    argv = ["optimize", "--objective", "area", "--constraint", "diameter=1", "--n", "6", "--graham",
            "--profile", "quick", "--starts", "12", "--seed", "1"]
    assert main(argv) == 0
    doc = json.loads((output_dir / "optimized-n6-graham-area-s1.json").read_text())
    assert doc["optimization"]["method"] == "graham"
    assert doc["optimization"]["value"] > 3 * math.sqrt(3) / 8 + 0.02


def test_optimize_infeasible_exit_5(monkeypatch, capsys):
    def fake_start(problem, config, index, seed):
        return StartOutcome(index, None, math.nan, False, False)

    monkeypatch.setattr(optimizer, "_search_start", fake_start)
    argv = ["optimize", "--objective", "area", "--constraint", "diameter=1", "--n", "5", "--starts", "2"]
    assert main(argv) == 5


def test_render_and_determinism(tmp_path, capsys):
    doc = tmp_path / "r30.json"
    assert main(["construct", "reinhardt", "--n", "30", "--output", str(doc)]) == 0
    svg = tmp_path / "r30.svg"
    assert main(["render", str(doc), "--output", str(svg), "--diameter-graph"]) == 0
    text = svg.read_text()
    assert text.count('class="arc"') == 3
    assert main(["render", str(doc), "--output", str(svg), "--diameter-graph"]) == 0
    assert svg.read_text() == text
    assert main(["render", str(doc)]) == 0
    assert (tmp_path / "r30.svg").exists()


def test_render_malformed_document_exit_6(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["render", str(bad)]) == 6
    assert main(["render", str(tmp_path / "missing.json")]) == 6
    assert main(["verify", str(bad)]) == 6


def test_verify_regular_pentagon(tmp_path, capsys):
    path = tmp_path / "pentagon.json"
    assert main(["construct", "regular", "--n", "5", "--d", "1", "--output", str(path)]) == 0
    capsys.readouterr()
    assert main(["verify", str(path), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    entry = next(e for e in payload["entries"] if e["inequality"] == "ReinhardtAreaDiameter")
    assert entry["equality"] is True
    assert payload["ok"] is True


def test_verify_constructed_fifteen_gon(tmp_path, capsys):
    path = tmp_path / "r15.json"
    assert main(["construct", "reinhardt", "--n", "15", "--output", str(path)]) == 0
    capsys.readouterr()
    assert main(["verify", str(path)]) == 0
    rows = _csv(capsys.readouterr().out)
    assert rows["ReinhardtPerimeterDiameter"]["equality"] == "yes"


def test_verify_corrupted_document_exit_7(tmp_path, capsys):
    path = tmp_path / "square.json"
    assert main(["construct", "regular", "--n", "4", "--side", "1", "--output", str(path)]) == 0
    doc = json.loads(path.read_text())
    doc["vertices"][1] = [doc["vertices"][1][0] - 0.8, doc["vertices"][1][1] + 0.5]
    path.write_text(json.dumps(doc))
    assert main(["verify", str(path)]) == 7
    assert "malformed polygon" in capsys.readouterr().err


def test_log_json_streams_every_start(tmp_path, capsys):
    argv = ["--log-json", "optimize", "--objective", "area", "--constraint", "diameter=1", "--n", "4",
            "--profile", "quick", "--starts", "3", "--output", str(tmp_path / "quad.json")]
    assert main(argv) == 0
    records = [json.loads(line)["record"] for line in capsys.readouterr().err.splitlines() if line.startswith("{")]
    starts = [r["extra"]["start"] for r in records if "start" in r["extra"]]
    assert starts == [0, 1, 2]
    assert all(r["extra"]["value"] > 0 for r in records if r["extra"].get("feasible"))


def test_render_sporadic_thirty_gon(tmp_path, capsys):
    sporadic = next(c for c, cls in enumerate_signatures(30) if cls.kind is SymmetryKind.SPORADIC)
    doc = tmp_path / "sporadic30.json"
    signature = ",".join(str(x) for x in sporadic.parts)
    assert main(["construct", "reinhardt", "--n", "30", "--signature", signature, "--verify", "--output", str(doc)]) == 0
    rows = _csv(capsys.readouterr().out.split(str(doc))[0])
    assert rows["ReinhardtPerimeterDiameter"]["equality"] == "yes"
    assert json.loads(doc.read_text())["signature"] == list(sporadic.parts)
    svg = tmp_path / "sporadic30.svg"
    assert main(["render", str(doc), "--output", str(svg), "--labels"]) == 0
    text = svg.read_text()
    assert text.count('class="arc"') == sporadic.m
    assert text.count("<text ") == 30


def test_optimize_record_writes_search_trace(tmp_path):
    trace_path = tmp_path / "traces" / "quad.jsonl.zst"
    argv = ["optimize", "--objective", "area", "--constraint", "diameter=1", "--n", "4",
            "--profile", "quick", "--starts", "3", "--seed", "2",
            "--record", str(trace_path), "--output", str(tmp_path / "quad.json")]
    assert main(argv) == 0
    trace = read_trace(str(trace_path))
    assert (trace.header.objective, trace.header.constraint, trace.header.n) == ("area", "diameter", 4)
    assert trace.header.seed == 2
    assert len(trace.starts) == 3
    saved = json.loads((tmp_path / "quad.json").read_text())
    assert len(trace.best.vertices) == len(saved["vertices"])
