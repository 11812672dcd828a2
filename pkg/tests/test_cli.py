import csv
import json

import pytest

from vcminimal.cli import main
from vcminimal.formats import CSV_COLUMNS, dumps_instance, loads_instance, loads_rectangle
from vcminimal.generators import GeneratorSpec, generate


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def lines(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


EMPTY_DOC = {"version": 1, "ground_size": 3, "balls": [], "left_size": 2, "adjacency": [[], []]}
COMPLETE_DOC = {"version": 1, "ground_size": 3, "balls": [[0, 1, 2]], "left_size": 2, "adjacency": [[0, 1, 2], [0, 1, 2]]}


def test_gen_forest_then_complexity(tmp_path, capsys):
    out = tmp_path / "f.json"
    assert main(["gen", "--kind", "forest", "--left", "10", "--right", "20", "--seed", "7", "--out", str(out)]) == 0
    assert main(["complexity", "-i", str(out)]) == 0
    records = lines(capsys)
    assert len(records) == 11
    assert records[-1]["max_complexity"] <= 2 and records[-1]["bound"] == 3


def test_gen_zero_flips_is_empty(tmp_path):
    out = tmp_path / "z.json"
    main(["gen", "--kind", "laminar-flip", "--left", "5", "--right", "9", "--max-flips", "0", "--seed", "1", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert doc["adjacency"] == [[]] * 5 and doc["bound"] == 1


def test_gen_is_byte_deterministic(tmp_path):
    args = ["gen", "--kind", "padic", "--left", "12", "--right", "30", "--p", "3", "--depth", "3", "--seed", "42"]
    main(args + ["--out", str(tmp_path / "a.json")])
    main(args + ["--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_gen_count_splits_seeds(tmp_path):
    main(["gen", "--kind", "forest", "--left", "4", "--right", "6", "--seed", "3", "--out", str(tmp_path / "c"), "--count", "3"])
    files = sorted((tmp_path / "c").iterdir())
    assert [f.name for f in files] == ["0000.json", "0001.json", "0002.json"]
    seeds = {json.loads(f.read_text())["metadata"]["seed"] for f in files}
    assert len(seeds) == 3


def test_gen_bad_flags_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["gen", "--kind", "hexagonal", "--left", "1", "--right", "1", "--seed", "1", "--out", "x"])
    assert info.value.code == 2


def test_gen_bad_sizes_exit_two(tmp_path):
    assert main(["gen", "--kind", "forest", "--left", "0", "--right", "3", "--seed", "1", "--out", str(tmp_path / "x")]) == 2


def test_complexity_examples(tmp_path, capsys):
    main(["complexity", "-i", write(tmp_path / "e.json", EMPTY_DOC)])
    assert lines(capsys)[-1] == {"max_complexity": 0, "least_N": 1, "bound": 1}
    main(["complexity", "-i", write(tmp_path / "c.json", COMPLETE_DOC)])
    assert lines(capsys)[-1] == {"max_complexity": 1, "least_N": 2, "bound": 2}


def test_complexity_inexpressible_exit_two(tmp_path, capsys):
    doc = dict(EMPTY_DOC, balls=[[0, 1]], adjacency=[[2], []])
    assert main(["complexity", "-i", write(tmp_path / "x.json", doc)]) == 2
    assert "left vertex 0" in capsys.readouterr().err


def test_unknown_field_rejected(tmp_path):
    doc = dict(EMPTY_DOC, colour="blue")
    assert main(["complexity", "-i", write(tmp_path / "x.json", doc)]) == 2
    doc = dict(EMPTY_DOC, metadata={"kind": "forest", "when": "now"})
    assert main(["complexity", "-i", write(tmp_path / "y.json", doc)]) == 2


def test_non_directed_file_rejected(tmp_path):
    doc = dict(EMPTY_DOC, balls=[[0, 1], [1, 2]])
    assert main(["extract", "-i", write(tmp_path / "x.json", doc)]) == 2


def test_extract_examples(tmp_path, capsys):
    main(["extract", "-i", write(tmp_path / "e.json", EMPTY_DOC)])
    (rec,) = lines(capsys)
    assert (rec["rect_kind"], rec["out_left"], rec["out_right"]) == ("empty", 2, 3)
    assert rec["guarantee_ok"] is True and rec["branches"] == ["base"]
    main(["extract", "-i", write(tmp_path / "c.json", COMPLETE_DOC)])
    (rec,) = lines(capsys)
    assert (rec["rect_kind"], rec["out_left"], rec["out_right"]) == ("complete", 2, 3)


def test_extract_trace_claims_oracle(tmp_path, capsys):
    path = tmp_path / "i.json"
    path.write_text(dumps_instance(generate(GeneratorSpec("laminar-flip", 12, 40, 5, p=3, max_flips=5))))
    assert main(["extract", "-i", str(path), "--trace", "--check-claims", "--oracle"]) == 0
    out = lines(capsys)
    record, levels = out[0], out[1:]
    assert len(levels) == len(record["branches"])
    assert all(lv["claims_checked"] for lv in levels)
    assert isinstance(record["oracle_minside"], int)
    assert record["oracle_minside"] >= min(record["out_left"], record["out_right"])


def test_extract_oracle_over_budget_is_inconclusive(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("VCMINIMAL_ORACLE_MAX_SIDE", "2")
    path = tmp_path / "i.json"
    path.write_text(dumps_instance(generate(GeneratorSpec("padic", 10, 10, 5))))
    assert main(["extract", "-i", str(path), "--oracle"]) == 0
    assert lines(capsys)[0]["oracle_minside"] == "inconclusive"


def test_extract_rejects_tampered_decomposition(tmp_path):
    doc = dict(COMPLETE_DOC, decompositions=[[{"outer": 0, "holes": []}], []])
    assert main(["extract", "-i", write(tmp_path / "x.json", doc)]) == 2


def test_extract_records_are_deterministic(tmp_path, capsys):
    path = tmp_path / "i.json"
    path.write_text(dumps_instance(generate(GeneratorSpec("laminar-flip", 30, 30, 9, max_flips=6))))
    main(["extract", "-i", str(path), "--trace"])
    first = capsys.readouterr().out
    main(["extract", "-i", str(path), "--trace"])
    assert capsys.readouterr().out == first


def test_verify_paths(tmp_path, capsys):
    inst = write(tmp_path / "c.json", COMPLETE_DOC)
    rect = tmp_path / "r.json"
    main(["extract", "-i", inst, "--rect-out", str(rect)])
    capsys.readouterr()
    assert main(["verify", "-i", inst, "-r", str(rect)]) == 0

    doc = json.loads(rect.read_text())
    wrong = write(tmp_path / "w.json", dict(doc, kind="empty"))
    assert main(["verify", "-i", inst, "-r", wrong]) == 1
    capsys.readouterr()

    tampered_doc = {"version": 1, "ground_size": 3, "balls": [[0, 1, 2], [0]], "left_size": 2,
                    "adjacency": [[1, 2], [0, 1, 2]]}
    tampered_inst = write(tmp_path / "t.json", tampered_doc)
    assert main(["verify", "-i", tampered_inst, "-r", str(rect)]) == 1
    assert lines(capsys)[-1] == {"valid": False, "counterexample": [0, 0]}


def test_bench_csv(tmp_path):
    out = tmp_path / "b.csv"
    args = ["bench", "--trials", "3", "--sizes", "12", "--kinds", "padic", "--seed", "4", "--out", str(out)]
    assert main(args) == 0
    rows = list(csv.reader(out.open()))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4
    assert all(r[CSV_COLUMNS.index("guarantee_ok")] == "true" for r in rows[1:])
    first = out.read_bytes()
    main(args)
    assert out.read_bytes() == first


def test_bench_parallel_matches_serial(tmp_path):
    base = ["bench", "--trials", "2", "--sizes", "8,20", "--seed", "4", "--no-oracle"]
    main(base + ["--out", str(tmp_path / "s.csv")])
    main(base + ["--out", str(tmp_path / "p.csv"), "--jobs", "2"])
    assert (tmp_path / "s.csv").read_bytes() == (tmp_path / "p.csv").read_bytes()


def test_bench_bad_kind_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["bench", "--trials", "1", "--sizes", "4", "--kinds", "x", "--seed", "1", "--out", str(tmp_path / "b.csv")])
    assert info.value.code == 2


def test_round_trip_and_rectangle_format():
    inst = generate(GeneratorSpec("laminar-flip", 9, 17, 2, max_flips=4))
    assert loads_instance(dumps_instance(inst)) == inst
    rect = loads_rectangle('{"version":1,"kind":"empty","left":[1,0],"right":[3]}', 5)
    assert rect.left == (0, 1) and rect.right.members == (3,)
