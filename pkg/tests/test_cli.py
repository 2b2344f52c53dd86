import csv
import json

import pytest

from campcache.cli import main

GEN = ["gen", "--spec", "three-cost", "--seed", "1", "--keys", "1000", "--requests", "10000"]


@pytest.fixture
def trace_file(tmp_path):
    path = tmp_path / "t.csv"
    assert main(GEN + ["--out", str(path)]) == 0
    return path


def test_gen_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(GEN + ["--out", str(a)]) == 0
    assert main(GEN + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("key,size,cost,phase\n")


def test_gen_model_overrides(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["gen", "--spec", "equi-size", "--keys", "50", "--requests", "500",
                 "--size-model", "const:77", "--phases", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {r["size"] for r in rows} == {"77"}
    assert {r["phase"] for r in rows} == {"1", "2"}


def test_run_emits_one_row(trace_file, tmp_path, capsys):
    out = tmp_path / "r.csv"
    occ = tmp_path / "occ.csv"
    rc = main(["run", "--policy", "camp", "--precision", "5", "--cache-ratio", "0.25",
               "--trace", str(trace_file), "--out", str(out), "--occupancy-out", str(occ)])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1
    assert rows[0]["policy"] == "camp" and rows[0]["precision"] == "5"
    assert list(rows[0]) == ["policy", "precision", "cache_ratio", "trace", "miss_rate",
                             "cost_miss_ratio", "heap_visits", "queues"]
    assert occ.read_text().startswith("request_index,phase,fraction\n")
    err = capsys.readouterr().err
    config = json.loads(err.split("# config: ", 1)[1].splitlines()[0])
    assert config["capacity"] > 0 and config["precision"] == "5"


def test_sweep_row_count(trace_file, tmp_path):
    out = tmp_path / "s.csv"
    rc = main(["sweep", "--policies", "lru,camp,gds", "--ratios", "0.1,0.25,0.5,0.75",
               "--trace", str(trace_file), "--out", str(out)])
    assert rc == 0
    assert len(list(csv.DictReader(out.open()))) == 12


def test_sweep_with_pool_config_and_plots(trace_file, tmp_path):
    pytest.importorskip("matplotlib")
    cfg = tmp_path / "pools.json"
    cfg.write_text(json.dumps({"pool_spec": {"boundaries": [1, 100, 10000], "allocation": "cost"}}))
    out = tmp_path / "s.csv"
    rc = main(["sweep", "--policies", "pooled-lru,camp", "--ratios", "0.5", "--precision", "1,inf",
               "--pool-config", str(cfg), "--trace", str(trace_file), "--out", str(out),
               "--emit-plots", str(tmp_path / "plots"), "--occupancy-out", str(tmp_path / "o.csv")])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert [(r["policy"], r["precision"]) for r in rows] == [("pooled-lru", ""), ("camp", "1"), ("camp", "inf")]
    assert sorted(p.name for p in (tmp_path / "plots").iterdir()) == [
        "t_cost_miss_ratio.png", "t_heap_visits.png", "t_miss_rate.png"]


@pytest.mark.parametrize("argv", [
    ["run", "--policy", "lru", "--precision", "3", "--cache-ratio", "0.2"],
    ["run", "--policy", "camp", "--pool-config", "x.json", "--cache-ratio", "0.2"],
    ["sweep", "--policies", "lru,bogus", "--ratios", "0.2"],
    ["sweep", "--policies", "lru", "--ratios", ""],
])
def test_conflicting_or_bad_flags(trace_file, argv, capsys):
    assert main(argv + ["--trace", str(trace_file)]) != 0
    assert "error" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["run", "--trace", str(tmp_path / "none.csv"), "--cache-ratio", "0.5"]) != 0
    assert "error" in capsys.readouterr().err


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        main(["run", "--bogus"])
    assert exc.value.code != 0
