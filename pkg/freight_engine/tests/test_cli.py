import orjson
import pytest

from freight_engine.config import config
from freight_engine.logging_utils import RUN_LOG_FILE, summarize_ids
from freight_engine.main import main
from freight_engine.tests.factories import write_toy_config


def _run(*argv):
    return main([str(a) for a in argv])


def test_validate(tmp_path, capsys):
    config = write_toy_config(tmp_path)
    assert _run("validate", "--config", config) == 0
    out = capsys.readouterr().out
    assert "nodes=6 links=12" in out
    assert "intermodal" in out


def test_validate_rejects_unpaired_rail(tmp_path, capsys):
    config = write_toy_config(tmp_path)
    links = tmp_path / "links.csv"
    links.write_text(
        links.read_text(encoding="utf-8").replace("60.0,6,hurricane", "60.0,,hurricane"), encoding="utf-8"
    )
    assert _run("validate", "--config", config) == 1
    assert "MissingReverseRail link=" in capsys.readouterr().err


@pytest.mark.parametrize("old,new,name", [
    ("940.0,15.0", "-5.0,15.0", "links.csv"),
    ("940.0,15.0,90.0,130.0", "940.0,15.0,nan,nan", "links.csv"),
    ("0,centroid,IL", "-1,centroid,IL", "nodes.csv"),
])
def test_validate_rejects_bad_field_values(tmp_path, capsys, old, new, name):
    config = write_toy_config(tmp_path)
    table = tmp_path / name
    table.write_text(table.read_text(encoding="utf-8").replace(old, new, 1), encoding="utf-8")
    assert _run("validate", "--config", config) == 1
    err = capsys.readouterr().err
    assert "InvalidFieldValue" in err or "NonPositiveCapacity" in err


def test_missing_config(tmp_path, capsys):
    assert _run("validate", "--config", tmp_path / "nope.json") == 3
    assert "ConfigError" in capsys.readouterr().err


def test_unknown_disaster_preset(tmp_path):
    config = write_toy_config(tmp_path, disaster="volcano")
    assert _run("assign", "--config", config) == 3


def test_threads_must_be_positive(tmp_path):
    config = write_toy_config(tmp_path)
    with pytest.raises(SystemExit):
        _run("saa", "--config", config, "--threads", "0")


def test_base_case_assignment_is_reproducible(tmp_path):
    config = write_toy_config(tmp_path)
    assert _run("assign", "--config", config, "--base-case", "--out", tmp_path / "a") == 0
    assert _run("assign", "--config", config, "--base-case", "--out", tmp_path / "b") == 0
    for name in ("link_flows.csv", "class_flows.csv", "ton_miles.json", "solution.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    summary = orjson.loads((tmp_path / "a" / "solution.json").read_bytes())
    assert summary["label"] == "base"
    assert summary["converged"]


def test_scenario_assignment_uses_seed(tmp_path):
    config = write_toy_config(tmp_path)
    assert _run("assign", "--config", config, "--seed", 5, "--out", tmp_path / "a") == 0
    summary = orjson.loads((tmp_path / "a" / "solution.json").read_bytes())
    assert summary["scenario_seeds"] == [5]


def test_ton_miles_scale_with_tons_per_truck(tmp_path):
    light = write_toy_config(tmp_path)
    heavy_dir = tmp_path / "heavy"
    heavy_dir.mkdir()
    heavy = write_toy_config(heavy_dir, ton_miles={"tons_per_truck": 32.0, "tons_per_intermodal_unit": 0.001})
    assert _run("assign", "--config", light, "--base-case", "--out", tmp_path / "light") == 0
    assert _run("assign", "--config", heavy, "--base-case", "--out", tmp_path / "heavy_out") == 0

    light_flows = orjson.loads((tmp_path / "light" / "ton_miles.json").read_bytes())
    heavy_flows = orjson.loads((tmp_path / "heavy_out" / "ton_miles.json").read_bytes())
    # 多式联运在道路上的吨位被压到可忽略，只比较纯卡车部分
    assert (tmp_path / "light" / "class_flows.csv").read_bytes() == (tmp_path / "heavy_out" / "class_flows.csv").read_bytes()
    assert heavy_flows["daily"]["truck"]["contiguous_us"] == pytest.approx(
        2.0 * light_flows["daily"]["truck"]["contiguous_us"], rel=1e-3
    )


def test_saa_writes_reproducible_report(tmp_path, capsys):
    config = write_toy_config(tmp_path)
    assert _run("saa", "--config", config, "--out", tmp_path / "a") == 0
    assert "Total cost (hours/day)" in capsys.readouterr().out
    assert _run("saa", "--config", config, "--out", tmp_path / "b", "--threads", 2) == 0

    report = orjson.loads((tmp_path / "a" / "saa_report.json").read_bytes())
    assert len(report["candidates"]) == 2
    assert len(report["eval_seeds"]) == 4
    assert "runtime_sec" not in report
    assert (tmp_path / "a" / "saa_report.json").read_bytes() == (tmp_path / "b" / "saa_report.json").read_bytes()
    assert (tmp_path / "a" / "link_flows.csv").read_bytes() == (tmp_path / "b" / "link_flows.csv").read_bytes()

    meta = orjson.loads((tmp_path / "a" / "run_meta.json").read_bytes())
    assert meta["runtime_sec"] >= 0.0


def test_seed_override_changes_samples(tmp_path):
    config = write_toy_config(tmp_path)
    assert _run("saa", "--config", config, "--out", tmp_path / "a") == 0
    assert _run("saa", "--config", config, "--out", tmp_path / "b", "--seed", 99) == 0
    a = orjson.loads((tmp_path / "a" / "saa_report.json").read_bytes())
    b = orjson.loads((tmp_path / "b" / "saa_report.json").read_bytes())
    assert a["eval_seeds"] != b["eval_seeds"]
    assert b["config"]["base_seed"] == 99


def test_report_reproduces_saa_tables(tmp_path):
    config = write_toy_config(tmp_path)
    out = tmp_path / "out"
    assert _run("saa", "--config", config) == 0
    before = {name: (out / name).read_bytes() for name in ("cost_table.txt", "ton_miles.txt", "ton_miles.json")}
    assert _run("report", "--config", config) == 0
    after = {name: (out / name).read_bytes() for name in before}
    assert before == after


def test_report_reproduces_assign_tables(tmp_path):
    config = write_toy_config(tmp_path)
    out = tmp_path / "out"
    assert _run("assign", "--config", config, "--base-case") == 0
    before = (out / "ton_miles.txt").read_bytes()
    assert _run("report", "--config", config) == 0
    assert (out / "ton_miles.txt").read_bytes() == before
    assert not (out / "cost_table.txt").exists()


def test_report_without_artifacts(tmp_path, capsys):
    config = write_toy_config(tmp_path)
    assert _run("report", "--config", config) == 3
    assert "MissingArtifact" in capsys.readouterr().err


def test_report_on_corrupt_json(tmp_path, capsys):
    config = write_toy_config(tmp_path)
    assert _run("saa", "--config", config) == 0
    (tmp_path / "out" / "saa_report.json").write_text("{truncated", encoding="utf-8")
    assert _run("report", "--config", config) == 3
    assert "CorruptArtifact" in capsys.readouterr().err


def test_sample_exports_scenario(tmp_path):
    config = write_toy_config(tmp_path)
    assert _run("sample", "--config", config, "--seed", 5) == 0
    text = (tmp_path / "out" / "scenario_hurricane_5.csv").read_text(encoding="utf-8")
    assert text.startswith("link_id,kind,cap_lo,cap_hi,capacity,degraded\n")
    assert len(text.strip().splitlines()) == 13


def test_compare_runs_base_and_disasters(tmp_path, capsys):
    config = write_toy_config(tmp_path, compare=["hurricane.env", "tornado"])
    assert _run("compare", "--config", config) == 0
    root = tmp_path / "out" / "compare"
    summary = orjson.loads((root / "compare.json").read_bytes())
    assert set(summary) == {"base", "hurricane", "tornado"}
    for name in ("base", "hurricane", "tornado"):
        assert (root / name / "link_flows.csv").exists()
    assert (root / "hurricane" / "saa_report.json").exists()
    out = capsys.readouterr().out
    assert "hurricane Δ%" in out
    assert "tornado" in out


def test_compare_needs_a_disaster(tmp_path):
    config = write_toy_config(tmp_path, disaster=None)
    assert _run("compare", "--config", config) == 3


def test_run_log_is_written_when_enabled(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "FREIGHT_RUN_LOG", True)
    config_file = write_toy_config(tmp_path)
    assert _run("validate", "--config", config_file) == 0
    text = (tmp_path / "out" / RUN_LOG_FILE).read_text(encoding="utf-8")
    assert "开始执行 validate" in text


def test_summarize_ids():
    assert summarize_ids([1, 2, 3]) == "1, 2, 3"
    assert summarize_ids(list(range(12)), limit=3) == "0, 1, 2, ... (共 12 个)"
