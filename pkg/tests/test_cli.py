import json

import pytest

from flowtrace.cli import main
from flowtrace.export import verify_bundle
from flowtrace.fixtures import generate_fixture, write_fixture


@pytest.fixture(scope="module")
def straight_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("straight")
    write_fixture(generate_fixture("straight-channel"), d)
    return d


def _cfg_args(d):
    return ["--config", str(d / "config.txt")]


def test_fixture_subcommand(tmp_path, capsys):
    rc = main(["fixture", "y-merge", "--out", str(tmp_path / "ym")])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["truth"]["expected_in_degree_2_nodes"] == 1
    assert (tmp_path / "ym" / "config.txt").is_file()
    assert (tmp_path / "ym" / "truth.json").is_file()


def test_fixture_param_override(tmp_path, capsys):
    rc = main(["fixture", "straight-channel", "--out", str(tmp_path / "s"),
               "--param", "length=60"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["truth"]["breakthrough_frame"] == 15


def test_timemap_subcommand(straight_dir, tmp_path, capsys):
    out = tmp_path / "o"
    rc = main(["timemap", str(straight_dir), *_cfg_args(straight_dir),
               "--out", str(out)])
    assert rc == 0
    assert (out / "timemap.png").is_file()
    assert (out / "timemap.bin").is_file()
    report = json.loads(capsys.readouterr().out)
    assert "timemap" in report["timings_s"]


def test_graph_subcommand(straight_dir, tmp_path, capsys):
    out = tmp_path / "o"
    rc = main(["graph", str(straight_dir), *_cfg_args(straight_dir),
               "--out", str(out), "--simplify", "off"])
    assert rc == 0
    data = json.loads((out / "graph.json").read_text())
    assert len(data["nodes"]) == 30
    report = json.loads(capsys.readouterr().out)
    assert report["breakthrough_frame"] == 30


def test_all_subcommand_writes_bundle(straight_dir, tmp_path):
    out = tmp_path / "o"
    rc = main(["all", str(straight_dir), *_cfg_args(straight_dir),
               "--out", str(out)])
    assert rc == 0
    manifest = verify_bundle(out / "bundle")
    assert manifest["breakthrough_frame"] == 30
    assert manifest["layout_present"] is True
    assert (out / "report" / "metrics_area.png").is_file()


def test_layout_without_breakthrough_exits_3(tmp_path):
    d = tmp_path / "ws"
    write_fixture(generate_fixture("wide-split"), d)
    rc = main(["layout", str(d), "--config", str(d / "config.txt"),
               "--out", str(tmp_path / "o")])
    assert rc == 3


def test_missing_input_exits_2(tmp_path):
    rc = main(["timemap", str(tmp_path / "missing"),
               "--out", str(tmp_path / "o")])
    assert rc == 2


def test_bad_flag_value_exits_1(straight_dir, tmp_path):
    rc = main(["timemap", str(straight_dir), "--beta", "2.0",
               "--out", str(tmp_path / "o")])
    assert rc == 1


def test_bad_usage_exits_1():
    assert main(["frobnicate"]) == 1


def test_flag_overrides_config(straight_dir, tmp_path, capsys):
    # absurd gamma quantizes everything into few fronts
    out = tmp_path / "o"
    rc = main(["graph", str(straight_dir), *_cfg_args(straight_dir),
               "--gamma", "100000", "--out", str(out), "--simplify", "off"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["fronts_quantized"] < report["fronts_raw"]
