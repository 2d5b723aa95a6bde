import math

import pytest

from flowtrace.config import (ColormapSpec, ConfigError, DatasetConfig, Rect,
                              apply_config_values, load_config,
                              parse_config_text)


def test_rect_parse_roundtrip():
    r = Rect.parse(" 3, 4 , 10,20 ")
    assert r == Rect(3, 4, 10, 20)
    assert Rect.parse(str(r)) == r


@pytest.mark.parametrize("text", ["1,2,3", "a,b,c,d", "1,2,0,5", "1,2,5,-1"])
def test_rect_parse_rejects(text):
    with pytest.raises(ConfigError):
        Rect.parse(text)


def test_rect_geometry():
    r = Rect(2, 3, 4, 5)
    assert r.within(6, 8)
    assert not r.within(5, 8)
    assert r.intersects(Rect(5, 7, 2, 2))
    assert not r.intersects(Rect(6, 3, 2, 2))
    rs, cs = r.slices()
    assert (rs.start, rs.stop, cs.start, cs.stop) == (3, 8, 2, 6)


def test_config_validation():
    with pytest.raises(ConfigError):
        DatasetConfig(threshold_beta=1.5)
    with pytest.raises(ConfigError):
        DatasetConfig(gamma=0)
    with pytest.raises(ConfigError):
        DatasetConfig(frame_period=0)
    with pytest.raises(ConfigError):
        DatasetConfig(jump_ratio=1.0)
    with pytest.raises(ConfigError):  # overlapping regions
        DatasetConfig(inlet_region=Rect(0, 0, 4, 4),
                      outlet_region=Rect(2, 2, 4, 4))


def test_parse_config_text():
    cfg = parse_config_text("""
# comment
beta = 0.4
gamma = 50
inlet = 0,0,2,10   # trailing comment
outlet = 20,0,2,10
frame_period = 0.5
colormap = plasma
period_frames = 16
""")
    assert cfg.threshold_beta == 0.4
    assert cfg.gamma == 50
    assert cfg.inlet_region == Rect(0, 0, 2, 10)
    assert cfg.colormap.name == "plasma"
    assert cfg.colormap.frames_per_period(cfg.frame_period) == 16


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ConfigError):
        parse_config_text("betta = 0.4")
    with pytest.raises(ConfigError):
        parse_config_text("just words")


def test_flag_overrides_win():
    base = parse_config_text("beta = 0.4\ngamma = 50")
    cfg = apply_config_values(base, {"beta": "0.6"})
    assert cfg.threshold_beta == 0.6
    assert cfg.gamma == 50


def test_colormap_period_seconds():
    spec = ColormapSpec(period_seconds=8.0)
    assert spec.frames_per_period(0.5) == 16
    assert math.isinf(ColormapSpec(period_seconds=math.inf).frames_per_period(1.0))


def test_load_config_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "nope.txt")
