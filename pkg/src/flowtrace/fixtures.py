"""Deterministic synthetic image series with construction-time ground truth.

Every generator builds an arrival-frame field first and renders the frames
from it, so the expected time map comes from construction knowledge, never
from running the pipeline. Fixtures are written to disk as a PNG series plus
a config file, the expected map, and a truth.json sidecar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .config import ColormapSpec, DatasetConfig, Rect
from .ingestion import ImageSeries
from .timemap import NEVER, SOLID, TimeMap, save_time_map

FIXTURE_KINDS = ("straight-channel", "y-merge", "dead-end", "wide-split",
                 "pinned-jump", "retreating-blob", "grid-porous")

_NO_ARRIVAL = 0  # arrival fields use 0 for "never reached"


@dataclass
class Fixture:
    name: str
    frames: list[np.ndarray]  # uint8 grayscale
    expected_map: np.ndarray  # uint32 time map grid
    config: DatasetConfig
    truth: dict = field(default_factory=dict)

    @property
    def series(self) -> ImageSeries:
        return ImageSeries(self.frames, frame_period=self.config.frame_period)

    @property
    def expected_time_map(self) -> TimeMap:
        return TimeMap(self.expected_map, self.config.frame_period)


def _render(solid: np.ndarray, arrival: np.ndarray, last: int
            ) -> tuple[list[np.ndarray], np.ndarray]:
    frames = []
    reached = arrival > _NO_ARRIVAL
    for tau in range(last + 1):
        dark = solid | (reached & (arrival <= tau))
        frames.append(np.where(dark, 0, 255).astype(np.uint8))
    expected = np.where(solid, SOLID,
                        np.where(reached & (arrival <= last),
                                 arrival, int(NEVER))).astype(np.uint32)
    return frames, expected


def _config(width: int, height: int, inlet: Rect, outlet: Rect,
            gamma: int = 1, frame_period: float = 1.0,
            jump_ratio: float = 5.0) -> DatasetConfig:
    cfg = DatasetConfig(threshold_beta=0.5, gamma=gamma,
                        inlet_region=inlet, outlet_region=outlet,
                        frame_period=frame_period, jump_ratio=jump_ratio,
                        colormap=ColormapSpec())
    for problem in cfg.check_bounds(width, height):
        raise ValueError(f"fixture config invalid: {problem}")
    return cfg


def straight_channel(length: int = 120, channel_height: int = 8,
                     wall: int = 4, speed: int = 4,
                     frame_period: float = 1.0) -> Fixture:
    """Single channel, front advancing `speed` pixels per frame."""
    height = channel_height + 2 * wall
    solid = np.ones((height, length), dtype=bool)
    rows = slice(wall, wall + channel_height)
    solid[rows, :] = False
    arrival = np.zeros((height, length), dtype=np.int64)
    cols = np.arange(length)
    arrival[rows, :] = cols // speed + 1
    last = int(arrival.max())
    frames, expected = _render(solid, arrival, last)
    inlet = Rect(0, wall, 2, channel_height)
    outlet = Rect(length - 3, wall, 3, channel_height)
    bt_frame = int(arrival[rows, outlet.x].min())
    cfg = _config(length, height, inlet, outlet, frame_period=frame_period)
    return Fixture("straight-channel", frames, expected, cfg, truth={
        "kind": "straight-channel",
        "breakthrough_frame": bt_frame,
        "node_count": last,
        "topology": "chain",
        "advance_px_per_frame": speed,
    })


def _channel_fixture_canvas(width: int, height: int):
    solid = np.ones((height, width), dtype=bool)
    arrival = np.zeros((height, width), dtype=np.int64)
    return solid, arrival


def y_merge(arm_length: int = 40, speed: int = 4) -> Fixture:
    """Two equal arms meeting a junction in the same frame (merge node)."""
    ch = 4  # channel thickness
    cw = 4  # connector thickness
    exit_len = 32
    width = arm_length + cw + exit_len
    height = 3 * ch + 2 * 10
    top = slice(2, 2 + ch)
    bottom = slice(height - 2 - ch, height - 2)
    mid = slice(height // 2 - ch // 2, height // 2 - ch // 2 + ch)
    solid, arrival = _channel_fixture_canvas(width, height)
    cols = np.arange(arm_length)
    k = int(cols.max() // speed + 1)  # frame the arms reach the junction
    for rows in (top, bottom):
        solid[rows, :arm_length] = False
        arrival[rows, :arm_length] = cols // speed + 1
    conn = slice(arm_length, arm_length + cw)
    solid[top.start:bottom.stop, conn] = False
    arrival[top.start:bottom.stop, conn] = k + 1
    solid[mid, conn.stop:width] = False
    exit_cols = np.arange(width - conn.stop)
    arrival[mid, conn.stop:width] = k + 1 + exit_cols // speed + 1
    arrival[solid] = _NO_ARRIVAL
    last = int(arrival.max())
    frames, expected = _render(solid, arrival, last)
    inlet = Rect(0, 0, 2, height)
    outlet = Rect(width - 3, mid.start, 3, ch)
    cfg = _config(width, height, inlet, outlet)
    return Fixture("y-merge", frames, expected, cfg, truth={
        "kind": "y-merge",
        "merge_frame": k + 1,
        "arm_frame": k,
        "breakthrough_frame": int(arrival[mid, outlet.x].min()),
        "expected_in_degree_2_nodes": 1,
    })


def dead_end(arm_length: int = 40, speed: int = 4, lag: int = 3) -> Fixture:
    """One arm reaches the junction `lag` frames late and becomes a sink."""
    ch = 4
    cw = 4
    exit_len = 32
    width = arm_length + cw + exit_len
    height = 3 * ch + 2 * 10
    top = slice(2, 2 + ch)
    bottom = slice(height - 2 - ch, height - 2)
    mid = slice(height // 2 - ch // 2, height // 2 - ch // 2 + ch)
    solid, arrival = _channel_fixture_canvas(width, height)
    cols = np.arange(arm_length)
    k = int(cols.max() // speed + 1)
    solid[top, :arm_length] = False
    arrival[top, :arm_length] = cols // speed + 1
    solid[bottom, :arm_length] = False
    arrival[bottom, :arm_length] = cols // speed + 1 + lag  # delayed arm
    conn = slice(arm_length, arm_length + cw)
    solid[top.start:bottom.stop, conn] = False
    arrival[top.start:bottom.stop, conn] = k + 1
    solid[mid, conn.stop:width] = False
    exit_cols = np.arange(width - conn.stop)
    arrival[mid, conn.stop:width] = k + 1 + exit_cols // speed + 1
    arrival[solid] = _NO_ARRIVAL
    last = int(arrival.max())
    frames, expected = _render(solid, arrival, last)
    inlet = Rect(0, 0, 2, height)
    outlet = Rect(width - 3, mid.start, 3, ch)
    cfg = _config(width, height, inlet, outlet)
    return Fixture("dead-end", frames, expected, cfg, truth={
        "kind": "dead-end",
        "junction_frame": k + 1,
        "dead_end_frame": k + lag,
        "breakthrough_frame": int(arrival[mid, outlet.x].min()),
        "expected_off_path_sinks": 1,
    })


def wide_split(bar_halfwidth: int = 10, advance: int = 2) -> Fixture:
    """Wide bar flooded in one frame, continuation from one end.

    Built so the interface-based edge velocity is clearly below the naive
    centroid-distance estimate.
    """
    ch = 3
    entry_len = 12
    tail_len = 20
    cx = 4 + bar_halfwidth  # entry column center
    width = cx + bar_halfwidth + 1 + tail_len + 4
    height = entry_len + ch + 6
    bar_rows = slice(4, 4 + ch)
    solid, arrival = _channel_fixture_canvas(width, height)
    # vertical entry channel rising to the bar
    entry_cols = slice(cx - 1, cx + 2)
    solid[bar_rows.stop:bar_rows.stop + entry_len, entry_cols] = False
    rows_up = np.arange(entry_len)[::-1]
    arrival[bar_rows.stop:bar_rows.stop + entry_len, entry_cols] = \
        (rows_up // 2 + 1)[:, None]
    k = int(arrival.max()) + 1
    # horizontal bar, flooded in a single frame
    bar_cols = slice(cx - bar_halfwidth, cx + bar_halfwidth + 1)
    solid[bar_rows, bar_cols] = False
    arrival[bar_rows, bar_cols] = k
    # slow continuation from the right end of the bar
    tail_cols = np.arange(tail_len)
    solid[bar_rows, bar_cols.stop:bar_cols.stop + tail_len] = False
    arrival[bar_rows, bar_cols.stop:bar_cols.stop + tail_len] = \
        k + tail_cols // advance + 1
    arrival[solid] = _NO_ARRIVAL
    last = int(arrival.max())
    frames, expected = _render(solid, arrival, last)
    inlet = Rect(cx - 1, height - 3, 3, 3)
    outlet = Rect(width - 3, bar_rows.start, 3, ch)
    cfg = _config(width, height, inlet, outlet)
    return Fixture("wide-split", frames, expected, cfg, truth={
        "kind": "wide-split",
        "bar_frame": k,
        "continuation_frame": k + 1,
        "breakthrough_frame": None,  # outlet sits past the tail on purpose
    })


def pinned_jump(pre_len: int = 30, stall: int = 5, jump_len: int = 80,
                post_len: int = 30) -> Fixture:
    """Slow advance, pinned interface, then a Haines-jump-style burst."""
    ch = 6
    wall = 3
    width = pre_len + jump_len + post_len
    height = ch + 2 * wall
    rows = slice(wall, wall + ch)
    solid = np.ones((height, width), dtype=bool)
    solid[rows, :] = False
    arrival = np.zeros((height, width), dtype=np.int64)
    x = np.arange(width)
    col_arrival = np.empty(width, dtype=np.int64)
    col_arrival[:pre_len] = x[:pre_len] + 1
    jump_frame = pre_len + stall + 1
    col_arrival[pre_len:pre_len + jump_len] = jump_frame
    col_arrival[pre_len + jump_len:] = \
        jump_frame + x[pre_len + jump_len:] - (pre_len + jump_len) + 1
    arrival[rows, :] = col_arrival
    last = int(arrival.max())
    frames, expected = _render(solid, arrival, last)
    inlet = Rect(0, wall, 2, ch)
    outlet = Rect(width - 3, wall, 3, ch)
    cfg = _config(width, height, inlet, outlet)
    return Fixture("pinned-jump", frames, expected, cfg, truth={
        "kind": "pinned-jump",
        "pinned_frame": pre_len,  # node accelerating into the jump
        "jump_frame": jump_frame,
        "breakthrough_frame": int(col_arrival[-3:].min()),
    })


def retreating_blob(size: int = 100, grow_frames: int = 10,
                    max_radius: int = 30) -> Fixture:
    """Blob grows then collapses; violates the once-flooded assumption."""
    height = width = size
    cy = cx = size // 2
    yy, xx = np.mgrid[0:height, 0:width]
    r2 = (yy - cy) ** 2 + (xx - cx) ** 2
    solid = np.zeros((height, width), dtype=bool)
    solid[:, 0] = True  # minimal solid so the map has a SOLID class
    frames = []
    radii = [0] + [max_radius * t // grow_frames for t in range(1, grow_frames + 1)]
    radii += [max_radius // 2, max_radius // 3]  # the retreat
    for r in radii:
        dark = solid | (r2 <= r * r)
        frames.append(np.where(dark, 0, 255).astype(np.uint8))
    last = len(frames) - 1
    # expected map is still the min-fold over the rendered frames
    expected = np.full((height, width), int(NEVER), dtype=np.uint32)
    for tau in range(last, 0, -1):
        expected[frames[tau] == 0] = tau
    expected[frames[0] == 0] = SOLID  # includes the r=0 seed pixel
    inlet = Rect(cx - 2, cy - 2, 4, 4)
    outlet = Rect(width - 3, cy - 2, 3, 4)
    cfg = _config(width, height, inlet, outlet)
    return Fixture("retreating-blob", frames, expected, cfg, truth={
        "kind": "retreating-blob",
        "retreat_expected": True,
    })


def _grain_mask(shape: str, size: int) -> np.ndarray:
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size]
    y = yy - c
    x = xx - c
    r = size / 2.0 - 0.5
    if shape == "circular":
        return x * x + y * y <= r * r
    if shape == "octagonal":
        return (np.abs(x) <= r) & (np.abs(y) <= r) & (np.abs(x) + np.abs(y) <= 1.35 * r)
    if shape == "triangular":
        # upward triangle inscribed in the cell
        return (y >= -r) & (y - 2 * np.abs(x) <= r) & (y <= r) & (np.abs(x) <= r) \
            & (y >= 2 * np.abs(x) - r)
    raise ValueError(f"unknown grain shape: {shape}")


def grid_porous(shape: str = "circular", width: int = 320, height: int = 240,
                grain: int = 24, pitch: int = 40, speed: float = 4.0,
                max_frames: int = 400, gamma: int = 100,
                frame_period: float = 1.0) -> Fixture:
    """Regular grain lattice flooded from the left at constant speed.

    Arrival times come from a geodesic distance transform over the void
    space, so the expected time map is exact by construction.
    """
    from skimage.graph import MCP_Geometric

    solid = np.zeros((height, width), dtype=bool)
    mask = _grain_mask(shape, grain)
    offset = (pitch - grain) // 2
    for row, gy in enumerate(range(offset, height - grain, pitch)):
        stagger = pitch // 2 if row % 2 else 0
        for gx in range(offset + stagger, width - grain, pitch):
            solid[gy:gy + grain, gx:gx + grain] |= mask
    costs = np.where(solid, np.inf, 1.0)
    starts = [(y, 0) for y in range(height) if not solid[y, 0]]
    mcp = MCP_Geometric(costs)
    dist, _ = mcp.find_costs(starts)
    reachable = np.isfinite(dist) & ~solid
    arrival = np.zeros((height, width), dtype=np.int64)
    arrival[reachable] = (dist[reachable] // speed).astype(np.int64) + 1
    last = min(int(arrival.max()), max_frames)
    frames, expected = _render(solid, arrival, last)
    inlet = Rect(0, 0, 2, height)
    outlet = Rect(width - 3, 0, 3, height)
    cfg = _config(width, height, inlet, outlet, gamma=gamma,
                  frame_period=frame_period)
    rs, cs = outlet.slices()
    out_arrivals = arrival[rs, cs]
    reached = out_arrivals[(out_arrivals > 0) & (out_arrivals <= last)]
    return Fixture(f"grid-porous-{shape}", frames, expected, cfg, truth={
        "kind": "grid-porous",
        "shape": shape,
        "breakthrough_frame": int(reached.min()) if reached.size else None,
        "connected": True,
    })


_GENERATORS = {
    "straight-channel": straight_channel,
    "y-merge": y_merge,
    "dead-end": dead_end,
    "wide-split": wide_split,
    "pinned-jump": pinned_jump,
    "retreating-blob": retreating_blob,
    "grid-porous": grid_porous,
}


def generate_fixture(kind: str, **params) -> Fixture:
    if kind not in _GENERATORS:
        raise ValueError(f"unknown fixture kind {kind!r}; "
                         f"choose from {sorted(_GENERATORS)}")
    return _GENERATORS[kind](**params)


def write_fixture(fix: Fixture, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for tau, frame in enumerate(fix.frames):
        Image.fromarray(frame).save(out_dir / f"frame_{tau:05d}.png")
    cfg = fix.config
    config_lines = [
        f"beta = {cfg.threshold_beta}",
        f"gamma = {cfg.gamma}",
        f"inlet = {cfg.inlet_region}",
        f"outlet = {cfg.outlet_region}",
        f"frame_period = {cfg.frame_period}",
        f"jump_ratio = {cfg.jump_ratio}",
        f"colormap = {cfg.colormap.name}",
    ]
    (out_dir / "config.txt").write_text("\n".join(config_lines) + "\n")
    save_time_map(fix.expected_time_map, out_dir / "expected_map.bin",
                  last_frame_index=len(fix.frames) - 1)
    (out_dir / "truth.json").write_text(
        json.dumps(fix.truth, sort_keys=True, indent=2))
    return out_dir
