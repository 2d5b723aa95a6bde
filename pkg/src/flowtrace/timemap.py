"""Per-pixel invasion-time map: folding, rendering, binary export.

Encoding: uint32 grid, SOLID = 0, NEVER = 0xFFFFFFFF, frame values 1..T in
between. The natural integer order (SOLID < frame < NEVER) makes the fold a
plain elementwise minimum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from matplotlib import colormaps

from .config import ColormapSpec
from .ingestion import ImageSeries, segment_frame

SOLID = np.uint32(0)
NEVER = np.uint32(0xFFFFFFFF)

HIGHLIGHT_COLOR = (255, 0, 0)


@dataclass
class TimeMap:
    grid: np.ndarray  # uint32, shape (height, width)
    frame_period: float = 1.0

    @property
    def width(self) -> int:
        return self.grid.shape[1]

    @property
    def height(self) -> int:
        return self.grid.shape[0]

    def frame_mask(self) -> np.ndarray:
        return (self.grid != SOLID) & (self.grid != NEVER)

    def max_frame(self) -> int:
        mask = self.frame_mask()
        return int(self.grid[mask].max()) if mask.any() else 0

    def invaded_pixel_count(self) -> int:
        return int(np.count_nonzero(self.frame_mask()))

    def copy(self) -> "TimeMap":
        return TimeMap(self.grid.copy(), self.frame_period)


def init_time_map(first_dark: np.ndarray, frame_period: float = 1.0) -> TimeMap:
    """SOLID where the first frame is dark, NEVER elsewhere."""
    grid = np.where(first_dark, SOLID, NEVER).astype(np.uint32)
    return TimeMap(grid, frame_period)


def fold_frame(prev: TimeMap, frame_dark: np.ndarray, tau: int) -> TimeMap:
    if frame_dark.shape != prev.grid.shape:
        raise ValueError(
            f"frame shape {frame_dark.shape} != time map shape {prev.grid.shape}")
    if not 1 <= tau < int(NEVER):
        raise ValueError(f"frame index out of range: {tau}")
    grid = np.where(frame_dark, np.minimum(prev.grid, np.uint32(tau)), prev.grid)
    return TimeMap(grid, prev.frame_period)


def build_time_map(series: ImageSeries, beta: float) -> TimeMap:
    """Fold the whole segmented series into a single time map."""
    m = init_time_map(segment_frame(series.frames[0], beta), series.frame_period)
    grid = m.grid
    for tau in range(1, len(series.frames)):
        dark = segment_frame(series.frames[tau], beta)
        np.minimum(grid, np.uint32(tau), out=grid, where=dark)
    return TimeMap(grid, series.frame_period)


def _period_colors(spec: ColormapSpec, period: int) -> np.ndarray:
    cmap = colormaps[spec.name]
    rgba = cmap(np.linspace(0.0, 1.0, period, endpoint=False))
    return (rgba[:, :3] * 255).astype(np.uint8)


def render_time_map(m: TimeMap, colormap: ColormapSpec | None = None,
                    highlight: int | None = None) -> np.ndarray:
    """RGB uint8 image: SOLID black, NEVER white, frames periodically colored."""
    spec = colormap or ColormapSpec()
    out = np.zeros((m.height, m.width, 3), dtype=np.uint8)
    solid = m.grid == SOLID
    never = m.grid == NEVER
    frames = ~solid & ~never
    out[never] = 255

    if frames.any():
        taus = m.grid[frames].astype(np.int64)
        period = spec.frames_per_period(m.frame_period)
        if math.isinf(period):
            tmax = int(taus.max())
            cmap = colormaps[spec.name]
            pos = (taus - 1) / max(tmax - 1, 1)
            rgba = cmap(pos)
            out[frames] = (rgba[:, :3] * 255).astype(np.uint8)
        else:
            period = int(period)
            colors = _period_colors(spec, period)
            out[frames] = colors[(taus - 1) % period]

    if highlight is not None:
        out[m.grid == np.uint32(highlight)] = HIGHLIGHT_COLOR
    return out


def save_time_map(m: TimeMap, path: str | Path, last_frame_index: int | None = None):
    """Little-endian u32 grid with an 8-byte (width, height) header.

    A JSON sidecar (<path>.json) records frame period, T and the sentinel
    encoding.
    """
    path = Path(path)
    header = np.array([m.width, m.height], dtype="<u4")
    with open(path, "wb") as fh:
        fh.write(header.tobytes())
        fh.write(m.grid.astype("<u4").tobytes())
    sidecar = {
        "frame_period": m.frame_period,
        "frames": last_frame_index if last_frame_index is not None else m.max_frame(),
        "sentinels": {"solid": int(SOLID), "never": int(NEVER)},
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=2))


def load_time_map(path: str | Path) -> TimeMap:
    path = Path(path)
    raw = path.read_bytes()
    width, height = np.frombuffer(raw[:8], dtype="<u4")
    grid = np.frombuffer(raw[8:], dtype="<u4").reshape(int(height), int(width))
    frame_period = 1.0
    sidecar = Path(str(path) + ".json")
    if sidecar.is_file():
        frame_period = float(json.loads(sidecar.read_text())["frame_period"])
    return TimeMap(grid.astype(np.uint32), frame_period)
