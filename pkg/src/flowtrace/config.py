"""Dataset configuration: thresholds, regions, timing, colormap settings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path


class ConfigError(ValueError):
    """Invalid or inconsistent dataset configuration."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned pixel rectangle, origin top-left, y down."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ConfigError(f"rectangle must have positive size, got {self}")

    def within(self, width: int, height: int) -> bool:
        return (0 <= self.x and 0 <= self.y
                and self.x + self.w <= width and self.y + self.h <= height)

    def intersects(self, other: "Rect") -> bool:
        return not (self.x + self.w <= other.x or other.x + other.w <= self.x
                    or self.y + self.h <= other.y or other.y + other.h <= self.y)

    def slices(self) -> tuple[slice, slice]:
        """(row, col) slices for indexing a numpy image."""
        return slice(self.y, self.y + self.h), slice(self.x, self.x + self.w)

    @classmethod
    def parse(cls, text: str) -> "Rect":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ConfigError(f"expected 'x,y,w,h', got {text!r}")
        try:
            x, y, w, h = (int(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"non-integer rectangle component in {text!r}") from exc
        return cls(x, y, w, h)

    def __str__(self) -> str:
        return f"{self.x},{self.y},{self.w},{self.h}"


@dataclass(frozen=True)
class ColormapSpec:
    """Periodic colormap: matplotlib name plus period length.

    Exactly one of period_frames / period_seconds should be set; an infinite
    period selects the non-periodic mode.
    """

    name: str = "viridis"
    period_frames: float = 20
    period_seconds: float | None = None

    def frames_per_period(self, frame_period: float) -> float:
        if self.period_seconds is not None:
            if math.isinf(self.period_seconds):
                return math.inf
            return max(2, round(self.period_seconds / frame_period))
        return self.period_frames


@dataclass(frozen=True)
class DatasetConfig:
    threshold_beta: float = 0.5
    gamma: int = 100
    inlet_region: Rect = field(default_factory=lambda: Rect(0, 0, 1, 1))
    outlet_region: Rect = field(default_factory=lambda: Rect(1, 0, 1, 1))
    frame_period: float = 1.0
    jump_ratio: float = 5.0
    colormap: ColormapSpec = field(default_factory=ColormapSpec)

    def __post_init__(self):
        if not 0.0 < self.threshold_beta < 1.0:
            raise ConfigError(f"threshold_beta must be in (0,1), got {self.threshold_beta}")
        if self.gamma < 1:
            raise ConfigError(f"gamma must be >= 1, got {self.gamma}")
        if self.frame_period <= 0:
            raise ConfigError(f"frame_period must be > 0, got {self.frame_period}")
        if self.jump_ratio <= 1:
            raise ConfigError(f"jump_ratio must be > 1, got {self.jump_ratio}")
        if self.inlet_region.intersects(self.outlet_region):
            raise ConfigError("inlet_region and outlet_region must be disjoint")

    def check_bounds(self, width: int, height: int) -> list[str]:
        """Return error strings for regions outside the image bounds."""
        problems = []
        if not self.inlet_region.within(width, height):
            problems.append("inlet_region out of bounds")
        if not self.outlet_region.within(width, height):
            problems.append("outlet_region out of bounds")
        return problems


_CONFIG_KEYS = {
    "beta", "gamma", "inlet", "outlet", "frame_period", "jump_ratio",
    "colormap", "period_frames", "period_seconds",
}


def parse_config_text(text: str, base: DatasetConfig | None = None) -> DatasetConfig:
    """Parse a `key = value` config file body into a DatasetConfig."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return apply_config_values(base or DatasetConfig(), values)


def apply_config_values(base: DatasetConfig, values: dict[str, str]) -> DatasetConfig:
    """Overlay string key/value settings (file or CLI) on a base config."""
    kwargs = {}
    try:
        if "beta" in values:
            kwargs["threshold_beta"] = float(values["beta"])
        if "gamma" in values:
            kwargs["gamma"] = int(values["gamma"])
        if "frame_period" in values:
            kwargs["frame_period"] = float(values["frame_period"])
        if "jump_ratio" in values:
            kwargs["jump_ratio"] = float(values["jump_ratio"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if "inlet" in values:
        kwargs["inlet_region"] = Rect.parse(values["inlet"])
    if "outlet" in values:
        kwargs["outlet_region"] = Rect.parse(values["outlet"])
    cmap = base.colormap
    if "colormap" in values:
        cmap = replace(cmap, name=values["colormap"])
    if "period_seconds" in values:
        cmap = replace(cmap, period_seconds=float(values["period_seconds"]))
    elif "period_frames" in values:
        cmap = replace(cmap, period_frames=float(values["period_frames"]),
                       period_seconds=None)
    if cmap is not base.colormap:
        kwargs["colormap"] = cmap
    return replace(base, **kwargs)


def load_config(path: str | Path, base: DatasetConfig | None = None) -> DatasetConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return parse_config_text(path.read_text(), base)
