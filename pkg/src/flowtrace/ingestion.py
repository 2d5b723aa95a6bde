"""Loading, validation, and binarization of drainage image series.

Frames are grayscale numpy arrays. 8-bit images are kept as uint8 (value v
meaning intensity v/255); anything else is converted to float32 in [0,1].
Segmentation is a pure threshold: DARK (invading fluid or solid) iff
intensity <= beta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .config import DatasetConfig

SUPPORTED_SUFFIXES = {".png", ".tif", ".tiff", ".pgm"}
MANIFEST_NAME = "series.txt"


class SeriesError(RuntimeError):
    """Image series cannot be loaded or is inconsistent."""


@dataclass
class ImageSeries:
    frames: list[np.ndarray]
    frame_period: float = 1.0

    def __post_init__(self):
        if len(self.frames) < 2:
            raise SeriesError(f"need at least 2 frames, got {len(self.frames)}")
        h, w = self.frames[0].shape
        for idx, f in enumerate(self.frames):
            if f.ndim != 2:
                raise SeriesError(f"frame {idx} is not a 2D grayscale grid")
            if f.shape != (h, w):
                raise SeriesError(
                    f"frame {idx} has shape {f.shape[::-1]}, expected {(w, h)}")

    @property
    def width(self) -> int:
        return self.frames[0].shape[1]

    @property
    def height(self) -> int:
        return self.frames[0].shape[0]

    @property
    def last_frame_index(self) -> int:
        """T: frames are indexed 0..T."""
        return len(self.frames) - 1


def _to_grayscale(img: Image.Image) -> np.ndarray:
    if img.mode == "L":
        return np.asarray(img, dtype=np.uint8)
    if img.mode in ("I;16", "I;16B", "I;16L"):
        return (np.asarray(img, dtype=np.float32) / 65535.0).astype(np.float32)
    if img.mode == "I":
        arr = np.asarray(img, dtype=np.float32)
        peak = arr.max()
        return arr / peak if peak > 1 else arr
    # color input: luminance conversion
    return np.asarray(img.convert("L"), dtype=np.uint8)


def segment_frame(frame: np.ndarray, beta: float) -> np.ndarray:
    """Boolean mask, True = DARK (intensity <= beta), False = LIGHT."""
    if frame.dtype == np.uint8:
        return frame <= beta * 255.0
    return frame <= beta


def list_series_files(directory: Path) -> list[Path]:
    manifest = directory / MANIFEST_NAME
    if manifest.is_file():
        names = [ln.strip() for ln in manifest.read_text().splitlines() if ln.strip()]
        files = [directory / n for n in names]
        missing = [f.name for f in files if not f.is_file()]
        if missing:
            raise SeriesError(f"manifest references missing files: {missing}")
        return files
    return sorted(p for p in directory.iterdir()
                  if p.suffix.lower() in SUPPORTED_SUFFIXES)


def load_series(path: str | Path, config: DatasetConfig) -> ImageSeries:
    directory = Path(path)
    if not directory.is_dir():
        raise FileNotFoundError(f"image directory not found: {directory}")
    files = list_series_files(directory)
    if len(files) < 2:
        raise SeriesError(
            f"directory {directory} contains {len(files)} image(s), need >= 2")
    frames = []
    for f in files:
        try:
            with Image.open(f) as img:
                frames.append(_to_grayscale(img))
        except (UnidentifiedImageError, OSError) as exc:
            raise SeriesError(f"cannot decode {f}: {exc}") from exc
    return ImageSeries(frames, frame_period=config.frame_period)


@dataclass
class ValidationEntry:
    severity: str  # "error" | "warning"
    message: str


@dataclass
class ValidationReport:
    entries: list[ValidationEntry] = field(default_factory=list)
    dark_fractions: list[float] = field(default_factory=list)

    def add(self, severity: str, message: str):
        self.entries.append(ValidationEntry(severity, message))

    @property
    def errors(self) -> list[str]:
        return [e.message for e in self.entries if e.severity == "error"]

    @property
    def warnings(self) -> list[str]:
        return [e.message for e in self.entries if e.severity == "warning"]

    def __bool__(self) -> bool:
        return bool(self.entries)


def validate_series(series: ImageSeries, config: DatasetConfig) -> ValidationReport:
    report = ValidationReport()
    for problem in config.check_bounds(series.width, series.height):
        report.add("error", problem)

    beta = config.threshold_beta
    first_dark = segment_frame(series.frames[0], beta)
    if first_dark.all():
        report.add("error", "first frame has no LIGHT pixels (all solid/fluid)")

    if config.inlet_region.within(series.width, series.height):
        rs, cs = config.inlet_region.slices()
        if first_dark[rs, cs].any():
            report.add("warning",
                       "inlet region contains dark pixels in first frame; "
                       "invading fluid may already be present")

    n = first_dark.size
    fractions = [float(np.count_nonzero(segment_frame(f, beta))) / n
                 for f in series.frames]
    report.dark_fractions = fractions
    for tau in range(1, len(fractions)):
        prev, cur = fractions[tau - 1], fractions[tau]
        if prev > 0 and (prev - cur) > 0.05 * prev:
            report.add("warning",
                       f"possible fluid retreat: dark fraction drops "
                       f"{prev:.3f} -> {cur:.3f} at frame {tau}")
    return report
