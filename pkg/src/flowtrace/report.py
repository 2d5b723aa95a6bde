"""Matplotlib report figures for the per-frame metric families."""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graph import FrameMetrics  # noqa: E402

METRIC_FAMILIES = [
    ("area", "area_px", "invaded area [px]"),
    ("velocity", "velocity_px_s", "front velocity [px/s]"),
    ("fluid_fluid", "ff_interface_px", "fluid-fluid interface [px]"),
    ("fluid_solid", "fs_interface_px", "fluid-solid interface [px]"),
    ("fingers", "fingers", "active fingers"),
]


def metric_figure_png(rows: list[FrameMetrics], attr: str, ylabel: str,
                      breakthrough_frame: int | None = None) -> bytes:
    frames = [r.frame for r in rows]
    values = [getattr(r, attr) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 2.4), dpi=120)
    ax.bar(frames, values, width=1.0, color="#39628c")
    if breakthrough_frame is not None:
        ax.axvline(breakthrough_frame, color="#c0392b", lw=1,
                   label="breakthrough")
        ax.legend(frameon=False, fontsize=8)
    ax.set_xlabel("frame")
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    buf = io.BytesIO()
    fig.savefig(buf, format="png", metadata={"Software": "flowtrace"})
    plt.close(fig)
    return buf.getvalue()


def render_metric_figures(rows: list[FrameMetrics],
                          breakthrough_frame: int | None = None
                          ) -> dict[str, bytes]:
    """PNG payloads keyed by file name, one per metric family."""
    return {
        f"metrics_{name}.png": metric_figure_png(rows, attr, ylabel,
                                                 breakthrough_frame)
        for name, attr, ylabel in METRIC_FAMILIES
    }


def write_report(rows: list[FrameMetrics], out_dir: str | Path,
                 breakthrough_frame: int | None = None) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, payload in render_metric_figures(rows, breakthrough_frame).items():
        target = out_dir / name
        target.write_bytes(payload)
        written.append(target)
    return written
