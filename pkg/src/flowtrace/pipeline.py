"""End-to-end pipeline orchestration with stage timing and tracing."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from PIL import Image

from .config import DatasetConfig
from .export import export_bundle, export_graph, export_metrics_csv
from .fronts import compute_front_metrics, extract_fronts, quantize_small_fronts
from .graph import (apply_noise_fixes, build_graph, detect_breakthrough,
                    detect_velocity_jumps, extract_main_channel, frame_metrics,
                    simplify)
from .ingestion import ImageSeries, load_series, validate_series
from .layout import LayoutParams, layout_breakthrough
from .report import render_metric_figures
from .timemap import build_time_map, render_time_map, save_time_map


class NoBreakthroughError(RuntimeError):
    """A breakthrough-dependent stage was requested but no front reaches the outlet."""


@dataclass
class PipelineOptions:
    simplify_mode: str = "remove"  # combine | remove | off
    keep_jumps: bool = False
    keep_breakthrough: bool = False
    highlight_frame: int | None = None
    seed: int = 0
    layout_iterations: int = 1000
    include_frames: bool = False
    dataset_name: str = "dataset"


@dataclass
class PipelineRun:
    config: DatasetConfig
    timings: dict[str, float] = field(default_factory=dict)
    stage_trace: list[dict] = field(default_factory=list)
    outputs: dict[str, str] = field(default_factory=dict)
    fronts_raw: int = 0
    fronts_quantized: int = 0
    breakthrough_frame: int | None = None
    breakthrough_node: int | None = None
    validation: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "timings_s": self.timings,
            "stage_trace": self.stage_trace,
            "outputs": self.outputs,
            "fronts_raw": self.fronts_raw,
            "fronts_quantized": self.fronts_quantized,
            "breakthrough_frame": self.breakthrough_frame,
            "breakthrough_node": self.breakthrough_node,
            "validation": self.validation,
        }


class Pipeline:
    """Runs the stages in order; intermediate products stay accessible."""

    def __init__(self, series: ImageSeries, config: DatasetConfig,
                 options: PipelineOptions | None = None):
        self.series = series
        self.config = config
        self.options = options or PipelineOptions()
        self.run = PipelineRun(config)
        self.time_map = None
        self.label_map = None
        self.fronts = None
        self.graph_raw = None
        self.graph_fixed = None
        self.graph_simplified = None
        self.breakthrough = None
        self.jump_nodes = set()
        self.main_channel = None
        self.layout = None
        self.frame_rows = None

    def _timed(self, name, fn):
        t0 = time.perf_counter()
        result = fn()
        self.run.timings[name] = time.perf_counter() - t0
        return result

    def validate(self):
        report = validate_series(self.series, self.config)
        self.run.validation = {"errors": report.errors,
                               "warnings": report.warnings}
        return report

    def stage_timemap(self):
        self.time_map = self._timed(
            "timemap",
            lambda: build_time_map(self.series, self.config.threshold_beta))
        return self.time_map

    def stage_fronts(self):
        def work():
            _, raw_fronts = extract_fronts(self.time_map)
            self.run.fronts_raw = len(raw_fronts)
            m, lmap, fronts = quantize_small_fronts(self.time_map,
                                                    self.config.gamma)
            self.run.fronts_quantized = len(fronts)
            fronts = compute_front_metrics(lmap, m, self.config.frame_period,
                                           fronts)
            return m, lmap, fronts
        self.time_map, self.label_map, self.fronts = self._timed("fronts", work)
        return self.fronts

    def stage_graph(self):
        def work():
            raw = build_graph(self.label_map, self.fronts, self.time_map)
            fixed = apply_noise_fixes(raw, self.config.inlet_region)
            return raw, fixed
        self.graph_raw, self.graph_fixed = self._timed("graph", work)
        self.breakthrough = detect_breakthrough(self.graph_fixed,
                                                self.config.outlet_region)
        if self.breakthrough:
            self.run.breakthrough_frame, self.run.breakthrough_node = \
                self.breakthrough
        self.jump_nodes = detect_velocity_jumps(self.graph_fixed,
                                                self.config.jump_ratio)
        opts = self.options
        if opts.simplify_mode == "off":
            self.graph_simplified = self.graph_fixed
        else:
            keep_frames = set()
            if opts.keep_breakthrough and self.breakthrough:
                keep_frames.add(self.breakthrough[0])
            keep_nodes = self.jump_nodes if opts.keep_jumps else set()
            self.graph_simplified = simplify(
                self.graph_fixed, mode=opts.simplify_mode,
                keep_frames=keep_frames, keep_nodes=keep_nodes)
        self.run.stage_trace = list(self.graph_simplified.stage_trace)
        self.frame_rows = frame_metrics(self.graph_fixed, self.fronts,
                                        self.series.last_frame_index)
        return self.graph_simplified

    def stage_layout(self):
        if not self.breakthrough:
            raise NoBreakthroughError("no front reaches the outlet region")
        def work():
            channel = extract_main_channel(self.graph_simplified,
                                           self.breakthrough[1])
            params = LayoutParams(iterations=self.options.layout_iterations,
                                  seed=self.options.seed)
            return channel, layout_breakthrough(self.graph_simplified,
                                                channel, params)
        self.main_channel, self.layout = self._timed("layout", work)
        return self.layout

    def write_outputs(self, out_dir: Path, *, bundle: bool,
                      figures: bool) -> Path | None:
        out_dir.mkdir(parents=True, exist_ok=True)
        cfg = self.config
        rgb = render_time_map(self.time_map, cfg.colormap,
                              self.options.highlight_frame)
        bundle_dir = None
        if bundle:
            fig_payloads = None
            if figures:
                fig_payloads = render_metric_figures(
                    self.frame_rows,
                    self.breakthrough[0] if self.breakthrough else None)
            bundle_dir = export_bundle(
                out_dir / "bundle",
                dataset_name=self.options.dataset_name,
                dg=self.graph_simplified,
                layout=self.layout,
                frame_rows=self.frame_rows,
                fronts=self.fronts,
                timemap_rgb=rgb,
                last_frame_index=self.series.last_frame_index,
                frame_period=cfg.frame_period,
                inlet=str(cfg.inlet_region),
                outlet=str(cfg.outlet_region),
                breakthrough=self.breakthrough,
                frames=self.series.frames if self.options.include_frames else None,
                figures=fig_payloads,
            )
            self.run.outputs["bundle"] = str(bundle_dir)
        else:
            Image.fromarray(rgb).save(out_dir / "timemap.png")
            self.run.outputs["timemap_png"] = str(out_dir / "timemap.png")
            save_time_map(self.time_map, out_dir / "timemap.bin",
                          last_frame_index=self.series.last_frame_index)
            self.run.outputs["timemap_bin"] = str(out_dir / "timemap.bin")
            if self.graph_simplified is not None:
                export_graph(self.graph_simplified, out_dir / "graph.json",
                             "json", self.layout)
                self.run.outputs["graph_json"] = str(out_dir / "graph.json")
            if self.frame_rows is not None:
                export_metrics_csv(self.frame_rows, out_dir / "frames.csv")
                self.run.outputs["frames_csv"] = str(out_dir / "frames.csv")
        report_path = out_dir / "run_report.json"
        report_path.write_text(json.dumps(self.run.to_dict(), sort_keys=True,
                                          indent=2))
        self.run.outputs["run_report"] = str(report_path)
        return bundle_dir


def run_from_directory(input_dir: str | Path, config: DatasetConfig,
                       options: PipelineOptions | None = None) -> Pipeline:
    series = load_series(input_dir, config)
    return Pipeline(series, config, options)
