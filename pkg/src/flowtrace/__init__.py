"""flowtrace: drainage image series -> invasion time map -> displacement graph."""

from .config import ColormapSpec, ConfigError, DatasetConfig, Rect, load_config
from .fronts import (FlowFront, FrontLabelMap, directed_hausdorff,
                     extract_fronts, hausdorff, quantize_small_fronts)
from .graph import (DisplacementGraph, FrameMetrics, MainChannel,
                    apply_noise_fixes, build_graph, detect_breakthrough,
                    detect_velocity_jumps, extract_main_channel, simplify)
from .ingestion import ImageSeries, SeriesError, load_series, segment_frame, validate_series
from .layout import LayoutParams, LayoutResult, layout_breakthrough
from .pipeline import Pipeline, PipelineOptions, PipelineRun, run_from_directory
from .timemap import NEVER, SOLID, TimeMap, build_time_map, render_time_map

__version__ = "0.1.0"

__all__ = [
    "ColormapSpec", "ConfigError", "DatasetConfig", "Rect", "load_config",
    "FlowFront", "FrontLabelMap", "directed_hausdorff", "extract_fronts",
    "hausdorff", "quantize_small_fronts",
    "DisplacementGraph", "FrameMetrics", "MainChannel", "apply_noise_fixes",
    "build_graph", "detect_breakthrough", "detect_velocity_jumps",
    "extract_main_channel", "simplify",
    "ImageSeries", "SeriesError", "load_series", "segment_frame",
    "validate_series",
    "LayoutParams", "LayoutResult", "layout_breakthrough",
    "Pipeline", "PipelineOptions", "PipelineRun", "run_from_directory",
    "NEVER", "SOLID", "TimeMap", "build_time_map", "render_time_map",
]
