"""Command-line driver for the drainage analysis pipeline.

Subcommands run a prefix of the pipeline (`timemap`, `graph`, `layout`,
`export`, `all`) or utilities (`report`, `fixture`). Every config-file key
has a matching flag; flags win over the file.

Exit codes: 0 success, 1 configuration error, 2 input/output error,
3 no breakthrough when a breakthrough-dependent stage was requested.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import (ConfigError, DatasetConfig, apply_config_values,
                     load_config)
from .fixtures import FIXTURE_KINDS, generate_fixture, write_fixture
from .ingestion import SeriesError
from .pipeline import (NoBreakthroughError, Pipeline, PipelineOptions,
                       run_from_directory)
from .report import write_report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_NO_BREAKTHROUGH = 3


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="config file (key = value lines)")
    p.add_argument("--beta", help="dark-phase intensity threshold in (0,1)")
    p.add_argument("--gamma", help="minimum front area kept un-quantized [px]")
    p.add_argument("--inlet", help="inlet region as x,y,w,h")
    p.add_argument("--outlet", help="outlet region as x,y,w,h")
    p.add_argument("--frame-period", dest="frame_period",
                   help="seconds between frames")
    p.add_argument("--jump-ratio", dest="jump_ratio",
                   help="velocity ratio flagged as a jump")
    p.add_argument("--colormap", help="matplotlib colormap name")
    p.add_argument("--period-seconds", dest="period_seconds",
                   help="colormap period in seconds (inf = non-periodic)")
    p.add_argument("--period-frames", dest="period_frames",
                   help="colormap period in frames")


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("input", help="directory with the image series")
    _add_config_flags(p)
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--highlight-frame", dest="highlight_frame", type=int,
                   help="render this frame's pixels in red on the time map")
    p.add_argument("--simplify", choices=("combine", "remove", "off"),
                   default="remove")
    p.add_argument("--keep-jumps", action="store_true",
                   help="protect velocity-jump nodes from simplification")
    p.add_argument("--keep-breakthrough", action="store_true",
                   help="protect breakthrough-frame nodes from simplification")
    p.add_argument("--seed", type=int, default=0, help="layout RNG seed")
    p.add_argument("--layout-iterations", type=int, default=1000)
    p.add_argument("--include-frames", action="store_true",
                   help="copy the frame images into the bundle")
    p.add_argument("--name", default=None, help="dataset name for the bundle")


def _resolve_config(args) -> DatasetConfig:
    cfg = DatasetConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    overrides = {}
    for key in ("beta", "gamma", "inlet", "outlet", "frame_period",
                "jump_ratio", "colormap", "period_seconds", "period_frames"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = str(value)
    return apply_config_values(cfg, overrides)


def _build_pipeline(args) -> Pipeline:
    cfg = _resolve_config(args)
    options = PipelineOptions(
        simplify_mode=args.simplify,
        keep_jumps=args.keep_jumps,
        keep_breakthrough=args.keep_breakthrough,
        highlight_frame=args.highlight_frame,
        seed=args.seed,
        layout_iterations=args.layout_iterations,
        include_frames=getattr(args, "include_frames", False),
        dataset_name=args.name or Path(args.input).name,
    )
    pipe = run_from_directory(args.input, cfg, options)
    report = pipe.validate()
    for entry in report.entries:
        print(f"[{entry.severity}] {entry.message}", file=sys.stderr)
    if report.errors:
        raise ConfigError("; ".join(report.errors))
    return pipe


def _run_stages(pipe: Pipeline, stage: str):
    pipe.stage_timemap()
    if stage == "timemap":
        return
    pipe.stage_fronts()
    pipe.stage_graph()
    if stage == "graph":
        return
    if stage == "layout":
        pipe.stage_layout()  # raises when no breakthrough
        return
    # export / all: layout is best-effort, the bundle records its absence
    if pipe.breakthrough:
        pipe.stage_layout()


def cmd_run(args) -> int:
    pipe = _build_pipeline(args)
    stage = args.command
    _run_stages(pipe, stage)
    out_dir = Path(args.out)
    pipe.write_outputs(out_dir, bundle=stage in ("export", "all"),
                       figures=stage == "all")
    if stage == "all":
        write_report(pipe.frame_rows, out_dir / "report",
                     pipe.breakthrough[0] if pipe.breakthrough else None)
        pipe.run.outputs["report_dir"] = str(out_dir / "report")
    print(json.dumps(pipe.run.to_dict(), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_report(args) -> int:
    pipe = _build_pipeline(args)
    _run_stages(pipe, "graph")
    out_dir = Path(args.out)
    written = write_report(pipe.frame_rows, out_dir,
                           pipe.breakthrough[0] if pipe.breakthrough else None)
    from .export import export_metrics_csv
    export_metrics_csv(pipe.frame_rows, out_dir / "frames.csv")
    pipe.run.outputs["report_dir"] = str(out_dir)
    pipe.run.outputs["frames_csv"] = str(out_dir / "frames.csv")
    pipe.run.outputs["figures"] = [str(p) for p in written]
    print(json.dumps(pipe.run.to_dict(), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_fixture(args) -> int:
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if not _:
            raise ConfigError(f"fixture parameter must be key=value, got {item!r}")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    fix = generate_fixture(args.kind, **params)
    out = write_fixture(fix, args.out)
    print(json.dumps({"fixture": fix.name, "out": str(out),
                      "frames": len(fix.frames), "truth": fix.truth},
                     sort_keys=True, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowtrace",
        description="Drainage image series -> time map -> displacement graph.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, doc in (
        ("timemap", "build and render the invasion time map"),
        ("graph", "extract fronts and the displacement graph"),
        ("layout", "lay out the breakthrough graph (requires breakthrough)"),
        ("export", "write a self-contained viewer bundle"),
        ("all", "full pipeline: bundle plus report figures"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_run_flags(p)
        p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="per-frame metric figures and CSV")
    _add_run_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("fixture", help="generate a synthetic test series")
    p.add_argument("kind", choices=FIXTURE_KINDS)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="generator parameter override (repeatable)")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; report it as a config error
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoBreakthroughError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_BREAKTHROUGH
    except (SeriesError, FileNotFoundError, NotADirectoryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
