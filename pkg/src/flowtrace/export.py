"""Serialization of pipeline products: graph files, CSV tables, bundles.

JSON is the canonical graph interchange format (lossless, round-trips);
GraphML and DOT are conveniences for external tools.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import shutil
import tempfile
from pathlib import Path

import networkx as nx
import numpy as np
from PIL import Image

from .fronts import FlowFront, FrontLabelMap
from .graph import DisplacementGraph, FrameMetrics
from .layout import LayoutResult, color_by_out_degree
from .timemap import TimeMap

GRAPH_FORMATS = ("json", "graphml", "dot")


def _node_payload(dg: DisplacementGraph, layout: LayoutResult | None) -> list[dict]:
    categories = color_by_out_degree(dg)
    nodes = []
    for n in sorted(dg.g.nodes):
        f = dg.fronts[n]
        item = {
            "id": n,
            "time": f.time,
            "area": f.area,
            "centroid": [f.centroid[0], f.centroid[1]],
            "ff_interface_len": f.ff_interface_len,
            "fs_interface_len": f.fs_interface_len,
            "bbox": list(f.bbox),
            "velocity": f.velocity_magnitude,
            "out_degree_category": categories[n],
        }
        attrs = dg.g.nodes[n]
        if "chain" in attrs:
            item["chain"] = list(attrs["chain"])
            item["combined_area"] = attrs["combined_area"]
        if layout is not None and n in layout.positions:
            x, y = layout.positions[n]
            item["layout"] = [x, y]
            item["pinned"] = n in layout.pinned
        nodes.append(item)
    return nodes


def _edge_payload(dg: DisplacementGraph) -> list[dict]:
    edges = []
    for u, v in sorted(dg.g.edges):
        d = dg.g.edges[u, v]
        item = {
            "src": u,
            "dst": v,
            "d_forward": d.get("d_forward"),
            "d_backward": d.get("d_backward"),
            "delta_t": d.get("delta_t"),
            "velocity": d.get("velocity"),
        }
        if "chain" in d:
            item["chain"] = list(d["chain"])
        edges.append(item)
    return edges


def graph_to_dict(dg: DisplacementGraph, layout: LayoutResult | None = None) -> dict:
    return {
        "frame_period": dg.time_map.frame_period if dg.time_map else 1.0,
        "nodes": _node_payload(dg, layout),
        "edges": _edge_payload(dg),
    }


def export_graph(dg: DisplacementGraph, path: str | Path, fmt: str = "json",
                 layout: LayoutResult | None = None):
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(graph_to_dict(dg, layout),
                                   sort_keys=True, indent=2))
    elif fmt == "graphml":
        _write_graphml(dg, path, layout)
    elif fmt == "dot":
        _write_dot(dg, path, layout)
    else:
        raise ValueError(f"unknown graph format: {fmt}")


def import_graph_json(path: str | Path) -> DisplacementGraph:
    """Rebuild the in-memory graph from a JSON export (exact inverse)."""
    data = json.loads(Path(path).read_text())
    g = nx.DiGraph()
    fronts = {}
    for item in data["nodes"]:
        n = item["id"]
        fronts[n] = FlowFront(
            label=n,
            time=item["time"],
            area=item["area"],
            centroid=(item["centroid"][0], item["centroid"][1]),
            bbox=tuple(item["bbox"]),
            ff_interface_len=item["ff_interface_len"],
            fs_interface_len=item["fs_interface_len"],
            velocity_magnitude=item["velocity"],
        )
        g.add_node(n)
        if "chain" in item:
            g.nodes[n]["chain"] = list(item["chain"])
            g.nodes[n]["combined_area"] = item["combined_area"]
    for item in data["edges"]:
        attrs = {
            "d_forward": item["d_forward"],
            "d_backward": item["d_backward"],
            "delta_t": item["delta_t"],
            "velocity": item["velocity"],
        }
        if "chain" in item:
            attrs["chain"] = list(item["chain"])
        g.add_edge(item["src"], item["dst"], **attrs)
    empty = TimeMap(np.zeros((1, 1), dtype=np.uint32), data.get("frame_period", 1.0))
    return DisplacementGraph(g, fronts, {},
                             FrontLabelMap(np.zeros((1, 1), np.int32), 0), empty)


def _write_graphml(dg: DisplacementGraph, path: Path,
                   layout: LayoutResult | None):
    g = nx.DiGraph()
    for item in _node_payload(dg, layout):
        n = item.pop("id")
        item["centroid_x"], item["centroid_y"] = item.pop("centroid")
        x, y, w, h = item.pop("bbox")
        item.update(bbox_x=x, bbox_y=y, bbox_w=w, bbox_h=h)
        if "layout" in item:
            item["layout_x"], item["layout_y"] = item.pop("layout")
        item.pop("chain", None)  # lossy: chain metadata is JSON-only
        g.add_node(n, **item)
    for item in _edge_payload(dg):
        u, v = item.pop("src"), item.pop("dst")
        item.pop("chain", None)
        attrs = {k: val for k, val in item.items() if val is not None}
        g.add_edge(u, v, **attrs)
    nx.write_graphml(g, path)


def _write_dot(dg: DisplacementGraph, path: Path, layout: LayoutResult | None):
    lines = ["digraph displacement {"]
    for item in _node_payload(dg, layout):
        attrs = [f'time={item["time"]}', f'area={item["area"]}']
        if "layout" in item:
            attrs.append(f'pos="{item["layout"][0]:.3f},{item["layout"][1]:.3f}"')
        lines.append(f'  n{item["id"]} [{", ".join(attrs)}];')
    for item in _edge_payload(dg):
        lines.append(f'  n{item["src"]} -> n{item["dst"]} '
                     f'[velocity={item["velocity"]:.6g}];')
    lines.append("}")
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# CSV tables

METRICS_HEADER = ["frame", "time_s", "area_px", "velocity_px_s",
                  "ff_interface_px", "fs_interface_px", "fingers"]


def metrics_csv_text(rows: list[FrameMetrics]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for r in rows:
        writer.writerow([r.frame, repr(r.time_s), r.area_px, repr(r.velocity_px_s),
                         r.ff_interface_px, r.fs_interface_px, r.fingers])
    return buf.getvalue()


def export_metrics_csv(rows: list[FrameMetrics], path: str | Path):
    Path(path).write_text(metrics_csv_text(rows))


def read_metrics_csv(path: str | Path) -> list[FrameMetrics]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != METRICS_HEADER:
            raise ValueError(f"unexpected metrics header: {header}")
        return [FrameMetrics(int(r[0]), float(r[1]), int(r[2]), float(r[3]),
                             int(r[4]), int(r[5]), int(r[6])) for r in reader]


FRONTS_HEADER = ["label", "time", "area", "centroid_x", "centroid_y",
                 "ff_len", "fs_len", "bbox_x", "bbox_y", "bbox_w", "bbox_h",
                 "velocity"]


def export_fronts_csv(fronts: list[FlowFront], path: str | Path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FRONTS_HEADER)
        for f in sorted(fronts, key=lambda f: f.label):
            writer.writerow([f.label, f.time, f.area,
                             repr(f.centroid[0]), repr(f.centroid[1]),
                             f.ff_interface_len, f.fs_interface_len,
                             *f.bbox, repr(f.velocity_magnitude)])


# ---------------------------------------------------------------------------
# Viewer bundle


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class BundleError(RuntimeError):
    """Bundle is incomplete or fails hash verification."""


def export_bundle(out_dir: str | Path, *, dataset_name: str,
                  dg: DisplacementGraph, layout: LayoutResult | None,
                  frame_rows: list[FrameMetrics], fronts: list[FlowFront],
                  timemap_rgb: np.ndarray, last_frame_index: int,
                  frame_period: float, inlet: str, outlet: str,
                  breakthrough: tuple[int, int] | None,
                  frames: list[np.ndarray] | None = None,
                  figures: dict[str, bytes] | None = None) -> Path:
    """Write a self-contained viewer bundle; atomic via a temp directory."""
    out_dir = Path(out_dir)
    tmp = Path(tempfile.mkdtemp(prefix=out_dir.name + ".", dir=out_dir.parent))
    try:
        export_graph(dg, tmp / "graph.json", "json", layout)
        export_metrics_csv(frame_rows, tmp / "frames.csv")
        export_fronts_csv(fronts, tmp / "fronts.csv")
        Image.fromarray(timemap_rgb).save(tmp / "timemap.png")
        files = ["graph.json", "frames.csv", "fronts.csv", "timemap.png"]
        if frames is not None:
            frame_dir = tmp / "frames"
            frame_dir.mkdir()
            for tau, frame in enumerate(frames):
                name = f"frames/frame_{tau:05d}.png"
                img = frame if frame.dtype == np.uint8 \
                    else (np.clip(frame, 0, 1) * 255).astype(np.uint8)
                Image.fromarray(img).save(tmp / name)
                files.append(name)
        for name, payload in (figures or {}).items():
            (tmp / name).write_bytes(payload)
            files.append(name)
        manifest = {
            "dataset": dataset_name,
            "frames": last_frame_index,
            "frame_period": frame_period,
            "breakthrough_frame": breakthrough[0] if breakthrough else None,
            "breakthrough_node": breakthrough[1] if breakthrough else None,
            "inlet": inlet,
            "outlet": outlet,
            "layout_present": layout is not None,
            "files": {name: _sha256(tmp / name) for name in sorted(files)},
        }
        (tmp / "manifest.json").write_text(
            json.dumps(manifest, sort_keys=True, indent=2))
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    if out_dir.exists():
        shutil.rmtree(out_dir)
    tmp.rename(out_dir)
    return out_dir


def verify_bundle(bundle_dir: str | Path) -> dict:
    """Check manifest hashes; raise BundleError on any mismatch."""
    bundle_dir = Path(bundle_dir)
    manifest_path = bundle_dir / "manifest.json"
    if not manifest_path.is_file():
        raise BundleError(f"no manifest.json in {bundle_dir}")
    manifest = json.loads(manifest_path.read_text())
    for name, digest in manifest["files"].items():
        target = bundle_dir / name
        if not target.is_file():
            raise BundleError(f"bundle file missing: {name}")
        if _sha256(target) != digest:
            raise BundleError(f"hash mismatch for {name}")
    return manifest
