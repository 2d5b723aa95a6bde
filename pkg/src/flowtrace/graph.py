"""Displacement graph over flow fronts.

Nodes are front labels; an edge A -> B exists when A is among the spatially
adjacent predecessors of B that achieve the largest time below B's. Edges
carry forward/backward interface distances and the derived velocity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy import ndimage

from .config import Rect
from .fronts import (FlowFront, FrontLabelMap, _EIGHT, _window,
                     directed_hausdorff, front_adjacency, interface_masks)
from .timemap import TimeMap


class GraphStateError(RuntimeError):
    """Graph operation called in an inconsistent pipeline state."""


@dataclass
class DisplacementGraph:
    g: nx.DiGraph
    fronts: dict[int, FlowFront]
    adjacency: dict[int, set[int]]  # spatial adjacency between all fronts
    label_map: FrontLabelMap
    time_map: TimeMap
    stage_trace: list[dict] = field(default_factory=list)

    def record_stage(self, stage: str):
        self.stage_trace.append({
            "stage": stage,
            "nodes": self.g.number_of_nodes(),
            "edges": self.g.number_of_edges(),
        })

    def time(self, node: int) -> int:
        return self.fronts[node].time

    def replace(self, g: nx.DiGraph) -> "DisplacementGraph":
        return DisplacementGraph(g, self.fronts, self.adjacency,
                                 self.label_map, self.time_map,
                                 list(self.stage_trace))


@dataclass
class MainChannel:
    nodes: list[int]  # inlet source .. breakthrough node
    total_area: int


def labels_in_region(labels: np.ndarray, region: Rect) -> set[int]:
    rs, cs = region.slices()
    found = np.unique(labels[rs, cs])
    return {int(v) for v in found if v > 0}


def edge_interfaces(a: FlowFront, b: FlowFront, lmap: FrontLabelMap,
                    m: TimeMap, ff_mask: np.ndarray):
    """Point sets for the velocity of edge a -> b.

    crossed: pixels of a adjacent to b; backward: the interface before a
    flooded (pixels of earlier fronts adjacent to a); forward: b's own
    fluid-fluid interface. Coordinates are global pixel (row, col).
    """
    shape = lmap.labels.shape
    ax, ay, aw, ah = a.bbox
    bx, by, bw, bh = b.bbox
    union = (min(ax, bx), min(ay, by),
             max(ax + aw, bx + bw) - min(ax, bx),
             max(ay + ah, by + bh) - min(ay, by))
    sl = _window(union, shape)
    sub_lab = lmap.labels[sl]
    sub_grid = m.grid[sl]
    am = sub_lab == a.label
    bm = sub_lab == b.label
    crossed = ndimage.binary_dilation(bm, structure=_EIGHT) & am
    backward = (ndimage.binary_dilation(am, structure=_EIGHT) & ~am
                & (sub_lab > 0) & (sub_grid < a.time))
    forward = bm & ff_mask[sl]
    offset = np.array([sl[0].start, sl[1].start])
    return (np.argwhere(crossed) + offset,
            np.argwhere(backward) + offset,
            np.argwhere(forward) + offset)


def edge_velocity(crossed: np.ndarray, backward: np.ndarray, forward: np.ndarray,
                  delta_frames: int, frame_period: float
                  ) -> tuple[float | None, float | None, float]:
    """(forward distance, backward distance, velocity) for one edge.

    velocity = (d_fwd + d_bwd) / (2 * dt); with an empty interface on one
    side (e.g. a source front has no backward interface) the remaining
    distance is used alone.
    """
    dt = delta_frames * frame_period
    d_fwd = directed_hausdorff(crossed, forward) if len(forward) else None
    d_bwd = directed_hausdorff(crossed, backward) if len(backward) else None
    if d_fwd is not None and d_bwd is not None:
        v = (d_fwd + d_bwd) / (2.0 * dt)
    elif d_fwd is not None:
        v = d_fwd / dt
    elif d_bwd is not None:
        v = d_bwd / dt
    else:
        v = 0.0
    return d_fwd, d_bwd, v


def build_graph(lmap: FrontLabelMap, fronts: list[FlowFront], m: TimeMap
                ) -> DisplacementGraph:
    """One node per front; incoming edges from the latest earlier neighbors."""
    by_label = {f.label: f for f in fronts}
    adjacency = front_adjacency(lmap.labels)
    g = nx.DiGraph()
    for f in fronts:
        g.add_node(f.label)
    ff_mask, _ = interface_masks(m)
    for f in fronts:
        preds = [n for n in adjacency.get(f.label, ())
                 if by_label[n].time < f.time]
        if not preds:
            continue
        tmax = max(by_label[n].time for n in preds)
        for n in sorted(preds):
            if by_label[n].time != tmax:
                continue
            a = by_label[n]
            crossed, backward, forward = edge_interfaces(a, f, lmap, m, ff_mask)
            delta = f.time - a.time
            d_fwd, d_bwd, v = edge_velocity(crossed, backward, forward,
                                            delta, m.frame_period)
            g.add_edge(a.label, f.label,
                       d_forward=d_fwd, d_backward=d_bwd,
                       delta_t=delta * m.frame_period, velocity=v)
    dg = DisplacementGraph(g, by_label, adjacency, lmap, m)
    dg.record_stage("raw")
    return dg


# ---------------------------------------------------------------------------
# Noise fixes


def apply_noise_fixes(dg: DisplacementGraph, inlet_region: Rect
                      ) -> DisplacementGraph:
    """Remove isolated nodes, off-inlet sources, and impossible sinks.

    A sink is impossible if its front is spatially adjacent to a front with a
    larger time (the fluid demonstrably kept moving). All three rules are
    iterated to a global fixpoint so the operation is idempotent.
    """
    g = dg.g.copy()
    inlet_labels = labels_in_region(dg.label_map.labels, inlet_region)
    times = {lbl: f.time for lbl, f in dg.fronts.items()}

    def has_later_neighbor(n: int) -> bool:
        return any(times[nb] > times[n] for nb in dg.adjacency.get(n, ()))

    out = dg.replace(g)
    first = True
    while True:
        removed = 0
        iso = [n for n in g if g.degree(n) == 0]
        g.remove_nodes_from(iso)
        removed += len(iso)
        if first:
            out.record_stage("fixed_isolated")
        while True:
            bad = [n for n in g
                   if g.in_degree(n) == 0 and n not in inlet_labels]
            if not bad:
                break
            g.remove_nodes_from(bad)
            removed += len(bad)
        if first:
            out.record_stage("fixed_sources")
        while True:
            bad = [n for n in g
                   if g.out_degree(n) == 0 and has_later_neighbor(n)]
            if not bad:
                break
            g.remove_nodes_from(bad)
            removed += len(bad)
        if first:
            out.record_stage("fixed_sinks")
            first = False
        if removed == 0:
            break
    out.record_stage("fixed")
    return out


# ---------------------------------------------------------------------------
# Breakthrough and main channel


def detect_breakthrough(dg: DisplacementGraph, outlet_region: Rect
                        ) -> tuple[int, int] | None:
    """(frame, node) of the earliest front reaching the outlet, or None."""
    outlet_labels = labels_in_region(dg.label_map.labels, outlet_region)
    candidates = [n for n in dg.g if n in outlet_labels]
    if not candidates:
        return None
    node = min(candidates, key=lambda n: (dg.time(n), n))
    return dg.time(node), node


def extract_main_channel(dg: DisplacementGraph, breakthrough_node: int
                         ) -> MainChannel:
    """Source-to-breakthrough path maximizing total front area.

    Dynamic programming over the topological order; ties resolved by the
    lexicographically smallest node-id sequence.
    """
    g = dg.g
    if breakthrough_node not in g:
        raise GraphStateError(f"breakthrough node {breakthrough_node} not in graph")
    areas = {n: dg.fronts[n].area for n in g}
    best: dict[int, tuple[int, tuple[int, ...]]] = {}
    for n in nx.topological_sort(g):
        if g.in_degree(n) == 0:
            best[n] = (areas[n], (n,))
            continue
        options = [(best[p][0] + areas[n], best[p][1] + (n,))
                   for p in g.predecessors(n) if p in best]
        if not options:
            continue
        top = max(o[0] for o in options)
        best[n] = (top, min(path for score, path in options if score == top))
    if breakthrough_node not in best:
        raise GraphStateError(
            "breakthrough node unreachable from any source; fixes inconsistent")
    total, path = best[breakthrough_node]
    return MainChannel(list(path), total)


# ---------------------------------------------------------------------------
# Velocity jumps and simplification


def detect_velocity_jumps(dg: DisplacementGraph, jump_ratio: float) -> set[int]:
    """Nodes where some outgoing velocity exceeds an incoming one by the ratio."""
    jumps = set()
    g = dg.g
    for n in g:
        in_v = [d["velocity"] for _, _, d in g.in_edges(n, data=True)]
        out_v = [d["velocity"] for _, _, d in g.out_edges(n, data=True)]
        for vi in in_v:
            for vo in out_v:
                if vo <= 0:
                    continue
                if vi <= 0 or vo / vi >= jump_ratio:
                    jumps.add(n)
    return jumps


def _chains(g: nx.DiGraph, trivial: set[int]) -> list[list[int]]:
    chains = []
    seen = set()
    for n in g:
        if n not in trivial or n in seen:
            continue
        pred = next(iter(g.predecessors(n)))
        if pred in trivial:
            continue  # not a chain head
        chain = [n]
        cur = n
        while True:
            nxt = next(iter(g.successors(cur)))
            if nxt in trivial:
                chain.append(nxt)
                cur = nxt
            else:
                break
        seen.update(chain)
        chains.append(chain)
    return chains


def simplify(dg: DisplacementGraph, mode: str = "remove",
             keep_frames: set[int] | frozenset[int] = frozenset(),
             keep_nodes: set[int] | frozenset[int] = frozenset()
             ) -> DisplacementGraph:
    """Collapse chains of 1-in/1-out nodes.

    combine: each maximal chain becomes one representative node (first chain
    node's id) accumulating area and carrying the chain's node ids.
    remove: chain nodes are deleted and the endpoints connected by a single
    edge that references the chain, so per-node metrics stay available from
    the non-simplified graph.
    Nodes whose frame is in keep_frames or whose id is in keep_nodes are
    never collapsed.
    """
    if mode not in ("combine", "remove"):
        raise ValueError(f"unknown simplify mode: {mode}")
    g = dg.g.copy()
    trivial = {n for n in g
               if g.in_degree(n) == 1 and g.out_degree(n) == 1
               and dg.time(n) not in keep_frames and n not in keep_nodes}
    chains = _chains(g, trivial)
    endpoints = [(next(iter(g.predecessors(c[0]))),
                  next(iter(g.successors(c[-1])))) for c in chains]
    pair_count = Counter(endpoints)
    for chain, (pred, succ) in zip(chains, endpoints):
        if mode == "remove" and (pair_count[(pred, succ)] > 1
                                 or dg.g.has_edge(pred, succ)):
            # parallel branches between the same endpoints: collapsing
            # them into one DiGraph edge would lose chain references,
            # so these chains stay in place
            continue
        out_attrs = dict(g.edges[chain[-1], succ])
        if mode == "combine":
            rep = chain[0]
            g.nodes[rep]["chain"] = list(chain)
            g.nodes[rep]["combined_area"] = sum(dg.fronts[c].area for c in chain)
            g.remove_nodes_from(chain[1:])
            if rep != chain[-1]:
                g.add_edge(rep, succ, **out_attrs)
        else:
            if g.has_edge(pred, succ):
                # a parallel branch already claimed this endpoint pair;
                # removing a second chain would lose its reference
                continue
            path = [pred] + chain + [succ]
            edges = [dict(dg.g.edges[u, v]) for u, v in zip(path, path[1:])]
            dt = sum(e["delta_t"] for e in edges)
            vel = sum(e["velocity"] * e["delta_t"] for e in edges) / dt
            g.remove_nodes_from(chain)
            g.add_edge(pred, succ, d_forward=None, d_backward=None,
                       delta_t=dt, velocity=vel, chain=list(chain))
    out = dg.replace(g)
    out.record_stage("combined" if mode == "combine" else "removed")
    return out


# ---------------------------------------------------------------------------
# Per-frame aggregate metrics


@dataclass
class FrameMetrics:
    frame: int
    time_s: float
    area_px: int
    velocity_px_s: float
    ff_interface_px: int
    fs_interface_px: int
    fingers: int


def frame_metrics(dg: DisplacementGraph, fronts: list[FlowFront],
                  last_frame_index: int) -> list[FrameMetrics]:
    """Aggregates per frame 1..T over all fronts; finger count from the graph.

    Velocity is the area-weighted mean of front velocities; fingers counts
    nodes of the fixed, non-simplified graph active in the frame.
    """
    by_time: dict[int, list[FlowFront]] = {}
    for f in fronts:
        by_time.setdefault(f.time, []).append(f)
    node_times = [dg.time(n) for n in dg.g]
    fingers = np.bincount(node_times, minlength=last_frame_index + 1) \
        if node_times else np.zeros(last_frame_index + 1, dtype=np.int64)
    rows = []
    fp = dg.time_map.frame_period
    for tau in range(1, last_frame_index + 1):
        group = by_time.get(tau, [])
        area = sum(f.area for f in group)
        vel = (sum(f.velocity_magnitude * f.area for f in group) / area
               if area else 0.0)
        rows.append(FrameMetrics(
            frame=tau,
            time_s=tau * fp,
            area_px=area,
            velocity_px_s=vel,
            ff_interface_px=sum(f.ff_interface_len for f in group),
            fs_interface_px=sum(f.fs_interface_len for f in group),
            fingers=int(fingers[tau]) if tau < len(fingers) else 0,
        ))
    return rows
