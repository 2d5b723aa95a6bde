"""Shared helpers: map builders and independent brute-force oracles.

The oracles deliberately avoid the library's own vectorized code paths so
agreement between the two is meaningful.
"""

from __future__ import annotations

import math

import networkx as nx
import numpy as np
import pytest

from flowtrace.config import DatasetConfig, Rect
from flowtrace.fronts import FlowFront, FrontLabelMap
from flowtrace.graph import DisplacementGraph
from flowtrace.timemap import NEVER, SOLID, TimeMap

# -1 = NEVER, 0 = SOLID, positive = frame index
def tm(rows, frame_period: float = 1.0) -> TimeMap:
    arr = np.asarray(rows, dtype=np.int64)
    grid = arr.astype(np.uint32)
    grid[arr < 0] = NEVER
    return TimeMap(grid, frame_period)


def brute_directed_hausdorff(a, b) -> float:
    """All-pairs directed Hausdorff, plain Python."""
    worst = 0.0
    for p in a:
        nearest = min((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 for q in b)
        worst = max(worst, nearest)
    return math.sqrt(worst)


def brute_hausdorff(a, b) -> float:
    return max(brute_directed_hausdorff(a, b), brute_directed_hausdorff(b, a))


def random_time_map(rng: np.random.Generator, size: int = 12,
                    tmax: int = 6, p_solid: float = 0.15,
                    p_never: float = 0.15) -> TimeMap:
    vals = rng.integers(1, tmax + 1, size=(size, size))
    grid = vals.astype(np.uint32)
    r = rng.random((size, size))
    grid[r < p_solid] = SOLID
    grid[(r >= p_solid) & (r < p_solid + p_never)] = NEVER
    return TimeMap(grid, 1.0)


def neighbors8(shape, y, x):
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            ny, nx_ = y + dy, x + dx
            if 0 <= ny < shape[0] and 0 <= nx_ < shape[1]:
                yield ny, nx_


def brute_adjacency(labels: np.ndarray) -> dict[int, set[int]]:
    """Pixel-by-pixel 8-neighborhood scan."""
    adj: dict[int, set[int]] = {}
    h, w = labels.shape
    for y in range(h):
        for x in range(w):
            a = int(labels[y, x])
            if a <= 0:
                continue
            for ny, nx_ in neighbors8(labels.shape, y, x):
                b = int(labels[ny, nx_])
                if b > 0 and b != a:
                    adj.setdefault(a, set()).add(b)
    return adj


def make_graph_from_dag(edges, areas, times=None) -> DisplacementGraph:
    """DisplacementGraph with synthetic fronts for pure graph-algorithm tests."""
    g = nx.DiGraph()
    nodes = sorted(areas)
    g.add_nodes_from(nodes)
    for u, v in edges:
        g.add_edge(u, v, d_forward=None, d_backward=None,
                   delta_t=1.0, velocity=1.0)
    if times is None:
        order = list(nx.topological_sort(g))
        times = {n: i + 1 for i, n in enumerate(order)}
    fronts = {n: FlowFront(label=n, time=times[n], area=areas[n],
                           centroid=(float(n), 0.0), bbox=(n, 0, 1, 1),
                           ff_interface_len=0, fs_interface_len=0,
                           velocity_magnitude=0.0)
              for n in nodes}
    lmap = FrontLabelMap(np.zeros((1, 1), dtype=np.int32), 0)
    empty = TimeMap(np.zeros((1, 1), dtype=np.uint32), 1.0)
    adjacency = {n: set(g.predecessors(n)) | set(g.successors(n))
                 for n in nodes}
    return DisplacementGraph(g, fronts, adjacency, lmap, empty)


def random_dag(rng: np.random.Generator, max_nodes: int = 12,
               p_edge: float = 0.3):
    n = int(rng.integers(2, max_nodes + 1))
    nodes = list(range(1, n + 1))
    edges = [(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]
             if rng.random() < p_edge]
    areas = {v: int(rng.integers(1, 50)) for v in nodes}
    return nodes, edges, areas


def enumerate_best_path(g: nx.DiGraph, areas: dict[int, int], target: int):
    """Exhaustive source-to-target path search (oracle for the DP)."""
    best = None
    sources = [n for n in g if g.in_degree(n) == 0]
    def walk(node, path, score):
        nonlocal best
        if node == target:
            cand = (-score, tuple(path))
            if best is None or cand < best:
                best = cand
            return
        for nxt in g.successors(node):
            walk(nxt, path + [nxt], score + areas[nxt])
    for s in sources:
        walk(s, [s], areas[s])
    if best is None:
        return None
    return -best[0], list(best[1])


@pytest.fixture
def default_config():
    return DatasetConfig(inlet_region=Rect(0, 0, 2, 8),
                         outlet_region=Rect(10, 0, 2, 8))
