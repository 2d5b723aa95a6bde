"""Breakthrough-graph layout: pinned main channel + force-directed rest.

The main-channel nodes are fixed on the y = 0 line with their pairwise
centroid distances preserved; every other node is relaxed with a
ForceAtlas2-style scheme (linear attraction along edges, degree-scaled
repulsion, weak gravity toward the channel) for a fixed iteration budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import DisplacementGraph, MainChannel


@dataclass(frozen=True)
class LayoutParams:
    iterations: int = 1000
    repulsion: float = 2.0
    attraction: float = 1.0
    gravity: float = 0.02
    seed: int = 0


@dataclass
class LayoutResult:
    positions: dict[int, tuple[float, float]]
    pinned: set[int] = field(default_factory=set)


def channel_positions(dg: DisplacementGraph, channel: MainChannel
                      ) -> dict[int, tuple[float, float]]:
    """Prefix sums of consecutive centroid distances, on the y = 0 line."""
    pos = {}
    x = 0.0
    prev = None
    for n in channel.nodes:
        c = np.asarray(dg.fronts[n].centroid, dtype=float)
        if prev is not None:
            x += float(np.hypot(*(c - prev)))
        pos[n] = (x, 0.0)
        prev = c
    return pos


def layout_breakthrough(dg: DisplacementGraph, channel: MainChannel,
                        params: LayoutParams | None = None) -> LayoutResult:
    if not channel.nodes:
        raise ValueError("main channel is empty")
    params = params or LayoutParams()
    g = dg.g
    nodes = sorted(g.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    n_nodes = len(nodes)

    pinned_pos = channel_positions(dg, channel)
    pinned = np.zeros(n_nodes, dtype=bool)
    pos = np.zeros((n_nodes, 2))
    rng = np.random.default_rng(params.seed)
    for n in nodes:
        i = index[n]
        if n in pinned_pos:
            pos[i] = pinned_pos[n]
            pinned[i] = True
        else:
            cx, cy = dg.fronts[n].centroid
            # tiny seeded jitter so symmetric nodes leave the channel axis
            pos[i] = (cx + rng.normal(0, 1e-3), cy + rng.normal(0, 1e-3))
    free = ~pinned

    if free.any():
        deg = np.array([g.degree(n) for n in nodes], dtype=float)
        mass = deg + 1.0
        edges = np.array([(index[u], index[v]) for u, v in g.edges], dtype=int)
        center = pos[pinned].mean(axis=0) if pinned.any() else pos.mean(axis=0)
        speed = 1.0
        for _ in range(params.iterations):
            force = np.zeros_like(pos)
            delta = pos[:, None, :] - pos[None, :, :]
            dist = np.linalg.norm(delta, axis=2)
            np.fill_diagonal(dist, 1.0)
            rep = params.repulsion * np.outer(mass, mass) / (dist * dist)
            force += (delta / dist[:, :, None] * rep[:, :, None]).sum(axis=1)
            if len(edges):
                d = pos[edges[:, 1]] - pos[edges[:, 0]]
                pull = params.attraction * d
                np.add.at(force, edges[:, 0], pull)
                np.add.at(force, edges[:, 1], -pull)
            force += params.gravity * (center - pos)
            step = force * speed
            norms = np.linalg.norm(step, axis=1, keepdims=True)
            cap = 10.0
            step = np.where(norms > cap, step * cap / norms, step)
            pos[free] += step[free]
            speed *= 0.995

    positions = {}
    for n in nodes:
        if n in pinned_pos:
            positions[n] = pinned_pos[n]  # bit-exact prescribed position
        else:
            positions[n] = (float(pos[index[n], 0]), float(pos[index[n], 1]))
    return LayoutResult(positions, set(pinned_pos))


def color_by_out_degree(dg: DisplacementGraph) -> dict[int, int]:
    """Categorical out-degree class per node: 0, 1, 2, 3, or 4 (meaning >= 4)."""
    return {n: min(dg.g.out_degree(n), 4) for n in dg.g}
