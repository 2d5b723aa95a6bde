"""Flow-front extraction, restricted quantization, and per-front metrics.

A flow front is a maximal 8-connected region of equal invasion time.
Label map encoding: 0 = SOLID, -1 = NEVER, positive = dense front labels.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .timemap import NEVER, SOLID, TimeMap

NEVER_LABEL = -1
_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass
class FrontLabelMap:
    labels: np.ndarray  # int32, same shape as the time map
    count: int

    def mask(self, label: int) -> np.ndarray:
        return self.labels == label


@dataclass
class FlowFront:
    label: int
    time: int  # frame index
    area: int
    centroid: tuple[float, float]  # (x, y) in pixels
    bbox: tuple[int, int, int, int]  # x, y, w, h
    ff_interface_len: int = 0
    fs_interface_len: int = 0
    velocity_magnitude: float = 0.0


# ---------------------------------------------------------------------------
# Hausdorff distance on pixel point sets


def _min_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distance from each point of a to its nearest point of b.

    Squared distances on integer pixel coordinates are exact in float64, so
    the final sqrt is bit-reproducible regardless of the search strategy.
    """
    if a.shape[0] * b.shape[0] <= 250_000:
        d2 = cdist(a, b, metric="sqeuclidean")
        return d2.min(axis=1)
    _, idx = cKDTree(b).query(a, k=1)
    diff = a - b[idx]
    return (diff * diff).sum(axis=1)


def directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """max over a of the distance to the nearest point of b."""
    a = np.asarray(a, dtype=np.float64).reshape(-1, 2)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 2)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("hausdorff distance of an empty point set")
    return float(np.sqrt(_min_sq_dists(a, b).max()))


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance: max of both directed distances."""
    a = np.asarray(a, dtype=np.float64).reshape(-1, 2)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 2)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("hausdorff distance of an empty point set")
    m = max(_min_sq_dists(a, b).max(), _min_sq_dists(b, a).max())
    return float(np.sqrt(m))


# ---------------------------------------------------------------------------
# Extraction


def extract_fronts(m: TimeMap) -> tuple[FrontLabelMap, list[FlowFront]]:
    """Label 8-connected equal-time regions; SOLID and NEVER are excluded.

    Labels are assigned in ascending time order, so label ids are
    deterministic for a given map.
    """
    grid = m.grid
    fmask = m.frame_mask()
    labels = np.zeros(grid.shape, dtype=np.int32)
    labels[grid == NEVER] = NEVER_LABEL
    count = _label_by_value(grid, fmask, labels)
    lmap = FrontLabelMap(labels, count)
    return lmap, front_records(lmap, m)


def _label_by_value(grid: np.ndarray, fmask: np.ndarray, labels: np.ndarray) -> int:
    """Connected-component labeling restricted to equal values, in-place."""
    if not fmask.any():
        return 0
    work = np.where(fmask, grid, 0).astype(np.int64)
    count = 0
    # find_objects gives a bounding window per time value, keeping each
    # component labeling local
    for value, sl in enumerate(ndimage.find_objects(work), start=1):
        if sl is None:
            continue
        sub = work[sl] == value
        lab, n = ndimage.label(sub, structure=_EIGHT)
        view = labels[sl]
        view[sub] = lab[sub] + count
        count += n
    return count


def front_records(lmap: FrontLabelMap, m: TimeMap) -> list[FlowFront]:
    """Area, time, centroid and bbox for every front (interfaces not yet set)."""
    labels = lmap.labels
    k = lmap.count
    if k == 0:
        return []
    ys, xs = np.nonzero(labels > 0)
    lab = labels[ys, xs]
    areas = np.bincount(lab, minlength=k + 1)
    times = np.zeros(k + 1, dtype=np.int64)
    times[lab] = m.grid[ys, xs]
    sx = np.bincount(lab, weights=xs, minlength=k + 1)
    sy = np.bincount(lab, weights=ys, minlength=k + 1)
    slices = ndimage.find_objects(np.maximum(labels, 0))
    fronts = []
    for label in range(1, k + 1):
        area = int(areas[label])
        sl = slices[label - 1]
        bbox = (sl[1].start, sl[0].start,
                sl[1].stop - sl[1].start, sl[0].stop - sl[0].start)
        fronts.append(FlowFront(
            label=label,
            time=int(times[label]),
            area=area,
            centroid=(sx[label] / area, sy[label] / area),
            bbox=bbox,
        ))
    return fronts


def _shifted_views(arr: np.ndarray, dy: int, dx: int):
    h, w = arr.shape
    a = arr[max(dy, 0):h + min(dy, 0), max(dx, 0):w + min(dx, 0)]
    b = arr[max(-dy, 0):h + min(-dy, 0), max(-dx, 0):w + min(-dx, 0)]
    return a, b


def front_adjacency(labels: np.ndarray) -> dict[int, set[int]]:
    """8-connected spatial adjacency between differently-labeled fronts."""
    adj: dict[int, set[int]] = defaultdict(set)
    for dy, dx in ((0, 1), (1, 0), (1, 1), (1, -1)):
        a, b = _shifted_views(labels, dy, dx)
        mask = (a > 0) & (b > 0) & (a != b)
        if not mask.any():
            continue
        pairs = np.unique(np.stack([a[mask], b[mask]], axis=1), axis=0)
        for u, v in pairs:
            adj[int(u)].add(int(v))
            adj[int(v)].add(int(u))
    return dict(adj)


# ---------------------------------------------------------------------------
# Restricted quantization

MAX_QUANTIZE_ITER = 64


def quantize_small_fronts(m: TimeMap, gamma: int
                          ) -> tuple[TimeMap, FrontLabelMap, list[FlowFront]]:
    """Merge fronts smaller than gamma by quantizing their time values.

    Per iteration i, every small front's time is rounded down to a multiple
    of 2^i, clamped so it never drops below an adjacent large front's time
    (which would break time monotonicity between neighbors). Fronts whose
    time reaches 0 become NEVER. Large fronts are never modified.
    """
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    m = m.copy()
    grid = m.grid
    lmap, fronts = extract_fronts(m)
    for i in range(1, MAX_QUANTIZE_ITER + 1):
        small = [f for f in fronts if f.area < gamma]
        if not small:
            break
        adj = front_adjacency(lmap.labels)
        times = {f.label: f.time for f in fronts}
        areas = {f.label: f.area for f in fronts}
        r = 1 << i
        lut = np.zeros(lmap.count + 1, dtype=np.int64)
        for f in fronts:
            lut[f.label] = f.time
        changed = False
        for f in small:
            star = f.time - (f.time % r)
            bounds = [times[n] for n in adj.get(f.label, ())
                      if areas[n] >= gamma and times[n] <= f.time]
            if bounds:
                star = max(star, max(bounds))
            if star != f.time:
                lut[f.label] = star
                changed = True
        if changed:
            pos = lmap.labels > 0
            new_vals = lut[lmap.labels[pos]]
            out = new_vals.astype(np.uint32)
            out[new_vals == 0] = NEVER  # reduced to zero: mark as never invaded
            grid[pos] = out
            # re-flood-fill: adjusted fronts merge with equal-time neighbors
            lmap, fronts = extract_fronts(m)
    return m, lmap, fronts


# ---------------------------------------------------------------------------
# Metrics

_U32_MAX = int(NEVER)


def interface_masks(m: TimeMap) -> tuple[np.ndarray, np.ndarray]:
    """(fluid-fluid, fluid-solid) interface membership per frame pixel.

    A pixel is on the fluid-fluid interface if an 8-neighbor has a strictly
    larger time value (a later front or NEVER), and on the fluid-solid
    interface if an 8-neighbor is SOLID.
    """
    grid = m.grid
    fmask = m.frame_mask()
    nb_max = ndimage.maximum_filter(grid, footprint=_EIGHT,
                                    mode="constant", cval=0)
    nb_min = ndimage.minimum_filter(grid, footprint=_EIGHT,
                                    mode="constant", cval=_U32_MAX)
    ff = fmask & (nb_max > grid)
    fs = fmask & (nb_min == SOLID)
    return ff, fs


def _window(bbox, shape, margin=1):
    x, y, w, h = bbox
    return (slice(max(y - margin, 0), min(y + h + margin, shape[0])),
            slice(max(x - margin, 0), min(x + w + margin, shape[1])))


def front_velocity_interfaces(front: FlowFront, lmap: FrontLabelMap, m: TimeMap,
                              ff_mask: np.ndarray
                              ) -> tuple[np.ndarray, np.ndarray]:
    """(trailing, leading) interface point sets of a front.

    Trailing: pixels of earlier fronts adjacent to this one (the fluid-fluid
    interface before this front flooded). Leading: this front's own
    fluid-fluid interface. Either may be empty.
    """
    sl = _window(front.bbox, lmap.labels.shape)
    sub_lab = lmap.labels[sl]
    sub_grid = m.grid[sl]
    fm = sub_lab == front.label
    dil = ndimage.binary_dilation(fm, structure=_EIGHT)
    trailing = dil & ~fm & (sub_lab > 0) & (sub_grid < front.time)
    leading = fm & ff_mask[sl]
    return np.argwhere(trailing), np.argwhere(leading)


def compute_front_metrics(lmap: FrontLabelMap, m: TimeMap, frame_period: float,
                          fronts: list[FlowFront] | None = None) -> list[FlowFront]:
    """Fill interface lengths and velocity magnitude on every front record.

    Velocity is the Hausdorff distance between the trailing and leading
    interfaces, per frame period; 0 if either interface is empty.
    """
    if fronts is None:
        fronts = front_records(lmap, m)
    ff_mask, fs_mask = interface_masks(m)
    labels = lmap.labels
    pos = labels > 0
    k = lmap.count
    ff_len = np.bincount(labels[ff_mask & pos], minlength=k + 1)
    fs_len = np.bincount(labels[fs_mask & pos], minlength=k + 1)
    for f in fronts:
        f.ff_interface_len = int(ff_len[f.label])
        f.fs_interface_len = int(fs_len[f.label])
        trailing, leading = front_velocity_interfaces(f, lmap, m, ff_mask)
        if len(trailing) and len(leading):
            f.velocity_magnitude = hausdorff(trailing, leading) / frame_period
        else:
            f.velocity_magnitude = 0.0
    return fronts
