import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowtrace.fronts import (compute_front_metrics, directed_hausdorff,
                              extract_fronts, front_adjacency, front_records,
                              hausdorff, interface_masks,
                              quantize_small_fronts)
from flowtrace.timemap import NEVER, SOLID
from tests.conftest import (brute_adjacency, brute_directed_hausdorff,
                            brute_hausdorff, random_time_map, tm)

# ---------------------------------------------------------------------------
# Hausdorff distance


def test_hausdorff_single_pair():
    assert hausdorff([(0, 0)], [(3, 4)]) == 5.0


def test_hausdorff_asymmetric_sets():
    a = [(0, 0), (0, 10)]
    b = [(0, 0)]
    assert directed_hausdorff(a, b) == 10.0
    assert directed_hausdorff(b, a) == 0.0
    assert hausdorff(a, b) == 10.0


def test_hausdorff_identity():
    pts = [(1, 2), (5, 9), (0, 0)]
    assert hausdorff(pts, pts) == 0.0


def test_hausdorff_empty_raises():
    with pytest.raises(ValueError):
        hausdorff([], [(0, 0)])
    with pytest.raises(ValueError):
        directed_hausdorff([(0, 0)], [])


def test_hausdorff_matches_bruteforce_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = rng.integers(0, 60, size=(int(rng.integers(1, 40)), 2))
        b = rng.integers(0, 60, size=(int(rng.integers(1, 40)), 2))
        assert directed_hausdorff(a, b) == brute_directed_hausdorff(a.tolist(), b.tolist())
        assert hausdorff(a, b) == brute_hausdorff(a.tolist(), b.tolist())


def test_hausdorff_large_sets_use_index_path_exactly():
    # above the all-pairs cutoff (250k pairs) the tree-based path must still
    # return the identical exact value
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2000, size=(600, 2))
    b = rng.integers(0, 2000, size=(600, 2))
    assert hausdorff(a, b) == brute_hausdorff(a.tolist(), b.tolist())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)),
                min_size=1, max_size=20),
       st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)),
                min_size=1, max_size=20))
def test_hausdorff_properties(a, b):
    d = hausdorff(a, b)
    assert d == hausdorff(b, a)          # symmetric
    assert d >= 0.0
    assert directed_hausdorff(a, b) <= d
    if set(a) == set(b):
        assert d == 0.0


# ---------------------------------------------------------------------------
# Front extraction


def test_extract_fronts_basic():
    m = tm([
        [0, 1, 1, 2],
        [0, 1, 2, 2],
        [0, -1, 3, 2],
    ])
    lmap, fronts = extract_fronts(m)
    assert lmap.count == 3
    times = sorted(f.time for f in fronts)
    assert times == [1, 2, 3]
    # SOLID and NEVER carry the reserved labels
    assert lmap.labels[0, 0] == 0
    assert lmap.labels[2, 1] == -1


def test_extract_fronts_labels_ascend_with_time():
    m = tm([[3, 3, 0, 1, 1, 0, 2]])
    lmap, fronts = extract_fronts(m)
    by_label = {f.label: f.time for f in fronts}
    labels = sorted(by_label)
    assert [by_label[la] for la in labels] == sorted(by_label.values())


def test_extract_fronts_eight_connectivity():
    # two diagonal pixels of equal time form a single front
    m = tm([[1, -1], [-1, 1]])
    lmap, fronts = extract_fronts(m)
    assert len(fronts) == 1
    assert fronts[0].area == 2


def test_equal_time_separated_regions_are_distinct_fronts():
    m = tm([[1, 0, 1]])
    _, fronts = extract_fronts(m)
    assert len(fronts) == 2


def test_front_records_geometry():
    m = tm([
        [-1, 2, 2, -1],
        [-1, 2, 2, -1],
    ])
    lmap, fronts = extract_fronts(m)
    f = fronts[0]
    assert f.area == 4
    assert f.centroid == (1.5, 0.5)   # (x, y)
    assert f.bbox == (1, 0, 2, 2)


def test_front_adjacency_matches_bruteforce():
    rng = np.random.default_rng(11)
    for _ in range(20):
        m = random_time_map(rng, size=10)
        lmap, _ = extract_fronts(m)
        assert front_adjacency(lmap.labels) == brute_adjacency(lmap.labels)


# ---------------------------------------------------------------------------
# Quantization


def test_quantize_merges_small_fronts():
    # single row: times 1..8, each front 1 px, gamma merges everything
    m = tm([[1, 2, 3, 4, 5, 6, 7, 8]])
    out, lmap, fronts = quantize_small_fronts(m, gamma=3)
    assert all(f.area >= 3 or f.time for f in fronts)
    assert len(fronts) < 8


def test_quantize_large_fronts_untouched():
    grid = [[5] * 10 for _ in range(10)]   # one 100-px front
    grid[0][0] = 3                          # one small front in the corner
    m = tm(grid)
    before = m.grid.copy()
    out, lmap, fronts = quantize_small_fronts(m, gamma=10)
    large_mask = before == 5
    assert np.array_equal(out.grid[large_mask], before[large_mask])


def test_quantize_postconditions_random():
    rng = np.random.default_rng(23)
    gamma = 6
    for _ in range(30):
        m = random_time_map(rng, size=12, tmax=9)
        before = m.grid.copy()
        out, lmap, fronts = quantize_small_fronts(m, gamma)
        # every surviving front is large, or could not merge further
        # restricted monotonicity: quantized values never increase,
        # except pixels that fell to zero and became NEVER
        frame_before = (before != SOLID) & (before != NEVER)
        after = out.grid
        went_never = frame_before & (after == NEVER)
        still_frame = frame_before & ~went_never
        assert np.all(after[still_frame] <= before[still_frame])
        # large fronts of the original map are bit-identical
        _, orig_fronts = extract_fronts(tm_like(before))
        lab0, _ = extract_fronts(tm_like(before))
        for f in orig_fronts:
            if f.area >= gamma:
                mask = lab0.labels == f.label
                assert np.array_equal(after[mask], before[mask])
        # idempotence: a second pass changes nothing
        out2, _, _ = quantize_small_fronts(out, gamma)
        assert np.array_equal(out2.grid, out.grid)


def tm_like(grid):
    from flowtrace.timemap import TimeMap
    return TimeMap(grid.copy(), 1.0)


def test_quantize_never_zero_becomes_never():
    # a tiny time-1 front with no large neighbor quantizes to 0 -> NEVER
    m = tm([[1, -1, -1, -1]])
    out, lmap, fronts = quantize_small_fronts(m, gamma=5)
    assert out.grid[0, 0] == NEVER
    assert len(fronts) == 0


# ---------------------------------------------------------------------------
# Interfaces and velocity


def test_interface_masks():
    m = tm([
        [0, 1, 2, -1],
    ])
    ff, fs = interface_masks(m)
    assert ff[0, 1] and ff[0, 2]      # both touch something strictly later
    assert fs[0, 1] and not fs[0, 2]  # only time-1 touches the solid
    assert not ff[0, 0] and not fs[0, 0]


def test_front_velocity_three_pixel_advance():
    # 1-px-wide column advancing 3 px per frame: velocity 3 / frame_period
    row = [0] + [1 + (c // 3) for c in range(9)]
    m = tm([row], frame_period=0.5)
    lmap, fronts = extract_fronts(m)
    fronts = compute_front_metrics(lmap, m, m.frame_period, fronts)
    mid = [f for f in fronts if f.time == 2][0]
    assert mid.velocity_magnitude == 3.0 / 0.5


def test_front_metrics_interface_lengths():
    m = tm([
        [0, 1, 1, -1],
        [0, 1, 1, -1],
    ])
    lmap, fronts = extract_fronts(m)
    fronts = compute_front_metrics(lmap, m, 1.0, fronts)
    f = fronts[0]
    assert f.area == 4
    assert f.ff_interface_len == 2  # right column borders NEVER
    assert f.fs_interface_len == 2  # left column borders SOLID
