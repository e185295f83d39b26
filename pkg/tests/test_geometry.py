"""Deployment geometry: regions, point processes, nearest-distance queries."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hetnet_handover.geometry import (
    TIER_HOTSPOT,
    TIER_MACRO,
    TIER_SMALL,
    ClusterConfig,
    PointSet,
    Region,
    nearest_point,
    nearest_point_batch,
    partition_five,
    sample_ppp,
    sample_tcp,
)


class TestRegion:
    def test_area_and_sides(self):
        r = Region(0.0, 5000.0, 0.0, 2000.0)
        assert r.area == pytest.approx(1e7)
        assert r.width == 5000.0
        assert r.height == 2000.0

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            Region(0.0, 0.0, 0.0, 10.0)
        with pytest.raises(ValueError):
            Region(0.0, 10.0, 5.0, 1.0)

    def test_contains_is_closed(self):
        r = Region(0.0, 10.0, 0.0, 10.0)
        pts = np.array([[0.0, 0.0], [10.0, 10.0], [5.0, 5.0], [10.0001, 5.0]])
        assert list(r.contains(pts)) == [True, True, True, False]

    def test_sample_uniform_inside_and_deterministic(self):
        r = Region(-100.0, 100.0, 50.0, 250.0)
        a = r.sample_uniform(1000, np.random.default_rng(7))
        b = r.sample_uniform(1000, np.random.default_rng(7))
        assert np.array_equal(a, b)
        assert np.all(r.contains(a))


class TestSamplePPP:
    def test_count_mean(self):
        region = Region(0.0, 10_000.0, 0.0, 10_000.0)
        rng = np.random.default_rng(1)
        counts = [len(sample_ppp(region, 1e-6, rng)) for _ in range(300)]
        # Poisson(100) mean over 300 reps: SE = sqrt(100/300) ~ 0.58.
        assert np.mean(counts) == pytest.approx(100.0, abs=3.0)

    def test_points_inside_and_tier(self):
        region = Region(0.0, 1000.0, 0.0, 1000.0)
        ps = sample_ppp(region, 1e-4, np.random.default_rng(2), tier=TIER_MACRO)
        assert ps.tier == TIER_MACRO
        assert np.all(region.contains(ps.points))

    def test_invalid_density(self):
        region = Region(0.0, 1000.0, 0.0, 1000.0)
        with pytest.raises(ValueError):
            sample_ppp(region, 0.0, np.random.default_rng(0))


class TestClusterConfig:
    def test_implied_density(self):
        cfg = ClusterConfig(lambda_p=2e-6, sigma=150.0, mean_offspring=5.0)
        assert cfg.implied_density == pytest.approx(1e-5)

    def test_validation(self):
        with pytest.raises(ValueError):
            ClusterConfig(lambda_p=0.0, sigma=150.0)
        with pytest.raises(ValueError):
            ClusterConfig(lambda_p=1e-6, sigma=-1.0)
        with pytest.raises(ValueError):
            ClusterConfig(lambda_p=1e-6, sigma=150.0, mean_offspring=0.0)


class TestSampleTCP:
    def test_parent_child_structure(self):
        region = Region(0.0, 5000.0, 0.0, 5000.0)
        cfg = ClusterConfig(lambda_p=2e-6, sigma=150.0, mean_offspring=5.0)
        parents, children = sample_tcp(region, cfg, np.random.default_rng(3))
        assert parents.tier == TIER_HOTSPOT and children.tier == TIER_HOTSPOT
        assert np.all(region.contains(parents.points))
        assert children.parent_index is not None
        assert children.parent_index.min() >= 0
        assert children.parent_index.max() < len(parents)

    def test_children_outside_region_are_kept(self):
        # A tiny region with huge scatter guarantees out-of-region children.
        region = Region(0.0, 200.0, 0.0, 200.0)
        cfg = ClusterConfig(lambda_p=5e-4, sigma=500.0, mean_offspring=10.0)
        _, children = sample_tcp(region, cfg, np.random.default_rng(4))
        assert len(children) > 0
        assert not np.all(region.contains(children.points))

    def test_offspring_count_and_scatter(self):
        region = Region(0.0, 20_000.0, 0.0, 20_000.0)
        cfg = ClusterConfig(lambda_p=1e-6, sigma=150.0, mean_offspring=5.0)
        rng = np.random.default_rng(5)
        totals, scatters = [], []
        for _ in range(50):
            parents, children = sample_tcp(region, cfg, rng)
            if len(parents) == 0:
                continue
            totals.append(len(children) / len(parents))
            disp = children.points - parents.points[children.parent_index]
            scatters.append(np.std(disp))
        assert np.mean(totals) == pytest.approx(5.0, rel=0.05)
        assert np.mean(scatters) == pytest.approx(150.0, rel=0.05)

    def test_empty_offspring_edge(self):
        region = Region(0.0, 100.0, 0.0, 100.0)
        cfg = ClusterConfig(lambda_p=1e-9, sigma=10.0, mean_offspring=1.0)
        parents, children = sample_tcp(region, cfg, np.random.default_rng(0))
        assert len(parents) == 0
        assert len(children) == 0
        assert children.parent_index is not None and len(children.parent_index) == 0


class TestNearest:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(6)
        pts = PointSet(tier=TIER_SMALL, points=rng.uniform(0, 1000, (40, 2)))
        q = np.array([300.0, 700.0])
        d, i = nearest_point(q, pts)
        brute = np.linalg.norm(pts.points - q, axis=1)
        assert i == int(np.argmin(brute))
        assert d == pytest.approx(brute.min())

    def test_batch_matches_loop(self):
        rng = np.random.default_rng(7)
        pts = PointSet(tier=TIER_SMALL, points=rng.uniform(0, 1000, (25, 2)))
        queries = rng.uniform(0, 1000, (30, 2))
        d_batch, i_batch = nearest_point_batch(queries, pts)
        for k, q in enumerate(queries):
            d, i = nearest_point(q, pts)
            assert i_batch[k] == i
            assert d_batch[k] == pytest.approx(d)

    def test_empty_targets_rejected(self):
        empty = PointSet(tier=TIER_SMALL, points=np.zeros((0, 2)))
        with pytest.raises(ValueError):
            nearest_point(np.array([0.0, 0.0]), empty)


class TestPartitionFive:
    def test_areas_cover_region(self):
        region = Region(0.0, 1000.0, 0.0, 600.0)
        part = partition_five(region, 0.1)
        assert part.areas().sum() == pytest.approx(region.area)

    def test_every_point_in_exactly_one_part(self):
        region = Region(0.0, 1000.0, 0.0, 600.0)
        part = partition_five(region, 0.15)
        pts = region.sample_uniform(5000, np.random.default_rng(8))
        idx = part.index_of(pts)
        assert idx.min() >= 0 and idx.max() <= 4
        # Cross-check against per-part membership with boundary tie-breaking:
        # membership counts can exceed 1 only on shared edges (measure zero).
        member = np.stack([p.contains(pts) for p in part.parts])
        assert np.all(member.sum(axis=0) >= 1)

    def test_border_fraction_validated(self):
        region = Region(0.0, 10.0, 0.0, 10.0)
        for bad in (0.0, 0.5, 0.9, -0.1):
            with pytest.raises(ValueError):
                partition_five(region, bad)

    def test_outside_point_rejected(self):
        region = Region(0.0, 10.0, 0.0, 10.0)
        part = partition_five(region, 0.2)
        with pytest.raises(ValueError):
            part.index_of(np.array([[11.0, 5.0]]))


class TestPointSetCsv:
    def test_round_trip(self):
        ps = PointSet(tier=TIER_MACRO, points=np.array([[1.25, 2.5], [3.0, 4.0]]))
        back = PointSet.from_csv(ps.to_csv())
        assert back.tier == TIER_MACRO
        assert np.allclose(back.points, ps.points)

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError):
            PointSet.from_csv("a,b,c\nM,1,2\n")


@given(
    w=st.floats(min_value=1.0, max_value=1e4),
    h=st.floats(min_value=1.0, max_value=1e4),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(max_examples=50, deadline=None)
def test_uniform_samples_always_inside(w, h, seed):
    region = Region(0.0, w, 0.0, h)
    pts = region.sample_uniform(64, np.random.default_rng(seed))
    assert np.all(region.contains(pts))
