"""Spatial deployment sampling and queries for a three-tier cellular layout.

Two kinds of point processes are supported:

* homogeneous Poisson point processes (PPP) for the macro tier ``M`` and the
  uniformly deployed small-cell tier ``S``;
* a Thomas cluster process for the hotspot small-cell tier ``Sp``: Poisson
  parents, a Poisson number of offspring per parent, and isotropic Gaussian
  scattering of each offspring around its parent.

All sampling functions are pure given an explicit ``numpy.random.Generator``;
there is no module-level random state.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

TIER_MACRO = "M"
TIER_SMALL = "S"
TIER_HOTSPOT = "Sp"
VALID_TIERS = (TIER_MACRO, TIER_SMALL, TIER_HOTSPOT)

POINTSET_CSV_HEADER = "tier,x_m,y_m"


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangular deployment / roaming region, in meters."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError(
                f"degenerate region: x [{self.x_min}, {self.x_max}], "
                f"y [{self.y_min}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership test for an (N, 2) array (inclusive edges)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return (
            (pts[:, 0] >= self.x_min)
            & (pts[:, 0] <= self.x_max)
            & (pts[:, 1] >= self.y_min)
            & (pts[:, 1] <= self.y_max)
        )

    def sample_uniform(self, n: int, rng: np.random.Generator) -> np.ndarray:
        xs = rng.uniform(self.x_min, self.x_max, size=n)
        ys = rng.uniform(self.y_min, self.y_max, size=n)
        return np.column_stack([xs, ys])


@dataclass(frozen=True)
class ClusterConfig:
    """Parameters of the hotspot (Thomas) cluster process.

    ``lambda_p`` is the parent density per m^2, ``sigma`` the standard
    deviation (meters) of the isotropic Gaussian offspring displacement, and
    ``mean_offspring`` the mean number of offspring per parent.  The implied
    deployment density of the hotspot tier is ``lambda_p * mean_offspring``.
    """

    lambda_p: float
    sigma: float
    mean_offspring: float = 5.0

    def __post_init__(self) -> None:
        if self.lambda_p <= 0:
            raise ValueError(f"lambda_p must be positive, got {self.lambda_p}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.mean_offspring <= 0:
            raise ValueError(
                f"mean_offspring must be positive, got {self.mean_offspring}"
            )

    @property
    def implied_density(self) -> float:
        return self.lambda_p * self.mean_offspring


@dataclass
class PointSet:
    """A tier label plus an (N, 2) coordinate array in meters.

    ``parent_index`` is populated for cluster offspring only: entry ``i`` is
    the row of the parent point set that spawned offspring ``i``.
    """

    tier: str
    points: np.ndarray
    parent_index: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        if self.tier not in VALID_TIERS:
            raise ValueError(f"unknown tier {self.tier!r}; expected one of {VALID_TIERS}")
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must be (N, 2), got shape {pts.shape}")
        self.points = pts
        if self.parent_index is not None:
            idx = np.asarray(self.parent_index, dtype=int)
            if idx.shape != (len(pts),):
                raise ValueError("parent_index length must match point count")
            self.parent_index = idx

    def __len__(self) -> int:
        return len(self.points)

    def to_csv(self) -> str:
        """Serialize as ``tier,x_m,y_m`` rows with a header and trailing newline."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(POINTSET_CSV_HEADER.split(","))
        for x, y in self.points:
            writer.writerow([self.tier, f"{x:.6f}", f"{y:.6f}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PointSet":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != POINTSET_CSV_HEADER.split(","):
            raise ValueError(f"expected header {POINTSET_CSV_HEADER!r}")
        body = [r for r in rows[1:] if r]
        if not body:
            raise ValueError("point-set CSV has no data rows")
        tiers = {r[0] for r in body}
        if len(tiers) != 1:
            raise ValueError(f"mixed tiers in one point set: {sorted(tiers)}")
        pts = np.array([[float(r[1]), float(r[2])] for r in body])
        return cls(tier=body[0][0], points=pts)


@dataclass(frozen=True)
class FivePartition:
    """A disjoint five-way cover of a region: one central rectangle plus the
    left / right / bottom / top border strips."""

    region: Region
    central: Region
    # Strips, in (left, right, bottom, top) order.  Left/right strips span the
    # full height; bottom/top strips span only the central x-range so that the
    # five pieces are disjoint and cover the region exactly.
    strips: tuple[Region, Region, Region, Region]

    @property
    def parts(self) -> tuple[Region, ...]:
        return (self.central, *self.strips)

    def areas(self) -> np.ndarray:
        return np.array([p.area for p in self.parts])

    def index_of(self, points: np.ndarray) -> np.ndarray:
        """Map points to sub-region indices 0..4 (0 = central).

        Boundary points between sub-regions are assigned to the lowest index
        whose closed rectangle contains them, so every in-region point gets
        exactly one label.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.full(len(pts), -1, dtype=int)
        for i, part in enumerate(self.parts):
            hit = part.contains(pts) & (out == -1)
            out[hit] = i
        if np.any(out == -1):
            bad = pts[out == -1][0]
            raise ValueError(f"point {bad} lies outside the partitioned region")
        return out


def sample_ppp(
    region: Region,
    density: float,
    rng: np.random.Generator,
    tier: str = TIER_SMALL,
) -> PointSet:
    """Draw one realization of a homogeneous PPP over ``region``.

    The count is Poisson(density * area) and positions are i.i.d. uniform,
    which together are an exact PPP sampler on a rectangle.
    """
    if density <= 0:
        raise ValueError(f"density must be positive, got {density}")
    n = int(rng.poisson(density * region.area))
    return PointSet(tier=tier, points=region.sample_uniform(n, rng))


def sample_tcp(
    region: Region,
    cfg: ClusterConfig,
    rng: np.random.Generator,
) -> tuple[PointSet, PointSet]:
    """Draw one Thomas-cluster realization: ``(parents, offspring)``.

    Parents form a PPP(``cfg.lambda_p``) inside ``region``.  Each parent
    spawns a Poisson(``cfg.mean_offspring``) number of children, displaced by
    i.i.d. N(0, sigma^2 I).  Children falling outside the region are kept:
    clipping would distort the radial displacement law, and downstream
    geometry needs true positions.
    """
    parents = sample_ppp(region, cfg.lambda_p, rng, tier=TIER_HOTSPOT)
    counts = rng.poisson(cfg.mean_offspring, size=len(parents))
    total = int(counts.sum())
    if total == 0:
        return parents, PointSet(
            tier=TIER_HOTSPOT,
            points=np.zeros((0, 2)),
            parent_index=np.zeros(0, dtype=int),
        )
    parent_index = np.repeat(np.arange(len(parents)), counts)
    offsets = cfg.sigma * rng.standard_normal((total, 2))
    children = parents.points[parent_index] + offsets
    return parents, PointSet(
        tier=TIER_HOTSPOT, points=children, parent_index=parent_index
    )


def nearest_neighbor_distance(query: np.ndarray, targets: PointSet) -> float:
    """Exact Euclidean distance from ``query`` to the nearest target point."""
    dist, _ = nearest_point(query, targets)
    return dist


def nearest_point(query: np.ndarray, targets: PointSet) -> tuple[float, int]:
    """Distance and row index of the nearest target point.

    Raises ``ValueError`` when the tier has no deployed BS.
    """
    if len(targets) == 0:
        raise ValueError(f"no points in tier {targets.tier!r}")
    q = np.asarray(query, dtype=float)
    d2 = np.sum((targets.points - q) ** 2, axis=1)
    idx = int(np.argmin(d2))
    return float(math.sqrt(d2[idx])), idx


def nearest_point_batch(
    queries: np.ndarray, targets: PointSet
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized nearest-point lookup via a k-d tree: ``(distances, indices)``."""
    if len(targets) == 0:
        raise ValueError(f"no points in tier {targets.tier!r}")
    tree = cKDTree(targets.points)
    dists, idx = tree.query(np.atleast_2d(queries))
    return dists, idx


def partition_five(region: Region, border_fraction: float) -> FivePartition:
    """Split ``region`` into a central rectangle and four border strips.

    ``border_fraction`` is the strip width as a fraction of the corresponding
    region side; it must lie strictly between 0 and 0.5 so that the central
    part is non-degenerate.
    """
    if not (0.0 < border_fraction < 0.5):
        raise ValueError(
            f"border_fraction must be in (0, 0.5), got {border_fraction}"
        )
    bx = border_fraction * region.width
    by = border_fraction * region.height
    cx0, cx1 = region.x_min + bx, region.x_max - bx
    cy0, cy1 = region.y_min + by, region.y_max - by
    central = Region(cx0, cx1, cy0, cy1)
    left = Region(region.x_min, cx0, region.y_min, region.y_max)
    right = Region(cx1, region.x_max, region.y_min, region.y_max)
    bottom = Region(cx0, cx1, region.y_min, cy0)
    top = Region(cx0, cx1, cy1, region.y_max)
    return FivePartition(region=region, central=central, strips=(left, right, bottom, top))
