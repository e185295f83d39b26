"""Modified random-waypoint (MRWP) mobility.

A classic random-waypoint user draws a Rayleigh-distributed transition length
and a uniform direction for each movement.  The modification adds, with
probability ``p_z``, an independent Rayleigh extension to the drawn length,
which pushes more waypoints toward the region border and counteracts the
center-concentration (density-wave) artifact of the plain model.

Transition length of movement k:

    L'_k = L_k + mu_k * Z_k,
    L_k ~ Rayleigh(sigma_rwp),  mu_k ~ Bernoulli(p_z),  Z_k ~ Rayleigh(sigma_z)

so E[L'] = sqrt(pi/2) * (sigma_rwp + p_z * sigma_z) exactly.

Candidates that would leave the region are clamped to the ray-boundary
intersection: the user walks in the drawn direction until hitting the edge.
Zero-length moves (possible only from a boundary point heading outward, or a
measure-zero zero draw) are redrawn so segments are always non-degenerate.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .geometry import FivePartition, Region

_MIN_SEGMENT = 1e-9  # meters; below this a candidate move is redrawn


@dataclass(frozen=True)
class MobilityConfig:
    sigma_rwp: float  # Rayleigh scale of the base transition length, m
    p_z: float  # probability that a movement gets the Rayleigh extension
    sigma_z: float  # Rayleigh scale of the extension, m
    velocity: float  # constant user speed, m/s
    pause: float  # constant pause after each movement, s

    def __post_init__(self) -> None:
        if self.sigma_rwp <= 0:
            raise ValueError(f"sigma_rwp must be positive, got {self.sigma_rwp}")
        if not (0.0 <= self.p_z <= 1.0):
            raise ValueError(f"p_z must lie in [0, 1], got {self.p_z}")
        if self.sigma_z <= 0:
            raise ValueError(f"sigma_z must be positive, got {self.sigma_z}")
        if self.velocity <= 0:
            raise ValueError(f"velocity must be positive, got {self.velocity}")
        if self.pause < 0:
            raise ValueError(f"pause must be non-negative, got {self.pause}")


@dataclass
class Trajectory:
    """An ordered waypoint sequence with the (constant) motion parameters."""

    waypoints: np.ndarray  # (n_moves + 1, 2)
    velocity: float
    pause: float

    def __post_init__(self) -> None:
        w = np.asarray(self.waypoints, dtype=float)
        if w.ndim != 2 or w.shape[1] != 2 or len(w) < 2:
            raise ValueError("a trajectory needs at least two (x, y) waypoints")
        self.waypoints = w

    @property
    def n_moves(self) -> int:
        return len(self.waypoints) - 1

    def segment_lengths(self) -> np.ndarray:
        deltas = np.diff(self.waypoints, axis=0)
        return np.hypot(deltas[:, 0], deltas[:, 1])

    def total_length(self) -> float:
        return float(self.segment_lengths().sum())

    def total_time(self) -> float:
        """Travel time plus one pause per movement."""
        return float(self.total_length() / self.velocity + self.n_moves * self.pause)

    def to_csv(self, user_id: int = 0) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["user_id", "seq", "x_m", "y_m"])
        for seq, (x, y) in enumerate(self.waypoints):
            writer.writerow([user_id, seq, f"{x:.6f}", f"{y:.6f}"])
        return buf.getvalue()


def draw_transition_length(cfg: MobilityConfig, rng: np.random.Generator) -> float:
    """One draw of L' = L + mu * Z (always >= 0)."""
    length = rng.rayleigh(cfg.sigma_rwp)
    if cfg.p_z > 0 and rng.random() < cfg.p_z:
        length += rng.rayleigh(cfg.sigma_z)
    return float(length)


def mean_transition_length(cfg: MobilityConfig) -> float:
    """Exact E[L'] = sqrt(pi/2) * (sigma_rwp + p_z * sigma_z)."""
    return math.sqrt(math.pi / 2.0) * (cfg.sigma_rwp + cfg.p_z * cfg.sigma_z)


def expected_movement_time(cfg: MobilityConfig) -> float:
    """Mean wall-clock duration of one movement: E[L'] / V + pause."""
    return mean_transition_length(cfg) / cfg.velocity + cfg.pause


def clamp_to_region(
    current: np.ndarray, direction: np.ndarray, length: float, region: Region
) -> float:
    """Largest travel distance <= ``length`` that stays inside ``region``.

    Standard slab (ray vs. axis-aligned rectangle) intersection; ``current``
    must already be inside.  Returns 0 when the ray immediately exits, i.e.
    the start point sits on the boundary heading outward.
    """
    t_max = length
    for axis in range(2):
        d = direction[axis]
        lo = (region.x_min, region.y_min)[axis]
        hi = (region.x_max, region.y_max)[axis]
        p = current[axis]
        if d > 1e-300:
            t_max = min(t_max, (hi - p) / d)
        elif d < -1e-300:
            t_max = min(t_max, (lo - p) / d)
    return max(0.0, min(length, t_max))


def next_waypoint(
    current: np.ndarray,
    region: Region,
    cfg: MobilityConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw the next waypoint from ``current``.

    Draws (length, direction), clamps the candidate to the boundary along the
    ray, and redraws whenever the resulting segment would be degenerate.  The
    returned point always lies inside the region and differs from ``current``.
    """
    cur = np.asarray(current, dtype=float)
    if not bool(region.contains(cur)[0]):
        raise ValueError(f"current position {cur} is outside the region")
    while True:
        length = draw_transition_length(cfg, rng)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        direction = np.array([math.cos(theta), math.sin(theta)])
        step = clamp_to_region(cur, direction, length, region)
        if step > _MIN_SEGMENT:
            candidate = cur + step * direction
            # The clamp is exact up to rounding; snap the last few ulps so
            # the waypoint is inside the closed region by construction.
            candidate[0] = min(max(candidate[0], region.x_min), region.x_max)
            candidate[1] = min(max(candidate[1], region.y_min), region.y_max)
            return candidate


def generate_trajectory(
    start: np.ndarray,
    n_moves: int,
    region: Region,
    cfg: MobilityConfig,
    rng: np.random.Generator,
) -> Trajectory:
    if n_moves < 1:
        raise ValueError(f"n_moves must be >= 1, got {n_moves}")
    start_arr = np.asarray(start, dtype=float)
    if not bool(region.contains(start_arr)[0]):
        raise ValueError(f"start {start_arr} is outside the region")
    waypoints = np.empty((n_moves + 1, 2))
    waypoints[0] = start_arr
    pos = start_arr
    for k in range(1, n_moves + 1):
        pos = next_waypoint(pos, region, cfg, rng)
        waypoints[k] = pos
    return Trajectory(waypoints=waypoints, velocity=cfg.velocity, pause=cfg.pause)


def empirical_occupancy(
    trajectories: list[Trajectory], partition: FivePartition
) -> np.ndarray:
    """Fraction of waypoints in each of the five sub-regions (sums to 1)."""
    all_points = [t.waypoints for t in trajectories]
    if not all_points:
        raise ValueError("no trajectories supplied")
    pts = np.concatenate(all_points, axis=0)
    if len(pts) == 0:
        raise ValueError("trajectories contain no waypoints")
    idx = partition.index_of(pts)
    counts = np.bincount(idx, minlength=5).astype(float)
    return counts / counts.sum()
