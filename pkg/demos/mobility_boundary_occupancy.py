"""Show how the boundary-biased waypoint model counters center-crowding.

Plain random-waypoint motion concentrates users at the region center and
starves the edges.  The modified model extends each hop by an extra Rayleigh
draw with probability ``p_z``; extended hops clamp to the walls, pushing
waypoint mass back into the border strips.  This script prints the strip
occupancy for a range of ``p_z`` values against the area fraction a uniform
crowd would produce.
"""

import argparse

import numpy as np

from hetnet_handover import (
    MobilityConfig,
    Region,
    empirical_occupancy,
    generate_trajectory,
    partition_five,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--users", type=int, default=100)
    parser.add_argument("--moves", type=int, default=800)
    parser.add_argument("--border-fraction", type=float, default=0.05)
    args = parser.parse_args()

    region = Region(0.0, 5000.0, 0.0, 5000.0)
    partition = partition_five(region, args.border_fraction)
    areas = partition.areas()
    strip_area_fraction = areas[1:].sum() / region.area

    print(f"{args.users} users x {args.moves} moves, border strips "
          f"{args.border_fraction:.0%} of each side\n")
    print(f"{'p_z':>5} {'strip occupancy':>16} {'center occupancy':>17}")
    for p_z in (0.0, 0.1, 0.3, 0.5):
        cfg = MobilityConfig(
            sigma_rwp=300.0, p_z=p_z, sigma_z=300.0, velocity=60.0 / 3.6, pause=5.0
        )
        rng = np.random.default_rng(args.seed)  # paired across p_z values
        trajectories = [
            generate_trajectory(
                region.sample_uniform(1, rng)[0], args.moves, region, cfg, rng
            )
            for _ in range(args.users)
        ]
        occ = empirical_occupancy(trajectories, partition)
        print(f"{p_z:>5.1f} {occ[1:].sum():>16.4f} {occ[0]:>17.4f}")
    print(f"\nuniform reference: strips would hold {strip_area_fraction:.4f} "
          "of the waypoints")
    print("clamped overshoots pile up at the walls, so strip occupancy trends")
    print("upward with p_z (the p_z = 0.1 step is small; short runs are noisy)")


if __name__ == "__main__":
    main()
