"""Sample the three-tier deployment and check it against the closed forms.

Draws the uniform macro tier, the uniform small-cell tier, and the clustered
hotspot tier in the default 5 x 5 km region, then compares empirical counts
and nearest-BS distances with their analytic values:

* tier counts vs density x area;
* mean nearest-macro distance vs 1/(2 sqrt(lambda_m));
* hotspot-to-parent scatter vs the Gaussian displacement scale.
"""

import argparse

import numpy as np

from hetnet_handover import (
    ClusterConfig,
    Region,
    mean_r_sm,
    nearest_point_batch,
    sample_ppp,
    sample_tcp,
)
from hetnet_handover.geometry import TIER_MACRO, TIER_SMALL


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--fields", type=int, default=200, help="independent draws")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    region = Region(0.0, 5000.0, 0.0, 5000.0)
    lambda_s = 2e-5
    lambda_m = lambda_s / 10.0
    cluster = ClusterConfig(lambda_p=lambda_s / 10.0, sigma=150.0, mean_offspring=5.0)

    counts = {"macro": [], "small": [], "parents": [], "hotspots": []}
    nearest_macro = []
    scatter = []
    for _ in range(args.fields):
        macro = sample_ppp(region, lambda_m, rng, tier=TIER_MACRO)
        small = sample_ppp(region, lambda_s, rng, tier=TIER_SMALL)
        parents, children = sample_tcp(region, cluster, rng)
        counts["macro"].append(len(macro))
        counts["small"].append(len(small))
        counts["parents"].append(len(parents))
        counts["hotspots"].append(len(children))
        if len(macro) and len(children):
            # Interior hotspots only: children near (or beyond) the region
            # edge see a truncated macro field and bias the distance upward.
            pts = children.points
            interior = np.all((pts >= 1000.0) & (pts <= 4000.0), axis=1)
            if interior.any():
                d, _ = nearest_point_batch(pts[interior], macro)
                nearest_macro.extend(d)
        if len(children):
            offsets = children.points - parents.points[children.parent_index]
            scatter.extend(np.hypot(offsets[:, 0], offsets[:, 1]))

    area = region.area
    expected = {
        "macro": lambda_m * area,
        "small": lambda_s * area,
        "parents": cluster.lambda_p * area,
        "hotspots": cluster.implied_density * area,
    }
    print(f"{args.fields} deployments in a {region.width/1000:.0f} x "
          f"{region.height/1000:.0f} km region\n")
    print(f"{'tier':<10} {'mean count':>11} {'expected':>9}")
    for name in ("macro", "small", "parents", "hotspots"):
        print(f"{name:<10} {np.mean(counts[name]):>11.1f} {expected[name]:>9.1f}")

    print(f"\nmean nearest-macro distance, interior hotspots: "
          f"{np.mean(nearest_macro):8.1f} m")
    print(f"closed form for a stationary point:             "
          f"{mean_r_sm(lambda_m):8.1f} m")
    print("(marginally a cluster member is uniform, so the uniform law applies;")
    print(" per cluster, conditioned on the parent, the law is Rician instead)")

    # Gaussian displacement: mean radial offset is sigma * sqrt(pi/2).
    print(f"\nmean hotspot-to-parent offset: {np.mean(scatter):8.1f} m")
    print(f"sigma * sqrt(pi/2):            {cluster.sigma * np.sqrt(np.pi / 2):8.1f} m")


if __name__ == "__main__":
    main()
