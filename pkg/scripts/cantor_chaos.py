#!/usr/bin/env python3
"""Middle-thirds sanity run: attractor vs digit oracle, plus the chaos game."""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from choicedyn import PointCloud, chaos_game, compute_K, hausdorff  # noqa: E402
from choicedyn.models import cantor_model, cantor_reference_points  # noqa: E402
from choicedyn.svgplot import write_scatter  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, default=1e-4)
    ap.add_argument("--steps", type=int, default=1_001_000)
    ap.add_argument("--seed", type=int, default=20260808)
    ap.add_argument("--out", default=os.path.join("out", "cantor"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    model = cantor_model()
    report = compute_K(model, delta=args.delta)
    depth = 9
    ref = PointCloud(cantor_reference_points(depth), args.delta)
    print(
        f"K: {report.cloud.n} points in {report.iterations} iterations; "
        f"hausdorff to depth-{depth} oracle {hausdorff(report.cloud, ref):.2e}"
    )
    write_scatter(os.path.join(args.out, "k.svg"), report.cloud.points)

    cloud, mean = chaos_game(
        model, (0.5, 0.5), 0.5, steps=args.steps, burnin=1000, rng_seed=args.seed, delta=args.delta
    )
    print(f"chaos game: {cloud.n} distinct points, mean of x = {mean:.5f}")
    write_scatter(os.path.join(args.out, "chaos.svg"), cloud.points)


if __name__ == "__main__":
    main()
