#!/usr/bin/env python3
"""Reproduce the malaria pictures: K, individual attractors, golden-mean slices.

Writes CSV + SVG pairs under out/malaria (override with --out).  The K cloud
at dt = 0.05 shows the two-dimensional attractor whose left/right rims are
the single-map heteroclinic curves; the golden-mean run shows the two
overlapping slices whose union stays strictly inside K.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from choicedyn import builtin, compute_K, directed_distance, individual_attractor  # noqa: E402
from choicedyn.models import malaria_model  # noqa: E402
from choicedyn.restricted import enumerate_slices, save_slice_report, vertex_limits  # noqa: E402
from choicedyn.svgplot import write_scatter  # noqa: E402
from choicedyn.symbolic import parse_strategy  # noqa: E402


def dump(out, stem, cloud):
    with open(os.path.join(out, f"{stem}.csv"), "w", encoding="utf-8") as fh:
        fh.write(cloud.to_csv())
    write_scatter(os.path.join(out, f"{stem}.svg"), cloud.points, xlim=(0, 1), ylim=(0, 1))
    print(f"{stem}: {cloud.n} points")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, default=0.005)
    ap.add_argument("--out", default=os.path.join("out", "malaria"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    model = malaria_model()
    K = compute_K(model, delta=args.delta)
    dump(args.out, "k", K.cloud)

    for text in ("(0)", "(1)", "(10)"):
        rep = individual_attractor(model, parse_strategy(text), delta=args.delta)
        dump(args.out, f"a_{text.strip('()')}", rep.cloud)
        print(f"  contained in K within {directed_distance(rep.cloud, K.cloud):.2e}")

    family = vertex_limits(model, builtin("golden_mean"), delta=args.delta)
    report = enumerate_slices(model, builtin("golden_mean"), family, period_bound=4)
    save_slice_report(report, os.path.join(args.out, "golden_mean"))
    for i, cloud in enumerate(report.slices):
        write_scatter(
            os.path.join(args.out, f"golden_mean_slice_{i}.svg"),
            cloud.points,
            xlim=(0, 1),
            ylim=(0, 1),
        )
    print(
        f"golden mean: {len(report.slices)} distinct slices; "
        f"K -> union gap {directed_distance(K.cloud, report.k_lambda):.3f}"
    )


if __name__ == "__main__":
    main()
