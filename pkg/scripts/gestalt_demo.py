#!/usr/bin/env python3
"""Show the Gestalt effect on the truncated shift-state system.

The string 000(100)... truncated to depth L lies in the global attractor K
of the two prepend maps, yet in none of the individual attractors of the
short periodic strategies: the whole is larger than the union of its parts.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from choicedyn import compute_K, enumerate_words, individual_attractor  # noqa: E402
from choicedyn.models import GESTALT_OUTSIDER, GestaltConfig, gestalt_model, word_to_code  # noqa: E402
from choicedyn.symbolic import UPString  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=12)
    ap.add_argument("--max-period", type=int, default=4)
    args = ap.parse_args()

    model = gestalt_model(GestaltConfig(depth=args.depth))
    L = model.meta["depth"]
    target = word_to_code(GESTALT_OUTSIDER.prefix(L), L)
    K = compute_K(model, delta=0.0)
    print(f"depth {L}: |K| = {K.cloud.n} of {2 ** L} states")
    print(f"prefix of {GESTALT_OUTSIDER} in K: {bool(K.cloud.contains_points([[float(target)]])[0])}")

    holders = []
    count = 0
    for length in range(1, args.max_period + 1):
        for word in enumerate_words(2, length):
            s = UPString((), word.letters)
            rep = individual_attractor(model, s, delta=0.0)
            count += 1
            if bool(rep.cloud.contains_points([[float(target)]])[0]):
                holders.append(str(s))
    print(f"strategies checked: {count}; attractors containing the prefix: {holders or 'none'}")


if __name__ == "__main__":
    main()
