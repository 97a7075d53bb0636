#!/usr/bin/env python3
"""Map the verdict surface of one family over a (q, r) grid.

Prints a character grid (E embeds, D does not, U undetermined) with r on
the rows and q on the columns, so the undecided band around the q in
(2, inf) borderline is visible at a glance.

Example:

    python3 scripts/sweep_gap.py --family shearlet_coorbit \
        --params '{"c":"-1","alpha":"0","beta":"8/5"}' -p 13/3 -k 1
"""

import argparse
import json

from decomp_embed.embedding import Outcome, decide_sobolev
from decomp_embed.exponents import ExtExponent

MARK = {
    Outcome.EMBEDS: "E",
    Outcome.DOES_NOT_EMBED: "D",
    Outcome.UNDETERMINED: "U",
}

DEFAULT_AXIS = [
    "1/3", "1/2", "2/3", "1", "3/2", "2", "5/2", "3", "4", "5", "7", "10", "inf",
]


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="shearlet_coorbit")
    ap.add_argument("--params", default='{"c":"-1","alpha":"0","beta":"8/5"}',
                    help="family parameters as a JSON object")
    ap.add_argument("-p", default="13/3", help="source integrability exponent")
    ap.add_argument("-k", type=int, default=1, help="target smoothness order")
    ap.add_argument("--axis", nargs="*", default=DEFAULT_AXIS,
                    help="exponent values used for both the q and r axes")
    return ap.parse_args()


def main() -> None:
    args = parse_args()
    params = json.loads(args.params)
    p = ExtExponent(args.p)
    axis = [ExtExponent(v) for v in args.axis]

    header = "r \\ q  " + " ".join(f"{v!s:>4}" for v in axis)
    print(f"family={args.family} params={params} p={p} k={args.k}")
    print(header)
    print("-" * len(header))
    counts = {"E": 0, "D": 0, "U": 0}
    for r in reversed(axis):
        cells = []
        for q in axis:
            v = decide_sobolev(args.family, params, p=p, q=q, r=r, k=args.k)
            mark = MARK[v.outcome]
            counts[mark] += 1
            cells.append(f"{mark:>4}")
        print(f"{r!s:>5}  " + " ".join(cells))

    total = len(axis) ** 2
    print(f"\n{total} queries: {counts['E']} embed, {counts['D']} fail, "
          f"{counts['U']} undetermined")


if __name__ == "__main__":
    main()
