#!/usr/bin/env python3
"""Print the built-in d=4, t=3, secret-3 reference-example report."""

import argparse
import json

from quditshare.analysis import reproduce_example_d4
from quditshare.protocol import DEFAULT_SEED


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10000, help="Monte-Carlo trials")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--json", action="store_true", help="emit the structured document")
    args = ap.parse_args()
    report = reproduce_example_d4(trials=args.trials, seed=args.seed)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text(), end="")


if __name__ == "__main__":
    main()
