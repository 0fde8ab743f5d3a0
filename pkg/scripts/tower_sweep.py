#!/usr/bin/env python3
"""Build a batch of random towers and verify the whole pipeline on each.

Usage: python scripts/tower_sweep.py --ell 7 --p 3 --count 5 [--b t] [--seed 0]
"""

import argparse
import json
import sys
import time

from masseylab.fields import parse_ratfunc
from masseylab.tower import random_tower, run_tower_pipeline


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--b", default="t")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    b = parse_ratfunc(args.b, args.ell)
    failures = 0
    for k in range(args.count):
        t0 = time.time()
        T = run_tower_pipeline(random_tower(args.ell, args.p, b, seed=args.seed + k))
        obj = T.to_dict()
        obj["seed"] = args.seed + k
        ok = all(obj["checks"].values()) and obj["w_not_pth_power"]
        failures += not ok
        print(json.dumps(obj, sort_keys=True))
        print(f"# seed {args.seed + k}: ok={ok} ({time.time() - t0:.2f}s)", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
