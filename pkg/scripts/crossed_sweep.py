#!/usr/bin/env python3
"""Verify relations and the tensor decomposition on a batch of instances.

Usage: python scripts/crossed_sweep.py --ell 7 --p 3 --count 5 [--a2 t] [--seed 0]
"""

import argparse
import json
import sys
import time

from masseylab.crossed import (
    crossed_report,
    instance_acp,
    structure_elements,
    verify_decomposition,
    verify_relations,
)
from masseylab.fields import parse_ratfunc


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--a2", default="t")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    a2 = parse_ratfunc(args.a2, args.ell)
    failures = 0
    for k in range(args.count):
        t0 = time.time()
        inst = instance_acp(args.ell, args.p, a2, seed=args.seed + k)
        se = structure_elements(inst)
        rel = verify_relations(inst, se)
        dec = verify_decomposition(inst, se, rel)
        obj = crossed_report(inst, se, rel, dec)
        ok = obj["acpc"] and all(obj["relations"]) and obj["decomposition"]
        failures += not ok
        print(json.dumps(obj, sort_keys=True))
        print(f"# seed {args.seed + k}: ok={ok} ({time.time() - t0:.2f}s)", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
