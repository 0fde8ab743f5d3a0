#!/usr/bin/env python3
"""Scan triple products over several groups and write a JSONL report.

Usage: python scripts/massey_scan.py [--out scan.jsonl] [--groups heisenberg:2 heisenberg:3]
"""

import argparse
import json
import sys
import time

from masseylab.groups import parse_group
from masseylab.massey import triple_scan


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--groups", nargs="+", default=["heisenberg:2", "heisenberg:3"])
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    out = open(args.out, "w") if args.out else sys.stdout
    bad = 0
    for spec in args.groups:
        G = parse_group(spec)
        p = int(spec.split(":")[1].split(",")[-1])
        t0 = time.time()
        n_def = n_zero = 0
        for rep in triple_scan(G, p):
            obj = rep.to_dict()
            obj["group"] = spec
            print(json.dumps(obj, sort_keys=True), file=out)
            if rep.defined:
                n_def += 1
                n_zero += bool(rep.contains_zero)
                bad += not rep.agree
        print(
            f"# {spec}: defined={n_def} contain_zero={n_zero} "
            f"disagree={bad} ({time.time() - t0:.1f}s)",
            file=sys.stderr,
        )
    if args.out:
        out.close()
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
