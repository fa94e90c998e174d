#!/usr/bin/env python3
"""Re-check a generator dump written by `quatdom analyze --json`.

Reads only the JSON file and uses plain integers: every generator must
satisfy x0^2 - a x1^2 - p x2^2 + a p x3^2 = 1.  Exit status 0 when all do.

    python tools/verify_generators.py domain.json [more.json ...]
"""
import json
import sys


def check(path):
    with open(path) as fh:
        data = json.load(fh)
    p, a = int(data["p"]), int(data["a"])
    bad = []
    for x in data["generators"]:
        x0, x1, x2, x3 = (int(t) for t in x)
        if x0 * x0 - a * x1 * x1 - p * x2 * x2 + a * p * x3 * x3 != 1:
            bad.append(x)
    return p, a, len(data["generators"]), bad


def main(paths):
    status = 0
    for path in paths:
        p, a, n, bad = check(path)
        print(f"{path}: (p, a) = ({p}, {a}), {n} generators, {len(bad)} failures")
        for x in bad:
            print(f"  norm != 1: {x}")
        if bad or n == 0:
            status = 1
    return status


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    sys.exit(main(sys.argv[1:]))
