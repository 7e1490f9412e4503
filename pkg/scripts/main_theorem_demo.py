"""Compare |torsion| * |det K| with |Pf(Omega)| on the exact fixture and a few float ones.

Usage: python3 scripts/main_theorem_demo.py [--floats N] [--family sp] [--n 2]
"""

import argparse
import json
import time

from torsionlab.pairings import verify_main_theorem
from torsionlab.surfcx import float_fixture, quad_fixture


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--floats", type=int, default=3, help="number of float fixtures")
    ap.add_argument("--family", default="sp")
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = verify_main_theorem(quad_fixture(2, args.family, args.n), fixture=f"quad_{args.family}{args.n}")
    row = report.to_json()
    row["seconds"] = round(time.perf_counter() - t0, 2)
    print(json.dumps(row, sort_keys=True))
    for seed in range(args.floats):
        t0 = time.perf_counter()
        rep, sol = float_fixture(seed, args.family, args.n)
        row = verify_main_theorem(rep, fixture=f"float{seed}").to_json()
        row["residual"] = sol.residual
        row["seconds"] = round(time.perf_counter() - t0, 2)
        print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()
