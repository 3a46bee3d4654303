"""Try the linearized isotropic search on half-period patterns and report the outcome."""

import argparse
import time

from quadbundle.field import FieldSpec
from quadbundle.gallery import halfperiod_pattern
from quadbundle.reduction import find_isotropic


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=6)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--tries", type=int, default=50)
    ap.add_argument("--rounds", type=int, default=20)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    field = FieldSpec(32003)
    for s in range(args.seeds):
        q = halfperiod_pattern(args.d, args.k, field, seed=s)
        t = time.perf_counter()
        iso = find_isotropic(q, args.rank, max_tries=args.tries, rounds=args.rounds, seed=s)
        took = time.perf_counter() - t
        if iso is None:
            print(f"seed {s}: no embedding in {args.tries} tries ({took:.1f}s)")
        else:
            print(f"seed {s}: found, isotropy {iso.isotropy_ok}, regularity {iso.regularity.status.value} ({took:.1f}s)")


if __name__ == "__main__":
    main()
