"""Print the Jacobian rank table for the standard (r, l) cases plus optional extras."""

import argparse

from quadbundle.dominance import STANDARD_CASES, dominance_table, format_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=32003)
    ap.add_argument("--seeds", default="0,1,2")
    ap.add_argument("--rational", action="store_true")
    ap.add_argument("--extra", default="", help="extra r:l cases, e.g. 12:0,3:4")
    args = ap.parse_args()
    seeds = tuple(int(s) for s in args.seeds.split(","))
    cases = list(STANDARD_CASES)
    if args.extra:
        cases += [tuple(int(v) for v in c.split(":")) for c in args.extra.split(",")]
    report = dominance_table(cases, p=args.p, seeds=seeds, rational=args.rational)
    print(format_table(report))
    for d in report["discrepancies"]:
        print(f"no certificate: r={d['r']} l={d['l']} k={d['k']} seed={d['seed']} "
              f"rank {d['rank']} < {d['target_dim']}")


if __name__ == "__main__":
    main()
