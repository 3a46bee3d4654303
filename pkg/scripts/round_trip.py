"""Extend random models hyperbolically, reduce back, and compare curves and residues."""

import argparse
import random
import time
import warnings

from quadbundle.brauer import Verdict, residue_along_curve, square_class_equal
from quadbundle.field import FieldSpec
from quadbundle.gallery import even_theta_pattern, halfperiod_pattern
from quadbundle.poly import squarefree_part
from quadbundle.reduction import extend_hyperbolic_full, random_rho, reduce, verify_isotropic

B_CHOICES = [(-1,), (0,), (-1, -1), (0, -1), (0, 0)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--p", type=int, default=32003)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    field = FieldSpec(args.p)
    rng = random.Random(args.seed)
    start = time.perf_counter()
    curves = residues = 0
    for i in range(args.n):
        if i % 2:
            q = even_theta_pattern(rng.randint(2, 3), rng.randint(0, 1), field, seed=rng.randrange(10 ** 6))
        else:
            q = halfperiod_pattern(rng.randint(2, 4), rng.randint(0, 2), field, seed=rng.randrange(10 ** 6))
        b = rng.choice(B_CHOICES)
        a, rho = random_rho(q, b, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ext = extend_hyperbolic_full(q, a, b, rho)
        red = reduce(ext.form, verify_isotropic(ext.form, ext.isotropic), seed=i)
        same = squarefree_part(q.det).monic() == squarefree_part(red.det).monic()
        v = square_class_equal(residue_along_curve(q, seed=i), residue_along_curve(red, seed=i), seed=i)
        curves += same
        residues += v.verdict == Verdict.PROBABLY_EQUAL
        print(f"{i:3d} size {q.size} -> {ext.form.size} -> {red.size}  B={b}  curve {'=' if same else '!'}  "
              f"{v.verdict.value} ({v.samples} samples)")
    print(f"curves {curves}/{args.n}, residues {residues}/{args.n}, {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
