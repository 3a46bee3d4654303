"""Residue of the even Clifford algebra along the discriminant and square-class comparison."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Sequence

import numpy as np

from . import upoly
from .field import FieldSpec
from .gradedform import GradedSymMatrix, PlaneCurve
from .grammar import parse
from .pointscan import eval_mod_p, projective_points, reduce_mod
from .poly import Poly, PolyError, gcd, is_square_up_to_unit, squarefree_part
from .polymat import principal_minor
from .reduction import graded_automorphism, infer_weights

DEFAULT_PRIMES = (101, 211)
SCAN_MAX_PRIME = 250


class ResidueError(ValueError):
    pass


@dataclass(frozen=True)
class SquareClass:
    """Even-degree representative g of a class in k(C)*/k(C)*^2, normalized along a line."""

    g: Poly
    line: Poly
    curve: PlaneCurve
    congruence_tries: int = dc_field(default=1, compare=False)

    def __post_init__(self) -> None:
        if not self.g.is_homogeneous() or self.g.degree() % 2:
            raise ResidueError("representative must be homogeneous of even degree")

    def twisted(self, h: Poly) -> "SquareClass":
        """The class of g*h, with h of even degree."""
        return SquareClass(self.g * h, self.line, self.curve, self.congruence_tries)

    def to_json(self) -> dict:
        return {"g": str(self.g), "line": str(self.line), "curve": str(self.curve.f),
                "degree": int(self.g.degree())}


def _sign(m: int) -> int:
    # signed discriminant normalization of the (m-1)-minor: keeps the class stable under
    # adding hyperbolic planes over fields where -1 is not a square
    n = m - 1
    return -1 if (n * (n - 1) // 2) % 2 else 1


def residue_along_curve(q: GradedSymMatrix, line: Poly | str | None = None, seed: int = 0,
                        max_tries: int = 50) -> SquareClass:
    """Square class of the leading (m-1)-principal minor along the reduced discriminant.

    A graded congruence is tried first as the identity, then at random, until
    the minor shares no factor with the curve or the line.  The minor is scaled
    by (-1)^(n(n-1)/2), n = m - 1, and multiplied by the line once if its
    degree is odd.
    """
    M = q.mat
    f, v = q.field, M.vars
    if isinstance(line, str):
        line = parse(line, v, f)
    if line is None:
        line = Poly.var("z", f, v)
    if line.degree() != 1 or not line.is_homogeneous():
        raise ResidueError("normalization line must be a linear form")
    det = q.det
    if det.is_zero():
        raise ResidueError("determinant is zero")
    red = squarefree_part(det)
    if red.degree() != det.degree():
        warnings.warn("discriminant is not squarefree; using its reduced curve", stacklevel=2)
    if red.divides(line) or line.divides(red):
        raise ResidueError("line is a component of the discriminant")
    curve = PlaneCurve(red)
    m = q.size
    weights = infer_weights(M)
    if weights is None:
        raise ResidueError("matrix entries admit no consistent grading")
    # a summand of weight w behaves like O(-w); graded automorphisms keep minors homogeneous
    rng = random.Random(seed)
    for attempt in range(max_tries):
        if attempt == 0:
            Mp = M
        else:
            P, _ = graded_automorphism([-w for w in weights], f, rng, vars=v)
            Mp = M.congruence(P)
        minor = principal_minor(Mp, m - 1)
        if minor.is_zero():
            continue
        if not gcd(minor, red).is_constant() or line.divides(minor):
            continue
        g = minor.scalar_mul(_sign(m))
        if g.degree() % 2:
            g = g * line
        return SquareClass(g, line, curve, attempt + 1)
    raise ResidueError("every congruence left the minor sharing a factor with the curve")


# points on curves


def _squarefree_mod(f: Poly) -> bool:
    try:
        return squarefree_part(f).degree() == f.degree()
    except PolyError:
        return False


def _smooth_mask(fp: Poly, pts: np.ndarray) -> np.ndarray:
    grads = [eval_mod_p(g, pts) for g in fp.gradient()]
    return np.any(np.stack(grads) != 0, axis=0)


def _normalize(pt: Sequence[int], p: int) -> tuple[int, int, int]:
    for c in pt:
        if c % p:
            inv = pow(int(c), p - 2, p)
            return tuple(int(x) * inv % p for x in pt)
    raise ValueError("zero vector")


def curve_points(curve: PlaneCurve | Poly, p: int, budget: int = 200, seed: int = 0) -> list[tuple[int, int, int]]:
    """Distinct smooth F_p-points of the curve, up to ``budget`` of them.

    Small primes are scanned exhaustively; larger ones are reached by
    intersecting random lines with the curve.  A bad reduction gives [].
    """
    f = curve.f if isinstance(curve, PlaneCurve) else curve
    fp = reduce_mod(f, p)
    if fp is None or fp.is_zero() or fp.degree() != f.degree() or p <= fp.degree() or not _squarefree_mod(fp):
        return []
    if p <= SCAN_MAX_PRIME:
        pts = projective_points(p)
        on = pts[eval_mod_p(fp, pts) == 0]
        on = on[_smooth_mask(fp, on)]
        return [tuple(int(c) for c in row) for row in on[:budget]]
    rng = random.Random(seed)
    fld = FieldSpec(p)
    found: dict[tuple, None] = {}
    d = int(fp.degree())
    for _ in range(40 * budget):
        if len(found) >= budget:
            break
        a = [rng.randrange(p) for _ in range(3)]
        b = [rng.randrange(p) for _ in range(3)]
        # f(a + s b) as a polynomial in s, by interpolation at d + 1 nodes
        xs = list(range(d + 1))
        ys = [fp.eval([(ai + s * bi) % p for ai, bi in zip(a, b)]) for s in xs]
        coeffs = upoly.interpolate(xs, ys, fld)
        if upoly.deg(coeffs) < 1:
            continue
        for s in upoly.roots_mod_p(coeffs, fld, rng):
            pt = [(ai + s * bi) % p for ai, bi in zip(a, b)]
            if not any(pt):
                continue
            if all(g.eval(pt) == 0 for g in fp.gradient()):
                continue
            found[_normalize(pt, p)] = None
    return list(found)[:budget]


# comparison


class Verdict(str, Enum):
    NOT_EQUAL = "NotEqual"
    PROBABLY_EQUAL = "ProbablyEqual"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EquivalenceVerdict:
    verdict: Verdict
    witness: tuple | None = None
    witness_prime: int | None = None
    confidence: float = 0.0
    samples: int = 0
    primes: tuple[int, ...] = ()

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "samples": self.samples, "primes": list(self.primes)}
        if self.verdict == Verdict.PROBABLY_EQUAL:
            out["confidence"] = self.confidence
            out["confidence_log2_miss"] = -self.samples
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["witness_prime"] = self.witness_prime
        return out


def same_curve(c1: PlaneCurve, c2: PlaneCurve) -> bool:
    f1, f2 = c1.f, c2.f
    if f1.field != f2.field or f1.degree() != f2.degree():
        return False
    return f1.monic() == f2.monic()


def check_witness(s1: SquareClass, s2: SquareClass, point: Sequence[int], p: int) -> bool:
    """Independent recheck of a NotEqual witness."""
    f = reduce_mod(s1.curve.f, p)
    h = reduce_mod(s1.g * s2.g, p)
    if f is None or h is None:
        return False
    fld = FieldSpec(p)
    pt = [fld(c) for c in point]
    hv = h.eval(pt)
    return f.eval(pt) == 0 and hv != 0 and not fld.is_square(hv)


def square_class_equal(s1: SquareClass, s2: SquareClass, trials: int = 32,
                       primes: Sequence[int] = DEFAULT_PRIMES, seed: int = 0) -> EquivalenceVerdict:
    """Compare two residues by the Euler criterion at smooth points of C.

    A single nonsquare value of g1*g2 certifies different classes.  Agreement
    at ``trials`` points is reported with confidence 1 - 2^-samples, assuming
    a nonsquare class is nonsquare at about half the points.  Rational inputs
    need agreement at two or more primes; a prime-field input uses its own p.
    """
    if not same_curve(s1.curve, s2.curve):
        raise ResidueError("square classes live on different curves")
    if s1.g.degree() % 2 or s2.g.degree() % 2:
        raise ResidueError("odd-degree representative")
    field = s1.g.field
    if field.p is not None:
        primes, need_primes = [field.p], 1
    else:
        need_primes = 2
    h = s1.g * s2.g
    valid = 0
    used = []
    per_prime = max(trials, (trials + len(primes) - 1) // max(1, need_primes))
    for idx, p in enumerate(primes):
        hp, lp = reduce_mod(h, p), reduce_mod(s1.line, p)
        if hp is None or lp is None:
            continue
        fld = FieldSpec(p)
        pts = curve_points(s1.curve, p, budget=4 * per_prime + 16, seed=seed + idx)
        if not pts:
            continue
        order = list(range(len(pts)))
        random.Random(seed * 7919 + p).shuffle(order)
        got = 0
        for k in order:
            pt = pts[k]
            if lp.eval(pt) == 0:
                continue
            hv = hp.eval(pt)
            if hv == 0:
                continue
            if not fld.is_square(hv):
                return EquivalenceVerdict(Verdict.NOT_EQUAL, tuple(pt), p, 0.0, valid + got + 1,
                                          tuple(used + [p]))
            got += 1
            if got >= per_prime:
                break
        if got:
            used.append(p)
            valid += got
    if valid >= trials and len(used) >= need_primes:
        return EquivalenceVerdict(Verdict.PROBABLY_EQUAL, None, None, 1.0 - 2.0 ** (-valid), valid, tuple(used))
    return EquivalenceVerdict(Verdict.INCONCLUSIVE, None, None, 0.0, valid, tuple(used))


def is_square_in_ratfield(f: Poly, chart_line: str = "z") -> bool:
    """True iff f = u s^2 after setting the chart variable to 1."""
    g = f.dehomogenize(chart_line, 1) if chart_line in f.vars else f
    if len(g.support_vars()) > 2:
        raise ResidueError("more than two variables after dehomogenizing")
    return is_square_up_to_unit(g)
