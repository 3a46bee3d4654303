"""Graded symmetric matrices q: G -> G^v(delta) with G split, and their discriminant curves."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg, upoly
from .field import FieldSpec
from .pointscan import eval_mod_p, projective_points, reduce_mod
from .poly import Poly, gcd_many
from .polymat import PolyMatrix, det, rank_at_point

DEFAULT_SCAN_PRIMES = (101, 211, 32003)
# exhaustive scans stop being practical beyond roughly this many points
SCAN_LIMIT = 60_000
SAMPLE_BUDGET = 20_000


class ValidationError(ValueError):
    pass


def required_degree(degrees: Sequence[int], twist: int, i: int, j: int) -> int:
    return -degrees[i] - degrees[j] + twist


@dataclass(frozen=True, eq=False)
class GradedSymMatrix:
    """Symmetric polynomial matrix presenting q: (+) O(a_i) -> (+) O(-a_i + twist).

    ``degrees`` and ``twist`` are None for chart-level models, whose entries
    need not respect a grading (reductions, diagonal forms mixing parities).
    """

    mat: PolyMatrix
    degrees: tuple[int, ...] | None
    twist: int | None

    @property
    def size(self) -> int:
        return self.mat.rows

    @property
    def field(self) -> FieldSpec:
        return self.mat.field

    @property
    def graded(self) -> bool:
        return self.degrees is not None

    @cached_property
    def det(self) -> Poly:
        return det(self.mat)

    def expected_degree(self) -> int | None:
        if self.degrees is None:
            return None
        return -2 * sum(self.degrees) + self.size * self.twist

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GradedSymMatrix) and self.mat == other.mat and \
            self.degrees == other.degrees and self.twist == other.twist

    def __hash__(self) -> int:
        return hash((self.mat, self.degrees, self.twist))


def check_grading(degrees: Sequence[int], twist: int, mat: PolyMatrix) -> None:
    m = mat.rows
    if len(degrees) != m:
        raise ValidationError(f"degree vector has length {len(degrees)}, matrix has size {m}")
    for i in range(m):
        for j in range(i, m):
            e = mat[i, j]
            if e.is_zero():
                continue
            need = required_degree(degrees, twist, i, j)
            if need < 0:
                raise ValidationError(f"entry ({i},{j}) must vanish (required degree {need})")
            if not e.is_homogeneous() or e.degree() != need:
                raise ValidationError(
                    f"entry ({i},{j}) = {e} is not homogeneous of degree {need}"
                )


def validate(degrees: Sequence[int] | None, twist: int | None, mat: PolyMatrix,
             *, check_det: bool = True) -> GradedSymMatrix:
    """Check symmetry, entry degrees and nondegeneracy, in that order."""
    if not mat.is_square():
        raise ValidationError(f"matrix is not square: {mat.shape}")
    for i in range(mat.rows):
        for j in range(i):
            if mat[i, j] != mat[j, i]:
                raise ValidationError(f"matrix is not symmetric at ({i},{j})")
    if degrees is not None:
        if twist is None:
            raise ValidationError("a graded matrix needs a twist")
        degrees = tuple(int(a) for a in degrees)
        check_grading(degrees, twist, mat)
    q = GradedSymMatrix(mat, degrees, twist if degrees is not None else twist)
    if check_det and q.det.is_zero():
        raise ValidationError("determinant vanishes identically")
    return q


def chart_model(mat: PolyMatrix, *, check_det: bool = True) -> GradedSymMatrix:
    return validate(None, None, mat, check_det=check_det)


# plane curves and smoothness


class SmoothStatus(str, Enum):
    PROVEN = "Proven"
    REFUTED = "RefutedAt"
    UNKNOWN = "Unknown"
    UNCHECKED = "Unchecked"


@dataclass(frozen=True)
class Smoothness:
    status: SmoothStatus
    point: tuple | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status.value, "detail": self.detail}
        if self.point is not None:
            out["point"] = [str(c) for c in self.point]
        return out


@dataclass(frozen=True)
class PlaneCurve:
    f: Poly
    smooth: Smoothness = dc_field(default_factory=lambda: Smoothness(SmoothStatus.UNCHECKED))

    def __post_init__(self) -> None:
        if not self.f.is_homogeneous() or self.f.is_zero():
            raise ValidationError("a plane curve needs a nonzero homogeneous equation")
        if self.smooth.status == SmoothStatus.REFUTED:
            pt = self.smooth.point
            if self.f.eval(pt) != 0 or any(g.eval(pt) != 0 for g in self.f.gradient()):
                raise ValidationError("refutation point is not singular")

    @property
    def degree(self) -> int:
        return int(self.f.degree())

    @property
    def field(self) -> FieldSpec:
        return self.f.field


def discriminant(q: GradedSymMatrix) -> PlaneCurve:
    f = q.det
    if f.is_zero():
        raise ValidationError("degenerate form: determinant is zero")
    expected = q.expected_degree()
    if expected is not None and f.degree() != expected:
        raise ValidationError(f"determinant degree {f.degree()} differs from {expected}")
    return PlaneCurve(f)


def corank_at(q: GradedSymMatrix, point: Sequence) -> int:
    if all(q.field(c) == 0 for c in point):
        raise ValueError("the zero vector is not a projective point")
    return q.size - rank_at_point(q.mat, point)


class Corank2Status(str, Enum):
    NONEMPTY = "NonemptyAt"
    PROBABLY_EMPTY = "ProbablyEmpty"


@dataclass(frozen=True)
class Corank2Verdict:
    status: Corank2Status
    point: tuple | None = None
    primes: tuple[int, ...] = ()
    exhaustive: tuple[int, ...] = ()
    skipped: tuple[int, ...] = ()
    unlifted: tuple = ()

    def to_json(self) -> dict:
        out = {"status": self.status.value, "primes": list(self.primes),
               "exhaustive": list(self.exhaustive), "skipped": list(self.skipped)}
        if self.point is not None:
            out["point"] = [str(c) for c in self.point]
        return out


def _candidate_points(p: int, rng: random.Random) -> tuple[np.ndarray, bool]:
    if p * p + p + 1 <= SCAN_LIMIT:
        return projective_points(p), True
    pts = np.array([[rng.randrange(p) for _ in range(3)] for _ in range(SAMPLE_BUDGET)], dtype=np.int64)
    pts = pts[np.any(pts != 0, axis=1)]
    return pts, False


def _lift(c: int, p: int) -> int:
    return c - p if c > p // 2 else c


def corank2_empty(q: GradedSymMatrix, primes: Sequence[int] = DEFAULT_SCAN_PRIMES,
                  seed: int = 0) -> Corank2Verdict:
    """Search P^2(F_p) for points where the form drops rank by two or more.

    Small primes are scanned exhaustively, large ones by seeded sampling.
    Over QQ a hit is accepted only after an exact recheck of the lifted point.
    """
    rng = random.Random(seed)
    f0 = q.det
    base = q.field
    if base.p is not None:
        primes = [base.p]
    scanned, exhaustive, skipped, unlifted = [], [], [], []
    m = q.size
    for p in primes:
        entries = [[reduce_mod(e, p) for e in row] for row in q.mat.entries]
        fp = reduce_mod(f0, p)
        if fp is None or any(e is None for row in entries for e in row):
            skipped.append(p)
            continue
        scanned.append(p)
        pts, full = _candidate_points(p, rng)
        if full:
            exhaustive.append(p)
        on_curve = pts[eval_mod_p(fp, pts) == 0] if not fp.is_zero() else pts
        if len(on_curve) == 0:
            continue
        vals = [[eval_mod_p(e, on_curve) for e in row] for row in entries]
        fld = FieldSpec(p)
        for k in range(len(on_curve)):
            a = [[int(vals[i][j][k]) for j in range(m)] for i in range(m)]
            if m - linalg.rank(a, fld) >= 2:
                pt = tuple(int(c) for c in on_curve[k])
                if base.p is not None:
                    return Corank2Verdict(Corank2Status.NONEMPTY, pt, tuple(scanned),
                                          tuple(exhaustive), tuple(skipped))
                lifted = tuple(Fraction(_lift(c, p)) for c in pt)
                if corank_at(q, lifted) >= 2:
                    return Corank2Verdict(Corank2Status.NONEMPTY, lifted, tuple(scanned),
                                          tuple(exhaustive), tuple(skipped))
                unlifted.append((p, pt))
    return Corank2Verdict(Corank2Status.PROBABLY_EMPTY, None, tuple(scanned), tuple(exhaustive),
                          tuple(skipped), tuple(unlifted))


# smoothness by resultants

GOOD_REDUCTION_PRIMES = (1000003, 1000033, 1000037)


def _is_singular_at(f: Poly, pt: Sequence) -> bool:
    return f.eval(pt) == 0 and all(g.eval(pt) == 0 for g in f.gradient())


def _small_box_search(f: Poly, bound: int = 2) -> tuple | None:
    rng = range(-bound, bound + 1)
    fld = f.field
    for a in rng:
        for b in rng:
            for c in rng:
                pt = (a, b, c)
                if not any(pt):
                    continue
                # normalized representatives only: first nonzero coordinate positive
                first = next(v for v in pt if v)
                if first < 0:
                    continue
                pt = tuple(fld(v) for v in pt)
                if _is_singular_at(f, pt):
                    return pt
    return None


def _rational_roots(coeffs: list) -> list[Fraction]:
    """Rational roots of a univariate QQ polynomial by the rational root test."""
    coeffs = upoly.trim(coeffs, FieldSpec(None))
    if len(coeffs) <= 1:
        return []
    roots = []
    while coeffs and coeffs[0] == 0:
        roots.append(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots
    den = 1
    for c in coeffs:
        den = den * c.denominator // np.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])
    if max(a0, an) > 10**9:
        return roots
    def divisors(n: int) -> list[int]:
        small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
        return sorted(set(small + [n // d for d in small]))
    field = FieldSpec(None)
    seen = set(roots)
    for u in divisors(a0):
        for v in divisors(an):
            for s in (1, -1):
                r = Fraction(s * u, v)
                if r not in seen and upoly.evaluate(coeffs, r, field) == 0:
                    roots.append(r)
                    seen.add(r)
    return roots


def _field_roots(coeffs: list, field: FieldSpec, rng: random.Random) -> list:
    if field.p:
        return upoly.roots_mod_p(coeffs, field, rng)
    return _rational_roots(coeffs)


def _random_change(field: FieldSpec, rng: random.Random) -> list[list]:
    while True:
        t = [[field.random(rng, -3, 3) for _ in range(3)] for _ in range(3)]
        if linalg.det(t, field) != 0:
            return t


def _apply_change(f: Poly, t: list[list]) -> Poly:
    x, y, z = (Poly.var(v, f.field, f.vars) for v in f.vars)
    images = [x.scalar_mul(t[i][0]) + y.scalar_mul(t[i][1]) + z.scalar_mul(t[i][2]) for i in range(3)]
    return f.compose(images)


def _univariate_at(g: Poly, xval, yval) -> list:
    """Coefficients in z of g(xval, yval, z)."""
    h = g.substitute(0, xval).substitute(1, yval)
    return h.univariate_coeffs(2) if h.terms else []


def _resultant_test(f: Poly, rng: random.Random) -> tuple[str, tuple | None]:
    """One round of the resultant criterion in random coordinates.

    Returns ("proven", None), ("singular", point) or ("inconclusive", None).
    """
    field = f.field
    d = int(f.degree())
    t = _random_change(field, rng)
    h = _apply_change(f, t)
    hx, hy, hz = h.gradient()
    zlead = (0, 0, d - 1)
    if any(g.terms.get(zlead, 0) == 0 for g in (hx, hy, hz)):
        return "inconclusive", None
    bound = (d - 1) ** 2
    if field.p and field.p <= bound + 1:
        return "inconclusive", None
    nodes = [field(k) for k in range(bound + 1)]
    r1, r2 = [], []
    for c in nodes:
        ux = _univariate_at(hx, c, 1)
        r1.append(upoly.resultant(ux, _univariate_at(hy, c, 1), field))
        r2.append(upoly.resultant(ux, _univariate_at(hz, c, 1), field))
    g = upoly.gcd(upoly.interpolate(nodes, r1, field), upoly.interpolate(nodes, r2, field), field)
    # points on the line y = 0 are outside the chart y = 1
    line = [hh.substitute(1, 0) for hh in (hx, hy, hz)]
    lg = None
    for hh in line:
        u = hh.substitute(2, 1)
        cs = u.univariate_coeffs(0) if u.terms else []
        lg = cs if lg is None else upoly.gcd(lg, cs, field)
    at_x = all(hh.eval((1, 0, 0)) == 0 for hh in (hx, hy, hz))
    on_line = (lg is not None and len(lg) > 1) or at_x
    if len(g) <= 1 and not on_line:
        return "proven", None
    # look for an exact singular point in the new coordinates
    candidates = []
    for x0 in _field_roots(g, field, rng) if len(g) > 1 else []:
        zs = None
        for hh in (hx, hy, hz):
            u = _univariate_at(hh, x0, 1)
            zs = u if zs is None else upoly.gcd(zs, u, field)
        for z0 in _field_roots(zs, field, rng) if zs and len(zs) > 1 else []:
            candidates.append((x0, field.one, z0))
    if on_line:
        candidates.append((field.one, field.zero, field.zero))
        if lg is not None and len(lg) > 1:
            for x0 in _field_roots(lg, field, rng):
                candidates.append((x0, field.zero, field.one))
    for c in candidates:
        pt = tuple(field.norm(sum(t[i][k] * c[k] for k in range(3))) for i in range(3))
        if _is_singular_at(f, pt):
            return "singular", pt
    return "inconclusive", None


def smoothness(curve: PlaneCurve, seed: int = 0, retries: int = 5) -> PlaneCurve:
    """Decide smoothness of the curve; returns a copy carrying the verdict."""
    f = curve.f
    field = f.field
    d = curve.degree
    rng = random.Random(seed)
    if d <= 1:
        return PlaneCurve(f, Smoothness(SmoothStatus.PROVEN, detail="line"))
    if field.p and d % field.p == 0:
        return PlaneCurve(f, Smoothness(SmoothStatus.UNKNOWN, detail="characteristic divides degree"))
    pt = _small_box_search(f)
    if pt is not None:
        return PlaneCurve(f, Smoothness(SmoothStatus.REFUTED, pt, "small-coordinate singular point"))
    grads = [g for g in f.gradient() if g.terms]
    if len(grads) < 3 or not gcd_many(grads).is_constant():
        return PlaneCurve(f, Smoothness(SmoothStatus.UNKNOWN,
                                        detail="partial derivatives share a factor; no exact point found"))
    if field.p is None:
        # smooth reduction of the same degree forces smoothness in characteristic zero
        for p in GOOD_REDUCTION_PRIMES:
            fp = reduce_mod(f, p)
            if fp is None or fp.degree() != d or fp.terms.keys() == set():
                continue
            for _ in range(2):
                verdict, _ = _resultant_test(fp, rng)
                if verdict == "proven":
                    return PlaneCurve(f, Smoothness(SmoothStatus.PROVEN,
                                                    detail=f"smooth reduction mod {p}"))
    for _ in range(retries):
        verdict, pt = _resultant_test(f, rng)
        if verdict == "proven":
            return PlaneCurve(f, Smoothness(SmoothStatus.PROVEN, detail="resultant certificate"))
        if verdict == "singular":
            return PlaneCurve(f, Smoothness(SmoothStatus.REFUTED, pt, "resultant back-substitution"))
    return PlaneCurve(f, Smoothness(SmoothStatus.UNKNOWN, detail="resultant test inconclusive after retries"))


def singular_points_mod_p(f: Poly, p: int) -> list[tuple[int, int, int]]:
    """Exhaustive list of singular points of f over F_p (small p only)."""
    fp = reduce_mod(f, p)
    if fp is None:
        raise ValueError(f"{p} divides a denominator")
    pts = projective_points(p)
    mask = eval_mod_p(fp, pts) == 0
    for g in fp.gradient():
        mask &= eval_mod_p(g, pts) == 0
    return [tuple(int(c) for c in row) for row in pts[mask]]
