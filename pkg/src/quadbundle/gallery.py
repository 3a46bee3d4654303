"""Constructors for the explicit matrices and families used throughout the package."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .brauer import Verdict, residue_along_curve, square_class_equal, is_square_in_ratfield
from .coker import classify, profiles_equal
from .field import FieldSpec
from .gradedform import GradedSymMatrix, SmoothStatus, chart_model, discriminant, smoothness, validate
from .grammar import parse
from .poly import Poly, random_form
from .polymat import PolyMatrix

VARS = ("x", "y", "z")
DEFAULT_FIELD = FieldSpec(32003)


class GalleryError(ValueError):
    pass


@dataclass(frozen=True)
class GalleryRecipe:
    name: str
    params: dict = dc_field(default_factory=dict)
    locus: str = ""


def _fill(degrees, twist, field, rng, fixed: Callable[[int, int], Poly | None] | None = None) -> GradedSymMatrix:
    """Random symmetric fill of a degree pattern; ``fixed`` may pin entries."""
    m = len(degrees)
    rows = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            e = fixed(i, j) if fixed else None
            if e is None:
                d = -degrees[i] - degrees[j] + twist
                e = random_form(d, field, rng, VARS) if d >= 0 else Poly.zero(field, VARS)
            rows[i][j] = rows[j][i] = e
    return validate(tuple(degrees), twist, PolyMatrix(rows, field, VARS))


def _resample(build: Callable[[random.Random], GradedSymMatrix], seed: int, tries: int = 20) -> GradedSymMatrix:
    rng = random.Random(seed)
    last = None
    for _ in range(tries):
        try:
            return build(rng)
        except ValueError as exc:
            last = exc
    raise GalleryError(f"no nondegenerate fill in {tries} tries: {last}")


def halfperiod_pattern(d: int, k: int = 0, field: FieldSpec = DEFAULT_FIELD, seed: int = 0,
                       coupling: bool = True) -> GradedSymMatrix:
    """d O(-1) (+) k O with quadrics on the d-block, identity on the k-block, linear coupling."""
    if d < 1 or k < 0:
        raise GalleryError("need d >= 1 and k >= 0")
    degrees = (-1,) * d + (0,) * k

    def fixed(i, j):
        if i >= d:
            return Poly.constant(1 if i == j else 0, field, VARS)
        if j >= d and not coupling:
            return Poly.zero(field, VARS)
        return None

    return _resample(lambda rng: _fill(degrees, 0, field, rng, fixed), seed)


def _theta_tail(k: int, start: int, field: FieldSpec):
    """Pairs O (+) O(-1) coupled by an antidiagonal identity; the O(-1) diagonal stays random."""

    def fixed(i, j):
        if i < start:
            return None
        a, b = (i - start), (j - start)
        if a // 2 == b // 2 and a % 2 == 0 and b % 2 == 1:
            return Poly.constant(1, field, VARS)
        if i >= start and j >= start and a // 2 != b // 2:
            return Poly.zero(field, VARS)
        return None

    return (0, -1) * k, fixed


def even_theta_pattern(d: int, k: int = 0, field: FieldSpec = DEFAULT_FIELD, seed: int = 0) -> GradedSymMatrix:
    """2d O(-1) (+) k (O (+) O(-1)) with twist -1: a 2d x 2d block of linear forms."""
    if d < 2 or k < 0:
        raise GalleryError("even theta pattern needs d >= 2")
    tail, fixed = _theta_tail(k, 2 * d, field)
    degrees = (-1,) * (2 * d) + tail
    return _resample(lambda rng: _fill(degrees, -1, field, rng, fixed), seed)


def odd_theta_pattern(d: int, k: int = 0, field: FieldSpec = DEFAULT_FIELD, seed: int = 0) -> GradedSymMatrix:
    """(2d - 3) O(-1) (+) O(-2) (+) k (O (+) O(-1)) with twist -1."""
    if d < 3 or k not in (0, 1):
        raise GalleryError("odd theta pattern needs d >= 3 and k in {0, 1}")
    tail, fixed = _theta_tail(k, 2 * d - 2, field)
    degrees = (-1,) * (2 * d - 3) + (-2,) + tail
    return _resample(lambda rng: _fill(degrees, -1, field, rng, fixed), seed)


HPT_F = "x^2+y^2+z^2-2*x*y-2*x*z-2*y*z"


def hpt_form(field: FieldSpec = DEFAULT_FIELD) -> GradedSymMatrix:
    """diag(x, y, xy, F) as a chart-level model.

    The diagonal has entries of odd and even degree, so no integral degree
    vector grades it; downstream checks only need the matrix.
    """
    x, y = Poly.var("x", field, VARS), Poly.var("y", field, VARS)
    F = parse(HPT_F, VARS, field)
    return chart_model(PolyMatrix.diag([x, y, x * y, F]))


# ansatz records


@dataclass(frozen=True)
class AnsatzRecord:
    name: str
    degree: int
    kind: str
    tuple_: tuple[Poly, ...]
    target: tuple[Poly, ...]
    degrees: tuple[int, ...]
    divisibility: tuple[tuple[str, int, tuple[int, ...]], ...]  # (variable, power, indices)
    ambiguous: bool = False

    def divisibility_holds(self) -> dict[str, bool]:
        out = {}
        for var, power, idx in self.divisibility:
            mono = Poly.var(var, self.tuple_[0].field, VARS) ** power
            for i in idx:
                out[f"{var}^{power} | f{i + 1}"] = mono.divides(self.tuple_[i])
        return out

    def similarity(self, chart: str = "z") -> list[bool]:
        """Componentwise: f_i * target_i is a unit times a square after the chart variable is 1."""
        return [is_square_in_ratfield(f * g, chart) for f, g in zip(self.tuple_, self.target)]

    def to_json(self) -> dict:
        return {"name": self.name, "degree": self.degree, "kind": self.kind,
                "tuple": [str(f) for f in self.tuple_], "target": [str(g) for g in self.target],
                "degrees": list(self.degrees), "divisibility": self.divisibility_holds(),
                "similarity": self.similarity(), "ambiguous": self.ambiguous}


def ansatz_solutions(field: FieldSpec = FieldSpec.rational()) -> list[AnsatzRecord]:
    F = parse(HPT_F, VARS, field)
    Fz1 = F.substitute("z", 1)
    special = {"F": F, "G": Fz1}

    def P(s: str) -> Poly:
        # monomial factors in the grammar, F = F(x, y, z) and G = F(x, y, 1) as extra factors
        parts = s.split("*")
        out = Poly.constant(1, field, VARS)
        for part in parts:
            out = out * (special[part] if part in special else parse(part, VARS, field))
        return out

    records = [
        AnsatzRecord("halfperiod-10", 10, "HalfPeriod",
                     (P("x^2*F"), P("x^3*y"), P("x*z"), P("y*z")),
                     (P("F"), P("x*y"), P("x"), P("y")), (4, 4, 2, 2),
                     (("x", 2, (0, 1)),), ambiguous=True),
        AnsatzRecord("halfperiod-18", 18, "HalfPeriod",
                     (P("x^5*y"), P("x^2*z*F"), P("x*z^5"), P("z^5*y")),
                     (P("x*y"), P("G"), P("x"), P("y")), (6, 6, 6, 6),
                     (("x", 2, (0, 1)), ("z", 4, (2, 3)))),
        AnsatzRecord("oddtheta-12", 12, "OddTheta",
                     (P("x^4*z"), P("x^2*y"), P("x*F"), P("y*z^2")),
                     (P("x"), P("y"), P("G"), P("x*y")), (5, 3, 3, 3),
                     (("x", 2, (0, 1)),)),
        AnsatzRecord("eventheta-14", 14, "EvenTheta",
                     (P("x^5"), P("x^3*y*z"), P("z^3*F"), P("z^2*y")),
                     (P("x"), P("x*y"), P("G"), P("y")), (5, 5, 5, 3),
                     (("x", 2, (0, 1)), ("z", 2, (2, 3)))),
    ]
    for rec in records:
        if not all(rec.divisibility_holds().values()):
            raise GalleryError(f"divisibility fails for {rec.name}")
    return records


# nodal Gushel-Mukai chain


@dataclass(frozen=True)
class NodalChain:
    N3: GradedSymMatrix
    N4: GradedSymMatrix
    profile_match: bool
    residue_verdict: Verdict
    confidence: float
    tries: int
    seed: int

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {"N3": matrix_to_json(self.N3), "N4": matrix_to_json(self.N4),
                "profile_match": self.profile_match, "residue": self.residue_verdict.value,
                "confidence": self.confidence, "tries": self.tries, "seed": self.seed}


def bordering(q: GradedSymMatrix) -> GradedSymMatrix:
    """Append a summand O with a unit corner: the (0, ..., 0, 1) bordering."""
    f, v = q.field, q.mat.vars
    one = PolyMatrix([[Poly.constant(1, f, v)]], f, v)
    if q.twist % 2:
        raise GalleryError("unit bordering needs an even twist")
    return validate(q.degrees + (q.twist // 2,), q.twist, PolyMatrix.block_diag(q.mat, one))


def nodal_gm_chain(seed: int = 0, field: FieldSpec = DEFAULT_FIELD, tries: int = 20,
                   trials: int = 32) -> NodalChain:
    """A smooth-discriminant 3 x 3 quadric model and its bordering, compared."""
    rng = random.Random(seed)
    for attempt in range(1, tries + 1):
        q3 = _fill((-1, -1, -1), 0, field, rng)
        curve = smoothness(discriminant(q3), seed=seed)
        if curve.smooth.status == SmoothStatus.PROVEN:
            break
    else:
        raise GalleryError("no smooth sextic discriminant found")
    q4 = bordering(q3)
    match = profiles_equal(classify(q3), classify(q4))
    v = square_class_equal(residue_along_curve(q3, seed=seed), residue_along_curve(q4, seed=seed),
                           trials=trials, seed=seed)
    return NodalChain(q3, q4, match and v.verdict == Verdict.PROBABLY_EQUAL, v.verdict, v.confidence,
                      attempt, seed)


# reduced model descriptors


@dataclass(frozen=True)
class PatternDescriptor:
    kind: str
    d: int
    k: int
    degrees: tuple[int, ...]
    twist: int
    isotropic_degrees: tuple[int, ...]
    presentation: tuple[tuple[int, ...], tuple[int, ...]]  # 0 -> sub -> target -> G^v -> 0
    reduced_rank: int
    divisors: tuple[str, ...]
    ambient: str
    summary: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": self.d, "k": self.k, "degrees": list(self.degrees),
                "twist": self.twist, "isotropic_degrees": list(self.isotropic_degrees),
                "presentation": {"sub": list(self.presentation[0]), "target": list(self.presentation[1])},
                "reduced_rank": self.reduced_rank, "divisors": list(self.divisors),
                "ambient": self.ambient, "summary": self.summary}


def _bundle(target: tuple[int, ...]) -> str:
    counts: dict[int, int] = {}
    for t in target:
        counts[t] = counts.get(t, 0) + 1
    parts = [(f"{n}" if n > 1 else "") + f"O({t})" for t, n in sorted(counts.items(), reverse=True)]
    return "P(" + " + ".join(parts) + ")"


def cor12_patterns(d: int, kind: str, k: int = 0) -> PatternDescriptor:
    """Degree data of the rank-4 reduction of a normal-form pattern."""
    if kind == "halfperiod":
        if (d + k) % 2 or d < 1:
            raise GalleryError("half-period reduction needs d + k even")
        r = (d + k) // 2 - 2
        if r < 0:
            raise GalleryError("pattern too small for a rank-4 reduction")
        ones = (d - k) // 2 + 2
        if ones < 0:
            raise GalleryError("need k <= d + 4")
        target = (1,) * ones + (0,) * k
        divisors = ("xi+h",) * r + ("2xi",)
        if ones == 0:
            ambient = f"P^2 x P^{k - 1}"
            div = ("(1,1)",) * r + ("(0,2)",)
        elif k == 0:
            ambient = f"P^2 x P^{ones - 1}"
            div = ("(1,1)",) * r + ("(2,2)",)
        else:
            ambient, div = _bundle(target), divisors
        return PatternDescriptor("halfperiod", d, k, (-1,) * d + (0,) * k, 0, (-1,) * r,
                                 ((-1,) * r, target), len(target) - r, div, ambient,
                                 f"complete intersection {' '.join(div)} in {ambient}")
    if kind == "even-theta":
        if not 2 <= d <= 7:
            raise GalleryError("even theta reduction needs 2 <= d <= 7")
        r = d - 2
        target = (0,) * (d + 2)
        div = ("(1,1)",) * r + ("(1,2)",)
        ambient = f"P^2 x P^{d + 1}"
        return PatternDescriptor("even-theta", d, 0, (-1,) * (2 * d), -1, (-1,) * r,
                                 ((-1,) * r, target), len(target) - r, div, ambient,
                                 f"complete intersection {' '.join(div)} in {ambient}")
    if kind == "odd-theta":
        if not 3 <= d <= 6 or k not in (0, 1):
            raise GalleryError("odd theta reduction needs 3 <= d <= 6 and k in {0, 1}")
        sub = (-1,) * (d - 3) + (-2,) * k
        target = (0,) * (d + k) + (1,) * (1 - k) + (-1,) * k
        div = ("xi+h",) * (d - 3) + ("xi+2h",) * k + ("2xi+h",)
        ambient = _bundle(target)
        summary = f"complete intersection {' '.join(div)} in {ambient}"
        if k == 0:
            summary += f"; birational to the residual of {d - 3} quadrics and a cubic containing P^{d - 1} in P^{d + 2}"
        return PatternDescriptor("odd-theta", d, k, (-1,) * (2 * d - 3) + (-2,) + (0, -1) * k, -1,
                                 sub, (sub, target), len(target) - len(sub),
                                 div, ambient, summary)
    raise GalleryError(f"unknown pattern kind {kind!r}")


RECIPES = {
    "halfperiod": "half-period normal form d O(-1) + k O",
    "even-theta": "even theta normal form 2d O(-1) + k (O + O(-1))",
    "odd-theta": "odd theta normal form (2d-3) O(-1) + O(-2) + k (O + O(-1))",
    "hpt": "diag(x, y, xy, F) degenerate model",
    "nodal-gm": "3 x 3 quadric model with smooth sextic discriminant and its bordering",
}
