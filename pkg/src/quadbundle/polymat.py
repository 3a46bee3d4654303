"""Matrices of polynomials: determinants, minors, kernels and evaluation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from . import linalg
from .field import FieldSpec
from .grammar import parse
from .poly import DEFAULT_VARS, Poly, gcd_many

MAX_DIM = 64


class MatrixError(ValueError):
    pass


class PolyMatrix:
    """Immutable row-major matrix of polynomials sharing one ring."""

    __slots__ = ("rows", "cols", "entries", "field", "vars")

    def __init__(self, entries: Sequence[Sequence[Poly]], field: FieldSpec | None = None,
                 vars: Sequence[str] | None = None) -> None:
        rows = [tuple(r) for r in entries]
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if self.rows > MAX_DIM or self.cols > MAX_DIM:
            raise MatrixError(f"dimensions capped at {MAX_DIM}")
        if any(len(r) != self.cols for r in rows):
            raise MatrixError("ragged rows")
        if rows and self.cols:
            first = rows[0][0]
            field = field or first.field
            vars = tuple(vars) if vars is not None else first.vars
        if field is None:
            raise MatrixError("field required for an empty matrix")
        self.field = field
        self.vars = tuple(vars) if vars is not None else DEFAULT_VARS
        for r in rows:
            for e in r:
                if e.field != self.field or e.vars != self.vars:
                    raise MatrixError("entries must share field and variables")
        self.entries = tuple(rows)

    # constructors

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], field: FieldSpec,
                     vars: Sequence[str] = DEFAULT_VARS) -> "PolyMatrix":
        return cls([[parse(s, vars, field) for s in r] for r in rows], field, vars)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec, vars: Sequence[str] = DEFAULT_VARS) -> "PolyMatrix":
        z = Poly.zero(field, vars)
        return cls([[z] * cols for _ in range(rows)], field, vars)

    @classmethod
    def identity(cls, n: int, field: FieldSpec, vars: Sequence[str] = DEFAULT_VARS) -> "PolyMatrix":
        z, o = Poly.zero(field, vars), Poly.constant(1, field, vars)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], field, vars)

    @classmethod
    def from_scalars(cls, rows: Sequence[Sequence], field: FieldSpec,
                     vars: Sequence[str] = DEFAULT_VARS) -> "PolyMatrix":
        return cls([[Poly.constant(c, field, vars) for c in r] for r in rows], field, vars)

    @classmethod
    def diag(cls, polys: Sequence[Poly]) -> "PolyMatrix":
        z = polys[0].const(0)
        n = len(polys)
        return cls([[polys[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["PolyMatrix"]]) -> "PolyMatrix":
        rows = []
        for brow in blocks:
            h = brow[0].rows
            for i in range(h):
                row = []
                for b in brow:
                    if b.rows != h:
                        raise MatrixError("block heights differ")
                    row.extend(b.entries[i])
                rows.append(row)
        return cls(rows, blocks[0][0].field, blocks[0][0].vars)

    @classmethod
    def block_diag(cls, a: "PolyMatrix", b: "PolyMatrix") -> "PolyMatrix":
        return cls.block([[a, cls.zeros(a.rows, b.cols, a.field, a.vars)],
                          [cls.zeros(b.rows, a.cols, a.field, a.vars), b]])

    # access

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def zero_poly(self) -> Poly:
        return Poly.zero(self.field, self.vars)

    def one_poly(self) -> Poly:
        return Poly.constant(1, self.field, self.vars)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMatrix) and self.entries == other.entries and \
            self.field == other.field and self.vars == other.vars

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries) + "])"

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in r] for r in self.entries]

    def map(self, fn: Callable[[Poly], Poly]) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self.entries], self.field, self.vars)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows], self.field, self.vars)

    def column(self, j: int) -> list[Poly]:
        return [r[j] for r in self.entries]

    def columns(self, cols: Sequence[int]) -> "PolyMatrix":
        return self.submatrix(range(self.rows), cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def is_constant(self) -> bool:
        return all(e.is_constant() for r in self.entries for e in r)

    # algebra

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self.entries)], self.field, self.vars) if self.rows else self

    @property
    def T(self) -> "PolyMatrix":
        return self.transpose()

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise MatrixError("dimension mismatch")
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                          self.field, self.vars)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise MatrixError("dimension mismatch")
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                          self.field, self.vars)

    def __neg__(self) -> "PolyMatrix":
        return self.map(lambda e: -e)

    def scale(self, c) -> "PolyMatrix":
        if isinstance(c, Poly):
            return self.map(lambda e: e * c)
        return self.map(lambda e: e.scalar_mul(c))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return matmul(self, other)

    def congruence(self, p: "PolyMatrix") -> "PolyMatrix":
        """P^T M P."""
        return congruence(self, p)

    def eval(self, point: Sequence) -> list[list]:
        return [[e.eval(point) for e in r] for r in self.entries]

    def rank_at(self, point: Sequence) -> int:
        return rank_at_point(self, point)

    def det(self) -> Poly:
        return det(self)

    def principal_minor(self, k: int) -> Poly:
        return principal_minor(self, k)

    def max_degree(self) -> int:
        return max((int(e.degree()) for r in self.entries for e in r if e.terms), default=0)


def matmul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.cols != b.rows:
        raise MatrixError(f"cannot multiply {a.shape} by {b.shape}")
    z = a.zero_poly()
    bt = list(zip(*b.entries)) if b.rows else [()] * b.cols
    out = []
    for r in a.entries:
        row = []
        for c in bt:
            acc = z
            for x, y in zip(r, c):
                if x.terms and y.terms:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return PolyMatrix(out, a.field, a.vars)


def congruence(m: PolyMatrix, p: PolyMatrix) -> PolyMatrix:
    if not m.is_square() or m.rows != p.rows:
        raise MatrixError(f"congruence needs square M and compatible P, got {m.shape}, {p.shape}")
    return matmul(matmul(p.transpose(), m), p)


# determinants


def _cofactor_det(a: list[list[Poly]], zero: Poly) -> Poly:
    n = len(a)
    if n == 0:
        return zero + 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    # expand along the row with most zeros
    r = max(range(n), key=lambda i: sum(1 for e in a[i] if e.is_zero()))
    total = zero
    for j, e in enumerate(a[r]):
        if e.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for i, row in enumerate(a) if i != r]
        term = e * _cofactor_det(minor, zero)
        total = total + term if (r + j) % 2 == 0 else total - term
    return total


def _pivot_key(e: Poly) -> tuple:
    return (e.degree(), len(e.terms))


def bareiss_det(m: PolyMatrix) -> Poly:
    """Fraction-free elimination, pivoting on the lowest-degree entry."""
    n = m.rows
    a = [list(r) for r in m.entries]
    zero = m.zero_poly()
    if n == 0:
        return zero + 1
    sign = 1
    prev = zero + 1
    for k in range(n - 1):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                e = a[i][j]
                if e.terms and (best is None or _pivot_key(e) < best[0]):
                    best = (_pivot_key(e), i, j)
        if best is None:
            return zero
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                t = piv * a[i][j]
                if aik.terms and a[k][j].terms:
                    t = t - aik * a[k][j]
                a[i][j] = t.exact_div(prev) if not prev.is_constant() or prev.constant_value() != 1 else t
            a[i][k] = zero
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def det(m: PolyMatrix) -> Poly:
    """Exact determinant: cofactor expansion up to size 4, Bareiss beyond."""
    if not m.is_square():
        raise MatrixError("determinant of a non-square matrix")
    if m.rows <= 4:
        return _cofactor_det([list(r) for r in m.entries], m.zero_poly())
    return bareiss_det(m)


def principal_minor(m: PolyMatrix, k: int) -> Poly:
    if not m.is_square() or not 0 <= k <= m.rows:
        raise MatrixError(f"minor size {k} out of range for {m.shape}")
    if k == 0:
        return m.one_poly()
    return det(m.submatrix(range(k), range(k)))


# rank and kernels


def rank_at_point(m: PolyMatrix, point: Sequence) -> int:
    return linalg.rank(m.eval(point), m.field)


def _fraction_free_reduce(m: PolyMatrix, full: bool) -> tuple[list[list[Poly]], list[tuple[int, int]], Poly]:
    """Fraction-free elimination (Gauss-Jordan when ``full``).

    Returns the reduced entries, the (row, column) pivot positions and the
    last pivot, which equals the determinant of the pivot block up to sign.
    """
    a = [list(r) for r in m.entries]
    rows, cols = m.rows, m.cols
    one = m.one_poly()
    prev = one
    pivots: list[tuple[int, int]] = []
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    while True:
        best = None
        for i in range(rows):
            if i in used_rows:
                continue
            for j in range(cols):
                if j in used_cols:
                    continue
                e = a[i][j]
                if e.terms and (best is None or (_pivot_key(e), j, i) < best[0]):
                    best = ((_pivot_key(e), j, i), i, j)
        if best is None:
            break
        _, pr, pc = best
        piv = a[pr][pc]
        targets = [i for i in range(rows) if i != pr and (full or i not in used_rows)]
        for i in targets:
            aic = a[i][pc]
            new = []
            for j in range(cols):
                t = piv * a[i][j]
                if aic.terms and a[pr][j].terms:
                    t = t - aic * a[pr][j]
                if prev != one:
                    t = t.exact_div(prev)
                new.append(t)
            a[i] = new
        pivots.append((pr, pc))
        used_rows.add(pr)
        used_cols.add(pc)
        prev = piv
    return a, pivots, prev


def generic_rank(m: PolyMatrix) -> int:
    """Rank over the fraction field k(vars)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_fraction_free_reduce(m, full=False)[1])


@dataclass(frozen=True)
class RatMatrix:
    """Matrix over k(vars) stored as numerators with per-entry denominators."""

    num: PolyMatrix
    den: tuple[tuple[Poly, ...], ...]
    normalized: bool = False

    def __post_init__(self) -> None:
        for r in self.den:
            for d in r:
                if d.is_zero():
                    raise MatrixError("zero denominator")

    def cleared(self) -> PolyMatrix:
        """Columns scaled by the product of their distinct denominators."""
        cols = []
        for j in range(self.num.cols):
            dens = []
            for i in range(self.num.rows):
                d = self.den[i][j]
                if not d.is_constant() and d not in dens:
                    dens.append(d)
            col = []
            for i in range(self.num.rows):
                e = self.num[i, j]
                d = self.den[i][j]
                for other in dens:
                    if other != d:
                        e = e * other
                if d.is_constant():
                    e = e.scalar_mul(self.num.field.inv(d.constant_value()))
                col.append(e)
            cols.append(col)
        return PolyMatrix([list(r) for r in zip(*cols)], self.num.field, self.num.vars)


def _normalize_column(col: list[Poly]) -> list[Poly]:
    nz = [e for e in col if e.terms]
    if not nz:
        return col
    g = gcd_many(nz)
    if not g.is_constant():
        col = [e.exact_div(g) for e in col]
    # fix the scale: first nonzero entry gets leading coefficient one
    lead = next(e for e in col if e.terms).leading_coefficient()
    f = col[0].field
    inv = f.inv(lead)
    return [e.scalar_mul(inv) for e in col]


def kernel_over_fraction_field(m: PolyMatrix, normalize: bool = True) -> RatMatrix:
    """Basis of the right kernel over k(vars).

    Each basis column v has v[f] = D at its free column f and polynomial
    entries elsewhere (Cramer's rule read off a fraction-free Gauss-Jordan
    form), so the denominators D can be cleared without loss; the numerator
    matrix of the result already spans the kernel.
    """
    n = m.cols
    if m.rows == 0:
        ident = PolyMatrix.identity(n, m.field, m.vars)
        return RatMatrix(ident, tuple(tuple(m.one_poly() for _ in range(n)) for _ in range(n)), True)
    a, pivots, d = _fraction_free_reduce(m, full=True)
    pivot_cols = {c: r for r, c in pivots}
    free = [j for j in range(n) if j not in pivot_cols]
    cols = []
    for fcol in free:
        v = [m.zero_poly()] * n
        v[fcol] = d
        for c, r in pivot_cols.items():
            v[c] = -a[r][fcol]
        if normalize:
            v = _normalize_column(v)
        cols.append(v)
    if not cols:
        num = PolyMatrix.zeros(n, 0, m.field, m.vars) if n else PolyMatrix([], m.field, m.vars)
        return RatMatrix(num, tuple(() for _ in range(n)), True)
    num = PolyMatrix([list(r) for r in zip(*cols)], m.field, m.vars)
    one = m.one_poly()
    den = tuple(tuple(one for _ in cols) for _ in range(n))
    return RatMatrix(num, den, normalize)


def kernel_basis(m: PolyMatrix) -> PolyMatrix:
    """Polynomial matrix whose columns span the kernel over k(vars)."""
    return kernel_over_fraction_field(m).cleared()


def random_point(field: FieldSpec, n: int, rng: random.Random) -> list:
    return [field.random(rng, -50, 50) for _ in range(n)]
