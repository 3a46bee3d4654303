"""Dense linear algebra over a scalar field (QQ or F_p) on lists of lists."""

from __future__ import annotations

from typing import Sequence

from .field import FieldSpec, Scalar


def rref(rows: Sequence[Sequence[Scalar]], field: FieldSpec) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[field.norm(c) for c in r] for r in rows]
    if not a:
        return a, []
    m, n = len(a), len(a[0])
    p = field.p
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.norm(x * inv) for x in a[r]]
        row = a[r]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                if p:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], row)]
                else:
                    a[i] = [x - f * y for x, y in zip(a[i], row)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Sequence[Sequence[Scalar]], field: FieldSpec) -> int:
    if not rows or not rows[0]:
        return 0
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], field: FieldSpec, ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of the right kernel, one vector per free column."""
    if not rows:
        n = ncols or 0
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    a, pivots = rref(rows, field)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = field.neg(a[r][f])
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], field: FieldSpec) -> list[Scalar] | None:
    """One solution of A x = b, or None when inconsistent (free variables set to 0)."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    a, pivots = rref(aug, field)
    n = len(aug[0]) - 1
    if n in pivots:
        return None
    x = [field.zero] * n
    for r, c in enumerate(pivots):
        x[c] = a[r][n]
    return x


def det(rows: Sequence[Sequence[Scalar]], field: FieldSpec) -> Scalar:
    a = [[field.norm(c) for c in r] for r in rows]
    n = len(a)
    d = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = field.neg(d)
        d = field.norm(d * a[c][c])
        inv = field.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = field.norm(a[i][c] * inv)
                a[i] = [field.norm(x - f * y) for x, y in zip(a[i], a[c])]
    return d


def inverse(rows: Sequence[Sequence[Scalar]], field: FieldSpec) -> list[list[Scalar]]:
    n = len(rows)
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)] for i, r in enumerate(rows)]
    a, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in a]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]], field: FieldSpec) -> list[list[Scalar]]:
    bt = list(zip(*b))
    return [[field.norm(sum(x * y for x, y in zip(r, c))) for c in bt] for r in a]


def transpose(a: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    return [list(c) for c in zip(*a)]


def random_invertible(n: int, field: FieldSpec, rng) -> list[list[Scalar]]:
    while True:
        m = [[field.random(rng) for _ in range(n)] for _ in range(n)]
        if det(m, field) != 0:
            return m
