"""Dense univariate polynomials over a FieldSpec, as coefficient lists (low to high)."""

from __future__ import annotations

import random
from typing import Sequence

from .field import FieldSpec, Scalar

UPoly = list


def trim(a: Sequence, field: FieldSpec) -> UPoly:
    a = [field.norm(c) for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a: Sequence, b: Sequence, field: FieldSpec) -> UPoly:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return trim(out, field)


def sub(a: Sequence, b: Sequence, field: FieldSpec) -> UPoly:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return trim(out, field)


def mul(a: Sequence, b: Sequence, field: FieldSpec) -> UPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out, field)


def scale(a: Sequence, c: Scalar, field: FieldSpec) -> UPoly:
    return trim([x * c for x in a], field)


def deg(a: Sequence) -> int:
    return len(a) - 1


def divmod_(a: Sequence, b: Sequence, field: FieldSpec) -> tuple[UPoly, UPoly]:
    b = trim(b, field)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    r = list(trim(a, field))
    inv = field.inv(b[-1])
    db = len(b) - 1
    if len(r) <= db:
        return [], r
    q = [field.zero] * (len(r) - db)
    p = field.p
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv
        if p:
            c %= p
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] = r[k + j] - c * b[j]
                if p:
                    r[k + j] %= p
    return trim(q, field), trim(r[:db], field)


def rem(a: Sequence, b: Sequence, field: FieldSpec) -> UPoly:
    return divmod_(a, b, field)[1]


def monic(a: Sequence, field: FieldSpec) -> UPoly:
    a = trim(a, field)
    if not a:
        return a
    return scale(a, field.inv(a[-1]), field)


def gcd(a: Sequence, b: Sequence, field: FieldSpec) -> UPoly:
    a, b = trim(a, field), trim(b, field)
    while b:
        a, b = b, rem(a, b, field)
    return monic(a, field)


def deriv(a: Sequence, field: FieldSpec) -> UPoly:
    return trim([i * a[i] for i in range(1, len(a))], field)


def evaluate(a: Sequence, x: Scalar, field: FieldSpec) -> Scalar:
    acc = 0
    p = field.p
    for c in reversed(a):
        acc = acc * x + c
        if p:
            acc %= p
    return field.norm(acc) if not p else acc


def powmod(base: Sequence, e: int, mod: Sequence, field: FieldSpec) -> UPoly:
    result = [field.one]
    base = rem(base, mod, field)
    while e:
        if e & 1:
            result = rem(mul(result, base, field), mod, field)
        e >>= 1
        if e:
            base = rem(mul(base, base, field), mod, field)
    return result


def interpolate(xs: Sequence, ys: Sequence, field: FieldSpec) -> UPoly:
    """Lagrange interpolation through distinct nodes."""
    n = len(xs)
    result: UPoly = []
    for i in range(n):
        num = [field.one]
        den = field.one
        for j in range(n):
            if j != i:
                num = mul(num, [field.neg(xs[j]), field.one], field)
                den = field.norm(den * (xs[i] - xs[j]))
        result = add(result, scale(num, field.div(ys[i], den), field), field)
    return result


def resultant(a: Sequence, b: Sequence, field: FieldSpec) -> Scalar:
    """Resultant of two univariate polynomials via the Euclidean algorithm."""
    a, b = trim(a, field), trim(b, field)
    if not a or not b:
        return field.zero
    res = field.one
    p = field.p
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return field.norm(res * pow(b[0], da, p)) if p else res * b[0] ** da
        r = rem(a, b, field)
        if not r:
            return field.zero
        dr = len(r) - 1
        sign = -1 if (da * db) % 2 else 1
        lc = pow(b[-1], da - dr, p) if p else b[-1] ** (da - dr)
        res = field.norm(res * sign * lc)
        a, b = b, r


def roots_mod_p(a: Sequence, field: FieldSpec, rng: random.Random | None = None) -> list[int]:
    """Distinct roots in F_p of a univariate polynomial (Cantor-Zassenhaus split)."""
    p = field.p
    if not p:
        raise ValueError("roots_mod_p needs a prime field")
    a = monic(a, field)
    if len(a) <= 1:
        return []
    rng = rng or random.Random(0)
    # g = gcd(a, x^p - x) collects the linear factors
    xp = powmod([0, 1], p, a, field)
    g = gcd(a, sub(xp, [0, 1], field), field)
    out: list[int] = []
    _split(g, field, rng, out)
    return sorted(out)


def _split(g: UPoly, field: FieldSpec, rng: random.Random, out: list) -> None:
    p = field.p
    d = len(g) - 1
    if d <= 0:
        return
    if d == 1:
        out.append(field.neg(g[0]) * field.inv(g[1]) % p)
        return
    while True:
        c = rng.randrange(p)
        h = powmod([c, 1], (p - 1) // 2, g, field)
        f1 = gcd(g, sub(h, [1], field), field)
        if 0 < len(f1) - 1 < d:
            _split(f1, field, rng, out)
            _split(divmod_(g, f1, field)[0], field, rng, out)
            return
