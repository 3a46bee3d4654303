"""Vectorized evaluation of polynomials at points of P^2(F_p)."""

from __future__ import annotations

import numpy as np

from .field import FieldSpec
from .poly import Poly


def projective_points(p: int) -> np.ndarray:
    """All p^2 + p + 1 normalized points of P^2(F_p) as an (N, 3) int64 array."""
    a = np.arange(p, dtype=np.int64)
    yy, zz = np.meshgrid(a, a, indexing="ij")
    first = np.stack([np.ones(p * p, dtype=np.int64), yy.ravel(), zz.ravel()], axis=1)
    second = np.stack([np.zeros(p, dtype=np.int64), np.ones(p, dtype=np.int64), a], axis=1)
    last = np.array([[0, 0, 1]], dtype=np.int64)
    return np.concatenate([first, second, last])


def eval_mod_p(f: Poly, pts: np.ndarray) -> np.ndarray:
    """Values of f (coefficients in F_p or reducible QQ) at integer points mod p."""
    p = f.field.p
    if p is None:
        raise ValueError("eval_mod_p needs a prime-field polynomial")
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.int64)
    if not f.terms:
        return out
    maxe = [max(m[i] for m in f.terms) for i in range(f.nvars)]
    powers = []
    for i in range(f.nvars):
        col = pts[:, i] % p
        row = [np.ones(n, dtype=np.int64)]
        for _ in range(maxe[i]):
            row.append(row[-1] * col % p)
        powers.append(row)
    for m, c in f.terms.items():
        t = np.full(n, c, dtype=np.int64)
        for i, e in enumerate(m):
            if e:
                t = t * powers[i][e] % p
        out = (out + t) % p
    return out


def reduce_mod(f: Poly, p: int) -> Poly | None:
    """Reduction of f to F_p, or None when a denominator vanishes mod p."""
    if f.field.p == p:
        return f
    if f.field.p is not None:
        raise ValueError(f"cannot reduce a {f.field} polynomial mod {p}")
    for c in f.terms.values():
        if c.denominator % p == 0:
            return None
    return f.to_field(FieldSpec(p))
