"""Random-point Jacobian rank certificate for the isotropy obstruction map.

eta(K, N) = K^T M^T + M K + K^T Z K + N^T N, with K an l x r constant matrix,
N an (r + k) x r matrix of linear forms, M an r x l matrix of quadrics and Z a
symmetric l x l matrix of quadrics, all on P^2.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .field import is_prime

NVARS = 3
# quadratic monomials x_a x_b, a <= b
QUAD_INDEX = {(a, b): i for i, (a, b) in enumerate((a, b) for a in range(NVARS) for b in range(a, NVARS))}
NQUAD = len(QUAD_INDEX)
STANDARD_CASES = ((3, 3), (5, 3), (6, 2), (8, 1), (9, 0))


@dataclass(frozen=True)
class DominanceInstance:
    r: int
    l: int
    k: int
    p: int = 32003
    seed: int = 0
    n: int = NVARS

    def __post_init__(self) -> None:
        if min(self.r, self.l, self.k) < 0:
            raise ValueError("r, l, k must be nonnegative")
        if self.n != NVARS:
            raise ValueError("only three variables are supported")
        if self.p <= 3 or not is_prime(self.p):
            raise ValueError("p must be a prime larger than 3")

    @property
    def standard(self) -> bool:
        return self.k == 4 - self.l

    @property
    def target_dim(self) -> int:
        return self.r * (self.r + 1) // 2 * NQUAD

    @property
    def source_dim(self) -> int:
        return self.l * self.r + NVARS * self.r * (self.r + self.k)


@dataclass(frozen=True)
class DominanceResult:
    r: int
    l: int
    k: int
    rank: int
    target_dim: int
    source_dim: int
    dominant: bool
    points_tried: int
    field: str
    standard: bool
    seconds: float

    def to_json(self) -> dict:
        return asdict(self)


def _linear_times_linear(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coefficient vector of (u . t)(v . t) for integer coefficient triples."""
    out = np.zeros(NQUAD, dtype=object)
    for a in range(NVARS):
        for b in range(NVARS):
            out[QUAD_INDEX[(min(a, b), max(a, b))]] += u[a] * v[b]
    return out


def _pair_index(r: int) -> dict[tuple[int, int], int]:
    return {(i, j): n for n, (i, j) in enumerate((i, j) for i in range(r) for j in range(i, r))}


def random_data(inst: DominanceInstance, rng: random.Random, bound: int | None = None):
    """M (r, l, 6), Z (l, l, 6) symmetric, K0 (l, r), N0 (r + k, r, 3) as object arrays."""
    r, l, k = inst.r, inst.l, inst.k
    hi = inst.p - 1 if bound is None else bound
    lo = 0 if bound is None else -bound

    def draw(*shape):
        a = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            a[idx] = rng.randint(lo, hi)
        return a

    M = draw(r, l, NQUAD)
    Zh = draw(l, l, NQUAD)
    Z = Zh + Zh.transpose(1, 0, 2)
    K0 = draw(l, r)
    N0 = draw(r + k, r, NVARS)
    return M, Z, K0, N0


def analytic_jacobian(inst: DominanceInstance, M, Z, K0, N0) -> np.ndarray:
    """Jacobian of eta at (K0, N0), one column per source coordinate.

    Rows are indexed by pairs i <= j and quadratic monomials.  A K-direction
    E_(b, j) changes row and column j of eta by w_i = M[i, b] + (Z K0)[b, i];
    an N-direction with monomial t_v at (a, j) changes them by t_v N0[a, i].
    Diagonal entries receive the contribution twice.
    """
    r, l, k = inst.r, inst.l, inst.k
    pairs = _pair_index(r)
    rows = inst.target_dim
    cols = []
    ZK = np.zeros((l, r, NQUAD), dtype=object)
    for b in range(l):
        for i in range(r):
            acc = np.zeros(NQUAD, dtype=object)
            for c in range(l):
                acc = acc + Z[b, c] * K0[c, i]
            ZK[b, i] = acc

    def column_from_row(j: int, w: list) -> np.ndarray:
        col = np.zeros(rows, dtype=object)
        for i in range(r):
            key = (min(i, j), max(i, j))
            base = pairs[key] * NQUAD
            factor = 2 if i == j else 1
            col[base:base + NQUAD] += factor * w[i]
        return col

    for b in range(l):
        for j in range(r):
            w = [M[i, b] + ZK[b, i] for i in range(r)]
            cols.append(column_from_row(j, w))
    unit = np.eye(NVARS, dtype=object)
    for a in range(r + k):
        for j in range(r):
            for v in range(NVARS):
                w = [_linear_times_linear(unit[v], N0[a, i]) for i in range(r)]
                cols.append(column_from_row(j, w))
    if not cols:
        return np.zeros((rows, 0), dtype=object)
    return np.stack(cols, axis=1)


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank over F_p by row reduction on int64 arrays."""
    m = np.array(a, dtype=object) % p
    m = m.astype(np.int64)
    nrows, ncols = m.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(m[rank:, c])[0]
        if len(nz) == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = m[rank] * inv % p
        col = m[:, c].copy()
        col[rank] = 0
        mask = col != 0
        if mask.any():
            m[mask] = (m[mask] - np.outer(col[mask], m[rank])) % p
        rank += 1
    return rank


def dominance_check(inst: DominanceInstance, attempts: int = 4, rational: bool = False,
                    height: int = 9) -> DominanceResult:
    """Full Jacobian rank at a random point certifies dominance.

    Over F_p data and base point are uniform in F_p.  In rational mode they are
    integers in [-height, height]; the rank of the integer Jacobian mod p is a
    lower bound for its rank over QQ, so full rank mod p certifies full rank in
    characteristic zero.  A rank deficit at every attempt is evidence only.
    """
    start = time.perf_counter()
    target = inst.target_dim
    rng = random.Random(inst.seed)
    best = 0
    tried = 0
    if target == 0:
        return DominanceResult(inst.r, inst.l, inst.k, 0, 0, inst.source_dim, True, 0,
                               "QQ" if rational else f"F_{inst.p}", inst.standard, 0.0)
    for _ in range(attempts):
        tried += 1
        M, Z, K0, N0 = random_data(inst, rng, height if rational else None)
        J = analytic_jacobian(inst, M, Z, K0, N0)
        best = max(best, rank_mod_p(J, inst.p))
        if best == target:
            break
    return DominanceResult(inst.r, inst.l, inst.k, best, target, inst.source_dim, best == target, tried,
                           "QQ" if rational else f"F_{inst.p}", inst.standard, time.perf_counter() - start)


def dominance_table(cases: Iterable[tuple[int, int]] = STANDARD_CASES, p: int = 32003,
                    seeds: Iterable[int] = (0, 1, 2), k: int | None = None,
                    rational: bool = False) -> dict:
    """Run the check over (r, l) cases with k = 4 - l unless k is given."""
    rows, discrepancies = [], []
    for r, l in cases:
        kk = 4 - l if k is None else k
        for s in seeds:
            res = dominance_check(DominanceInstance(r, l, kk, p, s), rational=rational)
            rows.append(res.to_json() | {"seed": s})
            if not res.dominant and res.standard:
                discrepancies.append({"r": r, "l": l, "k": kk, "seed": s, "rank": res.rank,
                                      "target_dim": res.target_dim})
    return {"rows": rows, "discrepancies": discrepancies}


def format_table(report: dict) -> str:
    head = f"{'r':>3} {'l':>3} {'k':>3} {'seed':>5} {'rank':>6} {'target':>7} {'dominant':>9} {'sec':>7}"
    lines = [head]
    for row in report["rows"]:
        lines.append(f"{row['r']:>3} {row['l']:>3} {row['k']:>3} {row['seed']:>5} {row['rank']:>6} "
                     f"{row['target_dim']:>7} {str(row['dominant']):>9} {row['seconds']:>7.2f}")
    return "\n".join(lines)
