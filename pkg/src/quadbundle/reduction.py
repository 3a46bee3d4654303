"""Quadric reduction along isotropic subbundles, hyperbolic extension and the family Psi_t."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .field import FieldSpec
from .gradedform import (
    DEFAULT_SCAN_PRIMES,
    SAMPLE_BUDGET,
    SCAN_LIMIT,
    GradedSymMatrix,
    ValidationError,
    chart_model,
    validate,
)
from .pointscan import eval_mod_p, projective_points, reduce_mod
from .poly import Poly, gcd_many, monomials_of_degree, random_form, squarefree_decomposition
from .polymat import PolyMatrix, generic_rank, kernel_basis, matmul, rank_at_point


class ReductionError(ValueError):
    pass


class RegularityStatus(str, Enum):
    PROVEN_AT = "ProvenAt"
    REFUTED_AT = "RefutedAt"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Regularity:
    status: RegularityStatus
    primes: tuple[int, ...] = ()
    point: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class IsotropicEmbedding:
    N: PolyMatrix
    col_degrees: tuple[int, ...] | None
    isotropy_ok: bool
    regularity: Regularity
    generic_full_rank: bool

    @property
    def rank(self) -> int:
        return self.N.cols


def infer_column_degrees(q: GradedSymMatrix, N: PolyMatrix) -> tuple[int, ...] | None:
    """Degrees u_j with N[i, j] homogeneous of degree a_i - u_j; None if inconsistent."""
    if q.degrees is None:
        return None
    out = []
    for j in range(N.cols):
        u = None
        for i in range(N.rows):
            e = N[i, j]
            if e.is_zero():
                continue
            if not e.is_homogeneous():
                return None
            cand = q.degrees[i] - int(e.degree())
            if u is None:
                u = cand
            elif u != cand:
                return None
        if u is None:
            return None
        out.append(u)
    return tuple(out)


def _check_column_degrees(q: GradedSymMatrix, N: PolyMatrix, col_degrees: Sequence[int]) -> None:
    for j, u in enumerate(col_degrees):
        for i in range(N.rows):
            e = N[i, j]
            if e.is_zero():
                continue
            need = q.degrees[i] - u
            if need < 0 or not e.is_homogeneous() or e.degree() != need:
                raise ReductionError(f"N[{i},{j}] = {e} is not a form of degree {need}")


def _max_minor_nonvanishing(vals: list[list[np.ndarray]], r: int, p: int, rng: random.Random) -> np.ndarray:
    """Boolean mask of points where an m x r evaluated matrix has rank r (random r x r projection)."""
    m = len(vals)
    npts = vals[0][0].shape[0]
    proj = [[rng.randrange(p) for _ in range(m)] for _ in range(r)]
    red = [[np.zeros(npts, dtype=np.int64) for _ in range(r)] for _ in range(r)]
    for a in range(r):
        for j in range(r):
            acc = np.zeros(npts, dtype=np.int64)
            for i in range(m):
                if proj[a][i]:
                    acc = (acc + proj[a][i] * vals[i][j]) % p
            red[a][j] = acc
    if r == 1:
        d = red[0][0]
    elif r == 2:
        d = (red[0][0] * red[1][1] - red[0][1] * red[1][0]) % p
    elif r == 3:
        d = (red[0][0] * ((red[1][1] * red[2][2] - red[1][2] * red[2][1]) % p)
             - red[0][1] * ((red[1][0] * red[2][2] - red[1][2] * red[2][0]) % p)
             + red[0][2] * ((red[1][0] * red[2][1] - red[1][1] * red[2][0]) % p)) % p
    else:
        return np.zeros(npts, dtype=bool)
    return d != 0


def _rank_drop_point(mat: PolyMatrix, r: int, p: int, rng: random.Random) -> tuple[tuple | None, bool]:
    entries = [[reduce_mod(e, p) for e in row] for row in mat.entries]
    if any(e is None for row in entries for e in row):
        return None, False
    if p * p + p + 1 <= SCAN_LIMIT:
        pts, full = projective_points(p), True
    else:
        pts = np.array([[rng.randrange(p) for _ in range(3)] for _ in range(SAMPLE_BUDGET)], dtype=np.int64)
        pts, full = pts[np.any(pts != 0, axis=1)], False
    vals = [[eval_mod_p(e, pts) for e in row] for row in entries]
    ok = _max_minor_nonvanishing(vals, r, p, rng)
    fld = FieldSpec(p)
    for k in np.nonzero(~ok)[0]:
        a = [[int(vals[i][j][k]) for j in range(mat.cols)] for i in range(mat.rows)]
        if linalg.rank(a, fld) < r:
            return tuple(int(c) for c in pts[k]), full
    return None, full


def verify_isotropic(q: GradedSymMatrix, N: PolyMatrix, primes: Sequence[int] = DEFAULT_SCAN_PRIMES,
                     seed: int = 0, col_degrees: Sequence[int] | None = None) -> IsotropicEmbedding:
    """Exact isotropy N^T M N = 0 plus rank scans of N and M N over P^2(F_p)."""
    M = q.mat
    if N.rows != M.rows:
        raise ReductionError(f"N has {N.rows} rows, form has size {M.rows}")
    if q.degrees is not None:
        if col_degrees is None:
            col_degrees = infer_column_degrees(q, N)
            if col_degrees is None:
                raise ReductionError("N is not graded compatibly with the form")
        _check_column_degrees(q, N, col_degrees)
    r = N.cols
    MN = matmul(M, N)
    iso = matmul(N.transpose(), MN).is_zero()
    full = generic_rank(N) == r and generic_rank(MN) == r
    rng = random.Random(seed)
    if q.field.p is not None:
        primes = [q.field.p]
    scanned = []
    reg = None
    for p in primes:
        for mat in (N, MN):
            pt, _ = _rank_drop_point(mat, r, p, rng)
            if pt is None:
                continue
            if q.field.p is None:
                lifted = tuple(Fraction(c - p if c > p // 2 else c) for c in pt)
                if rank_at_point(mat, lifted) < r:
                    reg = Regularity(RegularityStatus.REFUTED_AT, tuple(scanned), lifted,
                                     "rank drop of " + ("N" if mat is N else "M N"))
                    break
                continue
            reg = Regularity(RegularityStatus.REFUTED_AT, (p,), pt,
                             "rank drop of " + ("N" if mat is N else "M N"))
            break
        if reg is not None:
            break
        scanned.append(p)
    if reg is None:
        if full and scanned:
            reg = Regularity(RegularityStatus.PROVEN_AT, tuple(scanned))
        else:
            reg = Regularity(RegularityStatus.UNKNOWN, tuple(scanned),
                             detail="" if full else "generic rank deficient")
    return IsotropicEmbedding(N, tuple(col_degrees) if col_degrees is not None else None, iso, reg, full)


# reduction


def _random_eval_point(field: FieldSpec, rng: random.Random) -> list:
    if field.p:
        return [rng.randrange(1, field.p) for _ in range(3)]
    return [Fraction(rng.randint(-10**6, 10**6)) for _ in range(3)]


def strip_square_factor(m: PolyMatrix) -> PolyMatrix:
    """Divide all entries by the largest square dividing their gcd."""
    nz = [e for row in m.entries for e in row if e.terms]
    if not nz:
        return m
    g = gcd_many(nz)
    if g.is_constant():
        return m
    _, parts = squarefree_decomposition(g)
    s = g.const(1)
    for h, mult in parts:
        if mult >= 2:
            s = s * h ** (mult // 2)
    if s.is_constant():
        return m
    s2 = s * s
    return m.map(lambda e: e.exact_div(s2))


def reduce(q: GradedSymMatrix, iso: IsotropicEmbedding, seed: int = 0) -> GradedSymMatrix:
    """Chart-level quadric reduction: the form induced on U^perp / U.

    U^perp is the kernel of N^T M over the function field; a complement W of
    col(N) inside it is picked greedily by ascending column degree, and the
    result is W^T M W with global square factors removed.
    """
    if not iso.isotropy_ok:
        raise ReductionError("isotropy is not certified")
    if not iso.generic_full_rank:
        raise ReductionError("N or M N is not of full generic rank")
    M, N = q.mat, iso.N
    m, r = M.rows, N.cols
    if m - 2 * r < 1:
        raise ReductionError(f"reduction of a size-{m} form by rank {r} leaves nothing")
    K = kernel_basis(matmul(N.transpose(), M))
    if K.cols != m - r:
        raise ReductionError(f"kernel has dimension {K.cols}, expected {m - r}")
    rng = random.Random(seed)
    pt = _random_eval_point(q.field, rng)
    chosen_vals = [[e.eval(pt) for e in N.column(j)] for j in range(r)]
    order = sorted(range(K.cols), key=lambda j: (max((int(e.degree()) for e in K.column(j) if e.terms), default=0), j))
    picked = []
    for j in order:
        if len(picked) == m - 2 * r:
            break
        col = [e.eval(pt) for e in K.column(j)]
        trial = chosen_vals + [col]
        if linalg.rank(trial, q.field) == len(trial):
            chosen_vals = trial
            picked.append(j)
    if len(picked) != m - 2 * r:
        raise ReductionError("could not complete a complement of U inside U^perp")
    W = K.columns(picked)
    reduced = strip_square_factor(matmul(matmul(W.transpose(), M), W))
    return chart_model(reduced)


# hyperbolic extension


def h2_assumption_holds(b_degrees: Sequence[int], twist: int) -> bool:
    """Numeric criterion for H^2(wedge^2 B(-twist)) = 0 with B = (+) O(b_i).

    With q: G -> G^v(twist) the construction twists B by -twist, so the
    pairwise condition reads b_i + b_j - twist > -3.
    """
    b = list(b_degrees)
    return all(b[i] + b[j] - twist > -3 for i in range(len(b)) for j in range(i + 1, len(b)))


@dataclass(frozen=True)
class Extension:
    form: GradedSymMatrix
    isotropic: PolyMatrix
    isotropic_degrees: tuple[int, ...]
    h2_assumption: bool


def extend_hyperbolic_full(q: GradedSymMatrix, a_degrees: Sequence[int], b_degrees: Sequence[int],
                           rho: PolyMatrix) -> Extension:
    """Border q by the identity coupling along rho: B -> A.

    A = (+) O(alpha_i) must start with the summands of G^v(twist) (so
    alpha_i = -a_i + twist for i < m) and rho = [R; U] must have a lower
    block U with nonzero constant determinant; then A -> G^v(twist) is
    [I, -R U^-1] with kernel B.  The new form lives on A^v(twist) (+) B and
    equals [[S, rho], [rho^T, 0]] with S = diag(q, 0); B sits inside as a
    regular isotropic subbundle whose reduction returns q.
    """
    if q.degrees is None:
        raise ReductionError("extension needs a graded form")
    m, delta = q.size, q.twist
    a_deg, b_deg = tuple(a_degrees), tuple(b_degrees)
    b = len(b_deg)
    if len(a_deg) != m + b:
        raise ReductionError(f"rank A = {len(a_deg)} must equal size + rank B = {m + b}")
    expect = tuple(-a + delta for a in q.degrees)
    if a_deg[:m] != expect:
        raise ReductionError(f"A must begin with G^v(twist) = {expect}")
    if rho.shape != (m + b, b):
        raise ReductionError(f"rho must be {(m + b, b)}, got {rho.shape}")
    for i in range(m + b):
        for k in range(b):
            e = rho[i, k]
            need = a_deg[i] - b_deg[k]
            if e.terms and (need < 0 or not e.is_homogeneous() or e.degree() != need):
                raise ReductionError(f"rho[{i},{k}] = {e} is not a form of degree {need}")
    if b:
        U = rho.submatrix(range(m, m + b), range(b))
        du = U.det()
        if not du.is_constant() or du.is_zero():
            if generic_rank(rho) < b:
                raise ReductionError("rho drops rank generically")
            raise ReductionError("lower block of rho must have a nonzero constant determinant")
    h2 = h2_assumption_holds(b_deg, delta)
    if not h2:
        warnings.warn("H^2 vanishing assumption fails for this B; extension built anyway", stacklevel=2)
    f, v = q.field, q.mat.vars
    S = PolyMatrix.block_diag(q.mat, PolyMatrix.zeros(b, b, f, v)) if b else q.mat
    if b:
        psi = PolyMatrix.block([[S, rho], [rho.transpose(), PolyMatrix.zeros(b, b, f, v)]])
    else:
        psi = S
    degrees = tuple(-a + delta for a in a_deg) + b_deg
    form = validate(degrees, delta, psi)
    iso = PolyMatrix.block([[PolyMatrix.zeros(m + b, b, f, v)], [PolyMatrix.identity(b, f, v)]]) if b \
        else PolyMatrix.zeros(m, 0, f, v) if m else PolyMatrix([], f, v)
    return Extension(form, iso, b_deg, h2)


def extend_hyperbolic(q: GradedSymMatrix, a_degrees: Sequence[int], b_degrees: Sequence[int],
                      rho: PolyMatrix) -> GradedSymMatrix:
    return extend_hyperbolic_full(q, a_degrees, b_degrees, rho).form


def random_rho(q: GradedSymMatrix, b_degrees: Sequence[int], rng: random.Random) -> tuple[tuple[int, ...], PolyMatrix]:
    """A random admissible rho = [R; U] with A = G^v(twist) (+) B."""
    m, delta = q.size, q.twist
    b_deg = tuple(b_degrees)
    b = len(b_deg)
    a_deg = tuple(-a + delta for a in q.degrees) + b_deg
    f, v = q.field, q.mat.vars
    U = linalg.random_invertible(b, f, rng)
    rows = []
    for i in range(m + b):
        row = []
        for k in range(b):
            if i >= m:
                # constant block; degrees equal by construction, except across unequal b's
                need = a_deg[i] - b_deg[k]
                row.append(Poly.constant(U[i - m][k], f, v) if need == 0 else
                           random_form(need, f, rng, v) if need > 0 else Poly.zero(f, v))
            else:
                row.append(random_form(a_deg[i] - b_deg[k], f, rng, v))
        rows.append(row)
    return a_deg, PolyMatrix(rows, f, v)


# graded automorphisms


def graded_automorphism(degrees: Sequence, field: FieldSpec, rng: random.Random,
                        steps: int | None = None, vars: Sequence[str] = ("x", "y", "z")) -> tuple[PolyMatrix, PolyMatrix]:
    """Random graded automorphism P of (+) O(degrees) together with its inverse.

    P is a product of scalings and elementary transvections e_i <- e_i + c e_j
    with c a form of degree degrees[i] - degrees[j] >= 0; both P and P^-1 are
    polynomial.  Congruence by P keeps a graded form graded.
    """
    n = len(degrees)
    steps = steps if steps is not None else 3 * n
    one = Poly.constant(1, field, vars)
    P = [[one if i == j else one.const(0) for j in range(n)] for i in range(n)]
    Pi = [[one if i == j else one.const(0) for j in range(n)] for i in range(n)]
    for i in range(n):
        s = field.random_nonzero(rng)
        # P <- P * diag, Pinv <- diag^-1 * Pinv
        for r in range(n):
            P[r][i] = P[r][i].scalar_mul(s)
        Pi[i] = [e.scalar_mul(field.inv(s)) for e in Pi[i]]
    pairs = [(i, j) for i in range(n) for j in range(n)
             if i != j and degrees[i] - degrees[j] >= 0 and Fraction(degrees[i] - degrees[j]).denominator == 1]
    for _ in range(steps if pairs else 0):
        i, j = rng.choice(pairs)
        c = random_form(int(degrees[i] - degrees[j]), field, rng, vars)
        # P <- P * (I + c E_ij): column j += c * column i
        for r in range(n):
            if P[r][i].terms:
                P[r][j] = P[r][j] + P[r][i] * c
        # Pinv <- (I - c E_ij) * Pinv: row i -= c * row j
        Pi[i] = [a - c * b if b.terms else a for a, b in zip(Pi[i], Pi[j])]
    return PolyMatrix(P, field, vars), PolyMatrix(Pi, field, vars)


def infer_weights(mat: PolyMatrix) -> tuple[Fraction, ...] | None:
    """Weights w with every nonzero entry (i, j) homogeneous of degree w_i + w_j."""
    m = mat.rows
    w: list[Fraction | None] = [None] * m
    for i in range(m):
        e = mat[i, i]
        if e.terms:
            if not e.is_homogeneous():
                return None
            w[i] = Fraction(int(e.degree()), 2)
    changed = True
    while changed:
        changed = False
        for i in range(m):
            for j in range(m):
                e = mat[i, j]
                if w[i] is None and w[j] is not None and e.terms:
                    if not e.is_homogeneous():
                        return None
                    w[i] = int(e.degree()) - w[j]
                    changed = True
    if any(x is None for x in w):
        return None
    for i in range(m):
        for j in range(m):
            e = mat[i, j]
            if e.terms and (not e.is_homogeneous() or e.degree() != w[i] + w[j]):
                return None
    return tuple(w)


def transform(q: GradedSymMatrix, P: PolyMatrix) -> GradedSymMatrix:
    """The congruent form P^T M P, revalidated."""
    return validate(q.degrees, q.twist, q.mat.congruence(P))


# degeneration family


def degeneration_family(A: PolyMatrix, M: PolyMatrix, eta: PolyMatrix, theta: PolyMatrix, J: PolyMatrix,
                        t, phi: PolyMatrix | None = None, degrees: Sequence[int] | None = None,
                        twist: int | None = None) -> GradedSymMatrix:
    """Assemble Psi_t on G (+) E.

    Blocks: t^3 A + t^2 M + eta J eta^T on G, phi + t theta A theta^T on E,
    and t^2 theta A + t theta M coupling E to G (its transpose on the other
    side), with phi = theta M theta^T.
    """
    g = A.rows
    if A.shape != (g, g) or M.shape != (g, g):
        raise ReductionError("A and M must be square of the same size")
    if not A.is_symmetric() or not M.is_symmetric():
        raise ReductionError("A and M must be symmetric")
    if eta.rows != g or J.shape != (eta.cols, eta.cols) or not J.is_symmetric():
        raise ReductionError("eta must be g x h and J symmetric h x h")
    if theta.cols != g:
        raise ReductionError("theta must be e x g")
    if not matmul(theta, eta).is_zero():
        raise ReductionError("theta eta must vanish")
    target = matmul(matmul(theta, M), theta.transpose())
    if phi is None:
        phi = target
    elif phi != target:
        raise ReductionError("theta M theta^T differs from phi")
    f = A.field
    t = f(t)
    tA = A.scale(f.norm(t ** 3))
    top = tA + M.scale(f.norm(t * t)) + matmul(matmul(eta, J), eta.transpose())
    thA = matmul(theta, A)
    thM = matmul(theta, M)
    low = thA.scale(f.norm(t * t)) + thM.scale(t)
    corner = phi + matmul(thA, theta.transpose()).scale(t)
    psi = PolyMatrix.block([[top, low.transpose()], [low, corner]])
    if degrees is not None:
        return validate(degrees, twist, psi, check_det=False)
    return chart_model(psi, check_det=False)


# isotropic search


class Ansatz(str, Enum):
    IDENTITY_BLOCK = "IdentityBlock"
    DELTA_SHAPE = "DeltaShape"
    LINEARIZE = "Linearize"


def _zero_block_embedding(q: GradedSymMatrix, r: int) -> PolyMatrix | None:
    M = q.mat
    m = M.rows
    idx = [i for i in range(m) if M[i, i].is_zero()]
    chosen: list[int] = []
    for i in idx:
        if all(M[i, j].is_zero() for j in chosen):
            chosen.append(i)
        if len(chosen) == r:
            break
    if len(chosen) < r:
        return None
    f, v = M.field, M.vars
    one, zero = Poly.constant(1, f, v), Poly.zero(f, v)
    return PolyMatrix([[one if i == chosen[j] else zero for j in range(r)] for i in range(m)], f, v)


class _QuadraticSystem:
    """N(X)^T M N(X) = 0 as c + L X + X^T Q X over F_p, for N with a fixed identity block."""

    def __init__(self, q: GradedSymMatrix, col_degrees: Sequence[int], pivot_rows: Sequence[int]) -> None:
        M = q.mat
        self.p = p = q.field.p
        self.field = q.field
        self.vars = M.vars
        m, r = M.rows, len(col_degrees)
        self.m, self.r = m, r
        self.col_degrees = tuple(col_degrees)
        self.pivot_rows = tuple(pivot_rows)
        unknowns = []  # (row, col, monomial)
        for j, u in enumerate(col_degrees):
            for i in range(m):
                if i in pivot_rows:
                    continue
                need = q.degrees[i] - u
                if need < 0:
                    continue
                for mono in monomials_of_degree(need, 3):
                    unknowns.append((i, j, mono))
        self.unknowns = unknowns
        eqs = []
        self.eq_index = {}
        for j in range(r):
            for jj in range(j, r):
                d = -col_degrees[j] - col_degrees[jj] + q.twist
                for mono in monomials_of_degree(d, 3) if d >= 0 else []:
                    self.eq_index[(j, jj, mono)] = len(eqs)
                    eqs.append((j, jj, mono))
        self.eqs = eqs
        n, E = len(unknowns), len(eqs)
        self.c = np.zeros(E, dtype=np.int64)
        self.L = np.zeros((E, n), dtype=np.int64)
        self.Q = np.zeros((E, n, n), dtype=np.int64)
        # fixed part: identity entries N[pivot_rows[j], j] = 1
        fixed = [(pivot_rows[j], j, (0, 0, 0)) for j in range(r)]

        def add(target, key_a, key_b, scale):
            (i, j, ma), (ii, jj, mb) = key_a, key_b
            if j > jj:
                return
            ent = M[i, ii]
            for mono, coef in ent.terms.items():
                tot = tuple(x + y + z for x, y, z in zip(mono, ma, mb))
                e = self.eq_index.get((j, jj, tot))
                if e is not None:
                    target(e, coef * scale % p)

        def add_c(e, v):
            self.c[e] = (self.c[e] + v) % p

        for a in fixed:
            for b in fixed:
                add(add_c, a, b, 1)
        for k, uk in enumerate(unknowns):
            def add_l(e, v, k=k):
                self.L[e, k] = (self.L[e, k] + v) % p
            for a in fixed:
                add(add_l, uk, a, 1)
                add(add_l, a, uk, 1)
            for l, ul in enumerate(unknowns):
                def add_q(e, v, k=k, l=l):
                    self.Q[e, k, l] = (self.Q[e, k, l] + v) % p
                add(add_q, uk, ul, 1)

    def value(self, X: np.ndarray) -> np.ndarray:
        p = self.p
        quad = np.einsum("ekl,l->ek", self.Q, X) % p
        return (self.c + self.L @ X + quad @ X) % p

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        p = self.p
        sym = (self.Q + self.Q.transpose(0, 2, 1)) % p
        return (self.L + np.einsum("ekl,l->ek", sym, X)) % p

    def embedding(self, X: Sequence[int]) -> PolyMatrix:
        f, v = self.field, self.vars
        terms = [[{} for _ in range(self.r)] for _ in range(self.m)]
        for j in range(self.r):
            terms[self.pivot_rows[j]][j][(0, 0, 0)] = 1
        for (i, j, mono), val in zip(self.unknowns, X):
            if val % self.p:
                terms[i][j][mono] = int(val)
        return PolyMatrix([[Poly(f, v, t) for t in row] for row in terms], f, v)


def find_isotropic(q: GradedSymMatrix, target_rank: int, ansatz: Ansatz | str = Ansatz.LINEARIZE,
                   p: int | None = None, max_tries: int = 50, seed: int = 0,
                   col_degrees: Sequence[int] | None = None, candidate: PolyMatrix | None = None,
                   rounds: int = 20) -> IsotropicEmbedding | None:
    """Best-effort search for a regular isotropic subbundle of the given rank.

    IdentityBlock returns coordinate vectors spanning a zero principal block.
    DeltaShape verifies an explicitly supplied candidate embedding.
    Linearize fixes an identity block, draws the free coefficients at random
    and runs up to ``rounds`` linearization steps J(X) dX = -F(X) per try,
    accepting only an exact zero residual.  None means no embedding was found.
    """
    ansatz = Ansatz(ansatz)
    m = q.size
    if m - 2 * target_rank < 1:
        raise ReductionError(f"rank {target_rank} reduction of a size-{m} form is impossible")
    if q.field.p is None:
        raise ReductionError("isotropic search works over a prime field")
    if p is not None and p != q.field.p:
        raise ReductionError("p must match the field of the form")
    primes = (q.field.p,)
    N0 = _zero_block_embedding(q, target_rank)
    if N0 is not None:
        iso = verify_isotropic(q, N0, primes, seed)
        if iso.isotropy_ok and iso.generic_full_rank:
            return iso
    if ansatz == Ansatz.IDENTITY_BLOCK:
        return None
    if ansatz == Ansatz.DELTA_SHAPE:
        if candidate is None:
            raise ReductionError("DeltaShape needs a candidate embedding")
        iso = verify_isotropic(q, candidate, primes, seed, col_degrees)
        return iso if iso.isotropy_ok else None
    if q.degrees is None:
        raise ReductionError("linearized search needs a graded form")
    if col_degrees is None:
        col_degrees = (min(q.degrees),) * target_rank
    rng = random.Random(seed)
    fp = q.field.p
    for _ in range(max_tries):
        # identity block on rows whose summand matches each column degree
        pivots = []
        for u in col_degrees:
            rows = [i for i in range(m) if q.degrees[i] == u and i not in pivots]
            if not rows:
                return None
            pivots.append(rng.choice(rows))
        system = _QuadraticSystem(q, col_degrees, pivots)
        n = len(system.unknowns)
        X = np.array([rng.randrange(fp) for _ in range(n)], dtype=np.int64)
        for _ in range(rounds):
            F = system.value(X)
            if not F.any():
                N = system.embedding(X)
                iso = verify_isotropic(q, N, primes, seed, col_degrees)
                if iso.isotropy_ok and iso.generic_full_rank:
                    return iso
                break
            Jm = system.jacobian(X).tolist()
            step = linalg.solve(Jm, [(-int(v)) % fp for v in F], q.field)
            if step is None:
                break
            kernel = linalg.nullspace(Jm, q.field, n)
            step = np.array(step, dtype=np.int64)
            for vec in kernel:
                step = (step + rng.randrange(fp) * np.array(vec, dtype=np.int64)) % fp
            X = (X + step) % fp
    return None


@dataclass(frozen=True)
class PsiInputs:
    A: PolyMatrix
    M: PolyMatrix
    eta: PolyMatrix
    theta: PolyMatrix
    J: PolyMatrix
    phi: PolyMatrix
    degrees: tuple[int, ...]
    twist: int


def random_psi_inputs(g: int, h: int, field: FieldSpec, seed: int = 0) -> PsiInputs:
    """Valid data for Psi_t with G = g O(-1), E = (g - h) O(-1), H = h O(-1), twist 0.

    eta and theta come from a random constant change of basis T: eta is the
    first h columns of T and theta the last g - h rows of T^-1.
    """
    if not 0 < h < g:
        raise ReductionError("need 0 < h < g")
    rng = random.Random(seed)
    v = ("x", "y", "z")
    T = linalg.random_invertible(g, field, rng)
    Ti = linalg.inverse(T, field)
    eta = PolyMatrix.from_scalars([row[:h] for row in T], field, v)
    theta = PolyMatrix.from_scalars(Ti[h:], field, v)

    def sym_quadrics(n):
        rows = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = random_form(2, field, rng, v)
        return PolyMatrix(rows, field, v)

    A, M, J = sym_quadrics(g), sym_quadrics(g), sym_quadrics(h)
    phi = matmul(matmul(theta, M), theta.transpose())
    e = g - h
    return PsiInputs(A, M, eta, theta, J, phi, (-1,) * (g + e), 0)


def psi_relation(inputs: PsiInputs, psi: PolyMatrix, t) -> bool:
    """(theta, -t Id) annihilates Psi_t, so Psi_t descends to the bundles G_t."""
    f = psi.field
    e = inputs.theta.rows
    left = PolyMatrix.block([[inputs.theta, PolyMatrix.identity(e, f, psi.vars).scale(f.neg(f(t)))]])
    return matmul(left, psi).is_zero()


def induced_form(inputs: PsiInputs, t) -> PolyMatrix:
    """The form Psi_t induces on G_t = (G (+) E) / im(theta^T, -t Id).

    For t != 0 the summand G is a complement and the form is the G-block
    t^3 A + t^2 M + eta J eta^T.  At t = 0 a complement of im(theta^T) in G,
    paired with eta, gives a copy of J next to phi.
    """
    f = inputs.A.field
    t = f(t)
    v = inputs.A.vars
    if t != 0:
        return inputs.A.scale(f.norm(t ** 3)) + inputs.M.scale(f.norm(t * t)) + \
            matmul(matmul(inputs.eta, inputs.J), inputs.eta.transpose())
    g = inputs.A.rows
    th = [[e.constant_value() for e in row] for row in inputs.theta.entries]
    basis = [list(r) for r in th]
    picked = []
    for i in range(g):
        unit = [f.one if j == i else f.zero for j in range(g)]
        if linalg.rank(basis + [unit], f) > len(basis):
            basis.append(unit)
            picked.append(i)
    S = PolyMatrix.from_scalars([[f.one if i == p else f.zero for p in picked] for i in range(g)], f, v)
    top = matmul(matmul(S.transpose(), matmul(matmul(inputs.eta, inputs.J), inputs.eta.transpose())), S)
    return PolyMatrix.block_diag(top, inputs.phi)
