import itertools
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quadbundle import linalg
from quadbundle.field import FieldSpec
from quadbundle.dominance import (NQUAD, STANDARD_CASES, QUAD_INDEX, DominanceInstance, analytic_jacobian,
                                  dominance_check, dominance_table, format_table, random_data, rank_mod_p)

X = sympy.symbols("x0:3")


def symbolic_jacobian(inst, M, Z, K0, N0):
    """Differentiate eta(K, N) written out in sympy, evaluated at (K0, N0)."""
    r, l, k = inst.r, inst.l, inst.k
    quad = {key: X[key[0]] * X[key[1]] for key in QUAD_INDEX}

    def as_poly(vec):
        return sum(int(c) * quad[key] for key, c in zip(sorted(QUAD_INDEX, key=QUAD_INDEX.get), vec))

    Ms = sympy.Matrix(r, l, lambda i, b: as_poly(M[i, b]))
    Zs = sympy.Matrix(l, l, lambda b, c: as_poly(Z[b, c]))
    Kv = [[sympy.Symbol(f"K_{b}_{j}") for j in range(r)] for b in range(l)]
    Nv = [[[sympy.Symbol(f"N_{a}_{j}_{v}") for v in range(3)] for j in range(r)] for a in range(r + k)]
    Ks = sympy.Matrix(l, r, lambda b, j: Kv[b][j])
    Ns = sympy.Matrix(r + k, r, lambda a, j: sum(Nv[a][j][v] * X[v] for v in range(3)))
    eta = Ks.T * Ms.T + Ms * Ks + Ks.T * Zs * Ks + Ns.T * Ns
    source = [Kv[b][j] for b in range(l) for j in range(r)] + \
             [Nv[a][j][v] for a in range(r + k) for j in range(r) for v in range(3)]
    point = {Kv[b][j]: int(K0[b, j]) for b in range(l) for j in range(r)}
    point.update({Nv[a][j][v]: int(N0[a, j, v]) for a in range(r + k) for j in range(r) for v in range(3)})
    rows = []
    for i in range(r):
        for j in range(i, r):
            poly = sympy.Poly(sympy.expand(eta[i, j]), *X)
            for key in sorted(QUAD_INDEX, key=QUAD_INDEX.get):
                mono = [0, 0, 0]
                mono[key[0]] += 1
                mono[key[1]] += 1
                coeff = poly.coeff_monomial(tuple(mono))
                rows.append([sympy.diff(coeff, s).subs(point) for s in source])
    return np.array(rows, dtype=object).reshape(inst.target_dim, len(source))


class TestStandardCases:
    @pytest.mark.parametrize("r,l", STANDARD_CASES)
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_dominant(self, r, l, seed):
        res = dominance_check(DominanceInstance(r, l, 4 - l, seed=seed))
        assert res.dominant and res.rank == res.target_dim
        assert res.seconds < 10

    def test_nine_zero_four(self):
        res = dominance_check(DominanceInstance(9, 0, 4))
        assert res.rank == 270 == res.target_dim

    def test_three_three_one(self):
        assert dominance_check(DominanceInstance(3, 3, 1)).dominant

    @pytest.mark.parametrize("r,l", STANDARD_CASES)
    def test_seed_stability(self, r, l):
        assert all(dominance_check(DominanceInstance(r, l, 4 - l, seed=s)).dominant for s in range(5))

    @pytest.mark.parametrize("r,l", [(3, 3), (5, 3)])
    def test_rational_mode(self, r, l):
        res = dominance_check(DominanceInstance(r, l, 4 - l), rational=True)
        assert res.dominant and res.field == "QQ"


class TestSmallCases:
    def test_r1_rank(self):
        res = dominance_check(DominanceInstance(1, 0, 4))
        assert res.rank == 6 == res.target_dim

    def test_r1_image_over_f3(self):
        # with l = 0 the map is N -> N^T N: sums of five squares of linear forms
        p = 3
        monos = sorted(QUAD_INDEX, key=QUAD_INDEX.get)

        def square(u):
            v = [0] * NQUAD
            for a in range(3):
                for b in range(3):
                    v[QUAD_INDEX[(min(a, b), max(a, b))]] += u[a] * u[b]
            return tuple(c % p for c in v)

        squares = {square(u) for u in itertools.product(range(p), repeat=3)}
        reach = {(0,) * NQUAD}
        for _ in range(5):
            reach = {tuple((a + b) % p for a, b in zip(s, t)) for s in reach for t in squares}
        assert len(monos) == 6
        assert len(reach) == p ** NQUAD == 729

    def test_vacuous(self):
        res = dominance_check(DominanceInstance(0, 0, 4))
        assert res.dominant and res.target_dim == 0

    def test_invalid_prime(self):
        with pytest.raises(ValueError):
            DominanceInstance(1, 0, 4, p=3)

    def test_dimensions(self):
        inst = DominanceInstance(9, 0, 4)
        assert inst.target_dim == 270 and inst.source_dim == 351
        assert not DominanceInstance(3, 4, 1).standard

    def test_oversized_case_evidence(self):
        # source dim 3 * 12 * 16 = 576 >= 468, but N -> N^T N is invariant under O(16),
        # so the rank is at most 576 - 120 = 456
        res = dominance_check(DominanceInstance(12, 0, 4), attempts=1)
        assert res.source_dim == 576 and res.target_dim == 468
        assert res.rank == 456 and not res.dominant


class TestJacobian:
    @pytest.mark.parametrize("r,l,k", [(1, 0, 1), (1, 1, 2), (2, 1, 1), (2, 2, 0), (3, 1, 1), (3, 0, 2)])
    def test_matches_symbolic(self, r, l, k):
        inst = DominanceInstance(r, l, k, seed=r + l + k)
        M, Z, K0, N0 = random_data(inst, random.Random(7), bound=9)
        J = analytic_jacobian(inst, M, Z, K0, N0)
        S = symbolic_jacobian(inst, M, Z, K0, N0)
        assert J.shape == S.shape
        assert all(int(a) == int(b) for a, b in zip(J.ravel(), S.ravel()))

    @settings(max_examples=20)
    @given(st.integers(0, 10 ** 6))
    def test_permutation_invariance(self, seed):
        rng = random.Random(seed)
        inst = DominanceInstance(3, 1, 3)
        J = analytic_jacobian(inst, *random_data(inst, rng))
        rows = list(range(J.shape[0]))
        cols = list(range(J.shape[1]))
        rng.shuffle(rows)
        rng.shuffle(cols)
        assert rank_mod_p(J[rows][:, cols], inst.p) == rank_mod_p(J, inst.p)

    @settings(max_examples=30)
    @given(st.integers(0, 10 ** 6))
    def test_rank_mod_p_against_rref(self, seed):
        rng = random.Random(seed)
        a = np.array([[rng.randrange(7) for _ in range(6)] for _ in range(5)], dtype=object)
        a[4] = (a[0] + 2 * a[1]) % 7
        assert rank_mod_p(a, 7) == linalg.rank(a.tolist(), FieldSpec(7))


class TestTable:
    def test_grid(self):
        report = dominance_table(seeds=(0,))
        assert len(report["rows"]) == len(STANDARD_CASES)
        assert report["discrepancies"] == []
        text = format_table(report)
        assert "270" in text and len(text.splitlines()) == len(STANDARD_CASES) + 1

    def test_discrepancy_reported(self):
        report = dominance_table(cases=[(12, 0)], seeds=(0,))
        assert report["discrepancies"][0]["rank"] == 456
