import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F101, QQ, VARS, random_matrix, random_symmetric
from quadbundle.grammar import parse
from quadbundle.poly import Poly
from quadbundle.polymat import (MatrixError, PolyMatrix, bareiss_det, congruence, det, generic_rank,
                                kernel_basis, kernel_over_fraction_field, matmul, principal_minor,
                                random_point, rank_at_point)

F = parse("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z")


def leibniz(m: PolyMatrix) -> Poly:
    """Determinant by summing over permutations."""
    n = m.rows
    total = Poly.zero(m.field, m.vars)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Poly.constant(sign, m.field, m.vars)
        for i in range(n):
            term = term * m[i, perm[i]]
        total = total + term
    return total


def hpt():
    return PolyMatrix.diag([parse("x"), parse("y"), parse("x*y"), F])


class TestDet:
    def test_identity(self):
        assert det(PolyMatrix.identity(4, QQ)) == Poly.constant(1, QQ)

    def test_diagonal(self):
        assert det(hpt()) == parse("x^2*y^2") * F

    def test_random_symmetric_quadrics(self):
        m = random_symmetric(3, 2, F101, random.Random(3))
        d = det(m)
        assert d.is_homogeneous() and d.degree() == 6
        assert d == leibniz(m)

    @settings(max_examples=200)
    @given(st.integers(1, 5), st.integers(0, 2), st.integers(0, 10 ** 6))
    def test_bareiss_matches_permutation_sum(self, n, deg, seed):
        m = random_matrix(n, n, deg, F101, random.Random(seed))
        assert bareiss_det(m) == leibniz(m)

    @settings(max_examples=30)
    @given(st.integers(1, 4), st.integers(0, 10 ** 6), st.sampled_from([QQ, F101]))
    def test_multiplicative(self, n, seed, field):
        r = random.Random(seed)
        a = random_matrix(n, n, r.randint(0, 2), field, r)
        b = random_matrix(n, n, r.randint(0, 2), field, r)
        assert det(matmul(a, b)) == det(a) * det(b)

    @settings(max_examples=30)
    @given(st.integers(1, 4), st.integers(0, 10 ** 6))
    def test_transpose(self, n, seed):
        r = random.Random(seed)
        a = random_matrix(n, n, r.randint(0, 2), QQ, r)
        assert det(a.transpose()) == det(a)

    def test_singular(self):
        m = PolyMatrix.from_strings([["x", "y"], ["2*x", "2*y"]], QQ)
        assert det(m).is_zero()


class TestMinors:
    def test_empty_minor(self):
        assert principal_minor(hpt(), 0) == Poly.constant(1, QQ)

    def test_diagonal_minor(self):
        assert principal_minor(hpt(), 3) == parse("x^2*y^2")

    def test_full_minor(self):
        m = random_symmetric(4, 1, F101, random.Random(1))
        assert principal_minor(m, 4) == det(m)

    def test_out_of_range(self):
        with pytest.raises(MatrixError):
            principal_minor(hpt(), 5)


class TestRankKernel:
    def test_two_term_syzygy(self):
        m = PolyMatrix.from_strings([["x", "y"]], QQ)
        k = kernel_basis(m)
        assert k.shape == (2, 1)
        a, b = k[0, 0], k[1, 0]
        # proportional to (-y, x)
        assert a * parse("x") == parse("-y") * b
        assert not a.is_zero()

    def test_identity_rank(self):
        assert rank_at_point(PolyMatrix.identity(5, F101), [3, 4, 5]) == 5

    def test_random_linear_kernel(self):
        m = random_matrix(2, 4, 1, F101, random.Random(7))
        k = kernel_basis(m)
        assert k.cols == 2
        assert matmul(m, k).is_zero()

    def test_ratmatrix_kernel(self):
        m = random_matrix(2, 4, 1, QQ, random.Random(8))
        rm = kernel_over_fraction_field(m)
        assert matmul(m, rm.cleared()).is_zero()

    @settings(max_examples=40)
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2), st.integers(0, 10 ** 6),
           st.sampled_from([QQ, F101]))
    def test_kernel_exact(self, r, c, deg, seed, field):
        m = random_matrix(r, c, deg, field, random.Random(seed))
        k = kernel_basis(m)
        assert k.cols == c - generic_rank(m)
        if k.cols:
            assert matmul(m, k).is_zero()

    @settings(max_examples=40)
    @given(st.integers(1, 4), st.integers(0, 10 ** 6))
    def test_rank_at_point_bounded(self, n, seed):
        r = random.Random(seed)
        a = random_matrix(n, 2, 1, F101, r)
        m = matmul(a, a.transpose())
        g = generic_rank(m)
        for _ in range(5):
            assert rank_at_point(m, random_point(F101, 3, r)) <= g
        assert rank_at_point(m, [0, 0, 1]) <= g


class TestProducts:
    def test_congruence_identity_form(self):
        p = random_matrix(3, 3, 1, QQ, random.Random(2))
        assert congruence(PolyMatrix.identity(3, QQ), p) == matmul(p.transpose(), p)

    def test_congruence_by_identity(self):
        m = random_symmetric(3, 2, QQ, random.Random(4))
        assert congruence(m, PolyMatrix.identity(3, QQ)) == m

    def test_transpose_of_product(self):
        r = random.Random(5)
        a = random_matrix(3, 3, 1, QQ, r)
        b = random_matrix(3, 3, 1, QQ, r)
        assert matmul(a, b).transpose() == matmul(b.transpose(), a.transpose())

    def test_dimension_mismatch(self):
        with pytest.raises(MatrixError):
            matmul(PolyMatrix.identity(2, QQ), PolyMatrix.identity(3, QQ))

    def test_mixed_fields_rejected(self):
        with pytest.raises(MatrixError):
            PolyMatrix([[Poly.var("x", QQ), Poly.var("x", F101)]])

    def test_dimension_cap(self):
        with pytest.raises(MatrixError):
            PolyMatrix.zeros(65, 1, QQ)
