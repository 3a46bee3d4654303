import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F101, F32003, QQ, VARS
from quadbundle.brauer import Verdict, residue_along_curve, square_class_equal
from quadbundle.coker import classify, profiles_equal
from quadbundle.gallery import bordering, even_theta_pattern, halfperiod_pattern
from quadbundle.grammar import parse
from quadbundle.gradedform import validate
from quadbundle.poly import Poly, random_form, squarefree_part
from quadbundle.polymat import PolyMatrix, det, matmul, rank_at_point
from quadbundle.reduction import (Ansatz, ReductionError, RegularityStatus, degeneration_family,
                                  extend_hyperbolic, extend_hyperbolic_full, find_isotropic,
                                  graded_automorphism, h2_assumption_holds, induced_form, psi_relation,
                                  random_psi_inputs, random_rho, reduce, transform, verify_isotropic)


def P(s, f=F101):
    return parse(s, VARS, f)


def same_reduced_curve(a: Poly, b: Poly) -> bool:
    return squarefree_part(a).monic() == squarefree_part(b).monic()


def hyperbolic_plus(q0):
    """antidiag(1, 1) (+) q0 on O(t/2)^2 (+) G."""
    f = q0.field
    z, one = Poly.zero(f, VARS), Poly.constant(1, f, VARS)
    m = q0.size
    rows = [[z, one] + [z] * m, [one, z] + [z] * m]
    rows += [[z, z] + list(r) for r in q0.mat.entries]
    return validate((q0.twist // 2,) * 2 + q0.degrees, q0.twist, PolyMatrix(rows, f, VARS))


def unit_column(m, i, f=F101):
    return PolyMatrix([[Poly.constant(1 if k == i else 0, f, VARS)] for k in range(m)], f, VARS)


def delta_shape_form(seed=0, f=F101):
    """A 6 x 6 quadric form whose leading 5 x 5 block kills delta = (z, y, 0, 0, x)."""
    rng = random.Random(seed)
    x, y, z = (Poly.var(v, f, VARS) for v in VARS)
    zero = Poly.zero(f, VARS)
    delta = [z, y, zero, zero, x]
    # vectors orthogonal to delta
    lin = [[y, -z, zero, zero, zero], [x, zero, zero, zero, -z], [zero, x, zero, zero, -y]]
    const = [[Poly.constant(1 if k == i else 0, f, VARS) for k in range(5)] for i in (2, 3)]
    M = [[zero] * 5 for _ in range(5)]

    def add_sym(u, v, c):
        for i in range(5):
            for j in range(5):
                M[i][j] = M[i][j] + (u[i] * v[j] + v[i] * u[j]) * c

    for a in range(3):
        for b in range(a, 3):
            add_sym(lin[a], lin[b], Poly.constant(f.random(rng), f, VARS))
    for a in range(2):
        for b in range(a, 2):
            add_sym(const[a], const[b], random_form(2, f, rng, VARS))
        for b in range(3):
            add_sym(const[a], lin[b], random_form(1, f, rng, VARS))
    col = [random_form(2, f, rng, VARS) for _ in range(5)]
    rows = [M[i] + [col[i]] for i in range(5)] + [col + [random_form(2, f, rng, VARS)]]
    q = validate((-1,) * 6, 0, PolyMatrix(rows, f, VARS))
    N = PolyMatrix([[e] for e in delta + [zero]], f, VARS)
    return q, N, PolyMatrix(M, f, VARS), PolyMatrix([[e] for e in delta], f, VARS)


def planted_refutation(f=F101):
    """O (+) 3 O(-1) with only an x coupling the first summand: M e_1 vanishes on x = 0."""
    rng = random.Random(1)
    z = Poly.zero(f, VARS)
    inner = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            inner[i][j] = inner[j][i] = random_form(2, f, rng, VARS)
    rows = [[z, P("x", f), z, z], [P("x", f)] + inner[0], [z] + inner[1], [z] + inner[2]]
    return validate((0, -1, -1, -1), 0, PolyMatrix(rows, f, VARS))


class TestVerifyIsotropic:
    def test_zero_leading_block(self):
        q = hyperbolic_plus(halfperiod_pattern(3, 0, F101, seed=1))
        iso = verify_isotropic(q, unit_column(5, 0))
        assert iso.isotropy_ok and iso.generic_full_rank
        assert iso.regularity.status == RegularityStatus.PROVEN_AT
        assert iso.col_degrees == (0,)

    def test_delta_shape(self):
        q, N, M, delta = delta_shape_form()
        assert matmul(M, delta).is_zero()
        iso = verify_isotropic(q, N)
        assert iso.isotropy_ok
        assert iso.col_degrees == (-2,)

    def test_planted_refutation(self):
        q = planted_refutation()
        N = unit_column(4, 0)
        iso = verify_isotropic(q, N)
        assert iso.isotropy_ok and iso.generic_full_rank
        assert iso.regularity.status == RegularityStatus.REFUTED_AT
        pt = iso.regularity.point
        assert pt[0] % 101 == 0
        assert rank_at_point(N, pt) == 1
        assert rank_at_point(matmul(q.mat, N), pt) == 0

    def test_not_isotropic(self):
        q = halfperiod_pattern(3, 0, F101)
        iso = verify_isotropic(q, unit_column(3, 0))
        assert not iso.isotropy_ok

    def test_dimension_mismatch(self):
        with pytest.raises(ReductionError):
            verify_isotropic(halfperiod_pattern(3, 0, F101), unit_column(4, 0))

    def test_ungraded_column(self):
        q = halfperiod_pattern(3, 0, F101)
        N = PolyMatrix([[P("x")], [P("1")], [P("0")]])
        with pytest.raises(ReductionError):
            verify_isotropic(q, N)


class TestReduce:
    def test_hyperbolic_block(self):
        q0 = halfperiod_pattern(3, 0, F101, seed=2)
        q = hyperbolic_plus(q0)
        red = reduce(q, verify_isotropic(q, unit_column(5, 0)))
        assert red.size == 3 and not red.graded
        assert red.det.monic() == q0.det.monic()

    def test_requires_isotropy(self):
        q = halfperiod_pattern(3, 0, F101)
        with pytest.raises(ReductionError):
            reduce(q, verify_isotropic(q, unit_column(3, 0)))

    def test_too_large_rank(self):
        q = hyperbolic_plus(halfperiod_pattern(1, 0, F101))
        iso = verify_isotropic(q, unit_column(3, 0))
        reduce(q, iso)
        with pytest.raises(ReductionError):
            find_isotropic(q, 2)

    @settings(max_examples=20)
    @given(st.integers(0, 10 ** 6), st.sampled_from([(-1,), (0,), (-1, -1), (0, -1)]))
    def test_round_trip(self, seed, b_degrees):
        rng = random.Random(seed)
        q = halfperiod_pattern(3, 0, F101, seed=seed % 97)
        a_deg, rho = random_rho(q, b_degrees, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ext = extend_hyperbolic_full(q, a_deg, b_degrees, rho)
        iso = verify_isotropic(ext.form, ext.isotropic, col_degrees=ext.isotropic_degrees)
        assert iso.isotropy_ok
        red = reduce(ext.form, iso, seed=seed)
        assert red.size == q.size
        assert same_reduced_curve(red.det, q.det)
        assert same_reduced_curve(ext.form.det, q.det)

    @pytest.mark.parametrize("seed", range(3))
    def test_round_trip_residue(self, seed):
        rng = random.Random(seed)
        q = halfperiod_pattern(3, 0, F32003, seed=seed)
        a_deg, rho = random_rho(q, (-1, -1), rng)
        ext = extend_hyperbolic_full(q, a_deg, (-1, -1), rho)
        red = reduce(ext.form, verify_isotropic(ext.form, ext.isotropic), seed=seed)
        v = square_class_equal(residue_along_curve(q, seed=seed), residue_along_curve(red, seed=seed),
                               trials=32, seed=seed)
        assert v.verdict == Verdict.PROBABLY_EQUAL

    def test_eight_by_eight_to_four(self):
        # 3 O(-1) (+) 5 O: extension of the bordered quadric model, disguised by a graded automorphism
        rng = random.Random(4)
        q4 = bordering(halfperiod_pattern(3, 0, F32003, seed=4))
        a_deg, rho = random_rho(q4, (0, 0), rng)
        ext = extend_hyperbolic_full(q4, a_deg, (0, 0), rho)
        assert ext.form.size == 8 and sorted(ext.form.degrees) == [-1] * 3 + [0] * 5
        Pm, Pinv = graded_automorphism(ext.form.degrees, F32003, rng)
        q8 = transform(ext.form, Pm)
        N = matmul(Pinv, ext.isotropic)
        iso = verify_isotropic(q8, N)
        assert iso.isotropy_ok and iso.rank == 2
        red = reduce(q8, iso)
        assert red.size == 4
        assert same_reduced_curve(red.det, q4.det)
        assert squarefree_part(red.det).degree() == 6


class TestExtend:
    def test_empty_b(self):
        q = halfperiod_pattern(3, 0, F101, seed=5)
        a_deg = tuple(-a + q.twist for a in q.degrees)
        ext = extend_hyperbolic(q, a_deg, (), PolyMatrix.zeros(3, 0, F101))
        assert ext.mat == q.mat and ext.degrees == q.degrees

    def test_bordering_profile(self):
        q = halfperiod_pattern(3, 0, F101, seed=6)
        assert profiles_equal(classify(q), classify(bordering(q)))

    def test_even_theta_round_trip(self):
        rng = random.Random(7)
        q = even_theta_pattern(2, 0, F101, seed=7)
        assert q.size == 4
        a_deg, rho = random_rho(q, (0,), rng)
        assert a_deg == (0,) * 5
        ext = extend_hyperbolic_full(q, a_deg, (0,), rho)
        assert ext.form.size == 6
        assert profiles_equal(classify(q), classify(ext.form))
        red = reduce(ext.form, verify_isotropic(ext.form, ext.isotropic))
        assert same_reduced_curve(red.det, q.det)

    def test_rank_dropping_rho(self):
        q = halfperiod_pattern(3, 0, F101)
        a_deg = (1, 1, 1, -1)
        rho = PolyMatrix.zeros(4, 1, F101)
        with pytest.raises(ReductionError, match="generically"):
            extend_hyperbolic(q, a_deg, (-1,), rho)

    def test_wrong_a(self):
        q = halfperiod_pattern(3, 0, F101)
        with pytest.raises(ReductionError):
            extend_hyperbolic(q, (0, 0, 0, 0), (0,), PolyMatrix.zeros(4, 1, F101))

    def test_h2_criterion(self):
        assert h2_assumption_holds((0, 0), 0)
        assert h2_assumption_holds((-1, -1), 0)
        assert not h2_assumption_holds((-2, -1), 0)
        assert h2_assumption_holds((-2, -1), -1)
        assert not h2_assumption_holds((-1, -1), 1)
        assert h2_assumption_holds((-1,), 5)

    def test_h2_warning(self):
        rng = random.Random(0)
        q = halfperiod_pattern(3, 0, F101)
        a_deg, rho = random_rho(q, (-2, -2), rng)
        with pytest.warns(UserWarning, match="H\\^2"):
            extend_hyperbolic(q, a_deg, (-2, -2), rho)


class TestDegenerationFamily:
    def build(self, inputs, t):
        return degeneration_family(inputs.A, inputs.M, inputs.eta, inputs.theta, inputs.J, t, inputs.phi,
                                   inputs.degrees, inputs.twist)

    def test_t_zero_block_diagonal(self):
        inp = random_psi_inputs(4, 2, F101, seed=1)
        psi = self.build(inp, 0).mat
        g = 4
        top = psi.submatrix(range(g), range(g))
        assert top == matmul(matmul(inp.eta, inp.J), inp.eta.transpose())
        assert psi.submatrix(range(g, 6), range(g)).is_zero()
        assert psi.submatrix(range(g, 6), range(g, 6)) == inp.phi

    @pytest.mark.parametrize("t", [0, 1, 2, 57])
    def test_symmetric(self, t):
        inp = random_psi_inputs(4, 2, F101, seed=2)
        assert self.build(inp, t).mat.is_symmetric()

    def test_cubic_in_t(self):
        inp = random_psi_inputs(3, 1, F101, seed=3)
        mats = [self.build(inp, t).mat for t in range(5)]
        # fourth finite difference vanishes entrywise
        coeffs = [1, -4, 6, -4, 1]
        for i in range(mats[0].rows):
            for j in range(mats[0].cols):
                acc = Poly.zero(F101, VARS)
                for c, m in zip(coeffs, mats):
                    acc = acc + m[i, j].scalar_mul(c)
                assert acc.is_zero()

    @pytest.mark.parametrize("t", [0, 1, 3])
    def test_relation(self, t):
        inp = random_psi_inputs(4, 2, F101, seed=4)
        psi = self.build(inp, t).mat
        assert psi_relation(inp, psi, t)
        assert det(psi).is_zero()

    @pytest.mark.parametrize("t", [0, 1])
    def test_induced_form_nondegenerate(self, t):
        inp = random_psi_inputs(4, 2, F101, seed=5)
        form = induced_form(inp, t)
        assert form.rows == 4 and form.is_symmetric()
        d = det(form)
        assert not d.is_zero() and d.degree() == 8

    def test_phi_mismatch(self):
        inp = random_psi_inputs(4, 2, F101, seed=6)
        with pytest.raises(ReductionError):
            degeneration_family(inp.A, inp.M, inp.eta, inp.theta, inp.J, 1, inp.phi.scale(2))

    def test_theta_eta(self):
        inp = random_psi_inputs(4, 2, F101, seed=7)
        with pytest.raises(ReductionError):
            degeneration_family(inp.A, inp.M, inp.eta, inp.eta.transpose(), inp.J, 1)


class TestFindIsotropic:
    def test_identity_block(self):
        q = hyperbolic_plus(halfperiod_pattern(3, 0, F101, seed=8))
        iso = find_isotropic(q, 1, Ansatz.IDENTITY_BLOCK, max_tries=1)
        assert iso is not None and iso.N == unit_column(5, 0)

    def test_precondition(self):
        with pytest.raises(ReductionError):
            find_isotropic(halfperiod_pattern(3, 0, F101), 2)

    def test_rational_rejected(self):
        with pytest.raises(ReductionError):
            find_isotropic(halfperiod_pattern(3, 0, QQ), 1)

    def test_delta_shape_candidate(self):
        q, N, _, _ = delta_shape_form(seed=3)
        iso = find_isotropic(q, 1, Ansatz.DELTA_SHAPE, candidate=N)
        assert iso is not None and iso.isotropy_ok

    def test_halfperiod_d6_k2(self):
        q = halfperiod_pattern(6, 2, F32003, seed=0)
        iso = find_isotropic(q, 2, Ansatz.LINEARIZE, max_tries=50, seed=0)
        assert iso is not None, "no rank-2 isotropic embedding found"
        assert matmul(matmul(iso.N.transpose(), q.mat), iso.N).is_zero()
