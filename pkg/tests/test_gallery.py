import pytest

from conftest import F101, F32003, QQ, VARS
from quadbundle.brauer import Verdict
from quadbundle.coker import CokerKind, classify, h0_twist
from quadbundle.gallery import (GalleryError, ansatz_solutions, cor12_patterns, even_theta_pattern,
                                halfperiod_pattern, hpt_form, nodal_gm_chain, odd_theta_pattern)
from quadbundle.grammar import parse
from quadbundle.gradedform import (Corank2Status, SmoothStatus, corank2_empty, discriminant, smoothness,
                                   validate)

F = parse("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z")


def revalidate(q):
    return validate(q.degrees, q.twist, q.mat)


class TestPatterns:
    def test_minimal_halfperiod(self):
        q = halfperiod_pattern(3, 0, F101)
        assert q.size == 3 and q.degrees == (-1, -1, -1) and q.twist == 0
        assert discriminant(q).degree == 6
        assert revalidate(q) == q

    def test_d6_k2(self):
        q = halfperiod_pattern(6, 2, F32003)
        assert q.size == 8 and discriminant(q).degree == 12
        assert q.mat[6, 6] == parse("1", VARS, F32003) and q.mat[6, 7].is_zero()

    def test_d1_k1_uncoupled(self):
        q = halfperiod_pattern(1, 1, QQ, seed=2, coupling=False)
        assert q.det == q.mat[0, 0] and q.det.degree() == 2

    def test_even_theta_six(self):
        q = even_theta_pattern(3, 0, F101)
        assert q.size == 6 and all(e.degree() == 1 for row in q.mat.entries for e in row if e.terms)
        assert classify(q).kind == CokerKind.EVEN_THETA

    def test_odd_theta_six(self):
        q = odd_theta_pattern(3, 0, F101)
        assert q.degrees == (-1, -1, -1, -2)
        p = classify(q)
        assert p.kind == CokerKind.ODD_THETA and p.h0_at_normalization() == 1

    def test_even_theta_four(self):
        assert discriminant(even_theta_pattern(2, 0, F101)).degree == 4

    def test_bad_parameters(self):
        with pytest.raises(GalleryError):
            halfperiod_pattern(0, 1)
        with pytest.raises(GalleryError):
            even_theta_pattern(1)
        with pytest.raises(GalleryError):
            odd_theta_pattern(3, 2)

    @pytest.mark.parametrize("build,kind", [(halfperiod_pattern, CokerKind.HALF_PERIOD),
                                            (even_theta_pattern, CokerKind.EVEN_THETA),
                                            (odd_theta_pattern, CokerKind.ODD_THETA)])
    def test_kind_rate(self, build, kind):
        hits = sum(classify(build(3, 0, F101, seed=s)).kind == kind for s in range(100))
        assert hits >= 95

    @pytest.mark.parametrize("k", [0, 1])
    def test_outputs_validate(self, k):
        for q in (halfperiod_pattern(4, k, F101), even_theta_pattern(3, k, F101), odd_theta_pattern(4, k, F101)):
            assert revalidate(q) == q


class TestHpt:
    def test_determinant(self):
        assert hpt_form(QQ).det == parse("x^2*y^2") * F

    def test_smoothness_refuted(self):
        c = smoothness(discriminant(hpt_form(QQ)))
        assert c.smooth.status == SmoothStatus.REFUTED
        assert c.smooth.point[0] == 0 and c.smooth.point[1] == 0

    def test_corank_two_nonempty(self):
        assert corank2_empty(hpt_form(QQ)).status == Corank2Status.NONEMPTY

    def test_classify_undetermined(self):
        assert classify(hpt_form(QQ)).kind == CokerKind.UNDETERMINED


class TestAnsatz:
    def test_four_records(self):
        recs = ansatz_solutions()
        assert [r.degree for r in recs] == [10, 18, 12, 14]
        for r in recs:
            assert all(r.divisibility_holds().values())

    def test_stated_degrees(self):
        # the degree-18 tuple lists x^2 z F, of degree 5, against a stated degree 6
        off = [(r.name, i) for r in ansatz_solutions() for i, f in enumerate(r.tuple_)
               if int(f.degree()) != r.degrees[i]]
        assert off == [("halfperiod-18", 1)]

    def test_degree_18_divisibility(self):
        rec = next(r for r in ansatz_solutions() if r.degree == 18)
        d = rec.divisibility_holds()
        assert d["x^2 | f1"] and d["z^4 | f3"]

    def test_degree_12_divisibility(self):
        rec = next(r for r in ansatz_solutions() if r.degree == 12)
        d = rec.divisibility_holds()
        assert d["x^2 | f1"] and d["x^2 | f2"]

    @pytest.mark.parametrize("degree", [18, 14, 12])
    def test_similarity(self, degree):
        rec = next(r for r in ansatz_solutions() if r.degree == degree)
        assert rec.similarity() == [True] * 4

    def test_degree_10_flagged(self):
        rec = next(r for r in ansatz_solutions() if r.degree == 10)
        assert rec.ambiguous
        assert len(rec.similarity()) == 4
        assert rec.to_json()["ambiguous"] is True


class TestNodalChain:
    @pytest.mark.parametrize("seed", range(3))
    def test_chain(self, seed):
        ch = nodal_gm_chain(seed)
        assert ch.profile_match and ch.residue_verdict == Verdict.PROBABLY_EQUAL
        assert ch.confidence >= 1 - 2 ** -20
        assert ch.N3.det == ch.N4.det
        eta = classify(ch.N3)
        assert eta.h0_at_normalization() == 0
        assert h0_twist(ch.N3, -2) == 0


class TestCor12:
    def test_halfperiod_d4(self):
        d = cor12_patterns(4, "halfperiod", 0)
        assert d.divisors == ("(2,2)",) and d.ambient == "P^2 x P^3" and d.reduced_rank == 4

    def test_even_theta_d4(self):
        d = cor12_patterns(4, "even-theta")
        assert d.divisors == ("(1,1)", "(1,1)", "(1,2)") and d.ambient == "P^2 x P^5"

    def test_halfperiod_d3_k7(self):
        d = cor12_patterns(3, "halfperiod", 7)
        assert d.divisors == ("(1,1)",) * 3 + ("(0,2)",) and d.ambient == "P^2 x P^6"

    @pytest.mark.parametrize("kind,d,k", [("halfperiod", 6, 2), ("even-theta", 5, 0), ("odd-theta", 4, 1)])
    def test_reduced_rank_four(self, kind, d, k):
        desc = cor12_patterns(d, kind, k)
        assert desc.reduced_rank == 4
        assert sum(1 for _ in desc.degrees) - 2 * len(desc.isotropic_degrees) == 4

    def test_bad_kind(self):
        with pytest.raises(GalleryError):
            cor12_patterns(4, "quartic")
