import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quadbundle.field import FieldSpec
from quadbundle.gradedform import validate
from quadbundle.poly import Poly, random_form
from quadbundle.polymat import PolyMatrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

QQ = FieldSpec(None)
F101 = FieldSpec(101)
F32003 = FieldSpec(32003)
VARS = ("x", "y", "z")

fields = st.sampled_from([QQ, F101])


@st.composite
def polys(draw, field=None, max_terms=5, max_exp=3):
    f = draw(fields) if field is None else field
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        m = tuple(draw(st.integers(0, max_exp)) for _ in range(3))
        terms[m] = draw(st.integers(-20, 20))
    return Poly(f, VARS, terms)


@st.composite
def poly_triples(draw):
    f = draw(fields)
    return tuple(draw(polys(field=f)) for _ in range(3))


def random_pattern(degrees, twist, field, rng):
    m = len(degrees)
    rows = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            d = -degrees[i] - degrees[j] + twist
            rows[i][j] = rows[j][i] = random_form(d, field, rng, VARS) if d >= 0 else Poly.zero(field, VARS)
    return validate(tuple(degrees), twist, PolyMatrix(rows, field, VARS))


def random_symmetric(n, degree, field, rng):
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = random_form(degree, field, rng, VARS)
    return PolyMatrix(rows, field, VARS)


def random_matrix(r, c, degree, field, rng):
    return PolyMatrix([[random_form(degree, field, rng, VARS) for _ in range(c)] for _ in range(r)], field, VARS)


def rng(seed=0):
    return random.Random(seed)
