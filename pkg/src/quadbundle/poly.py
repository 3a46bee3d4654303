"""Sparse multivariate polynomials over QQ or F_p.

A polynomial is a map from exponent tuples to nonzero coefficients.  Values
are immutable; every operation returns a new canonical polynomial.
"""

from __future__ import annotations

import heapq
import random as _random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import FieldError, FieldSpec, Scalar

DEFAULT_VARS = ("x", "y", "z")

Monomial = tuple[int, ...]

NEG_INF = float("-inf")


class PolyError(ValueError):
    pass


def _glex_key(m: Monomial) -> tuple:
    return (sum(m), m)


class Poly:
    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(
        self,
        field: FieldSpec,
        vars: Sequence[str] = DEFAULT_VARS,
        terms: Mapping[Monomial, Scalar] | None = None,
        *,
        _canonical: bool = False,
    ) -> None:
        self.field = field
        self.vars = tuple(vars)
        if _canonical:
            self.terms = terms  # type: ignore[assignment]
        else:
            n = len(self.vars)
            clean: dict[Monomial, Scalar] = {}
            for m, c in (terms or {}).items():
                m = tuple(m)
                if len(m) != n or any(e < 0 for e in m):
                    raise PolyError(f"bad exponent vector {m}")
                c = field(c)
                if c != 0:
                    clean[m] = field.norm(clean.get(m, 0) + c)
                    if clean[m] == 0:
                        del clean[m]
            self.terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def _raw(cls, field: FieldSpec, vars: tuple, acc: dict) -> "Poly":
        """Normalize an accumulator whose coefficients may be unreduced."""
        p = field.p
        if p:
            terms = {}
            for m, c in acc.items():
                c %= p
                if c:
                    terms[m] = c
        else:
            terms = {m: c for m, c in acc.items() if c != 0}
        return cls(field, vars, terms, _canonical=True)

    @classmethod
    def zero(cls, field: FieldSpec, vars: Sequence[str] = DEFAULT_VARS) -> "Poly":
        return cls(field, tuple(vars), {}, _canonical=True)

    @classmethod
    def constant(cls, c, field: FieldSpec, vars: Sequence[str] = DEFAULT_VARS) -> "Poly":
        vars = tuple(vars)
        c = field(c)
        terms = {(0,) * len(vars): c} if c != 0 else {}
        return cls(field, vars, terms, _canonical=True)

    @classmethod
    def var(cls, name: str, field: FieldSpec, vars: Sequence[str] = DEFAULT_VARS) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise PolyError(f"unknown variable {name!r}")
        m = tuple(1 if v == name else 0 for v in vars)
        return cls(field, vars, {m: field.one}, _canonical=True)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff, field: FieldSpec,
                 vars: Sequence[str] = DEFAULT_VARS) -> "Poly":
        return cls(field, vars, {tuple(exps): coeff})

    def like(self, terms: Mapping[Monomial, Scalar]) -> "Poly":
        return Poly._raw(self.field, self.vars, dict(terms))

    def const(self, c) -> "Poly":
        return Poly.constant(c, self.field, self.vars)

    # basic queries

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def degree(self) -> int | float:
        """Total degree; the zero polynomial has degree -inf."""
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def degree_in(self, v: int | str) -> int | float:
        i = self._index(v)
        if not self.terms:
            return NEG_INF
        return max(m[i] for m in self.terms)

    def min_degree_in(self, v: int | str) -> int:
        i = self._index(v)
        return min(m[i] for m in self.terms) if self.terms else 0

    def support_vars(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    out.add(i)
        return out

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(m) for m in self.terms}
        return len(degs) == 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.field, self.vars, {m: c for m, c in self.terms.items() if sum(m) == d},
                    _canonical=True)

    def leading_term(self) -> tuple[Monomial, Scalar]:
        """Leading term in graded-lex order."""
        m = max(self.terms, key=_glex_key)
        return m, self.terms[m]

    def leading_coefficient(self) -> Scalar:
        return self.leading_term()[1]

    def _index(self, v: int | str) -> int:
        if isinstance(v, int):
            return v
        try:
            return self.vars.index(v)
        except ValueError:
            raise PolyError(f"unknown variable {v!r}") from None

    def _check(self, other: "Poly") -> None:
        if self.field != other.field or self.vars != other.vars:
            raise PolyError(
                f"incompatible operands: {self.field}{list(self.vars)} vs "
                f"{other.field}{list(other.vars)}"
            )

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.const(other)
        return NotImplemented

    # equality and hashing

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.field == other.field and self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # arithmetic

    def __neg__(self) -> "Poly":
        p = self.field.p
        if p:
            return Poly(self.field, self.vars, {m: p - c for m, c in self.terms.items()}, _canonical=True)
        return Poly(self.field, self.vars, {m: -c for m, c in self.terms.items()}, _canonical=True)

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return Poly._raw(self.field, self.vars, acc)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) - c
        return Poly._raw(self.field, self.vars, acc)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly.zero(self.field, self.vars)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        acc: dict = {}
        get = acc.get
        n = self.nvars
        if n == 3:
            for (i1, j1, k1), c1 in b.items():
                for (i2, j2, k2), c2 in a.items():
                    m = (i1 + i2, j1 + j2, k1 + k2)
                    acc[m] = get(m, 0) + c1 * c2
        else:
            for m1, c1 in b.items():
                for m2, c2 in a.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    acc[m] = get(m, 0) + c1 * c2
        return Poly._raw(self.field, self.vars, acc)

    __rmul__ = __mul__

    def scalar_mul(self, c) -> "Poly":
        c = self.field(c)
        if c == 0:
            return Poly.zero(self.field, self.vars)
        return Poly._raw(self.field, self.vars, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a nonnegative integer")
        result = self.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self) -> "Poly":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scalar_mul(self.field.inv(self.leading_coefficient()))

    def mul_monomial(self, m: Monomial, c: Scalar = None) -> "Poly":
        if c is None:
            c = self.field.one
        return Poly._raw(self.field, self.vars,
                         {tuple(a + b for a, b in zip(k, m)): v * c for k, v in self.terms.items()})

    # evaluation and substitution

    def eval(self, point: Sequence) -> Scalar:
        if len(point) != self.nvars:
            raise PolyError(f"point has {len(point)} coordinates, expected {self.nvars}")
        f = self.field
        pt = [f(c) for c in point]
        if not self.terms:
            return f.zero
        maxe = [0] * self.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e > maxe[i]:
                    maxe[i] = e
        p = f.p
        powers = []
        for i, v in enumerate(pt):
            row = [f.one]
            for _ in range(maxe[i]):
                row.append(row[-1] * v % p if p else row[-1] * v)
            powers.append(row)
        total = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t = t * powers[i][e]
                    if p:
                        t %= p
            total += t
        return total % p if p else total

    __call__ = eval

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable i by images[i]; images share a (possibly new) ring."""
        if len(images) != self.nvars:
            raise PolyError("need one image per variable")
        ref = images[0]
        result = Poly.zero(ref.field, ref.vars)
        if not self.terms:
            return result
        cache: list[dict[int, Poly]] = [{0: ref.const(1), 1: img} for img in images]

        def power(i: int, e: int) -> Poly:
            if e not in cache[i]:
                cache[i][e] = power(i, e // 2) * power(i, e - e // 2)
            return cache[i][e]

        acc: dict = {}
        for m, c in self.terms.items():
            t = ref.const(c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            for k, v in t.terms.items():
                acc[k] = acc.get(k, 0) + v
        return Poly._raw(ref.field, ref.vars, acc)

    def substitute(self, var: int | str, value) -> "Poly":
        """Replace one variable by a scalar; the variable list is unchanged."""
        i = self._index(var)
        v = self.field(value)
        p = self.field.p
        acc: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            k = m[:i] + (0,) + m[i + 1:]
            acc[k] = acc.get(k, 0) + c * (pow(v, e, p) if p else v ** e)
        return Poly._raw(self.field, self.vars, acc)

    def derivative(self, var: int | str) -> "Poly":
        i = self._index(var)
        acc = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                acc[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Poly._raw(self.field, self.vars, acc)

    def gradient(self) -> list["Poly"]:
        return [self.derivative(i) for i in range(self.nvars)]

    def dehomogenize(self, var: int | str = "z", value=1) -> "Poly":
        return self.substitute(var, value)

    def homogenize(self, var: int | str, degree: int) -> "Poly":
        i = self._index(var)
        if any(m[i] for m in self.terms):
            raise PolyError("homogenizing variable already occurs")
        acc = {}
        for m, c in self.terms.items():
            d = sum(m)
            if d > degree:
                raise PolyError(f"target degree {degree} below polynomial degree {d}")
            acc[m[:i] + (degree - d,) + m[i + 1:]] = c
        return Poly(self.field, self.vars, acc, _canonical=True)

    def to_field(self, field: FieldSpec) -> "Poly":
        """Reinterpret coefficients in another field (e.g. reduce QQ mod p)."""
        return Poly(field, self.vars, {m: field(c) for m, c in self.terms.items()})

    # views as univariate polynomials

    def coefficients_in(self, var: int | str) -> dict[int, "Poly"]:
        i = self._index(var)
        groups: dict[int, dict] = {}
        for m, c in self.terms.items():
            groups.setdefault(m[i], {})[m[:i] + (0,) + m[i + 1:]] = c
        return {e: Poly(self.field, self.vars, t, _canonical=True) for e, t in groups.items()}

    @classmethod
    def from_coefficients_in(cls, var: int, coeffs: Mapping[int, "Poly"], like: "Poly") -> "Poly":
        acc: dict = {}
        for e, q in coeffs.items():
            for m, c in q.terms.items():
                k = m[:var] + (m[var] + e,) + m[var + 1:]
                acc[k] = acc.get(k, 0) + c
        return Poly._raw(like.field, like.vars, acc)

    def univariate_coeffs(self, var: int | str) -> list[Scalar]:
        """Dense coefficient list (low to high) when only ``var`` occurs."""
        i = self._index(var)
        deg = self.degree_in(i)
        if deg == NEG_INF:
            return []
        out = [self.field.zero] * (int(deg) + 1)
        for m, c in self.terms.items():
            if any(e for j, e in enumerate(m) if j != i):
                raise PolyError("polynomial is not univariate in the requested variable")
            out[m[i]] = c
        return out

    # division

    def divmod_lex(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Multivariate division by a single divisor in lex order."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        f = self.field
        p = f.p
        lm = max(other.terms)
        inv = f.inv(other.terms[lm])
        rest = [(m, c) for m, c in other.terms.items() if m != lm]
        r = dict(self.terms)
        heap = [tuple(-e for e in m) for m in r]
        heapq.heapify(heap)
        q: dict = {}
        rem: dict = {}
        while heap:
            key = heapq.heappop(heap)
            m = tuple(-e for e in key)
            c = r.pop(m, None)
            if c is None:
                continue
            if p:
                c %= p
            if c == 0:
                continue
            diff = tuple(a - b for a, b in zip(m, lm))
            if min(diff) < 0:
                rem[m] = c
                continue
            t = c * inv
            if p:
                t %= p
            q[diff] = t
            for mm, cc in rest:
                k = tuple(a + b for a, b in zip(mm, diff))
                if k in r:
                    r[k] = r[k] - t * cc
                else:
                    r[k] = -t * cc
                    heapq.heappush(heap, tuple(-e for e in k))
        return Poly._raw(f, self.vars, q), Poly._raw(f, self.vars, rem)

    def exact_div(self, other: "Poly") -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scalar_mul(self.field.inv(self.field(other)))
        if other.is_constant():
            return self.scalar_mul(self.field.inv(other.constant_value()))
        q, r = self.divmod_lex(other)
        if r.terms:
            raise PolyError("inexact polynomial division")
        return q

    def divides(self, other: "Poly") -> bool:
        """True when self divides other."""
        if not self.terms:
            return not other.terms
        if self.is_constant():
            return True
        return not self_div_remainder(other, self)

    def __floordiv__(self, other) -> "Poly":
        return self.exact_div(other)

    # printing

    def __str__(self) -> str:
        from .grammar import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, {self.field})"


def self_div_remainder(num: Poly, den: Poly) -> bool:
    """True when the lex remainder of num by den is nonzero."""
    return bool(num.divmod_lex(den)[1].terms)


def poly_ring(field: FieldSpec, vars: Sequence[str] = DEFAULT_VARS) -> tuple[Poly, ...]:
    """The generators of k[vars] as polynomials."""
    return tuple(Poly.var(v, field, vars) for v in vars)


def random_form(degree: int, field: FieldSpec, rng: _random.Random,
                vars: Sequence[str] = DEFAULT_VARS, density: float = 1.0) -> Poly:
    """Random homogeneous form; coefficients in [-9, 9] over QQ, uniform over F_p."""
    vars = tuple(vars)
    if degree < 0:
        return Poly.zero(field, vars)
    terms = {}
    for m in monomials_of_degree(degree, len(vars)):
        if density >= 1.0 or rng.random() < density:
            terms[m] = field.random(rng)
    return Poly(field, vars, terms)


def monomials_of_degree(d: int, n: int) -> list[Monomial]:
    """All exponent vectors of total degree d in n variables, graded-lex descending."""
    if n == 1:
        return [(d,)]
    out = []
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(d - e, n - 1):
            out.append((e,) + rest)
    return out


# gcd, content and squarefree decomposition


def _restrict_to_line(f: Poly, base: Sequence, direction: Sequence) -> list:
    """Coefficients (low to high) of s -> f(base + s*direction)."""
    from . import upoly

    field = f.field
    lines = [[field(b), field(d)] for b, d in zip(base, direction)]
    acc = [field.zero]
    for m, c in f.terms.items():
        t = [c]
        for i, e in enumerate(m):
            for _ in range(e):
                t = upoly.mul(t, lines[i], field)
        acc = upoly.add(acc, t, field)
    return upoly.trim(acc, field)


def _coprime_by_restriction(polys: Sequence[Poly], seed: int = 7) -> bool:
    """Cheap certificate that nonzero polynomials share no nonconstant factor.

    The polynomials are restricted to a random affine line whose direction
    does not kill any top-degree form; the restriction of a common factor
    then keeps its degree, so a trivial univariate gcd proves coprimality.
    A False result is inconclusive.
    """
    from . import upoly

    field = polys[0].field
    rng = _random.Random(seed)
    n = polys[0].nvars
    for _ in range(3):
        direction = [field.random(rng, -50, 50) for _ in range(n)]
        ok = True
        for f in polys:
            top = f.homogeneous_part(int(f.degree()))
            if top.eval(direction) == 0:
                ok = False
                break
        if not ok:
            continue
        base = [field.random(rng, -50, 50) for _ in range(n)]
        g = None
        for f in polys:
            r = _restrict_to_line(f, base, direction)
            g = r if g is None else upoly.gcd(g, r, field)
            if len(g) <= 1:
                return True
        return False
    return False


def content(f: Poly, var: int) -> Poly:
    """Gcd of the coefficients of f viewed as a polynomial in ``var``."""
    coeffs = sorted(f.coefficients_in(var).values(), key=lambda q: len(q.terms))
    g = None
    for c in coeffs:
        g = c.monic() if g is None else gcd(g, c)
        if g.is_constant():
            return f.const(1)
    return g if g is not None else f.const(0)


def _prem(a: Poly, b: Poly, var: int) -> Poly:
    db = int(b.degree_in(var))
    cb = b.coefficients_in(var)
    lc = cb[db]
    r = a
    da = r.degree_in(var)
    e = int(da) - db + 1
    while r.terms and r.degree_in(var) >= db:
        dr = int(r.degree_in(var))
        lr = r.coefficients_in(var)[dr]
        shift = tuple(dr - db if i == var else 0 for i in range(a.nvars))
        r = lc * r - (lr * b).mul_monomial(shift)
        e -= 1
    if e > 0:
        r = (lc ** e) * r
    return r


def primitive_part(f: Poly, var: int) -> Poly:
    c = content(f, var)
    return f if c.is_constant() else f.exact_div(c)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (recursive primitive remainder sequence)."""
    a._check(b)
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return a.const(1)
    va, vb = a.support_vars(), b.support_vars()
    common = va & vb
    if not common:
        return a.const(1)
    if a.nvars > 1 and _coprime_by_restriction([a, b]):
        return a.const(1)
    v = min(common, key=lambda i: (max(a.degree_in(i), b.degree_in(i)), i))
    ca, cb = content(a, v), content(b, v)
    c = gcd(ca, cb)
    pa = a if ca.is_constant() else a.exact_div(ca)
    pb = b if cb.is_constant() else b.exact_div(cb)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, v)
        if not r.terms:
            break
        if r.degree_in(v) == 0:
            pb = a.const(1)
            break
        pa, pb = pb, primitive_part(r, v)
    return (c * primitive_part(pb, v)).monic()


def gcd_many(polys: Iterable[Poly]) -> Poly:
    polys = [q for q in polys if q.terms]
    if not polys:
        raise PolyError("gcd of no nonzero polynomials")
    polys.sort(key=lambda q: (q.degree(), len(q.terms)))
    g = polys[0].monic()
    if len(polys) > 1 and polys[0].nvars > 1 and _coprime_by_restriction(polys):
        return g.const(1)
    for q in polys[1:]:
        if g.is_constant():
            break
        g = gcd(g, q)
    return g


def _check_characteristic(f: Poly) -> None:
    p = f.field.p
    if p and f.degree() >= p:
        raise FieldError(f"characteristic {p} too small for degree {f.degree()}")


def squarefree_decomposition(f: Poly) -> tuple[Scalar, list[tuple[Poly, int]]]:
    """Return (unit, [(g_i, i)]) with f = unit * prod g_i^i, g_i squarefree, coprime, monic.

    Each g_i collects the irreducible factors of multiplicity exactly i.
    """
    if not f.terms:
        raise PolyError("squarefree decomposition of zero")
    _check_characteristic(f)
    unit = f.leading_coefficient()
    g = f.monic()
    mult: dict[int, Poly] = {}
    _sqf_rec(g, mult)
    out = [(q.monic(), i) for i, q in sorted(mult.items()) if not q.is_constant()]
    return unit, out


def _sqf_rec(f: Poly, mult: dict[int, Poly]) -> None:
    if f.is_constant():
        return
    v = min(f.support_vars(), key=lambda i: (f.degree_in(i), i))
    c = content(f, v)
    pp = f if c.is_constant() else f.exact_div(c)
    _sqf_rec(c, mult)
    # Yun's algorithm on the primitive part
    d = pp.derivative(v)
    a0 = gcd(pp, d)
    b = pp.exact_div(a0)
    cc = d.exact_div(a0)
    dd = cc - b.derivative(v)
    i = 1
    while not b.is_constant():
        a = gcd(b, dd)
        b = b.exact_div(a)
        cc = dd.exact_div(a)
        dd = cc - b.derivative(v)
        if not a.is_constant():
            mult[i] = mult[i] * a if i in mult else a
        i += 1


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct irreducible factors of f (monic)."""
    _, parts = squarefree_decomposition(f)
    out = f.const(1)
    for g, _ in parts:
        out = out * g
    return out


def odd_part(f: Poly) -> Poly:
    """Product of the irreducible factors of odd multiplicity (monic).

    f equals a constant times odd_part(f) times a square.
    """
    _, parts = squarefree_decomposition(f)
    out = f.const(1)
    for g, i in parts:
        if i % 2:
            out = out * g
    return out


def is_square_up_to_unit(f: Poly) -> bool:
    """True iff f = u * s^2 for a nonzero constant u and a polynomial s."""
    if not f.terms:
        return False
    _, parts = squarefree_decomposition(f)
    return all(i % 2 == 0 for _, i in parts)
