"""Scalar fields: the rationals and prime fields of odd characteristic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

_MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin bases for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field F_p.

    Elements are ``Fraction`` for the rationals and ``int`` in ``[0, p)``
    for F_p.  Characteristic 2 is refused everywhere.
    """

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is None:
            return
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise FieldError(f"prime must be an int, got {self.p!r}")
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not (3 <= self.p < _MAX_PRIME) or not is_prime(self.p):
            raise FieldError(f"{self.p} is not an odd prime below 2^31")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def kind(self) -> str:
        return "prime" if self.p else "rational"

    def __str__(self) -> str:
        return f"GF({self.p})" if self.p else "QQ"

    # element handling

    def __call__(self, value: object) -> Scalar:
        """Coerce an int, Fraction or numeric string into the field."""
        p = self.p
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, bool):
            value = int(value)
        if p is None:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise FieldError(f"cannot coerce {value!r} to QQ")
        if isinstance(value, int):
            return value % p
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise FieldError(f"denominator of {value} vanishes mod {p}")
            return value.numerator * pow(den, -1, p) % p
        raise FieldError(f"cannot coerce {value!r} to {self}")

    @property
    def zero(self) -> Scalar:
        return 0 if self.p else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.p else Fraction(1)

    def norm(self, a: Scalar) -> Scalar:
        return a % self.p if self.p else a

    def inv(self, a: Scalar) -> Scalar:
        if self.p:
            a %= self.p
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.norm(a * self.inv(b))

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.p if self.p else -a

    def signed(self, a: Scalar) -> Scalar:
        """Symmetric representative, used for printing."""
        if self.p and a > self.p // 2:
            return a - self.p
        return a

    def random(self, rng, low: int = -9, high: int = 9) -> Scalar:
        """Uniform element of F_p, or a small integer in [low, high] over QQ."""
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(low, high))

    def random_nonzero(self, rng, low: int = -9, high: int = 9) -> Scalar:
        while True:
            c = self.random(rng, low, high)
            if c != 0:
                return c

    def is_square(self, a: Scalar) -> bool:
        """Quadratic residue test; only meaningful over F_p."""
        if not self.p:
            raise FieldError("square test needs a prime field")
        a %= self.p
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def reduce_from(self, a: Scalar) -> Scalar:
        """Map a rational number into this field (identity over QQ)."""
        return self(a)

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p} if self.p else {"kind": "rational"}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        kind = data.get("kind")
        if kind == "rational":
            return cls(None)
        if kind == "prime":
            return cls(int(data["p"]))
        raise FieldError(f"unknown field kind {kind!r}")


QQ = FieldSpec(None)
