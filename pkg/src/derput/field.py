"""Exact scalar fields: the rationals and prime fields F_p with p >= 3."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldError(ValueError):
    pass


class Field:
    """Either Q (``p == 0``) or GF(p).

    Elements of Q are :class:`fractions.Fraction`; elements of GF(p) are
    plain ints in ``range(p)``.  Code that does arithmetic on elements
    calls :meth:`norm` after each combination.
    """

    __slots__ = ("p", "zero", "one")

    def __init__(self, p: int = 0):
        if p:
            if p == 2:
                raise FieldError("characteristic 2 is not supported")
            if not _is_prime(p):
                raise FieldError(f"{p} is not prime")
            self.zero, self.one = 0, 1
        else:
            self.zero, self.one = Fraction(0), Fraction(1)
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __call__(self, x) -> Scalar:
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise FieldError(f"{x} has no image in GF({self.p})")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def norm(self, x):
        return x % self.p if self.p else x

    def inv(self, x) -> Scalar:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return Fraction(1) / x

    def neg(self, x) -> Scalar:
        return (-x) % self.p if self.p else -x

    def to_signed(self, x) -> Scalar:
        """Representative used for printing: GF(p) elements in (-p/2, p/2]."""
        if self.p and x > self.p // 2:
            return x - self.p
        return x

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.p})"

    def __str__(self):
        return f"fp:{self.p}" if self.p else "q"


QQ = Field(0)


def parse_field(spec: str) -> Field:
    """Parse ``q`` or ``fp:<p>``."""
    spec = spec.strip().lower()
    if spec in ("q", "qq", "rational"):
        return QQ
    if spec.startswith("fp:"):
        try:
            p = int(spec[3:])
        except ValueError:
            raise FieldError(f"bad field spec {spec!r}") from None
        return Field(p)
    raise FieldError(f"bad field spec {spec!r}; expected 'q' or 'fp:<p>'")


def format_scalar(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(x)
