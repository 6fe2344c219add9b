"""Exact ground fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class ModP:
    """Residue class modulo a prime, with mixed arithmetic against ints."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"cannot mix GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else ModP(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else ModP(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else ModP(v - self.value, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else ModP(self.value * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return ModP(self.value * pow(v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return ModP(v, self.p) / self

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self.value == v

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"

    def __str__(self):
        # symmetric representative reads better in reports
        v = self.value
        return str(v - self.p if v > self.p // 2 else v)


class Field:
    """Base class for the two supported ground fields."""

    name: str
    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        return self(Fraction(text.strip()))

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "QQ"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, ModP):
            raise TypeError("residue class is not a rational number")
        if isinstance(x, float):
            raise TypeError("floating point scalars are not allowed")
        return Fraction(x)

    def to_json(self, x) -> str:
        return str(x)


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise ValueError(f"cannot coerce GF({x.p}) into GF({self.p})")
            return x
        if isinstance(x, float):
            raise TypeError("floating point scalars are not allowed")
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return ModP(int(x), self.p)

    def to_json(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(text: str) -> Field:
    """Parse ``q`` or ``fp:<p>`` into a field."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise ValueError(f"bad prime in field spec {text!r}") from None
        return GF(p)
    raise ValueError(f"unknown field spec {text!r}; use q or fp:<p>")
