"""Exact scalars over Q, Q(zeta_n) and F_p, plus root-of-unity utilities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from sympy import divisors, factorint, isprime, totient
from sympy.ntheory import n_order

from . import _upoly
from .errors import FieldMismatch

MAX_PRIME = 2**63 - 1


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Integer coefficients of the d-th cyclotomic polynomial, lowest degree first.

    Obtained by dividing ``t^d - 1`` exactly by ``Phi_e`` for every proper
    divisor ``e`` of ``d``.
    """
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = [Fraction(-1)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
    for e in divisors(d)[:-1]:
        quo, rem = _upoly.divmod_(num, [Fraction(c) for c in cyclotomic_poly(e)])
        assert not rem
        num = quo
    return tuple(int(c) for c in num)


def euler_phi(n: int) -> int:
    return int(totient(n))


@dataclass(frozen=True)
class FieldSpec:
    """One of the supported base fields.

    ``kind`` is ``"Q"``, ``"Fp"`` or ``"Qzeta"``; ``n`` is the prime for
    ``Fp`` and the cyclotomic index for ``Qzeta`` (0 for ``Q``).
    """

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind == "Q":
            if self.n != 0:
                raise ValueError("Q takes no parameter")
        elif self.kind == "Fp":
            if not (2 <= self.n <= MAX_PRIME) or not isprime(self.n):
                raise ValueError(f"{self.n} is not a prime of machine-word size")
        elif self.kind == "Qzeta":
            if self.n < 1:
                raise ValueError("cyclotomic index must be >= 1")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("Fp", p)

    @classmethod
    def cyclotomic(cls, n: int) -> FieldSpec:
        return cls("Qzeta", n)

    @property
    def characteristic(self) -> int:
        return self.n if self.kind == "Fp" else 0

    @property
    def degree(self) -> int:
        """Degree over the prime field."""
        return euler_phi(self.n) if self.kind == "Qzeta" else 1

    @property
    def modulus(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in cyclotomic_poly(self.n))

    def __call__(self, value) -> Scalar:
        return self.coerce(value)

    def coerce(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} scalar used in {self}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, (int, Fraction)):
            value = Fraction(value)
            if self.kind == "Q":
                return Scalar(self, value)
            if self.kind == "Fp":
                p = self.n
                if value.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {p}")
                return Scalar(self, value.numerator * pow(value.denominator, -1, p) % p)
            return Scalar(self, (value,) + (Fraction(0),) * (self.degree - 1))
        if isinstance(value, str):
            return self.coerce(Fraction(value))
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def zero(self) -> Scalar:
        return self.coerce(0)

    def one(self) -> Scalar:
        return self.coerce(1)

    def zeta(self) -> Scalar:
        """The generator ``zeta`` of Q(zeta_n)."""
        if self.kind != "Qzeta":
            raise ValueError("zeta exists only in cyclotomic fields")
        return Scalar(self, _reduce_cyclo([Fraction(0), Fraction(1)], self))

    def elements(self):
        """Iterate over a finite field in residue order."""
        if self.kind != "Fp":
            raise ValueError("only prime fields are enumerable")
        for i in range(self.n):
            yield Scalar(self, i)

    def __str__(self) -> str:
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"Fp({self.n})"
        return f"Qzeta({self.n})"


def _reduce_cyclo(coeffs, field: FieldSpec) -> tuple[Fraction, ...]:
    d = field.degree
    p = _upoly.trim(coeffs)
    if len(p) > d:
        p = _upoly.divmod_(p, list(field.modulus))[1]
    return tuple(p) + (Fraction(0),) * (d - len(p))


class Scalar:
    """An immutable element of a :class:`FieldSpec` in canonical form."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        if f.kind == "Q":
            return Scalar(f, self.value + o.value)
        if f.kind == "Fp":
            return Scalar(f, (self.value + o.value) % f.n)
        return Scalar(f, tuple(a + b for a, b in zip(self.value, o.value)))

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        if f.kind == "Q":
            return Scalar(f, -self.value)
        if f.kind == "Fp":
            return Scalar(f, -self.value % f.n)
        return Scalar(f, tuple(-a for a in self.value))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        if f.kind == "Q":
            return Scalar(f, self.value * o.value)
        if f.kind == "Fp":
            return Scalar(f, self.value * o.value % f.n)
        return Scalar(f, _reduce_cyclo(_upoly.mul(list(self.value), list(o.value)), f))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        if f.kind == "Q":
            return Scalar(f, 1 / self.value)
        if f.kind == "Fp":
            return Scalar(f, pow(self.value, -1, f.n))
        g, s, _ = _upoly.xgcd(list(self.value), list(f.modulus))
        assert g == [1], "cyclotomic modulus must be irreducible"
        return Scalar(f, _reduce_cyclo(s, f))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        f = self.field
        if f.kind == "Fp":
            return Scalar(f, pow(self.value, k, f.n))
        result, base = f.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        if self.field.kind == "Qzeta":
            return any(self.value)
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.field.coerce(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        if self.field.kind == "Q" and self.value.denominator == 1:
            return hash(self.value.numerator)
        return hash((self.field, self.value))

    def sort_key(self):
        if self.field.kind == "Qzeta":
            return self.value
        return (self.value,)

    def is_rational(self) -> bool:
        if self.field.kind == "Qzeta":
            return not any(self.value[1:])
        return self.field.kind == "Q"

    def to_fraction(self) -> Fraction:
        if self.field.kind == "Q":
            return self.value
        if self.field.kind == "Qzeta" and self.is_rational():
            return self.value[0]
        raise ValueError(f"{self} is not a rational number")

    def __repr__(self):
        return f"Scalar({self.field}, {self})"

    def __str__(self):
        f = self.field
        if f.kind == "Fp":
            return str(self.value)
        if f.kind == "Q":
            return str(self.value)
        parts = []
        for i in range(len(self.value) - 1, -1, -1):
            c = self.value[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out if len(parts) == 1 else f"({out})"


def root_of_unity_order(a: Scalar) -> int | None:
    """Multiplicative order of ``a`` if it is a root of unity, else ``None``."""
    if not a:
        raise ZeroDivisionError("zero is not a root of unity")
    f = a.field
    if f.kind == "Fp":
        return int(n_order(a.value, f.n))
    if f.kind == "Q":
        if a.value == 1:
            return 1
        if a.value == -1:
            return 2
        return None
    # every root of unity in Q(zeta_n) has order dividing lcm(2, n)
    order = lcm(2, f.n)
    if a ** order != f.one():
        return None
    for q in factorint(order):
        while order % q == 0 and a ** (order // q) == f.one():
            order //= q
    return order


def is_root_of_unity(a: Scalar) -> bool:
    return root_of_unity_order(a) is not None


__all__ = [
    "FieldSpec",
    "Scalar",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity_order",
    "is_root_of_unity",
]
