"""Skew polynomials ``sum r_i theta^i`` with coefficients written on the left.

Multiplication follows ``theta * r = alpha(r) * theta``.  The coefficient
context is any object exposing ``ring`` (with ``zero``, ``one`` and
``__call__``) and ``twist(r, k)`` computing ``alpha^k(r)``;
:class:`~skewlab.automorph.AlgebraMap` is the main example.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotInvertible, NotStable, PreconditionError, RingMismatch, UnsupportedClass
from .polyring import Ideal, MultiPoly, exact_div
from .scalars import Scalar


def _is_scalar_unit(c) -> bool:
    if isinstance(c, MultiPoly):
        return bool(c) and c.is_constant()
    return c.is_unit()


class SkewPoly:
    """Element of ``R[theta; alpha]``; immutable."""

    __slots__ = ("alpha", "coeffs", "_hash")
    laurent = False

    def __init__(self, alpha, coeffs: Mapping[int, object] | Iterable = (), _checked: bool = False):
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        if not _checked:
            ring = alpha.ring
            clean = {}
            for d, c in coeffs.items():
                d = int(d)
                if d < 0 and not self.laurent:
                    raise ValueError("negative theta-degree needs a skew Laurent ring")
                c = ring(c)
                if c:
                    clean[d] = c
            coeffs = clean
            if self.laurent and clean and min(clean) < 0:
                alpha.inverse()
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # constructors -------------------------------------------------------------

    @classmethod
    def theta(cls, alpha, k: int = 1):
        return cls(alpha, {k: alpha.ring.one()})

    @classmethod
    def const(cls, alpha, r):
        return cls(alpha, {0: r})

    @classmethod
    def zero(cls, alpha):
        return cls(alpha, {}, _checked=True)

    @classmethod
    def one(cls, alpha):
        return cls.const(alpha, alpha.ring.one())

    def _new(self, coeffs):
        return type(self)(self.alpha, coeffs, _checked=True)

    # queries --------------------------------------------------------------------

    @property
    def ring(self):
        return self.alpha.ring

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self) -> int:
        """Top theta-degree; ``-1`` for zero (``None`` never returned)."""
        return max(self.coeffs) if self.coeffs else -1

    def low_degree(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def coeff(self, d: int):
        return self.coeffs.get(d, self.ring.zero())

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero skew polynomial has no leading coefficient")
        return self.coeffs[self.degree()]

    def is_constant(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def right_coeffs(self) -> dict:
        """Coefficients ``b_i`` with ``self = sum theta^i b_i``."""
        return {d: self.alpha.twist(c, -d) for d, c in self.coeffs.items()}

    @classmethod
    def from_right(cls, alpha, right: Mapping[int, object]):
        """Build ``sum theta^i b_i`` from right-hand coefficients."""
        ring = alpha.ring
        return cls(alpha, {d: alpha.twist(ring(b), d) for d, b in right.items()})

    def __eq__(self, other):
        if isinstance(other, SkewPoly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.coeffs.items())))
        return self._hash

    # arithmetic ------------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, SkewPoly):
            if other.ring != self.ring or other.alpha != self.alpha:
                raise RingMismatch("skew polynomials over different contexts")
            if other.laurent != self.laurent:
                cls = SkewLaurentPoly if (self.laurent or other.laurent) else SkewPoly
                return cls(self.alpha, other.coeffs, _checked=True)
            return other
        if isinstance(other, (int, Fraction, Scalar)) or getattr(other, "ring", None) == self.ring:
            return self._new({0: self.ring(other)} if other else {})
        raise TypeError(f"cannot combine skew polynomial with {type(other).__name__}")

    def _result_cls(self, other):
        return SkewLaurentPoly if (self.laurent or other.laurent) else SkewPoly

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.coeffs)
        for d, c in o.coeffs.items():
            s = out.get(d)
            s = c if s is None else s + c
            if s:
                out[d] = s
            else:
                out.pop(d, None)
        return self._result_cls(o)(self.alpha, out, _checked=True)

    __radd__ = __add__

    def __neg__(self):
        return self._new({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return skew_mul(self, o)

    def __rmul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return skew_mul(o, self)

    def __pow__(self, k: int):
        if k < 0:
            if len(self.coeffs) == 1 and self.laurent:
                ((d, c),) = self.coeffs.items()
                if c == self.ring.one():
                    return type(self)(self.alpha, {-d * (-k): c}, _checked=True)
            raise NotInvertible("only theta powers are inverted")
        result = self._new({0: self.ring.one()})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def twist_coeffs(self, k: int):
        """Apply ``alpha^k`` to every coefficient (``theta^k f theta^-k``)."""
        return self._new({d: self.alpha.twist(c, k) for d, c in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d]
            if d == 0:
                parts.append(_paren(c))
                continue
            th = "theta" if d == 1 else f"theta^{d}" if d > 0 else f"theta^({d})"
            if c == self.ring.one():
                parts.append(th)
            else:
                parts.append(f"{_paren(c)}*{th}")
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def _paren(c) -> str:
    s = str(c)
    if isinstance(c, MultiPoly) and len(c) == 1 and not s.startswith("-"):
        return s
    return f"({s})"


class SkewLaurentPoly(SkewPoly):
    """Element of ``R[theta^{+-1}; alpha]``; negative degrees allowed."""

    __slots__ = ()
    laurent = True

    @classmethod
    def theta_inv(cls, alpha, k: int = 1):
        return cls(alpha, {-k: alpha.ring.one()})


def skew_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """Bilinear extension of ``(r theta^i)(s theta^j) = r alpha^i(s) theta^(i+j)``."""
    if f.ring != g.ring or f.alpha != g.alpha:
        raise RingMismatch("skew polynomials over different contexts")
    alpha = f.alpha
    cls = SkewLaurentPoly if (f.laurent or g.laurent) else SkewPoly
    out: dict = {}
    twisted: dict = {}
    for i, r in f.coeffs.items():
        for j, s in g.coeffs.items():
            key = (i, j)
            if key not in twisted:
                twisted[key] = alpha.twist(s, i)
            term = r * twisted[key]
            d = i + j
            acc = out.get(d)
            out[d] = term if acc is None else acc + term
    return cls(alpha, {d: c for d, c in out.items() if c}, _checked=True)


def left_divide(g: SkewPoly, w: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """``(h, r)`` with ``w = g*h + r`` and ``deg r < deg g``.

    The leading theta-coefficient of ``g`` must be a unit scalar.
    """
    if g.laurent or w.laurent:
        raise PreconditionError("left division is defined in R[theta; alpha]")
    if not g:
        raise ZeroDivisionError("division by zero skew polynomial")
    m = g.degree()
    lead = g.leading()
    if not _is_scalar_unit(lead):
        raise NotInvertible(f"leading coefficient {lead} of divisor is not a unit scalar")
    lead_inv = lead.unit_inverse()
    alpha = g.alpha
    rem = w
    h: dict = {}
    while rem and rem.degree() >= m:
        n = rem.degree()
        c = alpha.twist(lead_inv * rem.leading(), -m)
        h[n - m] = c
        rem = rem - skew_mul(g, SkewPoly(alpha, {n - m: c}, _checked=True))
    return SkewPoly(alpha, h, _checked=True), rem


@dataclass(frozen=True)
class Membership:
    """Outcome of a membership test in ``(1 - a theta) S``."""

    member: bool
    cofactor: SkewPoly | None = None
    reason: str = ""

    def __bool__(self):
        return self.member


def one_minus_a_theta(alpha, a) -> SkewPoly:
    return SkewPoly(alpha, {0: alpha.ring.one(), 1: -alpha.ring(a)})


def membership_one_minus_a_theta(f: SkewPoly, a: MultiPoly) -> Membership:
    """Decide ``f in (1 - a theta) S`` by top-down elimination."""
    ring = f.ring
    if not isinstance(a, MultiPoly) or not ring.is_domain:
        raise UnsupportedClass("membership in (1 - a theta)S needs a polynomial or Laurent domain")
    a = ring(a)
    if not a:
        raise PreconditionError("a must be nonzero")
    alpha = f.alpha
    g = one_minus_a_theta(alpha, a)
    rem = f
    h: dict = {}
    while rem and rem.degree() >= 1:
        n = rem.degree()
        q = exact_div(rem.leading(), a)
        if q is None:
            return Membership(False, reason=f"a does not divide the theta^{n} coefficient {rem.leading()}")
        c = -alpha.twist(q, -1)
        h[n - 1] = c
        rem = rem - skew_mul(g, SkewPoly(alpha, {n - 1: c}, _checked=True))
    if rem:
        return Membership(False, reason=f"nonzero residue {rem} in R; (1 - a theta)S meets R trivially")
    cof = SkewPoly(alpha, h, _checked=True)
    if skew_mul(g, cof) != f:
        raise AssertionError("membership cofactor does not reconstruct f")
    return Membership(True, cof, "")


def norm_product(a, n: int, alpha):
    """``N_n(a) = a * alpha(a) * ... * alpha^(n-1)(a)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    a = alpha.ring(a)
    out = a
    for i in range(1, n):
        out = out * alpha.twist(a, i)
    return out


def check_alpha_stable(ideal: Ideal, alpha) -> None:
    """Raise :class:`NotStable` unless ``alpha`` maps each generator into the ideal."""
    for g in ideal.generators:
        if alpha(g) not in ideal:
            raise NotStable(f"alpha({g}) = {alpha(g)} is not in {ideal}")


@dataclass(frozen=True)
class SpecialProbe:
    a: MultiPoly
    n_max: int
    hits: tuple  # (ideal, least n or None) pairs
    norms_nonzero: bool

    @property
    def all_hit(self) -> bool:
        return self.norms_nonzero and all(n is not None for _, n in self.hits)


def special_probe(a, ideals, n_max: int, alpha) -> SpecialProbe:
    """Least ``n <= n_max`` with ``N_n(a)`` in each supplied alpha-stable ideal."""
    a = alpha.ring(a)
    for I in ideals:
        check_alpha_stable(I, alpha)
    norms = []
    N = a
    for n in range(1, n_max + 1):
        if n > 1:
            N = N * alpha.twist(a, n - 1)
        norms.append(N)
    nonzero = all(bool(N) for N in norms)
    hits = []
    for I in ideals:
        least = next((n for n, N in enumerate(norms, 1) if N in I), None)
        hits.append((I, least))
    return SpecialProbe(a, n_max, tuple(hits), nonzero)


def power_subring_decompose(f: SkewPoly, n: int) -> list[SkewPoly]:
    """``[f_0, ..., f_{n-1}]`` with ``f = sum theta^i * f_i`` and each ``f_i``
    supported on theta-degrees divisible by ``n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    alpha = f.alpha
    parts: list[dict] = [{} for _ in range(n)]
    for d, c in f.coeffs.items():
        q, i = divmod(d, n)
        # c theta^(qn+i) = theta^i alpha^(-i)(c) theta^(qn)
        parts[i][q * n] = alpha.twist(c, -i)
    return [type(f)(alpha, p, _checked=True) for p in parts]


def recompose(parts: list[SkewPoly]) -> SkewPoly:
    alpha = parts[0].alpha
    out = SkewPoly.zero(alpha)
    for i, p in enumerate(parts):
        out = out + skew_mul(SkewPoly.theta(alpha, i), p)
    return out
