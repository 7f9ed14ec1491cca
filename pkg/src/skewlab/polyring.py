"""Sparse multivariate (optionally Laurent) polynomials over a :class:`FieldSpec`.

Monomials are exponent tuples ordered graded-lexicographically with
``x_1 > x_2 > ... > x_t``.  Besides plain polynomial and Laurent rings the
module supports two quotient shapes: a univariate ring modulo one
polynomial, and a coordinate-affine quotient obtained by assigning
constants to some of the variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import _upoly
from .errors import PreconditionError, RingMismatch, UnsupportedIdeal
from .scalars import FieldSpec, Scalar

Exps = tuple  # tuple[int, ...]


def grlex_key(e: Exps):
    return (sum(e), e)


@dataclass(frozen=True)
class CoeffRing:
    """Descriptor of a coefficient ring.

    ``kind`` is one of ``"poly"``, ``"laurent"``, ``"quot"`` (univariate ring
    modulo ``modulus``, stored as dense coefficients lowest first) or
    ``"affine"`` (the polynomial ring left after substituting constants for
    the variables listed in ``assignments``; ``parent`` names the original
    variables).
    """

    field: FieldSpec
    names: tuple[str, ...]
    kind: str = "poly"
    modulus: tuple[Scalar, ...] = ()
    assignments: tuple[tuple[str, Scalar], ...] = ()
    parent: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if self.kind not in ("poly", "laurent", "quot", "affine"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "quot":
            if len(self.names) != 1:
                raise ValueError("univariate quotient needs exactly one variable")
            if len(self.modulus) < 2 or not self.modulus[-1]:
                raise ValueError("quotient modulus must have degree >= 1")
        if self.kind == "affine":
            assigned = [n for n, _ in self.assignments]
            if len(set(assigned)) != len(assigned):
                raise ValueError("assignments must reference distinct variables")

    # construction helpers -------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.names)

    @property
    def laurent(self) -> bool:
        return self.kind == "laurent"

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    @property
    def is_domain(self) -> bool:
        return self.kind in ("poly", "laurent", "affine")

    @property
    def has_division(self) -> bool:
        """Whether canonical remainders modulo a principal ideal are available."""
        return self.kind in ("poly", "affine")

    def __call__(self, value) -> MultiPoly:
        if isinstance(value, MultiPoly):
            if value.ring != self:
                raise RingMismatch(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, str):
            from .expr import parse_poly

            return parse_poly(value, self)
        c = self.field.coerce(value)
        return MultiPoly(self, {(0,) * self.arity: c} if c else {})

    def zero(self) -> MultiPoly:
        return MultiPoly(self, {})

    def one(self) -> MultiPoly:
        return self(1)

    def gen(self, name_or_index) -> MultiPoly:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.arity
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one()})

    def gens(self) -> tuple[MultiPoly, ...]:
        return tuple(self.gen(i) for i in range(self.arity))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in {self}") from None

    def monomial(self, exps: Sequence[int], coeff=1) -> MultiPoly:
        return MultiPoly(self, {tuple(exps): self.field.coerce(coeff)})

    def with_field(self, field: FieldSpec) -> CoeffRing:
        """Same ring shape over another field (coefficients are re-coerced)."""
        return CoeffRing(
            field,
            self.names,
            self.kind,
            tuple(field.coerce(_as_number(c)) for c in self.modulus),
            tuple((n, field.coerce(_as_number(c))) for n, c in self.assignments),
            self.parent,
        )

    def __str__(self) -> str:
        vs = ", ".join(self.names)
        if self.kind == "poly":
            return f"{self.field}[{vs}]"
        if self.kind == "laurent":
            return f"{self.field}[{', '.join(n + '^±1' for n in self.names)}]"
        if self.kind == "quot":
            m = MultiPoly(poly_ring(self.field, self.names), _dense_to_terms(self.modulus))
            return f"{self.field}[{vs}]/({m})"
        asg = ", ".join(f"{n}={c}" for n, c in self.assignments)
        return f"{self.field}[{', '.join(self.parent)}]/({asg})"


def _as_number(c: Scalar):
    return c.to_fraction() if c.field.kind != "Fp" else c.value


def poly_ring(field: FieldSpec, names) -> CoeffRing:
    return CoeffRing(field, _names(names), "poly")


def laurent_ring(field: FieldSpec, names) -> CoeffRing:
    return CoeffRing(field, _names(names), "laurent")


def _names(names) -> tuple[str, ...]:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return tuple(names)


def _dense_to_terms(coeffs) -> dict:
    return {(i,): c for i, c in enumerate(coeffs) if c}


class MultiPoly:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: CoeffRing, terms: Mapping[Exps, Scalar], _checked: bool = False):
        if not _checked:
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != ring.arity:
                    raise ValueError(f"monomial {e} has wrong arity for {ring}")
                if not ring.laurent and any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in non-Laurent ring {ring}")
                c = ring.field.coerce(c)
                if c:
                    clean[e] = c
            terms = clean
            if ring.kind == "quot":
                terms = _reduce_quot(terms, ring)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # basic queries ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            try:
                return self == self.ring(other)
            except (ZeroDivisionError, ValueError):
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ring, frozenset(self.terms.items()))))
        return self._hash

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.ring.arity}

    def constant_coeff(self) -> Scalar:
        return self.terms.get((0,) * self.ring.arity, self.ring.field.zero())

    def coeff(self, exps) -> Scalar:
        return self.terms.get(tuple(exps), self.ring.field.zero())

    def is_unit(self) -> bool:
        if self.ring.laurent:
            return len(self.terms) == 1
        if self.ring.kind == "quot":
            m = list(self.ring.modulus)
            return _upoly.deg(_upoly.gcd(self._dense(), m)) == 0 and bool(self)
        return self.is_constant() and bool(self)

    def unit_inverse(self) -> MultiPoly:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        if self.ring.kind == "quot":
            _, s, _ = _upoly.xgcd(self._dense(), list(self.ring.modulus))
            return MultiPoly(self.ring, _dense_to_terms(s))
        ((e, c),) = self.terms.items()
        return MultiPoly(self.ring, {tuple(-x for x in e): c.inverse()}, _checked=True)

    def sorted_terms(self):
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple[Exps, Scalar]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def _dense(self):
        if self.ring.arity != 1:
            raise ValueError("dense form needs a univariate ring")
        n = self.degree_in(0)
        out = [self.ring.field.zero()] * (n + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return _upoly.trim(out)

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> MultiPoly | None:
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(self.ring, terms, _checked=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()}, _checked=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.terms) == 1 and (0,) * self.ring.arity in o.terms:
            c = o.terms[(0,) * self.ring.arity]
            return MultiPoly(self.ring, {e: a * c for e, a in self.terms.items()}, _checked=True)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        terms = {e: c for e, c in terms.items() if c}
        if self.ring.kind == "quot":
            terms = _reduce_quot(terms, self.ring)
        return MultiPoly(self.ring, terms, _checked=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        """Division by a unit (nonzero scalar, Laurent monomial, or quotient unit)."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.unit_inverse()

    # evaluation and substitution ------------------------------------------

    def substitute(self, images: Sequence[MultiPoly]) -> MultiPoly:
        """Ring-homomorphic evaluation ``x_i -> images[i]``."""
        if len(images) != self.ring.arity:
            raise ValueError(f"need {self.ring.arity} images, got {len(images)}")
        if not images:
            raise ValueError("substitution needs a target ring; use map_coeffs for arity 0")
        target = images[0].ring
        for im in images:
            if im.ring != target:
                raise RingMismatch("images must share one ring")
        if target.field != self.ring.field:
            raise RingMismatch("substitution cannot change the base field")
        powers: list[dict[int, MultiPoly]] = [{} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if k < 0 and not images[i].is_unit():
                    raise PreconditionError(
                        f"negative power of non-unit image {images[i]} for {self.ring.names[i]}"
                    )
                cache[k] = images[i] ** k
            return cache[k]

        acc = {}
        one = target.one()
        for e, c in self.terms.items():
            term = one
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for e2, c2 in term.terms.items():
                s = acc.get(e2)
                acc[e2] = c * c2 if s is None else s + c * c2
        return MultiPoly(target, {e: c for e, c in acc.items() if c}, _checked=target.kind != "quot")

    def evaluate(self, point: Sequence) -> Scalar:
        f = self.ring.field
        pt = [f.coerce(a) for a in point]
        if len(pt) != self.ring.arity:
            raise ValueError("point has wrong dimension")
        total = f.zero()
        for e, c in self.terms.items():
            term = c
            for a, k in zip(pt, e):
                if k:
                    term = term * a**k
            total = total + term
        return total

    def map_coeffs(self, fn: Callable[[Scalar], Scalar], ring: CoeffRing) -> MultiPoly:
        return MultiPoly(ring, {e: fn(c) for e, c in self.terms.items()})

    def change_field(self, field: FieldSpec) -> MultiPoly:
        ring = self.ring.with_field(field)
        return self.map_coeffs(lambda c: field.coerce(_as_number(c)), ring)

    # division ------------------------------------------------------------------

    def divide_by_principal(self, rho: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
        return divide_by_principal(self, rho)

    def exact_div(self, a: MultiPoly) -> MultiPoly | None:
        return exact_div(self, a)

    # printing -------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            neg = False
            if c.is_rational() and c.to_fraction() < 0:
                neg, c = True, -c
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"MultiPoly({self.ring}, {self})"


def _reduce_quot(terms: dict, ring: CoeffRing) -> dict:
    m = list(ring.modulus)
    if not terms or max(e[0] for e in terms) < len(m) - 1:
        return terms
    n = max(e[0] for e in terms)
    dense = [ring.field.zero()] * (n + 1)
    for (k,), c in terms.items():
        dense[k] = c
    rem = _upoly.divmod_(dense, m)[1]
    return _dense_to_terms(rem)


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divide_by_principal(f: MultiPoly, rho: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Graded-lex multivariate division of ``f`` by the single polynomial ``rho``.

    Returns ``(q, r)`` with ``f = q*rho + r`` and no monomial of ``r``
    divisible by the leading monomial of ``rho``.  Since ``{rho}`` is a
    Groebner basis of ``rho*R``, ``r`` is the canonical coset representative.
    """
    if f.ring != rho.ring:
        raise RingMismatch(f"{f.ring} vs {rho.ring}")
    if not f.ring.has_division:
        raise PreconditionError(f"division by a principal ideal needs a polynomial ring, not {f.ring}")
    if not rho:
        raise ZeroDivisionError("division by the zero polynomial")
    lm, lc = rho.leading()
    lc_inv = lc.inverse()
    ring = f.ring
    p = dict(f.terms)
    q: dict = {}
    r: dict = {}
    while p:
        e = max(p, key=grlex_key)
        c = p[e]
        if _divides(lm, e):
            shift = tuple(a - b for a, b in zip(e, lm))
            k = c * lc_inv
            q[shift] = k
            for e2, c2 in rho.terms.items():
                t = tuple(a + b for a, b in zip(e2, shift))
                v = p.get(t, None)
                v = -k * c2 if v is None else v - k * c2
                if v:
                    p[t] = v
                else:
                    p.pop(t, None)
        else:
            r[e] = c
            del p[e]
    return MultiPoly(ring, q, _checked=True), MultiPoly(ring, r, _checked=True)


def exact_div(f: MultiPoly, a: MultiPoly) -> MultiPoly | None:
    """``f / a`` if ``a`` divides ``f`` in the ring, else ``None``.

    Laurent rings are handled by clearing monomial factors: after removing
    the largest monomial dividing ``a``, what remains is coprime to every
    variable, so divisibility can be decided in the polynomial ring.
    """
    if f.ring != a.ring:
        raise RingMismatch(f"{f.ring} vs {a.ring}")
    if not a:
        raise ZeroDivisionError("division by zero")
    if not f:
        return f
    ring = f.ring
    if ring.kind == "quot":
        if a.is_unit():
            return f * a.unit_inverse()
        raise PreconditionError("exact division by a non-unit in a quotient ring")
    if ring.laurent:
        amin = tuple(min(e[i] for e in a.terms) for i in range(ring.arity))
        fmin = tuple(min(e[i] for e in f.terms) for i in range(ring.arity))
        pr = poly_ring(ring.field, ring.names)
        a0 = MultiPoly(pr, {tuple(x - y for x, y in zip(e, amin)): c for e, c in a.terms.items()})
        f0 = MultiPoly(pr, {tuple(x - y for x, y in zip(e, fmin)): c for e, c in f.terms.items()})
        q0, r0 = divide_by_principal(f0, a0)
        if r0:
            return None
        shift = tuple(x - y for x, y in zip(fmin, amin))
        return MultiPoly(ring, {tuple(x + y for x, y in zip(e, shift)): c for e, c in q0.terms.items()})
    q, r = divide_by_principal(f, a)
    return None if r else q


# ideals -------------------------------------------------------------------------


class Ideal:
    """Finitely generated ideal in one of the supported shapes.

    Membership is decided for principal ideals (canonical remainder),
    ideals of univariate rings (reduced to their gcd), monomial ideals and
    coordinate-affine ideals ``(x_j - c_j)``.  Anything else raises
    :class:`UnsupportedIdeal`.
    """

    def __init__(self, ring: CoeffRing, generators: Iterable[MultiPoly]):
        self.ring = ring
        gens = [ring(g) for g in generators]
        self.generators = tuple(g for g in gens if g)
        self._shape = self._detect()

    @classmethod
    def principal(cls, g: MultiPoly) -> Ideal:
        return cls(g.ring, [g])

    @classmethod
    def coordinate(cls, ring: CoeffRing, assignments: Mapping[str, object]) -> Ideal:
        gens = [ring.gen(n) - ring.field.coerce(c) for n, c in assignments.items()]
        ideal = cls(ring, gens)
        ideal.assignments = {n: ring.field.coerce(c) for n, c in assignments.items()}
        return ideal

    def _detect(self):
        gens = self.generators
        if not gens:
            return "zero"
        if self.ring.arity == 1 and self.ring.kind in ("poly", "affine"):
            g = gens[0]
            for h in gens[1:]:
                g = MultiPoly(self.ring, _dense_to_terms(_upoly.gcd(g._dense(), h._dense())))
            self.generators = (_monic(g),)
            return "principal"
        if len(gens) == 1:
            return "principal"
        if all(len(g) == 1 for g in gens):
            return "monomial"
        assignments = {}
        for g in gens:
            lin = [e for e in g.terms if sum(e) == 1]
            if (
                len(lin) == 1
                and g.terms[lin[0]] == 1
                and set(g.terms) <= {lin[0], (0,) * self.ring.arity}
            ):
                name = self.ring.names[lin[0].index(1)]
                if name in assignments:
                    raise UnsupportedIdeal("repeated coordinate in an affine ideal")
                assignments[name] = -g.constant_coeff()
            else:
                raise UnsupportedIdeal(
                    f"ideal {self} is neither principal, monomial nor coordinate-affine"
                )
        self.assignments = assignments
        return "coordinate"

    @property
    def shape(self) -> str:
        return self._shape

    def is_unit_ideal(self) -> bool:
        return 1 in self

    def reduce(self, f: MultiPoly) -> MultiPoly:
        """Canonical representative of ``f`` modulo the ideal."""
        f = self.ring(f)
        if self._shape == "zero":
            return f
        if self._shape == "principal":
            return divide_by_principal(f, self.generators[0])[1]
        if self._shape == "monomial":
            mons = [next(iter(g.terms)) for g in self.generators]
            return MultiPoly(
                f.ring,
                {e: c for e, c in f.terms.items() if not any(_divides(m, e) for m in mons)},
                _checked=True,
            )
        images = []
        for i, n in enumerate(self.ring.names):
            if n in self.assignments:
                images.append(self.ring(self.assignments[n]))
            else:
                images.append(self.ring.gen(i))
        return f.substitute(images)

    def __contains__(self, f) -> bool:
        return not self.reduce(self.ring(f))

    def contains_ideal(self, other: Ideal) -> bool:
        return all(g in self for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.contains_ideal(other) and other.contains_ideal(self)

    def __hash__(self):
        return hash((self.ring, len(self.generators)))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Ideal{self}"


def _monic(g: MultiPoly) -> MultiPoly:
    if not g:
        return g
    return g * g.leading()[1].inverse()


@dataclass(frozen=True)
class QuotientRing:
    """A quotient descriptor together with its reduction homomorphism."""

    base: CoeffRing
    ring: CoeffRing
    ideal: Ideal

    def reduce(self, f: MultiPoly) -> MultiPoly:
        f = self.base(f)
        if self.ring.kind == "quot":
            return MultiPoly(self.ring, f.terms)
        images = []
        for i, n in enumerate(self.base.names):
            if n in self.ideal.assignments:
                images.append(self.ring(self.ideal.assignments[n]))
            else:
                images.append(self.ring.gen(n))
        if not images:
            return self.ring(f.constant_coeff())
        return f.substitute(images)

    __call__ = reduce


def quotient_ring(base: CoeffRing, ideal) -> QuotientRing:
    """Pass from ``base`` to ``base/ideal`` for a univariate modulus or a
    coordinate-affine assignment set.

    ``ideal`` may be an :class:`Ideal`, a single polynomial (univariate
    modulus) or a mapping ``{name: constant}``.
    """
    if isinstance(ideal, MultiPoly):
        ideal = Ideal.principal(ideal)
    elif isinstance(ideal, Mapping):
        ideal = Ideal.coordinate(base, ideal)
    if base.kind != "poly":
        raise UnsupportedIdeal(f"quotients are taken of polynomial rings, not {base}")
    if ideal.shape == "principal" and base.arity == 1:
        m = _monic(ideal.generators[0])
        if m.total_degree() < 1:
            raise UnsupportedIdeal("modulus must have degree >= 1")
        ring = CoeffRing(base.field, base.names, "quot", tuple(m._dense()))
        return QuotientRing(base, ring, ideal)
    if ideal.shape == "coordinate" or (ideal.shape == "principal" and _is_coordinate(ideal)):
        if not hasattr(ideal, "assignments"):
            ideal = Ideal.coordinate(base, _coordinate_of(ideal.generators[0]))
        rest = tuple(n for n in base.names if n not in ideal.assignments)
        ring = CoeffRing(
            base.field,
            rest,
            "affine",
            assignments=tuple(sorted(ideal.assignments.items(), key=lambda kv: base.index(kv[0]))),
            parent=base.names,
        )
        return QuotientRing(base, ring, ideal)
    raise UnsupportedIdeal(f"unsupported ideal shape for a quotient: {ideal}")


def _is_coordinate(ideal: Ideal) -> bool:
    try:
        _coordinate_of(ideal.generators[0])
        return True
    except UnsupportedIdeal:
        return False


def _coordinate_of(g: MultiPoly) -> dict:
    lin = [e for e in g.terms if sum(e) == 1]
    zero = (0,) * g.ring.arity
    if len(lin) != 1 or not set(g.terms) <= {lin[0], zero}:
        raise UnsupportedIdeal(f"{g} is not of the form x - c")
    c = g.terms[lin[0]]
    return {g.ring.names[lin[0].index(1)]: -g.constant_coeff() / c}
