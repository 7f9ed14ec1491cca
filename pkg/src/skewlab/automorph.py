"""Algebra automorphisms of coefficient rings given by generator images.

An :class:`AlgebraMap` records one image per generator, a class tag
(detected from the images unless supplied), and an inverse when one is
known or derivable for the tagged class.  The order engine certifies
finite or infinite order for the structured classes and falls back to
bounded iteration otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import _linalg, _upoly
from .errors import (
    InvariantViolation,
    NotInvertible,
    PreconditionError,
    RingMismatch,
    UnsupportedClass,
)
from .polyring import CoeffRing, MultiPoly, poly_ring
from .scalars import FieldSpec, Scalar, cyclotomic_poly, euler_phi, root_of_unity_order

# term-count guard for bounded iteration of non-structured maps
MAX_ITERATION_TERMS = 2_000


@dataclass(frozen=True)
class ClassTag:
    """Family an automorphism belongs to, with its defining parameters.

    kinds: ``linear``, ``univariate_affine``, ``triangular_i``,
    ``triangular_ii``, ``triangular_iii``, ``henon``, ``monomial``,
    ``composition``, ``unclassified``.
    """

    kind: str
    params: dict = field(default_factory=dict, compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __str__(self):
        if not self.params:
            return self.kind
        inner = ", ".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        return f"{self.kind}({inner})"


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


@dataclass(frozen=True)
class OrderVerdict:
    """``kind`` is ``finite`` (with ``n``), ``infinite`` (with a proof tag in
    ``reason``) or ``unknown`` (iteration exhausted ``bound``)."""

    kind: str
    n: int | None = None
    reason: str = ""
    bound: int | None = None

    @classmethod
    def finite(cls, n: int, reason: str = "") -> OrderVerdict:
        return cls("finite", n=n, reason=reason)

    @classmethod
    def infinite(cls, reason: str) -> OrderVerdict:
        return cls("infinite", reason=reason)

    @classmethod
    def unknown(cls, bound: int, reason: str = "") -> OrderVerdict:
        return cls("unknown", bound=bound, reason=reason)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    def __str__(self):
        if self.kind == "finite":
            return f"Finite({self.n})"
        if self.kind == "infinite":
            return f"InfiniteCertified({self.reason})"
        return f"UnknownBeyondBound({self.bound})"


class AlgebraMap:
    """Substitution endomorphism ``x_i -> images[i]`` of a coefficient ring."""

    def __init__(
        self,
        ring: CoeffRing,
        images: Sequence,
        tag: ClassTag | None = None,
        inverse_images: Sequence | None = None,
        factors: Sequence[AlgebraMap] = (),
    ):
        if len(images) != ring.arity:
            raise ValueError(f"{ring} needs {ring.arity} generator images, got {len(images)}")
        self.ring = ring
        self.images = tuple(ring(im) for im in images)
        self.factors = tuple(factors)
        if ring.kind == "quot":
            self._check_quotient_compatible()
        if ring.laurent:
            for name, im in zip(ring.names, self.images):
                if not im.is_unit():
                    raise PreconditionError(f"image of Laurent variable {name} must be a unit, got {im}")
        self.tag = tag if tag is not None else detect_class(self)
        self._power_images: dict[int, tuple[MultiPoly, ...]] = {1: self.images}
        self._inverse: AlgebraMap | None = None
        if inverse_images is not None:
            self._set_inverse(AlgebraMap(ring, inverse_images, tag=ClassTag("unclassified")))

    # constructors ----------------------------------------------------------------

    @classmethod
    def identity(cls, ring: CoeffRing) -> AlgebraMap:
        return cls(ring, ring.gens())

    @classmethod
    def from_strings(cls, ring: CoeffRing, images: Sequence[str], **kw) -> AlgebraMap:
        return cls(ring, [ring(s) for s in images], **kw)

    @classmethod
    def linear(cls, ring: CoeffRing, matrix) -> AlgebraMap:
        """``x_i -> sum_j matrix[i][j] x_j``."""
        if ring.kind != "poly":
            raise PreconditionError("linear maps act on polynomial rings")
        A = _coerce_matrix(matrix, ring.field)
        if len(A) != ring.arity or any(len(r) != ring.arity for r in A):
            raise ValueError("matrix size must match ring arity")
        gens = ring.gens()
        images = [sum((c * g for c, g in zip(row, gens)), ring.zero()) for row in A]
        return cls(ring, images)

    @classmethod
    def monomial(cls, ring: CoeffRing, matrix) -> AlgebraMap:
        """``X^n -> X^(M n)`` on a Laurent ring; column j is the exponent of ``x_j``'s image."""
        if not ring.laurent:
            raise PreconditionError("monomial maps act on Laurent rings")
        M = [[int(v) for v in row] for row in matrix]
        t = ring.arity
        if len(M) != t or any(len(r) != t for r in M):
            raise ValueError("matrix size must match ring arity")
        d = _linalg.det([[Fraction(v) for v in row] for row in M])
        if d not in (1, -1):
            raise NotInvertible(f"monomial matrix must lie in GL_t(Z); det = {d}")
        images = [ring.monomial([M[i][j] for i in range(t)]) for j in range(t)]
        return cls(ring, images)

    @classmethod
    def henon(cls, ring: CoeffRing, lam, beta: MultiPoly | str) -> AlgebraMap:
        """Generalized Henon map ``x -> y, y -> lam*x + beta(y)``."""
        if ring.kind != "poly" or ring.arity != 2:
            raise PreconditionError("Henon maps act on k[x, y]")
        x, y = ring.gens()
        beta = ring(beta)
        return cls(ring, [y, ring.field.coerce(lam) * x + beta])

    @classmethod
    def compose_list(cls, maps: Sequence[AlgebraMap]) -> AlgebraMap:
        """``maps[0] o maps[1] o ... o maps[-1]`` tagged as a composition list."""
        if not maps:
            raise ValueError("empty composition")
        total = maps[0]
        for m in maps[1:]:
            total = total.compose(m)
        flat = []
        for m in maps:
            flat.extend(m.factors or (m,))
        tag = ClassTag("composition", {"factors": [str(f.tag) for f in flat]})
        out = cls(total.ring, total.images, tag=tag, factors=flat)
        out.tag = classify_composition(out)
        try:
            inv = flat[-1].inverse()
            for m in reversed(flat[:-1]):
                inv = inv.compose(m.inverse())
            out._set_inverse(inv)
        except NotInvertible:
            pass
        return out

    # action -----------------------------------------------------------------------

    def apply(self, f) -> MultiPoly:
        f = self.ring(f) if not isinstance(f, MultiPoly) else f
        if f.ring != self.ring:
            raise RingMismatch(f"map on {self.ring} applied to element of {f.ring}")
        if self.ring.arity == 0:
            return f
        return f.substitute(self.images)

    __call__ = apply

    def power_images(self, k: int) -> tuple[MultiPoly, ...]:
        """Generator images of ``alpha^k`` for any integer ``k``."""
        if k == 0:
            return self.ring.gens()
        if k < 0:
            return self.inverse().power_images(-k)
        cache = self._power_images
        if k not in cache:
            j = max(i for i in cache if i < k)
            imgs = cache[j]
            while j < k:
                imgs = tuple(self.apply(im) for im in imgs)
                j += 1
                cache[j] = imgs
        return cache[k]

    def twist(self, f, k: int):
        """``alpha^k(f)``."""
        if k == 0 or self.ring.arity == 0:
            return f
        if not f:
            return f
        return f.substitute(self.power_images(k))

    def power(self, k: int) -> AlgebraMap:
        if k >= 0:
            out = AlgebraMap(self.ring, self.power_images(k))
            if self._inverse is not None:
                out._set_inverse(AlgebraMap(self.ring, self.power_images(-k)), check=False)
            return out
        return self.inverse().power(-k)

    def compose(self, other: AlgebraMap) -> AlgebraMap:
        """``self o other``: first ``other``, then ``self``."""
        if other.ring != self.ring:
            raise RingMismatch("maps act on different rings")
        images = [self.apply(im) for im in other.images]
        out = AlgebraMap(self.ring, images)
        if self._inverse is not None and other._inverse is not None:
            inv_images = [other._inverse.apply(im) for im in self._inverse.images]
            out._set_inverse(AlgebraMap(self.ring, inv_images), check=False)
        return out

    def is_identity(self) -> bool:
        return self.images == self.ring.gens()

    def inverse(self) -> AlgebraMap:
        if self._inverse is None:
            self._set_inverse(_derive_inverse(self))
        return self._inverse

    def has_inverse(self) -> bool:
        try:
            self.inverse()
            return True
        except NotInvertible:
            return False

    def _set_inverse(self, inv: AlgebraMap, check: bool = True):
        if check:
            if not self.compose(inv).is_identity() or not inv.compose(self).is_identity():
                raise InvariantViolation(f"supplied inverse does not invert {self}")
        self._inverse = inv
        inv._inverse = self

    def _check_quotient_compatible(self):
        m = MultiPoly(poly_ring(self.ring.field, self.ring.names), {(i,): c for i, c in enumerate(self.ring.modulus) if c})
        if m.substitute(list(self.images)):
            raise PreconditionError(f"substitution does not preserve the modulus of {self.ring}")

    # analysis ---------------------------------------------------------------------

    def linear_matrix(self):
        """Matrix ``A`` with ``x_i -> sum_j A[i][j] x_j`` if the map is linear, else ``None``."""
        return _linear_matrix(self.ring, self.images)

    def monomial_matrix(self):
        return _monomial_matrix(self.ring, self.images)

    def order(self, bound: int = 64) -> OrderVerdict:
        return order(self, bound)

    def change_field(self, field: FieldSpec) -> AlgebraMap:
        """Reinterpret the map over another field (e.g. reduce a map over Q modulo p)."""
        ring = self.ring.with_field(field)
        images = [im.change_field(field) for im in self.images]
        factors = [f.change_field(field) for f in self.factors]
        if factors:
            return AlgebraMap.compose_list(factors)
        return AlgebraMap(ring, images)

    def __eq__(self, other):
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash((self.ring, self.images))

    def __str__(self):
        if self.ring.arity == 0:
            return "id"
        return ", ".join(f"{n} -> {im}" for n, im in zip(self.ring.names, self.images))

    def __repr__(self):
        return f"AlgebraMap({self.ring}: {self}; {self.tag})"


def _coerce_matrix(matrix, field: FieldSpec):
    return [[field.coerce(v) for v in row] for row in matrix]


# class detection -------------------------------------------------------------------


def _linear_matrix(ring: CoeffRing, images):
    if ring.kind not in ("poly", "affine") or ring.arity == 0:
        return None
    t = ring.arity
    A = []
    for im in images:
        if any(sum(e) != 1 for e in im.terms):
            return None
        row = [ring.field.zero()] * t
        for e, c in im.terms.items():
            row[e.index(1)] = c
        A.append(row)
    return A


def _monomial_matrix(ring: CoeffRing, images):
    if not ring.laurent:
        return None
    t = ring.arity
    cols = []
    for im in images:
        if len(im.terms) != 1:
            return None
        ((e, c),) = im.terms.items()
        if c != 1:
            return None
        cols.append(e)
    return [[cols[j][i] for j in range(t)] for i in range(t)]


def detect_class(alpha: AlgebraMap) -> ClassTag:
    ring, images = alpha.ring, alpha.images
    if ring.laurent:
        M = _monomial_matrix(ring, images)
        if M is not None:
            return ClassTag("monomial", {"M": M})
        return ClassTag("unclassified")
    if ring.kind not in ("poly", "affine") or ring.arity == 0:
        return ClassTag("unclassified")
    if ring.arity == 1:
        im = images[0]
        if im.total_degree() == 1:
            beta = im.coeff((1,))
            gamma = im.coeff((0,))
            return ClassTag("univariate_affine", {"beta": beta, "gamma": gamma})
        return ClassTag("unclassified")
    if ring.arity == 2:
        tag = _plane_normal_form(ring, images)
        if tag.kind != "unclassified":
            return tag
    A = _linear_matrix(ring, images)
    if A is not None and _linalg.det(A) != 0:
        return ClassTag("linear", {"matrix": A})
    return ClassTag("unclassified")


def _single(im: MultiPoly):
    return next(iter(im.terms.items())) if len(im.terms) == 1 else (None, None)


def _plane_normal_form(ring: CoeffRing, images) -> ClassTag:
    X, Y = images
    ex, cx = _single(X)
    ey, cy = _single(Y)
    if ex == (1, 0) and ey == (0, 1):
        return ClassTag("triangular_i", {"lambda": cx, "mu": cy})
    if ex == (1, 0) and set(Y.terms) == {(0, 1), (0, 0)} and Y.coeff((0, 1)) == 1:
        return ClassTag("triangular_ii", {"lambda": cx, "c": Y.coeff((0, 0))})
    if ey == (0, 1) and (1, 0) in X.terms and all(e == (1, 0) or e[0] == 0 for e in X.terms):
        lam, mu = X.coeff((1, 0)), cy
        etas = {e[1]: c for e, c in X.terms.items() if e[0] == 0}
        bad = [i for i in sorted(etas) if lam != mu**i]
        if bad:
            return ClassTag(
                "unclassified",
                notes=(f"triangular shape but lambda != mu^i for i in {bad}",),
            )
        return ClassTag("triangular_iii", {"lambda": lam, "mu": mu, "eta": dict(sorted(etas.items()))})
    if X == ring.gen(1) and all(e == (1, 0) or e[0] == 0 for e in Y.terms) and (1, 0) in Y.terms:
        lam = Y.coeff((1, 0))
        beta = Y - lam * ring.gen(0)
        if beta.total_degree() >= 2:
            return ClassTag("henon", {"lambda": lam, "beta": beta})
        return ClassTag("unclassified", notes=("Henon shape with deg beta < 2 is affine",))
    return ClassTag("unclassified")


def classify_composition(alpha: AlgebraMap) -> ClassTag:
    kinds = [f.tag.kind for f in alpha.factors]
    notes = []
    if all(k == "henon" for k in kinds):
        square = True
    else:
        square = False
        if all(k in ("linear", "triangular_i", "univariate_affine") or _is_affine(f) for k, f in zip(kinds, alpha.factors)):
            notes.append("composition of affine maps only; not square")
        else:
            notes.append("composition contains non-Henon factors; square/triangular undecided")
    return ClassTag(
        "composition",
        {"factors": [str(f.tag) for f in alpha.factors], "square": square},
        tuple(notes),
    )


def _is_affine(alpha: AlgebraMap) -> bool:
    return all(im.total_degree() <= 1 for im in alpha.images)


@dataclass(frozen=True)
class PlaneClassification:
    kind: str
    params: dict
    square: bool | None
    notes: tuple[str, ...] = ()

    def __str__(self):
        return str(ClassTag(self.kind, self.params))


def classify_plane(alpha: AlgebraMap) -> PlaneClassification:
    """Match a plane automorphism against the triangular normal forms, the
    generalized Henon form, or a tagged composition of Henon maps."""
    ring = alpha.ring
    if ring.kind != "poly" or ring.arity != 2:
        raise UnsupportedClass(f"plane classification needs k[x, y], got {ring}")
    tag = alpha.tag
    if tag.kind == "composition":
        square = True if tag.params.get("square") else (False if _is_affine(alpha) else None)
        return PlaneClassification("composition", tag.params, square, tag.notes)
    if tag.kind not in ("triangular_i", "triangular_ii", "triangular_iii", "henon"):
        tag = _plane_normal_form(ring, alpha.images)
    square = {"henon": True, "unclassified": None}.get(tag.kind, False)
    if tag.kind == "unclassified" and alpha.linear_matrix() is not None:
        return PlaneClassification("linear", {"matrix": alpha.linear_matrix()}, None,
                                   tag.notes + ("linear map not in a listed normal form",))
    return PlaneClassification(tag.kind, tag.params, square, tag.notes)


# inverses --------------------------------------------------------------------------


def _derive_inverse(alpha: AlgebraMap) -> AlgebraMap:
    ring, tag, p = alpha.ring, alpha.tag, alpha.tag.params
    gens = ring.gens()
    kind = tag.kind
    if ring.arity == 0:
        return alpha
    if kind == "linear" or (kind == "triangular_i"):
        A = alpha.linear_matrix()
        try:
            Ainv = _linalg.inverse(A, ring.field.one(), ring.field.zero())
        except ZeroDivisionError:
            raise NotInvertible("singular linear map") from None
        return AlgebraMap.linear(ring, Ainv)
    if kind == "univariate_affine":
        beta, gamma = p["beta"], p["gamma"]
        if not beta:
            raise NotInvertible("x -> gamma is not invertible")
        (x,) = gens
        return AlgebraMap(ring, [(x - gamma) * beta.inverse()])
    if kind == "triangular_ii":
        x, y = gens
        return AlgebraMap(ring, [x * p["lambda"].inverse(), y - p["c"]])
    if kind == "triangular_iii":
        x, y = gens
        lam, mu = p["lambda"], p["mu"]
        yinv = y * mu.inverse()
        shift = sum((c * yinv**i for i, c in p["eta"].items()), ring.zero())
        return AlgebraMap(ring, [(x - shift) * lam.inverse(), yinv])
    if kind == "henon":
        x, y = gens
        lam, beta = p["lambda"], p["beta"]
        beta_x = beta.substitute([x, x])
        return AlgebraMap(ring, [(y - beta_x) * lam.inverse(), x])
    if kind == "monomial":
        M = p["M"]
        t = ring.arity
        Minv = _linalg.inverse([[Fraction(v) for v in row] for row in M], Fraction(1), Fraction(0))
        if any(v.denominator != 1 for row in Minv for v in row):
            raise NotInvertible("monomial matrix not invertible over Z")
        return AlgebraMap.monomial(ring, [[int(v) for v in row] for row in Minv])
    if kind == "composition" and alpha.factors:
        inv = alpha.factors[-1].inverse()
        for m in reversed(alpha.factors[:-1]):
            inv = inv.compose(m.inverse())
        return inv
    if ring.laurent and all(len(im) == 1 for im in alpha.images):
        # x_j -> c_j X^(M e_j); inverse x_j -> c^(-W e_j) X^(W e_j) with W = M^-1
        t = ring.arity
        cols = [next(iter(im.terms.items())) for im in alpha.images]
        M = [[Fraction(cols[j][0][i]) for j in range(t)] for i in range(t)]
        try:
            W = _linalg.inverse(M, Fraction(1), Fraction(0))
        except ZeroDivisionError:
            raise NotInvertible("singular exponent matrix") from None
        if any(v.denominator != 1 for row in W for v in row):
            raise NotInvertible("exponent matrix not invertible over Z")
        images = []
        for j in range(t):
            w = [int(W[i][j]) for i in range(t)]
            d = ring.field.one()
            for i in range(t):
                d = d * cols[i][1] ** (-w[i])
            images.append(ring.monomial(w, d))
        return AlgebraMap(ring, images)
    if ring.kind == "quot" and ring.arity == 1 and alpha.images[0].total_degree() <= 1:
        (x,) = gens
        im = alpha.images[0]
        beta, gamma = im.coeff((1,)), im.coeff((0,))
        if beta:
            return AlgebraMap(ring, [(x - gamma) * beta.inverse()])
    raise NotInvertible(f"no inverse known for {tag.kind} map {alpha}")


# order ---------------------------------------------------------------------------------


def minimal_polynomial(A, field: FieldSpec):
    """Minimal polynomial (monic, lowest degree first) via the first linear
    dependency among ``I, A, A^2, ...``."""
    n = len(A)
    one, zero = field.one(), field.zero()
    powers = [_linalg.identity(n, one, zero)]
    for k in range(1, n + 1):
        powers.append(_linalg.matmul(powers[-1], A))
        cols = [[P[i][j] for i in range(n) for j in range(n)] for P in powers]
        mat = [[cols[c][r] for c in range(k + 1)] for r in range(n * n)]
        kernel = _linalg.nullspace(mat, k + 1, zero, one)
        if kernel:
            v = kernel[0]
            lead = v[-1]
            return [c / lead for c in v]
    raise InvariantViolation("Cayley-Hamilton violated")


def cyclotomic_candidates(t: int, field: FieldSpec) -> list[int]:
    """All ``d`` with ``phi(d) <= t*[K:Q]``; scanning ``d <= 2B^2 + 2`` is safe
    because ``phi(d) >= sqrt(d/2)``."""
    B = t * field.degree
    return [d for d in range(1, 2 * B * B + 3) if euler_phi(d) <= B]


def _gl_order(p: int, t: int) -> int:
    out = 1
    for i in range(t):
        out *= p**t - p**i
    return out


def linear_finite_order_test(matrix, field: FieldSpec | None = None) -> OrderVerdict:
    """Decide whether an invertible matrix has finite multiplicative order."""
    if field is None:
        first = matrix[0][0]
        field = first.field if isinstance(first, Scalar) else FieldSpec.rationals()
    A = _coerce_matrix(matrix, field)
    t = len(A)
    if _linalg.det(A) == 0:
        raise PreconditionError("singular matrix has no multiplicative order")
    one, zero = field.one(), field.zero()
    I = _linalg.identity(t, one, zero)
    if field.characteristic:
        P = A
        for n in range(1, _gl_order(field.n, t) + 1):
            if P == I:
                return OrderVerdict.finite(n, "power iteration")
            P = _linalg.matmul(P, A)
        raise InvariantViolation("order exceeded |GL_t(F_p)|")
    m = minimal_polynomial(A, field)
    if not _upoly.is_squarefree(m):
        return OrderVerdict.infinite("minimal polynomial not squarefree (non-diagonalizable)")
    rest = m
    occurring = []
    for d in cyclotomic_candidates(t, field):
        phi_d = [field.coerce(c) for c in cyclotomic_poly(d)]
        g = _upoly.gcd(rest, phi_d)
        if _upoly.deg(g) > 0:
            occurring.append(d)
            rest = _upoly.divmod_(rest, g)[0]
        if _upoly.deg(rest) == 0:
            break
    if _upoly.deg(rest) > 0:
        return OrderVerdict.infinite("eigenvalue not a root of unity")
    return OrderVerdict.finite(lcm(*occurring), f"eigenvalue orders {occurring}")


def order(alpha: AlgebraMap, bound: int = 64) -> OrderVerdict:
    """Order of ``alpha``: certified for structured classes, else bounded iteration."""
    tag, p = alpha.tag, alpha.tag.params
    field = alpha.ring.field
    char = field.characteristic
    if alpha.ring.arity == 0 or alpha.is_identity():
        return OrderVerdict.finite(1, "identity")
    A = alpha.linear_matrix()
    if A is not None and tag.kind in ("linear", "triangular_i", "univariate_affine") and alpha.ring.kind in ("poly", "affine"):
        return linear_finite_order_test(A, field)
    if tag.kind == "univariate_affine":
        return _affine_order(p["beta"], p["gamma"], char)
    if tag.kind == "triangular_ii":
        m = root_of_unity_order(p["lambda"])
        if m is None:
            return OrderVerdict.infinite("lambda not a root of unity")
        if char == 0:
            return OrderVerdict.infinite("translation y -> y + c with c != 0 in characteristic 0")
        return OrderVerdict.finite(lcm(m, char), "translation has order p")
    if tag.kind == "triangular_iii":
        ml, mm = root_of_unity_order(p["lambda"]), root_of_unity_order(p["mu"])
        if ml is None or mm is None:
            return OrderVerdict.infinite("lambda or mu not a root of unity")
        L = lcm(ml, mm)
        if not any(p["eta"].values()):
            return OrderVerdict.finite(L)
        # alpha^L is x -> x + L*lambda^(L-1)*eta(y), y -> y
        if char == 0:
            return OrderVerdict.infinite("unipotent part x -> x + c*g(y) after L steps in characteristic 0")
        if L % char == 0:
            return OrderVerdict.finite(L, "unipotent part vanishes since p | L")
        return OrderVerdict.finite(L * char, "unipotent part has order p")
    if tag.kind == "henon":
        return OrderVerdict.infinite(f"degree of alpha^n(y) is {p['beta'].total_degree()}^n")
    if tag.kind == "composition" and tag.params.get("square"):
        return OrderVerdict.infinite("degree of a composition of Henon maps grows multiplicatively")
    if tag.kind == "monomial":
        M = p["M"]
        return linear_finite_order_test(M, FieldSpec.rationals())
    if alpha.ring.kind == "poly":
        J = jacobian_det(alpha)
        if not J or not J.is_constant():
            raise NotInvertible(f"Jacobian determinant {J} is not a nonzero constant; not an automorphism")
    return _iterate_order(alpha, bound)


def _partial(f: MultiPoly, i: int) -> MultiPoly:
    terms = {}
    for e, c in f.terms.items():
        if e[i]:
            d = list(e)
            d[i] -= 1
            terms[tuple(d)] = c * e[i]
    return MultiPoly(f.ring, terms)


def _poly_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    out = None
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = _poly_det([r[:j] + r[j + 1:] for r in rows[1:]])
        term = a * minor if j % 2 == 0 else -(a * minor)
        out = term if out is None else out + term
    return out if out is not None else rows[0][0] * 0


def jacobian_det(alpha: AlgebraMap) -> MultiPoly:
    """Determinant of the Jacobian matrix of the generator images."""
    n = alpha.ring.arity
    return _poly_det([[_partial(im, j) for j in range(n)] for im in alpha.images])


def _affine_order(beta: Scalar, gamma: Scalar, char: int) -> OrderVerdict:
    m = root_of_unity_order(beta)
    if m is None:
        return OrderVerdict.infinite("beta not a root of unity")
    if beta == 1:
        if not gamma:
            return OrderVerdict.finite(1, "identity")
        if char == 0:
            return OrderVerdict.infinite("x -> x + gamma with gamma != 0 in characteristic 0")
        return OrderVerdict.finite(char, "translation in characteristic p")
    # beta != 1: conjugate to x -> beta*x via the fixed point gamma/(1 - beta)
    return OrderVerdict.finite(m, "conjugate to x -> beta*x")


def _iterate_order(alpha: AlgebraMap, bound: int) -> OrderVerdict:
    gens = alpha.ring.gens()
    imgs = alpha.images
    for n in range(1, bound + 1):
        if imgs == gens:
            return OrderVerdict.finite(n, "bounded iteration")
        if sum(len(im) for im in imgs) > MAX_ITERATION_TERMS:
            return OrderVerdict.unknown(n, "iterates too large")
        imgs = tuple(alpha.apply(im) for im in imgs)
    return OrderVerdict.unknown(bound)
