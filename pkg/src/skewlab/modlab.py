"""Finite witnesses for module-theoretic statements over skew polynomial rings.

* cyclic modules ``S / rho(1 - theta)S`` in the normal form
  ``sum r_i theta^i + rho*b`` with ``r_i`` canonical remainders mod ``rho``;
* the contraction ``J -> J cap R`` of right ideals containing ``u - theta``;
* strict descending chains ``theta^m S + rho S``;
* matrix-unit identities in ``k^n[theta^{+-1}; shift]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import BoundExceeded, InvariantViolation, NotStable, PreconditionError, RingMismatch
from .polyring import Ideal, MultiPoly, divide_by_principal
from .scalars import FieldSpec
from .skewpoly import SkewLaurentPoly, SkewPoly, left_divide, skew_mul


# cyclic module S / rho(1 - theta)S ---------------------------------------------------


def _check_rho(rho: MultiPoly):
    if not rho:
        raise PreconditionError("rho must be nonzero")
    if rho.is_constant():
        raise PreconditionError(f"rho = {rho} is a unit")


class CyclicModuleElem:
    """Element of ``S / rho(1 - theta)S`` in its unique normal form."""

    __slots__ = ("alpha", "rho", "support", "tail")

    def __init__(self, alpha, rho: MultiPoly, support: dict, tail: MultiPoly):
        self.alpha = alpha
        self.rho = rho
        self.support = dict(sorted(support.items()))
        self.tail = tail

    @property
    def ring(self):
        return self.alpha.ring

    def lift(self) -> SkewPoly:
        """The representative ``sum r_i theta^i + rho*b`` in ``S``."""
        coeffs = dict(self.support)
        if self.tail:
            coeffs[0] = coeffs.get(0, self.ring.zero()) + self.rho * self.tail
        return SkewPoly(self.alpha, coeffs)

    def length(self) -> int:
        return len(self.support)

    def in_V(self) -> bool:
        """Whether the element lies in ``rho S / rho(1 - theta)S``."""
        return not self.support

    def __bool__(self):
        return bool(self.support) or bool(self.tail)

    def __eq__(self, other):
        if not isinstance(other, CyclicModuleElem):
            return NotImplemented
        return (
            self.alpha == other.alpha
            and self.rho == other.rho
            and self.support == other.support
            and self.tail == other.tail
        )

    def __hash__(self):
        return hash((frozenset(self.support.items()), self.tail))

    def __mul__(self, s):
        return act(self, s)

    def __add__(self, other):
        if not isinstance(other, CyclicModuleElem):
            return NotImplemented
        return normal_form(self.lift() + other.lift(), self.rho)

    def __str__(self):
        parts = []
        for d, c in self.support.items():
            parts.append(f"({c})*theta^{d}" if d else f"({c})")
        if self.tail:
            parts.append(f"rho*({self.tail})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"CyclicModuleElem({self})"


def normal_form(raw: SkewPoly, rho: MultiPoly) -> CyclicModuleElem:
    """Reduce ``raw`` modulo ``rho(1 - theta)S``.

    Each coefficient splits as ``c_i = rho*q_i + r_i``; since
    ``rho*theta*y = rho*y`` in the quotient, ``rho*q_i*theta^i`` collapses to
    ``rho*alpha^{-i}(q_i)``.
    """
    alpha = raw.alpha
    rho = alpha.ring(rho)
    _check_rho(rho)
    if raw.laurent:
        raise PreconditionError("normal forms are taken in R[theta; alpha]")
    support = {}
    tail = alpha.ring.zero()
    for d, c in raw.coeffs.items():
        q, r = divide_by_principal(c, rho)
        if r:
            support[d] = r
        if q:
            tail = tail + alpha.twist(q, -d)
    return CyclicModuleElem(alpha, rho, support, tail)


def module_elem(alpha, rho, raw) -> CyclicModuleElem:
    if not isinstance(raw, SkewPoly):
        raw = SkewPoly.const(alpha, raw)
    return normal_form(raw, rho)


def act(m: CyclicModuleElem, s) -> CyclicModuleElem:
    """Right action ``m * s`` by lifting, multiplying and re-normalizing."""
    if not isinstance(s, SkewPoly):
        s = SkewPoly.const(m.alpha, s)
    if s.alpha != m.alpha:
        raise RingMismatch("module and multiplier use different contexts")
    return normal_form(skew_mul(m.lift(), s), m.rho)


def length(m: CyclicModuleElem) -> int:
    return m.length()


def in_relation_module(f: SkewPoly, rho: MultiPoly) -> bool:
    """Whether ``f`` lies in ``rho(1 - theta)S``."""
    return not normal_form(f, rho)


def length_one_multiplier(m: CyclicModuleElem) -> tuple[MultiPoly, CyclicModuleElem]:
    """For ``m`` of length one supported in degree ``i``, return
    ``u = alpha^{-i}(rho)`` and ``m*u``, which is a nonzero element of ``V``."""
    if m.length() != 1:
        raise PreconditionError(f"multiplier needs length 1, got length {m.length()}")
    (i,) = m.support
    u = m.alpha.twist(m.rho, -i)
    image = act(m, u)
    if not image or not image.in_V():
        raise InvariantViolation(f"m*u = {image} is not a nonzero element of V")
    return u, image


@dataclass(frozen=True)
class EssentialWitness:
    found: bool
    multiplier: SkewPoly | None
    image: CyclicModuleElem | None
    steps: tuple = ()

    def __bool__(self):
        return self.found


def _monomial_multipliers(alpha, degree_bound: int):
    ring = alpha.ring
    t = ring.arity
    exps = sorted(
        (e for e in product(range(degree_bound + 1), repeat=t) if sum(e) <= degree_bound),
        key=lambda e: (sum(e), e),
    )
    for j in range(degree_bound + 1):
        for e in exps:
            if j == 0 and sum(e) == 0:
                continue
            yield SkewPoly(alpha, {j: ring.monomial(e)}, _checked=True)


def essential_probe(m: CyclicModuleElem, degree_bound: int = 4, length_budget: int = 8) -> EssentialWitness:
    """Search for ``s`` with ``0 != m*s`` in ``V`` by greedy length reduction.

    Candidates at each step are the monomials ``x^e theta^j`` with
    ``|e|, j <= degree_bound`` followed by the length-one multipliers
    ``alpha^{-i}(rho)``; the first candidate (in that order) reaching the
    smallest nonzero-image length wins.  ``not found`` is inconclusive.
    """
    if not m:
        raise PreconditionError("probe needs a nonzero element")
    alpha = m.alpha
    total = SkewPoly.one(alpha)
    cur = m
    steps = []
    for _ in range(length_budget + 1):
        if cur.in_V():
            return EssentialWitness(True, total, cur, tuple(steps))
        candidates = list(_monomial_multipliers(alpha, degree_bound))
        candidates += [SkewPoly.const(alpha, alpha.twist(m.rho, -i)) for i in cur.support]
        best = None
        for s in candidates:
            img = act(cur, s)
            if not img:
                continue
            key = img.length()
            if key < cur.length() and (best is None or key < best[0]):
                best = (key, s, img)
                if key == 0:
                    break
        if best is None:
            break
        _, s, cur = best
        total = skew_mul(total, s)
        steps.append(str(s))
    return EssentialWitness(False, None, None, tuple(steps))


# non-Artinian chains -------------------------------------------------------------------


@dataclass(frozen=True)
class ChainReport:
    rho: MultiPoly
    m_max: int
    certificates: tuple  # (m, explanation)

    @property
    def strict(self) -> bool:
        return len(self.certificates) == self.m_max


def chain_member(f: SkewPoly, m: int, rho: MultiPoly) -> bool:
    """``f in theta^(m+1) S + rho S`` iff its coefficients of degree ``<= m`` lie in ``rho R``."""
    return all(not divide_by_principal(c, rho)[1] for d, c in f.coeffs.items() if d <= m)


def chain_check(rho: MultiPoly, m_max: int, alpha) -> ChainReport:
    """Certify ``theta^m S + rho S`` strictly contains ``theta^(m+1) S + rho S`` for ``m <= m_max``."""
    rho = alpha.ring(rho)
    _check_rho(rho)
    certs = []
    for m in range(1, m_max + 1):
        th_m = SkewPoly.theta(alpha, m)
        if chain_member(th_m, m, rho):
            raise InvariantViolation(f"theta^{m} unexpectedly in theta^{m + 1}S + rho S")
        if not chain_member(SkewPoly.theta(alpha, m + 1), m, rho):
            raise InvariantViolation("inclusion theta^(m+1)S in theta^m S failed")
        certs.append((m, f"coefficient 1 of theta^{m} is not in ({rho})"))
    return ChainReport(rho, m_max, tuple(certs))


# lattice correspondence ----------------------------------------------------------------


@dataclass
class SubmoduleDesc:
    """Right ideal ``(u - theta)S + N S`` of ``S`` described by ``N = J cap R``."""

    alpha: object
    u: object
    ideal: Ideal
    rounds: int = 0

    @property
    def generators(self):
        return self.ideal.generators

    def __str__(self):
        return f"({self.u} - theta)S + {self.ideal}S"


def u_minus_theta(alpha, u) -> SkewPoly:
    ring = alpha.ring
    return SkewPoly(alpha, {0: ring(u), 1: -ring.one()})


def _is_unit_scalar(u) -> bool:
    return bool(u) and u.is_constant()


def lattice_contract(gens, u, alpha, bound: int = 32) -> SubmoduleDesc:
    """``N = J cap R`` for ``J = (u - theta)S + sum g S``: remainders of the
    generators modulo ``u - theta`` closed under ``alpha^{-1}``."""
    ring = alpha.ring
    u = ring(u)
    if not _is_unit_scalar(u):
        raise PreconditionError("u must be a nonzero scalar")
    g = u_minus_theta(alpha, u)
    rems = []
    for w in gens:
        if not isinstance(w, SkewPoly):
            w = SkewPoly.const(alpha, w)
        _, r = left_divide(g, w)
        if r:
            rems.append(r.coeff(0))
    ideal = Ideal(ring, rems)
    rounds = 0
    while True:
        new = [alpha.twist(h, -1) for h in ideal.generators]
        missing = [h for h in new if h not in ideal]
        if not missing:
            break
        rounds += 1
        if rounds > bound:
            raise BoundExceeded(f"alpha^-1 closure did not stabilize within {bound} rounds")
        ideal = Ideal(ring, list(ideal.generators) + missing)
    for h in ideal.generators:
        if alpha(h) not in ideal:
            raise NotStable(f"contracted ideal {ideal} is not alpha-stable")
    return SubmoduleDesc(alpha, u, ideal, rounds)


def lattice_expand(desc_or_ideal, u=None, alpha=None) -> list[SkewPoly]:
    """Generators ``u - theta`` and ``N`` of the right ideal attached to ``N``."""
    if isinstance(desc_or_ideal, SubmoduleDesc):
        alpha, u, ideal = desc_or_ideal.alpha, desc_or_ideal.u, desc_or_ideal.ideal
    else:
        ideal = desc_or_ideal
    return [u_minus_theta(alpha, u)] + [SkewPoly.const(alpha, h) for h in ideal.generators]


def theta_absorption_holds(r: MultiPoly, u, alpha) -> bool:
    """``r*theta = u*alpha^{-1}(r)`` modulo ``(u - theta)S``."""
    ring = alpha.ring
    u = ring(u)
    _, rem = left_divide(u_minus_theta(alpha, u), SkewPoly(alpha, {1: r}))
    return rem == SkewPoly.const(alpha, u * alpha.twist(r, -1))


@dataclass(frozen=True)
class SimpleTopReport:
    simple: bool | None
    witnesses: tuple = ()
    message: str = ""


def simple_top_check(u, candidates, alpha) -> SimpleTopReport:
    """Look for proper nonzero alpha-stable ideals obstructing simplicity of ``S/(u - theta)S``."""
    ring = alpha.ring
    if ring.arity == 0 and ring.kind == "poly":
        return SimpleTopReport(True, (), "coefficient ring is a field")
    witnesses = []
    for I in candidates:
        if not I.generators or I.is_unit_ideal():
            continue
        stable = all(alpha(h) in I for h in I.generators) and all(
            alpha.twist(h, -1) in I for h in I.generators
        )
        if stable:
            witnesses.append(SubmoduleDesc(alpha, ring(u), I))
    if witnesses:
        return SimpleTopReport(False, tuple(witnesses), f"intermediate submodule {witnesses[0]}")
    return SimpleTopReport(None, (), "no obstruction found")


# matrix units in k^n[theta^{+-1}; shift] -----------------------------------------------


@dataclass(frozen=True)
class SplitRing:
    """The split algebra ``k^n = k e_1 + ... + k e_n`` of orthogonal idempotents."""

    field: FieldSpec
    n: int

    def __call__(self, v) -> SplitElem:
        if isinstance(v, SplitElem):
            return v
        c = self.field.coerce(v)
        return SplitElem(self, (c,) * self.n)

    def zero(self) -> SplitElem:
        return self(0)

    def one(self) -> SplitElem:
        return self(1)

    def e(self, i: int) -> SplitElem:
        """Idempotent ``e_i`` (1-based)."""
        return SplitElem(self, tuple(self.field.one() if j == i - 1 else self.field.zero() for j in range(self.n)))


@dataclass(frozen=True)
class SplitElem:
    ring: SplitRing
    vals: tuple

    def _other(self, o):
        return o if isinstance(o, SplitElem) else self.ring(o)

    def __add__(self, o):
        o = self._other(o)
        return SplitElem(self.ring, tuple(a + b for a, b in zip(self.vals, o.vals)))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return SplitElem(self.ring, tuple(a - b for a, b in zip(self.vals, o.vals)))

    def __rsub__(self, o):
        return self._other(o) - self

    def __neg__(self):
        return SplitElem(self.ring, tuple(-a for a in self.vals))

    def __mul__(self, o):
        o = self._other(o)
        return SplitElem(self.ring, tuple(a * b for a, b in zip(self.vals, o.vals)))

    __rmul__ = __mul__

    def __bool__(self):
        return any(bool(v) for v in self.vals)

    def is_unit(self) -> bool:
        return all(bool(v) for v in self.vals)

    def unit_inverse(self) -> SplitElem:
        return SplitElem(self.ring, tuple(v.inverse() for v in self.vals))

    def __str__(self):
        parts = [f"{v}*e{i + 1}" if v != 1 else f"e{i + 1}" for i, v in enumerate(self.vals) if v]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class CyclicShift:
    """``alpha(e_i) = e_{i+1}`` with indices mod ``n``."""

    ring: SplitRing
    step: int = 1

    def twist(self, r: SplitElem, k: int) -> SplitElem:
        n = self.ring.n
        s = (self.step * k) % n
        if s == 0:
            return r
        return SplitElem(self.ring, tuple(r.vals[(j - s) % n] for j in range(n)))

    def __call__(self, r):
        return self.twist(r, 1)

    def inverse(self) -> CyclicShift:
        return CyclicShift(self.ring, -self.step)


def _dense_image(f: SkewLaurentPoly, n: int, field: FieldSpec):
    """Matrix over ``k[z^{+-1}]`` (entries as ``{power: scalar}``) with
    ``e_i -> E_ii`` and ``theta -> z*P`` where ``P e_i = e_{i+1}``."""
    M = [[{} for _ in range(n)] for _ in range(n)]
    for d, c in f.coeffs.items():
        # diag(c) * (zP)^d has entry c_i z^d at (i, i - d mod n)
        for i, v in enumerate(c.vals):
            if v:
                j = (i - d) % n
                cell = M[i][j]
                cell[d] = cell.get(d, field.zero()) + v
                if not cell[d]:
                    del cell[d]
    return M


def _dense_mul(A, B, field):
    n = len(A)
    C = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if not A[i][k]:
                continue
            for j in range(n):
                if not B[k][j]:
                    continue
                cell = C[i][j]
                for p, a in A[i][k].items():
                    for q, b in B[k][j].items():
                        cell[p + q] = cell.get(p + q, field.zero()) + a * b
                C[i][j] = {e: v for e, v in cell.items() if v}
    return C


def _dense_add(A, B, field):
    out = []
    for ra, rb in zip(A, B):
        row = []
        for a, b in zip(ra, rb):
            cell = dict(a)
            for e, v in b.items():
                cell[e] = cell.get(e, field.zero()) + v
            row.append({e: v for e, v in cell.items() if v})
        out.append(row)
    return out


@dataclass
class MatrixUnitsReport:
    n: int
    field: FieldSpec
    checks: dict = field(default_factory=dict)  # name -> (skew ok, dense ok)

    @property
    def ok(self) -> bool:
        return all(a and b for a, b in self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, (a, b) in self.checks.items() if not (a and b)]


def matrix_units_verify(n: int, field: FieldSpec | None = None) -> MatrixUnitsReport:
    """Check the matrix-unit identities for ``f = (1 - e_1)theta``,
    ``a = theta^{-n+1}``, ``b = theta^{-1}`` in ``k^n[theta^{+-1}; shift]``,
    both in skew Laurent arithmetic and in a dense matrix realization."""
    if n < 1:
        raise ValueError("n must be at least 1")
    field = field or FieldSpec.rationals()
    R = SplitRing(field, n)
    alpha = CyclicShift(R)
    P = SkewLaurentPoly
    e = {i: P.const(alpha, R.e(i)) for i in range(1, n + 1)}
    one = P.one(alpha)
    theta = P.theta(alpha)
    f = P(alpha, {1: R.one() - R.e(1)})
    a = P.theta(alpha, -n + 1)
    b = P.theta(alpha, -1)

    def pw(x, k):
        out = one
        for _ in range(k):
            out = out * x
        return out

    def D(x):
        return _dense_image(x, n, field)

    def dmul(*xs):
        out = D(xs[0])
        for x in xs[1:]:
            out = _dense_mul(out, D(x), field)
        return out

    fn1 = pw(f, n - 1)
    report = MatrixUnitsReport(n, field)
    checks = report.checks
    checks["f^(n-1) = e_n theta^(n-1)"] = (
        fn1 == e[n] * P.theta(alpha, n - 1),
        dmul(*([f] * (n - 1) or [one])) == D(e[n] * P.theta(alpha, n - 1)),
    )
    checks["a f^(n-1) = e_1"] = (a * fn1 == e[1], dmul(a, *([f] * (n - 1))) == D(e[1]))
    checks["f b = 1 - e_1"] = (f * b == one - e[1], dmul(f, b) == D(one - e[1]))
    checks["a f^(n-1) + f b = 1"] = (
        a * fn1 + f * b == one,
        _dense_add(dmul(a, *([f] * (n - 1))), dmul(f, b), field) == D(one),
    )
    zero_dense = D(P.zero(alpha))
    checks["f^n = 0"] = (not pw(f, n), dmul(*([f] * n)) == zero_dense)
    for k in range(1, n):
        tk = P.theta(alpha, k)
        checks[f"e_1 theta^{k} e_1 = 0"] = (not (e[1] * tk * e[1]), dmul(e[1], tk, e[1]) == zero_dense)
    tn = P.theta(alpha, n)
    checks["e_1 theta^n e_1 != 0"] = (bool(e[1] * tn * e[1]), dmul(e[1], tn, e[1]) != zero_dense)
    checks["theta^n central"] = (
        all(tn * e[i] == e[i] * tn for i in e) and tn * theta == theta * tn,
        all(dmul(tn, e[i]) == dmul(e[i], tn) for i in e),
    )
    return report
