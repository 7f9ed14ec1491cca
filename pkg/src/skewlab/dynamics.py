"""Point dynamics of automorphisms: orbits, cycle decompositions over F_p,
Henon periodic points, orbital exponents and curve membership.

Convention: ``point_map(alpha)`` sends ``a`` to the generator images
evaluated at ``a``.  The maximal ideal ``m_a`` then satisfies
``alpha(m_a) = m_b`` with ``b = phi^{-1}(a)``; orbit sizes and finiteness
do not depend on the direction.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from sympy import divisors

from . import _linalg, _upoly
from .automorph import AlgebraMap
from .errors import BoundExceeded, PreconditionError, UnsupportedClass
from .polyring import MultiPoly, poly_ring
from .scalars import FieldSpec, Scalar

DEFAULT_POINT_CAP = 250_000


def _as_point(field: FieldSpec, pt) -> tuple:
    return tuple(field.coerce(a) for a in pt)


class PointMap:
    """Evaluable shadow ``phi_alpha`` of an algebra map on ``K^t``."""

    def __init__(self, alpha: AlgebraMap):
        ring = alpha.ring
        if ring.kind not in ("poly", "laurent", "affine"):
            raise UnsupportedClass(f"point maps need a polynomial or Laurent ring, got {ring}")
        self.alpha = alpha
        self.field = ring.field
        self.t = ring.arity
        self.laurent = ring.laurent
        # compiled images for fast integer evaluation over F_p
        self._int_images = None
        if self.field.kind == "Fp":
            self._int_images = [
                [(c.value, e) for e, c in im.terms.items()] for im in alpha.images
            ]

    def __call__(self, pt) -> tuple:
        pt = _as_point(self.field, pt)
        if len(pt) != self.t:
            raise ValueError(f"point must have {self.t} coordinates")
        if self.laurent and any(not a for a in pt):
            raise PreconditionError("Laurent maps need nonzero coordinates")
        return tuple(im.evaluate(pt) for im in self.alpha.images)

    def int_call(self, pt: tuple) -> tuple:
        """Fast evaluation on integer representatives modulo ``p``."""
        p = self.field.n
        out = []
        for terms in self._int_images:
            s = 0
            for c, e in terms:
                v = c
                for a, k in zip(pt, e):
                    if k:
                        v = v * pow(a, k, p)
                s += v
            out.append(s % p)
        return tuple(out)


def point_map(alpha: AlgebraMap) -> PointMap:
    return PointMap(alpha)


@dataclass(frozen=True)
class PointOrbit:
    seed: tuple
    points: tuple
    status: str  # "periodic" or "open"
    period: int | None = None
    bound: int | None = None

    @property
    def is_periodic(self) -> bool:
        return self.status == "periodic"

    def describe(self) -> str:
        if self.is_periodic:
            return f"Periodic({self.period})"
        return f"OpenBeyond({self.bound})"

    def to_dict(self) -> dict:
        return {
            "seed": [str(a) for a in self.seed],
            "status": self.describe(),
            "points": [[str(a) for a in pt] for pt in self.points],
        }


def orbit(seed, alpha: AlgebraMap | PointMap, max_steps: int = 100) -> PointOrbit:
    """Iterate ``phi`` from ``seed`` until the first return or ``max_steps``."""
    phi = alpha if isinstance(alpha, PointMap) else PointMap(alpha)
    seed = _as_point(phi.field, seed)
    pts = [seed]
    seen = {seed}
    cur = seed
    for n in range(1, max_steps + 1):
        cur = phi(cur)
        if cur == seed:
            return PointOrbit(seed, tuple(pts), "periodic", period=n)
        if cur in seen:
            raise PreconditionError("orbit re-enters a cycle avoiding the seed; map is not injective")
        seen.add(cur)
        pts.append(cur)
    return PointOrbit(seed, tuple(pts), "open", bound=max_steps)


@dataclass
class CycleDecomposition:
    p: int
    t: int
    cycles: list  # each a tuple of integer points, smallest point first
    histogram: dict = field(default_factory=dict)

    @property
    def total_points(self) -> int:
        return sum(k * v for k, v in self.histogram.items())

    def fixed_points(self) -> list:
        return [c[0] for c in self.cycles if len(c) == 1]

    def points_of_period_dividing(self, n: int) -> list:
        return sorted(pt for c in self.cycles if n % len(c) == 0 for pt in c)

    def to_dict(self, with_cycles: bool = True) -> dict:
        out = {
            "prime": self.p,
            "points": self.total_points,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }
        if with_cycles:
            out["cycles"] = [[list(pt) for pt in c] for c in self.cycles]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["length", "count"])
        for k, v in sorted(self.histogram.items()):
            w.writerow([k, v])
        return buf.getvalue()

    def cycles_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cycle", "length", "position"] + [f"c{i}" for i in range(self.t)])
        for idx, c in enumerate(self.cycles):
            for pos, pt in enumerate(c):
                w.writerow([idx, len(c), pos, *pt])
        return buf.getvalue()


def periodic_points_ff(alpha: AlgebraMap, cap: int = DEFAULT_POINT_CAP) -> CycleDecomposition:
    """Partition ``F_p^t`` (the torus for Laurent rings) into cycles of ``phi``."""
    phi = PointMap(alpha)
    if phi.field.kind != "Fp":
        raise PreconditionError("cycle decomposition needs a prime field")
    p, t = phi.field.n, phi.t
    values = range(1, p) if phi.laurent else range(p)
    size = len(values) ** t
    if size > cap:
        raise BoundExceeded(f"{size} points exceed the scan cap {cap}")
    visited = set()
    cycles = []
    hist: dict = {}
    for start in product(values, repeat=t):
        if start in visited:
            continue
        cyc = [start]
        visited.add(start)
        cur = phi.int_call(start)
        while cur != start:
            if cur in visited:
                raise PreconditionError(f"map is not bijective on F_{p}^{t}")
            visited.add(cur)
            cyc.append(cur)
            cur = phi.int_call(cur)
        # start is the smallest point of its cycle since points are scanned in order
        cycles.append(tuple(cyc))
        hist[len(cyc)] = hist.get(len(cyc), 0) + 1
    cycles.sort(key=lambda c: (len(c), c[0]))
    return CycleDecomposition(p, t, cycles, dict(sorted(hist.items())))


# Henon periodic points -------------------------------------------------------------


def _henon_params(alpha: AlgebraMap):
    if alpha.tag.kind != "henon":
        raise UnsupportedClass(f"expected a generalized Henon map, got {alpha.tag.kind}")
    lam = alpha.tag.params["lambda"]
    beta = alpha.tag.params["beta"]
    field = alpha.ring.field
    dense = [field.zero()] * (beta.total_degree() + 1)
    for (_, i), c in beta.terms.items():
        dense[i] = c
    return lam, dense


def rational_roots(poly: Sequence[Scalar], field: FieldSpec) -> tuple[list, bool]:
    """Roots in the base field (sorted, without multiplicity) and whether the
    list is complete: exhaustive over F_p, rational root theorem over Q, and
    only rational candidates over Q(zeta)."""
    poly = _upoly.trim(list(poly))
    if not poly:
        raise ValueError("zero polynomial has every point as a root")
    if field.kind == "Fp":
        roots = [field.coerce(a) for a in range(field.n) if not _upoly.evaluate(poly, field.coerce(a))]
        return roots, True
    if not all(c.is_rational() for c in poly):
        return [], False
    fr = [c.to_fraction() for c in poly]
    roots = set()
    while fr and fr[0] == 0:
        roots.add(Fraction(0))
        fr = fr[1:]
    if len(fr) > 1:
        den = 1
        for c in fr:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        for num in divisors(abs(ints[0])):
            for dd in divisors(abs(ints[-1])):
                for s in (1, -1):
                    r = Fraction(s * num, dd)
                    if _upoly.evaluate(ints, r) == 0:
                        roots.add(r)
    return [field.coerce(r) for r in sorted(roots)], field.kind == "Q"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class PeriodicPointReport:
    period: int
    conditions: tuple  # human-readable polynomial conditions
    points: tuple
    complete: bool


def _fmt_upoly(poly, var: str) -> str:
    ring = poly_ring(poly[0].field if poly else FieldSpec.rationals(), var)
    f = MultiPoly(ring, {(i,): c for i, c in enumerate(poly)})
    return str(f)


def fixed_points_symbolic(alpha: AlgebraMap, period: int = 1) -> PeriodicPointReport:
    """Points ``(a, b)`` with ``phi^period = id`` for a Henon map ``phi(a, b) = (b, lam*a + beta(b))``.

    Period 1 reduces to ``lam*x + beta(x) - x = 0`` on the diagonal.  For
    period 2 the conditions are ``(1 - lam)a = beta(b)`` and
    ``(1 - lam)b = beta(a)``; when ``lam != 1`` the first solves for ``a``.
    """
    lam, beta = _henon_params(alpha)
    field = alpha.ring.field
    one, zero = field.one(), field.zero()
    if period == 1:
        P = _upoly.add(_upoly.sub(beta, [zero, one]), [zero, lam])
        if not _upoly.trim(list(P)):
            raise PreconditionError("every diagonal point is fixed")
        roots, complete = rational_roots(P, field)
        pts = tuple((r, r) for r in roots)
        return PeriodicPointReport(1, (f"{_fmt_upoly(_upoly.trim(P), 'x')} = 0", "y = x"), pts, complete)
    if period != 2:
        raise UnsupportedClass("symbolic periodic points are implemented for periods 1 and 2")
    k = one - lam
    if not k:
        roots, complete = rational_roots(beta, field)
        pts = tuple(sorted(((a, b) for a in roots for b in roots), key=lambda q: [c.sort_key() for c in q]))
        cond = f"{_fmt_upoly(_upoly.trim(beta), 'x')} = 0"
        return PeriodicPointReport(2, (cond, cond.replace("x", "y")), pts, complete)
    kinv = k.inverse()
    a_of_b = _upoly.scale(beta, kinv)  # a = beta(b)/(1 - lam)
    comp = _compose(beta, a_of_b, field)  # beta(a(b))
    P = _upoly.sub(comp, [zero, k])
    roots, complete = rational_roots(P, field)
    pts = tuple(sorted(((_upoly.evaluate(a_of_b, b), b) for b in roots), key=lambda q: [c.sort_key() for c in q]))
    conds = (f"{_fmt_upoly(_upoly.trim(P), 'y')} = 0", f"x = ({_fmt_upoly(_upoly.trim(a_of_b), 'y')})")
    return PeriodicPointReport(2, conds, pts, complete)


def _compose(f, g, field):
    """``f(g(y))`` for dense univariate lists."""
    out = [field.zero()]
    for c in reversed(f):
        out = _upoly.add(_upoly.mul(out, g), [c])
    return _upoly.trim(out)


# orbital exponent -------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitalExponent:
    n: int
    returns: tuple
    bound: int

    def __str__(self):
        return f"n = {self.n} (valid for |jn| <= {self.bound})"


def orbital_exponent(seeds, alpha: AlgebraMap, bound: int = 50) -> OrbitalExponent:
    """Least ``n`` such that ``phi^{jn}(P_i)`` avoids the finite set of seeds for
    all ``0 < |jn| <= bound``; every seed must have an infinite orbit."""
    phi = PointMap(alpha)
    field = phi.field
    pts = [_as_point(field, s) for s in seeds]
    pset = set(pts)
    back = PointMap(alpha.inverse())
    returns = set()
    for s in pts:
        for step in (phi, back):
            cur = s
            for m in range(1, bound + 1):
                cur = step(cur)
                if cur == s:
                    raise PreconditionError(f"seed {tuple(map(str, s))} has a finite orbit")
                if cur in pset:
                    returns.add(m if step is phi else -m)
    n = 1 + max((abs(m) for m in returns), default=0)
    return OrbitalExponent(n, tuple(sorted(returns, key=lambda m: (abs(m), m))), bound)


# curves through points ----------------------------------------------------------------


def curve_monomials(d: int) -> list[tuple[int, int]]:
    """Exponents ``(i, j)`` of ``x^i y^j`` with ``i + j <= d`` in ascending
    graded order with ``y > x``."""
    return [(deg - j, j) for deg in range(d + 1) for j in range(deg + 1)]


@dataclass(frozen=True)
class CurveResult:
    polynomial: MultiPoly | None
    rank: int
    n_monomials: int

    def __bool__(self):
        return self.polynomial is not None


def curve_membership(points, d: int, field: FieldSpec | None = None, names=("x", "y")) -> CurveResult:
    """Nonzero polynomial of degree ``<= d`` vanishing at all points, or none.

    The returned polynomial is the kernel vector whose largest monomial is
    the first non-pivot column, scaled to make that coefficient 1.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    pts = list(points)
    if field is None:
        first = pts[0][0] if pts else 0
        field = first.field if isinstance(first, Scalar) else FieldSpec.rationals()
    pts = [_as_point(field, pt) for pt in pts]
    if len(set(pts)) != len(pts):
        raise PreconditionError("points must be distinct")
    mons = curve_monomials(d)
    ring = poly_ring(field, names)
    if not pts:
        return CurveResult(ring.one(), 0, len(mons))
    rows = [[a**i * b**j for (i, j) in mons] for a, b in pts]
    rank = _linalg.rank(rows)
    if rank == len(mons):
        return CurveResult(None, rank, len(mons))
    ker = _linalg.nullspace(rows, len(mons), field.zero(), field.one())
    v = ker[0]
    poly = MultiPoly(ring, {m: c for m, c in zip(mons, v)})
    if any(poly.evaluate(pt) for pt in pts):
        raise AssertionError("curve does not vanish on the points")
    return CurveResult(poly, rank, len(mons))
