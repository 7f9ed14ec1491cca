"""Decision engine for property (diamond) of ``S = R[theta; alpha]``.

``decide`` runs a fixed rule table over the detected class of ``alpha``
and returns a :class:`Verdict` carrying the full trace of rules consulted.
Unknown outcomes name the open question they hinge on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice, product

from .automorph import AlgebraMap, OrderVerdict, linear_finite_order_test, order
from .dynamics import PointMap, curve_membership, curve_monomials, periodic_points_ff
from .errors import RingMismatch, UnsupportedClass
from .scalars import FieldSpec, root_of_unity_order

HOLDS, FAILS, UNKNOWN = "Holds", "Fails", "Unknown"

CITATIONS = {
    "R1": "automorphism of finite order: S is finite over its centre, hence PI and fully bounded, so (⋄) holds",
    "R2": "linear automorphism of k[x_1..x_t]: (⋄) holds iff |α| < ∞",
    "R3": "x ↦ βx + γ on k[x]: (⋄) holds iff β is a root of unity and γ = 0 (char 0), or β is a root of unity (char p)",
    "R4": "triangular plane automorphism: (⋄) holds iff α is of type (i) with λ, μ roots of unity, iff |α| < ∞",
    "R5": "square plane automorphism: (⋄) holds iff S is not primitive",
    "R6": "monomial automorphism of a Laurent ring over a field algebraic over F_p: all simple modules finite dimensional, so (⋄) holds",
    "R7": "k[x^±1, y^±1] with α(x) = yx^-1, α(y) = x in characteristic 0: (⋄) holds iff S is not primitive",
    "R8": "coefficient ring of Krull dimension 0 and S primitive: (⋄) holds",
    "R0": "no rule of the table matches this automorphism",
}

QUESTIONS = {
    "qn1": "S primitive with (⋄): must R be a finite direct sum of fields?",
    "qn2": "R affine over a countable field and S satisfies (⋄): are all simple S-modules finite dimensional?",
    "qn3": "which affine R and α make every simple S-module finite dimensional?",
    "qn4": "α a square automorphism of k[x, y] (e.g. x ↦ y, y ↦ x + y^2): is S primitive?",
    "qn5": "R = k[x^±1, y^±1], α(x) = yx^-1, α(y) = x: is S primitive?",
    "unclassified": "automorphism outside the supported classes",
}

CAVEAT_SUBFIELD = "statement over the complex numbers instantiated over a computable subfield"
CAVEAT_COUNTABLE = "equivalence of (⋄) with finite-dimensional simples assumes an uncountable base field; {field} is countable"

TWISTED_SWAP_PATTERNS = ([[-1, 1], [1, 0]], [[0, 1], [1, -1]])


@dataclass(frozen=True)
class TraceStep:
    rule: str
    citation: str
    detail: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "citation": self.citation, "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    outcome: str
    question_tag: str | None
    trace: tuple
    caveats: tuple = ()

    def __post_init__(self):
        if not self.trace:
            raise ValueError("a verdict needs a non-empty trace")
        for s in self.trace:
            if s.rule not in CITATIONS:
                raise ValueError(f"unknown rule {s.rule}")

    @property
    def rules(self) -> list[str]:
        return [s.rule for s in self.trace]

    @property
    def rule(self) -> str:
        return self.trace[0].rule

    def __str__(self):
        return f"Unknown({self.question_tag})" if self.outcome == UNKNOWN else self.outcome

    def to_dict(self) -> dict:
        out = {
            "outcome": self.outcome,
            "trace": [s.to_dict() for s in self.trace],
            "caveats": list(self.caveats),
        }
        if self.question_tag is not None:
            out["question_tag"] = self.question_tag
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def _step(rule, detail):
    return TraceStep(rule, CITATIONS[rule], detail)


@dataclass
class _Finding:
    rule: str
    outcome: str
    detail: str
    tag: str | None = None
    caveats: list = field(default_factory=list)


# individual rules -----------------------------------------------------------------------


def rule_univariate(alpha: AlgebraMap) -> _Finding | None:
    ring, tag = alpha.ring, alpha.tag
    if tag.kind != "univariate_affine" or ring.kind not in ("poly", "affine"):
        return None
    beta, gamma = tag.params["beta"], tag.params["gamma"]
    m = root_of_unity_order(beta)
    if m is None:
        return _Finding("R3", FAILS, f"β = {beta} is not a root of unity")
    if ring.characteristic == 0 and gamma:
        return _Finding("R3", FAILS, f"γ = {gamma} ≠ 0 in characteristic 0")
    if ring.characteristic:
        return _Finding("R3", HOLDS, f"β = {beta} is a root of unity of order {m} in characteristic {ring.characteristic}")
    return _Finding("R3", HOLDS, f"β = {beta} is a root of unity of order {m} and γ = 0")


def rule_triangular(alpha: AlgebraMap) -> _Finding | None:
    ring, tag = alpha.ring, alpha.tag
    if ring.arity != 2 or ring.kind not in ("poly", "affine"):
        return None
    if tag.kind not in ("triangular_i", "triangular_ii", "triangular_iii"):
        return None
    if ring.characteristic:
        # over F_p every triangular normal form has finite order and R1 decides
        return None
    p = tag.params
    cav = [CAVEAT_SUBFIELD]
    if tag.kind == "triangular_i":
        bad = [f"{k} = {p[k]}" for k in ("lambda", "mu") if root_of_unity_order(p[k]) is None]
        if bad:
            return _Finding("R4", FAILS, f"type (i) with {', '.join(bad)} not a root of unity", caveats=cav)
        return _Finding("R4", HOLDS, "type (i) with λ, μ roots of unity", caveats=cav)
    if tag.kind == "triangular_ii":
        return _Finding("R4", FAILS, f"type (ii): translation y ↦ y + {p['c']} with c ≠ 0, not of type (i)", caveats=cav)
    etas = {i: c for i, c in p["eta"].items() if c}
    if not etas:
        return None
    return _Finding("R4", FAILS, f"type (iii) with η ≠ 0 at degrees {sorted(etas)}, not of type (i)", caveats=cav)


def rule_linear(alpha: AlgebraMap) -> _Finding | None:
    ring = alpha.ring
    A = alpha.linear_matrix()
    if A is None:
        return None
    v = linear_finite_order_test(A, ring.field)
    if v.is_finite:
        return _Finding("R2", HOLDS, f"|α| = {v.n}")
    return _Finding("R2", FAILS, f"|α| = ∞: {v.reason}")


def _is_square(alpha: AlgebraMap) -> bool:
    tag = alpha.tag
    return tag.kind == "henon" or (tag.kind == "composition" and bool(tag.params.get("square")))


def _primitivity_finding(rule, primitive, field, qtag):
    cav = [CAVEAT_COUNTABLE.format(field=field)]
    if primitive is None:
        return _Finding(rule, UNKNOWN, "no primitivity certificate supplied", tag=qtag, caveats=cav)
    if primitive:
        return _Finding(rule, FAILS, "certificate: S is primitive", caveats=cav)
    return _Finding(rule, HOLDS, "certificate: S is not primitive", caveats=cav)


def rule_square(alpha: AlgebraMap, primitive=None) -> _Finding | None:
    if alpha.ring.arity != 2 or not _is_square(alpha):
        return None
    f = _primitivity_finding("R5", primitive, alpha.ring.field, "qn4")
    if alpha.ring.characteristic == 0:
        f.caveats.insert(0, CAVEAT_SUBFIELD)
    f.detail = f"{alpha.tag.kind} map ({alpha.tag}); " + f.detail
    return f


def is_twisted_swap(alpha: AlgebraMap) -> bool:
    M = alpha.monomial_matrix()
    return M is not None and alpha.ring.arity == 2 and M in TWISTED_SWAP_PATTERNS


def rule_monomial(alpha: AlgebraMap, primitive=None) -> _Finding | None:
    ring = alpha.ring
    if not ring.laurent or alpha.tag.kind != "monomial":
        return None
    M = alpha.tag.params["M"]
    if ring.characteristic:
        return _Finding("R6", HOLDS, f"monomial matrix {M} over {ring.field}")
    if is_twisted_swap(alpha):
        f = _primitivity_finding("R7", primitive, ring.field, "qn5")
        f.detail = f"monomial matrix {M}; " + f.detail
        return f
    return None


def rule_krull_zero(alpha: AlgebraMap, primitive=None) -> _Finding | None:
    if alpha.ring.kind != "quot":
        return None
    if primitive:
        return _Finding("R8", HOLDS, f"{alpha.ring} has Krull dimension 0; certificate: S is primitive")
    return None


# engine -------------------------------------------------------------------------------


def decide(ring, alpha: AlgebraMap, primitive: bool | None = None, bound: int = 64) -> Verdict:
    """Apply the rule table.  ``primitive`` is an optional user-supplied
    certificate on the primitivity of ``S``; it is never inferred."""
    if alpha.ring != ring:
        raise RingMismatch("automorphism does not act on the given ring")
    ordv: OrderVerdict = order(alpha, bound)
    findings = [
        f
        for f in (
            rule_univariate(alpha),
            rule_triangular(alpha),
            rule_linear(alpha),
            rule_square(alpha, primitive),
            rule_monomial(alpha, primitive),
            rule_krull_zero(alpha, primitive),
        )
        if f is not None
    ]
    caveats: list = []
    if ordv.is_finite:
        for f in findings:
            if f.outcome == FAILS:
                raise AssertionError(f"rule {f.rule} contradicts finite order {ordv.n}")
        trace = [_step("R1", f"|α| = {ordv.n}")]
        trace += [_step(f.rule, f.detail) for f in findings if f.outcome == HOLDS]
        return Verdict(HOLDS, None, tuple(trace), ())
    if not findings:
        if ring.laurent and alpha.tag.kind == "monomial" and ordv.is_infinite:
            detail = f"monomial matrix {alpha.tag.params['M']} of infinite order in characteristic 0"
            return Verdict(UNKNOWN, "qn3", (_step("R0", detail),), ())
        detail = f"class {alpha.tag.kind}; order {ordv}"
        cav = ("α lies outside the supported classes",) if alpha.tag.kind == "unclassified" else ()
        if ring.kind == "quot":
            cav += ("Krull dimension 0 rule requires a primitivity certificate",)
        return Verdict(UNKNOWN, "unclassified", (_step("R0", detail),), cav)
    lead = findings[0]
    for f in findings[1:]:
        if f.outcome != lead.outcome:
            raise AssertionError(f"rules {lead.rule} and {f.rule} disagree")
    for f in findings:
        for c in f.caveats:
            if c not in caveats:
                caveats.append(c)
    trace = tuple(_step(f.rule, f.detail) for f in findings)
    return Verdict(lead.outcome, lead.tag, trace, tuple(caveats))


def explain(v: Verdict) -> str:
    lines = [f"verdict: {v}"]
    if v.question_tag:
        lines.append(f"open question {v.question_tag}: {QUESTIONS[v.question_tag]}")
    for i, s in enumerate(v.trace, 1):
        lines.append(f"{i}. [{s.rule}] {s.detail}")
        lines.append(f"   \"{s.citation}\"")
    for c in v.caveats:
        lines.append(f"caveat: {c}")
    return "\n".join(lines)


# primitivity evidence ---------------------------------------------------------------------


@dataclass
class ProbeReport:
    n_orbits: int
    degree: int
    tested: int
    hits: list  # (selection, polynomial)
    cap_exceeded: bool
    warnings: list
    source: str = ""

    @property
    def evidence(self) -> bool:
        return bool(self.hits)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "orbits": self.n_orbits,
            "degree": self.degree,
            "selections_tested": self.tested,
            "cap_exceeded": self.cap_exceeded,
            "hits": [{"points": [[str(c) for c in pt] for pt in sel], "curve": str(poly)} for sel, poly in self.hits],
            "warnings": list(self.warnings),
            "note": "finite evidence only; verdicts are never upgraded",
        }


def probe_orbits(orbits, degree: int, cap: int = 1000, field: FieldSpec | None = None, max_hits: int = 10) -> ProbeReport:
    """Test one-point-per-orbit selections for lying on a curve of degree ``<= degree``."""
    orbits = [sorted(o, key=lambda pt: [_key(c) for c in pt]) for o in orbits if o]
    warnings = []
    n_mons = len(curve_monomials(degree))
    if len(orbits) < n_mons:
        warnings.append(
            f"{len(orbits)} representatives < {n_mons} monomials of degree <= {degree}: a curve always exists"
        )
    if not orbits:
        return ProbeReport(0, degree, 0, [], False, warnings + ["no orbits: vacuous evidence"])
    total = 1
    for o in orbits:
        total *= len(o)
    hits = []
    tested = 0
    for sel in islice(product(*orbits), cap):
        tested += 1
        if len(set(sel)) < len(sel):
            continue
        res = curve_membership(sel, degree, field=field)
        if res and len(hits) < max_hits:
            hits.append((sel, res.polynomial))
    exceeded = total > cap
    if exceeded:
        warnings.append(f"{total} selections exceed the cap {cap}; only the first {cap} were tested")
    return ProbeReport(len(orbits), degree, tested, hits, exceeded, warnings)


def _key(c):
    return c.sort_key() if hasattr(c, "sort_key") else c


def primitivity_probe(
    alpha: AlgebraMap,
    primes=(),
    max_period: int = 6,
    degree: int = 2,
    height: int = 0,
    cap: int = 1000,
) -> list[ProbeReport]:
    """Collect finite orbits (over each ``F_p`` and over rationals of height
    ``<= height``) and look for curves through orbit representatives."""
    if not _is_square(alpha):
        raise UnsupportedClass("primitivity probes need a square plane automorphism")
    reports = []
    for p in primes:
        ap = alpha.change_field(FieldSpec.prime(p))
        dec = periodic_points_ff(ap)
        fp = FieldSpec.prime(p)
        orbs = [[tuple(fp(v) for v in pt) for pt in c] for c in dec.cycles if len(c) <= max_period]
        r = probe_orbits(orbs, degree, cap, field=fp)
        r.source = f"F_{p}, periods <= {max_period}"
        reports.append(r)
    if height > 0:
        orbs = rational_finite_orbits(alpha, height, max_period)
        r = probe_orbits(orbs, degree, cap, field=alpha.ring.field)
        r.source = f"rational points of height <= {height}, periods <= {max_period}"
        reports.append(r)
    return reports


def rational_finite_orbits(alpha: AlgebraMap, height: int, max_period: int) -> list:
    """Finite orbits through rational points with numerators and denominators ``<= height``."""
    phi = PointMap(alpha)
    field = phi.field
    vals = sorted({Fraction(a, b) for a in range(-height, height + 1) for b in range(1, height + 1)})
    seen = set()
    orbs = []
    for a in vals:
        for b in vals:
            start = (field(a), field(b))
            if start in seen:
                continue
            cyc = [start]
            cur = phi(start)
            while cur != start and len(cyc) <= max_period:
                cyc.append(cur)
                cur = phi(cur)
            if cur == start:
                seen.update(cyc)
                orbs.append(cyc)
    return orbs
