"""Spec files declaring a field, a coefficient ring, an automorphism and
optional named objects.

One declaration per line, ``#`` starts a comment::

    field Q | Fp(p) | Qzeta(n)
    ring poly(x, y) | laurent(x, y) | quot(x; x^2 + 1)
    auto x -> y                      (one line per variable; others fixed)
    auto linear [[0, -1], [1, 0]]
    auto monomial [[-1, 1], [1, 0]]
    poly f = x^2 - y
    ideal I = (x^3)   |   ideal J = {x = 0, y = 1}
    point P = (0, 1)
    skew m = 1 + x*theta             (theta is reserved for skew expressions)
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as E
from .automorph import AlgebraMap
from .errors import SkewlabError
from .expr import SpecError, TokenStream, tokenize
from .polyring import CoeffRing, Ideal, MultiPoly, laurent_ring, poly_ring, quotient_ring
from .scalars import FieldSpec
from .skewpoly import SkewPoly

THETA = "theta"


@dataclass(frozen=True)
class FieldDecl:
    kind: str  # Q, Fp, Qzeta
    n: int = 0

    def text(self) -> str:
        return "field " + (self.kind if self.kind == "Q" else f"{self.kind}({self.n})")


@dataclass(frozen=True)
class RingDecl:
    kind: str  # poly, laurent, quot
    names: tuple
    modulus: E.Node | None = None

    def text(self) -> str:
        if self.kind == "quot":
            return f"ring quot({self.names[0]}; {E.to_text(self.modulus)})"
        return f"ring {self.kind}({', '.join(self.names)})"


@dataclass(frozen=True)
class AutoDecl:
    kind: str  # images, linear, monomial
    images: tuple = ()  # (var, Node) in declaration order
    matrix: tuple = ()  # rows of Nodes (linear) or ints (monomial)

    def lines(self) -> list[str]:
        if self.kind == "images":
            return [f"auto {v} -> {E.to_text(n)}" for v, n in self.images]
        if self.kind == "linear":
            rows = ", ".join("[" + ", ".join(E.to_text(c) for c in r) + "]" for r in self.matrix)
        else:
            rows = ", ".join("[" + ", ".join(str(c) for c in r) + "]" for r in self.matrix)
        return [f"auto {self.kind} [{rows}]"]


@dataclass(frozen=True)
class PolyDecl:
    name: str
    body: E.Node

    def text(self) -> str:
        return f"poly {self.name} = {E.to_text(self.body)}"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    kind: str  # generators, coordinate
    gens: tuple = ()
    assignments: tuple = ()  # (var, Node)

    def text(self) -> str:
        return f"ideal {self.name} = {self.body_text()}"

    def body_text(self) -> str:
        if self.kind == "coordinate":
            return "{" + ", ".join(f"{v} = {E.to_text(n)}" for v, n in self.assignments) + "}"
        return "(" + ", ".join(E.to_text(g) for g in self.gens) + ")"


@dataclass(frozen=True)
class PointDecl:
    name: str
    coords: tuple

    def text(self) -> str:
        return f"point {self.name} = (" + ", ".join(E.to_text(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class SkewDecl:
    name: str
    body: E.Node

    def text(self) -> str:
        return f"skew {self.name} = {E.to_text(self.body)}"


@dataclass(frozen=True)
class SpecFile:
    field: FieldDecl
    ring: RingDecl
    auto: AutoDecl | None = None
    objects: tuple = field(default=())  # PolyDecl | IdealDecl | PointDecl | SkewDecl in order

    def pretty(self) -> str:
        lines = [self.field.text(), self.ring.text()]
        if self.auto is not None:
            lines += self.auto.lines()
        lines += [o.text() for o in self.objects]
        return "\n".join(lines) + "\n"


# parsing ---------------------------------------------------------------------------------


def _err(msg, tok, kind="syntax"):
    return SpecError(msg, tok.line, tok.col, kind)


def _parse_names(ts: TokenStream) -> tuple:
    names = [ts.expect_ident()]
    while ts.accept(","):
        names.append(ts.expect_ident())
    return tuple(t.text for t in names)


def _check_expr_vars(node, allowed, extra=()):
    if isinstance(node, E.Var):
        if node.name not in allowed and node.name not in extra:
            raise SpecError(f"undeclared variable {node.name!r}", *node.pos, kind="semantic")
    elif isinstance(node, E.Neg):
        _check_expr_vars(node.operand, allowed, extra)
    elif isinstance(node, E.Pow):
        _check_expr_vars(node.base, allowed, extra)
    elif isinstance(node, E.BinOp):
        _check_expr_vars(node.left, allowed, extra)
        _check_expr_vars(node.right, allowed, extra)


def _parse_matrix(ts: TokenStream, integer: bool) -> tuple:
    ts.expect("[")
    rows = []
    while True:
        ts.expect("[")
        row = []
        while True:
            if integer:
                neg = ts.accept("-")
                row.append(-ts.expect_int() if neg else ts.expect_int())
            else:
                row.append(E.parse_expr_tokens(ts))
            if not ts.accept(","):
                break
        ts.expect("]")
        rows.append(tuple(row))
        if not ts.accept(","):
            break
    ts.expect("]")
    return tuple(rows)


def parse_spec(text: str) -> SpecFile:
    field_decl = ring_decl = None
    images: list = []
    matrix_auto = None
    objects: list = []
    names_seen: set = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        ts = TokenStream(tokenize(line, lineno))
        kw = ts.expect_ident()
        word = kw.text
        if word == "field":
            if field_decl is not None:
                raise _err("field declared twice", kw, "semantic")
            name = ts.expect_ident()
            if name.text == "Q":
                field_decl = FieldDecl("Q")
            elif name.text in ("Fp", "Qzeta"):
                ts.expect("(")
                ntok = ts.peek()
                n = ts.expect_int()
                ts.expect(")")
                try:
                    FieldSpec(name.text, n)
                except (ValueError, SkewlabError) as exc:
                    raise _err(str(exc), ntok, "semantic") from None
                field_decl = FieldDecl(name.text, n)
            else:
                raise _err(f"unknown field {name.text!r}", name)
        elif word == "ring":
            if field_decl is None:
                raise _err("ring declared before field", kw, "semantic")
            if ring_decl is not None:
                raise _err("ring declared twice", kw, "semantic")
            kind = ts.expect_ident()
            ts.expect("(")
            if kind.text in ("poly", "laurent"):
                names = _parse_names(ts) if ts.peek().kind == "IDENT" else ()
                ts.expect(")")
                ring_decl = RingDecl(kind.text, names)
            elif kind.text == "quot":
                var = ts.expect_ident().text
                ts.expect(";")
                mod = E.parse_expr_tokens(ts)
                ts.expect(")")
                _check_expr_vars(mod, (var,))
                ring_decl = RingDecl("quot", (var,), mod)
            else:
                raise _err(f"unknown ring kind {kind.text!r}", kind)
            for n in ring_decl.names:
                if n in (THETA, "zeta"):
                    raise _err(f"{n!r} is reserved", kind, "semantic")
            if len(set(ring_decl.names)) != len(ring_decl.names):
                raise _err("repeated variable", kind, "semantic")
        elif word == "auto":
            if ring_decl is None:
                raise _err("auto declared before ring", kw, "semantic")
            head = ts.peek()
            if head.kind == "IDENT" and head.text in ("linear", "monomial") and head.text not in ring_decl.names:
                ts.next()
                if images or matrix_auto:
                    raise _err("automorphism declared twice", head, "semantic")
                mat = _parse_matrix(ts, integer=head.text == "monomial")
                t = len(ring_decl.names)
                if len(mat) != t or any(len(r) != t for r in mat):
                    raise _err(f"matrix must be {t}x{t}", head, "semantic")
                if head.text == "linear":
                    for r in mat:
                        for c in r:
                            _check_expr_vars(c, ())
                matrix_auto = AutoDecl(head.text, matrix=mat)
            else:
                if matrix_auto:
                    raise _err("automorphism declared twice", head, "semantic")
                var = ts.expect_ident()
                if var.text not in ring_decl.names:
                    raise _err(f"undeclared variable {var.text!r}", var, "semantic")
                if any(v == var.text for v, _ in images):
                    raise _err(f"image of {var.text!r} given twice", var, "semantic")
                ts.expect("->")
                body = E.parse_expr_tokens(ts)
                _check_expr_vars(body, ring_decl.names)
                images.append((var.text, body))
        elif word in ("poly", "ideal", "point", "skew"):
            if ring_decl is None:
                raise _err(f"{word} declared before ring", kw, "semantic")
            name = ts.expect_ident()
            if name.text in names_seen or name.text in ring_decl.names or name.text == THETA:
                raise _err(f"name {name.text!r} already in use", name, "semantic")
            names_seen.add(name.text)
            ts.expect("=")
            objects.append(_parse_object(word, name.text, ts, ring_decl))
        else:
            raise _err(f"unknown declaration {word!r}", kw)
        ts.expect_end()
    if field_decl is None:
        raise SpecError("missing field declaration", 1, 1, "semantic")
    if ring_decl is None:
        raise SpecError("missing ring declaration", 1, 1, "semantic")
    auto = matrix_auto or (AutoDecl("images", tuple(images)) if images else None)
    return SpecFile(field_decl, ring_decl, auto, tuple(objects))


def _parse_object(word, name, ts: TokenStream, ring_decl: RingDecl):
    names = ring_decl.names
    if word == "poly":
        body = E.parse_expr_tokens(ts)
        _check_expr_vars(body, names)
        return PolyDecl(name, body)
    if word == "skew":
        body = E.parse_expr_tokens(ts)
        _check_expr_vars(body, names, (THETA,))
        return SkewDecl(name, body)
    if word == "point":
        ts.expect("(")
        coords = [E.parse_expr_tokens(ts)]
        while ts.accept(","):
            coords.append(E.parse_expr_tokens(ts))
        ts.expect(")")
        for c in coords:
            _check_expr_vars(c, ())
        return PointDecl(name, tuple(coords))
    return parse_ideal_body(ts, names, name)


def parse_ideal_body(ts: TokenStream, names, name: str = "") -> IdealDecl:
    if ts.accept("{"):
        assigns = []
        if not ts.accept("}"):
            while True:
                var = ts.expect_ident()
                if var.text not in names:
                    raise _err(f"undeclared variable {var.text!r}", var, "semantic")
                ts.expect("=")
                val = E.parse_expr_tokens(ts)
                _check_expr_vars(val, ())
                assigns.append((var.text, val))
                if not ts.accept(","):
                    break
            ts.expect("}")
        return IdealDecl(name, "coordinate", assignments=tuple(assigns))
    gens = []
    if ts.peek().text == "(" and _top_level_comma(ts.tokens[ts.i:]):
        ts.expect("(")
        gens.append(E.parse_expr_tokens(ts))
        while ts.accept(","):
            gens.append(E.parse_expr_tokens(ts))
        ts.expect(")")
    else:
        gens.append(E.parse_expr_tokens(ts))
    for g in gens:
        _check_expr_vars(g, names)
    return IdealDecl(name, "generators", gens=tuple(gens))


def parse_ideal_text(text: str, names) -> IdealDecl:
    """Parse an ideal written as ``(g1, g2)``, ``g`` or ``{x = c}``."""
    ts = TokenStream(tokenize(text))
    decl = parse_ideal_body(ts, names)
    ts.expect_end()
    return decl


def _top_level_comma(toks) -> bool:
    """Whether a parenthesised group starting at ``toks[0]`` holds a comma at depth one."""
    depth = 0
    for t in toks:
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
            if depth == 0:
                return False
        elif t.text == "," and depth == 1:
            return True
    return False
# building runtime objects ---------------------------------------------------------------


@dataclass
class Context:
    spec: SpecFile
    field: FieldSpec
    ring: CoeffRing
    alpha: AlgebraMap
    polys: dict
    ideals: dict
    points: dict
    skews: dict


def build_field(decl: FieldDecl) -> FieldSpec:
    return FieldSpec(decl.kind, decl.n)


def build_ring(decl: RingDecl, fld: FieldSpec) -> CoeffRing:
    if decl.kind == "poly":
        return poly_ring(fld, decl.names)
    if decl.kind == "laurent":
        return laurent_ring(fld, decl.names)
    base = poly_ring(fld, decl.names)
    m = E.evaluate(decl.modulus, base)
    if m.total_degree() < 1:
        raise SpecError("quotient modulus must have positive degree", *decl.modulus.pos, kind="semantic")
    return quotient_ring(base, m).ring


def _constant(node, ring) -> object:
    v = E.evaluate(node, ring)
    if not v.is_constant():
        raise SpecError("expected a constant", *node.pos, kind="semantic")
    return v.constant_coeff()


def build_alpha(decl: AutoDecl | None, ring: CoeffRing) -> AlgebraMap:
    if decl is None:
        return AlgebraMap.identity(ring)
    if decl.kind == "linear":
        return AlgebraMap.linear(ring, [[_constant(c, ring) for c in row] for row in decl.matrix])
    if decl.kind == "monomial":
        return AlgebraMap.monomial(ring, [list(r) for r in decl.matrix])
    given = dict(decl.images)
    images = [E.evaluate(given[n], ring) if n in given else ring.gen(n) for n in ring.names]
    return AlgebraMap(ring, images)


def build_ideal(decl: IdealDecl, ring: CoeffRing) -> Ideal:
    if decl.kind == "coordinate":
        return Ideal.coordinate(ring, {v: _constant(n, ring) for v, n in decl.assignments})
    return Ideal(ring, [E.evaluate(g, ring) for g in decl.gens])


def evaluate_skew(node, alpha, ring=None):
    """Evaluate an expression in ``R[theta; alpha]``; ``theta`` is the skew variable."""
    ring = ring or alpha.ring
    if isinstance(node, E.Var) and node.name == THETA:
        return SkewPoly.theta(alpha)
    if isinstance(node, (E.Num, E.Zeta, E.Var)):
        return SkewPoly.const(alpha, E.evaluate(node, ring))
    if isinstance(node, E.Neg):
        return -evaluate_skew(node.operand, alpha, ring)
    if isinstance(node, E.Pow):
        base = evaluate_skew(node.base, alpha, ring)
        if node.exp < 0:
            if base.is_constant():
                return SkewPoly.const(alpha, E.evaluate(node, ring))
            raise SpecError("negative powers of theta are not supported here", *node.pos, kind="semantic")
        return base**node.exp
    left = evaluate_skew(node.left, alpha, ring)
    right = evaluate_skew(node.right, alpha, ring)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return left * right


def parse_skew(text: str, alpha) -> SkewPoly:
    node = E.parse_expr(text)
    _check_expr_vars(node, alpha.ring.names, (THETA,))
    return evaluate_skew(node, alpha)


def build(spec: SpecFile) -> Context:
    fld = build_field(spec.field)
    ring = build_ring(spec.ring, fld)
    alpha = build_alpha(spec.auto, ring)
    polys, ideals, points, skews = {}, {}, {}, {}
    for o in spec.objects:
        if isinstance(o, PolyDecl):
            polys[o.name] = E.evaluate(o.body, ring)
        elif isinstance(o, IdealDecl):
            ideals[o.name] = build_ideal(o, ring)
        elif isinstance(o, PointDecl):
            points[o.name] = tuple(_constant(c, ring) for c in o.coords)
        else:
            skews[o.name] = evaluate_skew(o.body, alpha)
    return Context(spec, fld, ring, alpha, polys, ideals, points, skews)


def load(text: str) -> Context:
    return build(parse_spec(text))


def poly_or_name(text: str, ctx: Context) -> MultiPoly:
    if text in ctx.polys:
        return ctx.polys[text]
    node = E.parse_expr(text)
    _check_expr_vars(node, ctx.ring.names)
    return E.evaluate(node, ctx.ring)


def ideal_or_name(text: str, ctx: Context) -> Ideal:
    if text in ctx.ideals:
        return ctx.ideals[text]
    return build_ideal(parse_ideal_text(text, ctx.ring.names), ctx.ring)


def skew_or_name(text: str, ctx: Context) -> SkewPoly:
    if text in ctx.skews:
        return ctx.skews[text]
    return parse_skew(text, ctx.alpha)
