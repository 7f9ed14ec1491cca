"""Command-line front end: ``skewlab <command> SPEC [options]``."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import diamond, dynamics, modlab, skewpoly
from .automorph import classify_plane
from .errors import (
    BoundExceeded,
    InvariantViolation,
    NotInvertible,
    NotStable,
    PreconditionError,
    UnsupportedClass,
)
from .expr import SpecError
from .scalars import FieldSpec
from .specfile import Context, ideal_or_name, load, parse_spec, poly_or_name, skew_or_name

EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime(text: str) -> int:
    try:
        return FieldSpec.prime(int(text)).n
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _s(x) -> str:
    return str(x)


def _matrix(A):
    return [[str(c) for c in row] for row in A] if A is not None else None


def _params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, dict):
            out[k] = {str(i): str(c) for i, c in v.items()}
        elif isinstance(v, list):
            out[k] = [_matrix_row(r) for r in v] if v and isinstance(v[0], list) else [str(c) for c in v]
        elif isinstance(v, bool):
            out[k] = v
        else:
            out[k] = str(v)
    return out


def _matrix_row(r):
    return [str(c) for c in r]


# commands --------------------------------------------------------------------------------


def cmd_classify(ctx: Context, args) -> dict:
    a = ctx.alpha
    res = {
        "ring": str(ctx.ring),
        "map": str(a),
        "class": a.tag.kind,
        "params": _params(a.tag.params),
        "notes": list(a.tag.notes),
        "linear_matrix": _matrix(a.linear_matrix()),
    }
    if ctx.ring.kind == "poly" and ctx.ring.arity == 2:
        pc = classify_plane(a)
        res["plane"] = {"kind": pc.kind, "square": pc.square, "notes": list(pc.notes)}
    try:
        res["inverse"] = str(a.inverse())
    except NotInvertible:
        res["inverse"] = None
    return res


def cmd_decide(ctx: Context, args) -> dict:
    prim = {"yes": True, "no": False, None: None}[args.primitive]
    v = diamond.decide(ctx.ring, ctx.alpha, primitive=prim, bound=args.bound)
    out = v.to_dict()
    out["verdict"] = str(v)
    out["explanation"] = diamond.explain(v)
    return out


def cmd_order(ctx: Context, args) -> dict:
    v = ctx.alpha.order(args.bound)
    return {"order": str(v), "kind": v.kind, "n": v.n, "reason": v.reason}


def cmd_orbits(ctx: Context, args) -> dict:
    if args.prime:
        a = ctx.alpha.change_field(FieldSpec.prime(args.prime))
        dec = dynamics.periodic_points_ff(a, cap=args.cap)
        cyc = [c for c in dec.cycles if len(c) <= args.max_period]
        return {
            "prime": args.prime,
            "max_period": args.max_period,
            "orbits": [[list(pt) for pt in c] for c in cyc],
            "count": len(cyc),
        }
    if not ctx.points:
        raise PreconditionError("orbits without --prime need declared points")
    res = {}
    for name, pt in ctx.points.items():
        res[name] = dynamics.orbit(pt, ctx.alpha, args.max_period).to_dict()
    return {"max_steps": args.max_period, "orbits": res}


def cmd_cycles(ctx: Context, args) -> dict:
    a = ctx.alpha.change_field(FieldSpec.prime(args.prime))
    dec = dynamics.periodic_points_ff(a, cap=args.cap)
    out = dec.to_dict(with_cycles=args.list)
    if args.csv:
        out["csv"] = dec.cycles_csv() if args.list else dec.histogram_csv()
    return out


def _read_points(path: str, fld: FieldSpec):
    pts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].replace(",", " ").strip()
            if not line:
                continue
            parts = line.split()
            try:
                pts.append(tuple(fld.coerce(Fraction(p)) for p in parts))
            except (ValueError, ZeroDivisionError):
                raise SpecError(f"bad point {line!r}", lineno, 1, "syntax") from None
            if len(parts) != 2:
                raise SpecError("points need two coordinates", lineno, 1, "semantic")
    return pts


def cmd_curve(ctx: Context | None, args) -> dict:
    fld = ctx.field if ctx is not None else _field_arg(args.field)
    if args.points:
        pts = _read_points(args.points, fld)
    elif ctx is not None and ctx.points:
        pts = list(ctx.points.values())
    else:
        raise PreconditionError("curve needs --points or declared points")
    res = dynamics.curve_membership(pts, args.degree, field=fld)
    return {
        "degree": args.degree,
        "points": [[str(c) for c in p] for p in pts],
        "rank": res.rank,
        "monomials": res.n_monomials,
        "curve": str(res.polynomial) if res else None,
    }


def cmd_special(ctx: Context, args) -> dict:
    a = poly_or_name(args.a, ctx)
    ideals = [ideal_or_name(t, ctx) for t in args.ideal]
    rep = skewpoly.special_probe(a, ideals, args.max_n, ctx.alpha)
    return {
        "a": str(a),
        "max_n": args.max_n,
        "norms_nonzero": rep.norms_nonzero,
        "norms": [str(skewpoly.norm_product(a, n, ctx.alpha)) for n in range(1, min(args.max_n, 8) + 1)],
        "hits": [{"ideal": str(I), "least_n": n} for I, n in rep.hits],
    }


def cmd_modlab(ctx: Context, args) -> dict:
    alpha = ctx.alpha
    if args.action == "chain":
        rho = poly_or_name(args.rho, ctx)
        rep = modlab.chain_check(rho, args.max, alpha)
        return {"rho": str(rho), "strict": rep.strict, "certificates": [c for _, c in rep.certificates]}
    if args.action == "essential":
        rho = poly_or_name(args.rho, ctx)
        m = modlab.normal_form(skew_or_name(args.elem, ctx), rho)
        w = modlab.essential_probe(m, args.bound, args.budget)
        return {
            "element": str(m),
            "length": m.length(),
            "found": w.found,
            "multiplier": str(w.multiplier) if w.found else None,
            "image": str(w.image) if w.found else None,
            "steps": list(w.steps),
        }
    gens = [skew_or_name(g, ctx) for g in args.gens]
    u = poly_or_name(args.u, ctx)
    desc = modlab.lattice_contract(gens, u, alpha, bound=args.bound)
    back = modlab.lattice_contract(modlab.lattice_expand(desc), u, alpha, bound=args.bound)
    return {
        "generators": [str(g) for g in gens],
        "u": str(u),
        "contraction": str(desc.ideal),
        "closure_rounds": desc.rounds,
        "submodule": str(desc),
        "expand_contract_identity": back.ideal == desc.ideal,
    }


def cmd_verify(ctx, args) -> dict:
    fld = _field_arg(args.field)
    rep = modlab.matrix_units_verify(args.n, fld)
    if not rep.ok:
        raise InvariantViolation(f"matrix-unit identities failed: {rep.failures()}")
    return {"n": args.n, "field": str(fld), "ok": rep.ok, "checks": {k: all(v) for k, v in rep.checks.items()}}


def _field_arg(text: str) -> FieldSpec:
    spec = parse_spec(f"field {text}\nring poly()\n")
    return FieldSpec(spec.field.kind, spec.field.n)


# wiring ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skewlab", description="Skew polynomial rings R[theta; alpha]: classification, decisions, witnesses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("spec", help="spec file")
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.add_argument("--stamp", action="store_true", help="add a timestamp to JSON reports")

    sp = sub.add_parser("classify", help="detect the class of the automorphism")
    common(sp)
    sp = sub.add_parser("decide", help="decide property (diamond)")
    common(sp)
    sp.add_argument("--primitive", choices=["yes", "no"], help="user-supplied primitivity certificate")
    sp.add_argument("--bound", type=int, default=64)
    sp = sub.add_parser("order", help="order of the automorphism")
    common(sp)
    sp.add_argument("--bound", type=int, default=64)
    sp = sub.add_parser("orbits", help="finite orbits over F_p, or orbits of declared points")
    common(sp)
    sp.add_argument("--prime", type=_prime)
    sp.add_argument("--max-period", type=int, default=10)
    sp.add_argument("--cap", type=int, default=dynamics.DEFAULT_POINT_CAP)
    sp = sub.add_parser("cycles", help="cycle decomposition of F_p^2")
    common(sp)
    sp.add_argument("--prime", type=_prime, required=True)
    sp.add_argument("--csv", action="store_true", help="include CSV (histogram, or cycles with --list)")
    sp.add_argument("--list", action="store_true", help="list every cycle")
    sp.add_argument("--cap", type=int, default=dynamics.DEFAULT_POINT_CAP)
    sp = sub.add_parser("curve", help="curve of degree <= d through points")
    common(sp, spec=False)
    sp.add_argument("spec", nargs="?", help="optional spec file supplying field and points")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--points", help="file with one point per line")
    sp.add_argument("--field", default="Q")
    sp = sub.add_parser("special", help="alpha-special probe")
    common(sp)
    sp.add_argument("--a", required=True)
    sp.add_argument("--ideal", action="append", required=True)
    sp.add_argument("--max-n", type=int, default=8)
    sp = sub.add_parser("modlab", help="module witnesses")
    msub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ch = msub.add_parser("chain")
    common(ch)
    ch.add_argument("--rho", required=True)
    ch.add_argument("--max", type=int, default=10)
    es = msub.add_parser("essential")
    common(es)
    es.add_argument("--rho", required=True)
    es.add_argument("--elem", required=True)
    es.add_argument("--bound", type=int, default=4)
    es.add_argument("--budget", type=int, default=8)
    la = msub.add_parser("lattice")
    common(la)
    la.add_argument("--gens", nargs="*", default=[])
    la.add_argument("--u", default="1")
    la.add_argument("--bound", type=int, default=32)
    sp = sub.add_parser("verify-matrix-units", help="matrix-unit identities in k^n[theta^{+-1}; shift]")
    common(sp, spec=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--field", default="Q")
    return p


COMMANDS = {
    "classify": cmd_classify,
    "decide": cmd_decide,
    "order": cmd_order,
    "orbits": cmd_orbits,
    "cycles": cmd_cycles,
    "curve": cmd_curve,
    "special": cmd_special,
    "modlab": cmd_modlab,
    "verify-matrix-units": cmd_verify,
}


def _digest(text: str, argv: list[str]) -> str:
    canon = [a for a in argv if a not in ("--json", "--stamp")]
    h = hashlib.sha256()
    h.update(text.encode("utf-8"))
    h.update(b"\0")
    h.update("\0".join(canon).encode("utf-8"))
    return h.hexdigest()


def _render_text(command: str, result: dict) -> str:
    if command == "decide":
        return result["explanation"]
    if "csv" in result:
        return result["csv"].rstrip("\n")
    lines = []
    for k, v in result.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True, ensure_ascii=False)
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def run(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_PARSE
    command = args.command
    label = f"modlab {args.action}" if command == "modlab" else command
    text = ""
    status = EXIT_OK
    result: dict = {}
    error = None
    try:
        ctx = None
        if getattr(args, "spec", None):
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
            ctx = load(text)
        if ctx is None and command not in ("curve", "verify-matrix-units"):
            raise PreconditionError("a spec file is required")
        result = COMMANDS[command](ctx, args)
    except (SpecError, OSError) as exc:
        status, error = EXIT_PARSE, str(exc)
    except (UnsupportedClass, NotInvertible, NotStable, PreconditionError, BoundExceeded) as exc:
        status, error = EXIT_UNSUPPORTED, f"{type(exc).__name__}: {exc}"
    except (InvariantViolation, AssertionError) as exc:
        status, error = EXIT_INVARIANT, f"{type(exc).__name__}: {exc}"
    if args.json:
        report = {
            "command": label,
            "inputs_sha256": _digest(text, argv),
            "result": result,
            "warnings": _warnings(result),
            "exit_status": status,
        }
        if error:
            report["error"] = error
        if args.stamp:
            report["timestamp"] = datetime.now(timezone.utc).isoformat()
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False), file=out)
    else:
        if error:
            print(f"error: {error}", file=err)
        else:
            print(_render_text(command, result), file=out)
    return status


def _warnings(result: dict) -> list:
    w = list(result.get("caveats", []))
    w += result.get("warnings", [])
    return w


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
