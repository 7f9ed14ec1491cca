"""Acceptance suite: one marked group per criterion, summarized at the end of the run."""

import random
import subprocess
import sys
from fractions import Fraction

import pytest
import sympy

from skewlab import (
    AlgebraMap,
    FieldSpec,
    Ideal,
    SkewPoly,
    chain_check,
    curve_membership,
    decide,
    fixed_points_symbolic,
    laurent_ring,
    lattice_contract,
    left_divide,
    linear_finite_order_test,
    matrix_units_verify,
    norm_product,
    periodic_points_ff,
    poly_ring,
    special_probe,
    length_one_multiplier,
)
from skewlab.modlab import theta_absorption_holds, module_elem
from skewlab.polyring import MultiPoly
from skewlab.specfile import parse_spec

from conftest import SPEC_DIR

criterion = pytest.mark.criterion
Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)


def random_upoly(rng, ring, max_deg=3, field_values=None):
    terms = {}
    for d in range(rng.randint(0, max_deg) + 1):
        if rng.random() < 0.7:
            c = rng.choice(field_values) if field_values else Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            terms[(d,)] = c
    return MultiPoly(ring, terms)


def random_skew(rng, alpha, field_values=None, max_theta=3):
    return SkewPoly(alpha, {j: random_upoly(rng, alpha.ring, field_values=field_values) for j in range(rng.randint(0, max_theta) + 1)})


# 1 ---------------------------------------------------------------------------------------


@criterion(1, "skew arithmetic: associativity, theta*r = alpha(r)*theta, additive degrees")
@pytest.mark.parametrize("field,count", [(F5, 500), (Q, 200)], ids=["F5", "Q"])
def test_skew_arithmetic(field, count):
    rng = random.Random(1 + field.characteristic)
    ring = poly_ring(field, "x")
    alpha = AlgebraMap.from_strings(ring, ["2*x"])
    values = list(range(5)) if field.characteristic else None
    theta = SkewPoly.theta(alpha)
    for _ in range(count):
        f, g, h = (random_skew(rng, alpha, values) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        r = random_upoly(rng, ring, field_values=values)
        assert theta * SkewPoly.const(alpha, r) == SkewPoly.const(alpha, alpha(r)) * theta
        if f and g:
            assert (f * g).degree() == f.degree() + g.degree()


# 2 ---------------------------------------------------------------------------------------


@criterion(2, "division contract: w = g*h + r with r in R, additive remainder, uniqueness")
def test_division_contract():
    rng = random.Random(2)
    ring = poly_ring(Q, "x")
    alpha = AlgebraMap.from_strings(ring, ["2*x"])
    theta = SkewPoly.theta(alpha)
    for k in range(200):
        u = Fraction(rng.randint(1, 5), rng.randint(1, 3)) * rng.choice([1, -1])
        g = (SkewPoly.one(alpha) if k % 2 == 0 else SkewPoly.const(alpha, u)) - theta
        w1, w2 = random_skew(rng, alpha), random_skew(rng, alpha)
        h1, r1 = left_divide(g, w1)
        h2, r2 = left_divide(g, w2)
        assert g * h1 + r1 == w1 and r1.degree() <= 0
        h12, r12 = left_divide(g, w1 + w2)
        assert r12 == r1 + r2 and h12 == h1 + h2
        bump = random_skew(rng, alpha)
        if bump:
            # any other quotient forces a remainder of positive theta-degree
            assert (w1 - g * (h1 + bump)).degree() >= 1


# 3 ---------------------------------------------------------------------------------------


@criterion(3, "lattice correspondence: (x^k) contracts to (x^k); r*theta = u*alpha^-1(r) mod (u - theta)S")
def test_lattice_correspondence():
    ring = poly_ring(Q, "x")
    alpha = AlgebraMap.from_strings(ring, ["2*x"])
    x = ring.gen(0)
    for k in range(1, 6):
        assert lattice_contract([x**k], 1, alpha).ideal == Ideal.principal(x**k)
    rng = random.Random(3)
    for _ in range(50):
        assert theta_absorption_holds(random_upoly(rng, ring, max_deg=5), 1, alpha)


# 4 ---------------------------------------------------------------------------------------


@criterion(4, "non-Artinian chain: strict descent of theta^m S + rho S for m <= 10")
@pytest.mark.parametrize(
    "names,images,rho",
    [("x", ["2*x"], "x"), ("x,y", ["2*x", "4*y"], "y - x^2"), ("x,y", ["y", "x + y^2"], "y - x^2")],
)
def test_chain(names, images, rho):
    ring = poly_ring(Q, names)
    rep = chain_check(ring(rho), 10, AlgebraMap.from_strings(ring, images))
    assert rep.strict and len(rep.certificates) == 10


# 5 ---------------------------------------------------------------------------------------


@criterion(5, "length-one elements: alpha^-i(rho) maps them into V minus 0")
def test_length_one_multiplier():
    rng = random.Random(5)
    ring = poly_ring(Q, "x")
    alpha = AlgebraMap.from_strings(ring, ["2*x"])
    x = ring.gen(0)
    done = 0
    while done < 20:
        i = rng.randint(0, 6)
        r = random_upoly(rng, ring)
        tail = random_upoly(rng, ring)
        m = module_elem(alpha, x, SkewPoly(alpha, {i: r}) + SkewPoly.const(alpha, x * tail))
        if m.length() != 1:
            continue
        u, image = length_one_multiplier(m)
        assert u == alpha.twist(x, -i)
        assert image and image.in_V()
        done += 1


# 6 ---------------------------------------------------------------------------------------


@criterion(6, "matrix units in k^n[theta^+-1; shift] for n <= 6 over Q and F5")
@pytest.mark.parametrize("field", [Q, F5], ids=["Q", "F5"])
@pytest.mark.parametrize("n", range(1, 7))
def test_matrix_units(n, field):
    rep = matrix_units_verify(n, field)
    assert rep.ok, rep.failures()
    expected = {"f^(n-1) = e_n theta^(n-1)", "a f^(n-1) = e_1", "f b = 1 - e_1", "a f^(n-1) + f b = 1", "f^n = 0"}
    expected |= {f"e_1 theta^{k} e_1 = 0" for k in range(1, n)}
    assert expected <= set(rep.checks)


# 7 ---------------------------------------------------------------------------------------


def int_matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def brute_order(A, limit=100):
    P = A
    for m in range(1, limit + 1):
        if P == [[1, 0], [0, 1]]:
            return m
        P = int_matmul(P, A)
    return None


@criterion(7, "order engine: known orders and agreement with brute-force powering on GL2(Z)")
def test_order_engine():
    assert str(linear_finite_order_test([[0, -1], [1, 0]], Q)) == "Finite(4)"
    assert str(linear_finite_order_test([[0, -1], [1, 1]], Q)) == "Finite(6)"
    assert str(linear_finite_order_test([[1, 1], [0, 1]], Q)).startswith("InfiniteCertified(")
    rng = random.Random(7)
    seen = 0
    while seen < 100:
        A = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        if A[0][0] * A[1][1] - A[0][1] * A[1][0] not in (1, -1):
            continue
        seen += 1
        v = linear_finite_order_test(A, Q)
        m = brute_order(A)
        assert (v.n if v.is_finite else None) == m, (A, str(v))
        assert v.is_finite or v.is_infinite


# 8 ---------------------------------------------------------------------------------------


def henon_fp(p):
    return AlgebraMap.from_strings(poly_ring(FieldSpec.prime(p), "x,y"), ["y", "x + y^2"])


@criterion(8, "Henon cycles: exact over F2; p^2 points and matching fixed points over F3, F5")
def test_henon_dynamics():
    dec = periodic_points_ff(henon_fp(2))
    assert dec.histogram == {1: 1, 3: 1}
    cycles = {c[0]: c for c in dec.cycles}
    assert cycles[(0, 0)] == ((0, 0),)
    assert cycles[(0, 1)] == ((0, 1), (1, 1), (1, 0))
    for p in (3, 5):
        dec = periodic_points_ff(henon_fp(p))
        assert sum(n * c for n, c in dec.histogram.items()) == p * p
        rep = fixed_points_symbolic(henon_fp(p), 1)
        sym = sorted(tuple(int(c.value) for c in pt) for pt in rep.points)
        assert rep.complete and sym == sorted(dec.fixed_points())


# 9 ---------------------------------------------------------------------------------------


@criterion(9, "curve test: y - x^2 through (0,0),(1,1),(2,4); none of degree 1 through (0,0),(1,0),(0,1)")
def test_curve():
    res = curve_membership([(0, 0), (1, 1), (2, 4)], 2)
    assert res
    ring = res.polynomial.ring
    target = ring("y - x^2")
    c = res.polynomial.coeff((0, 1))
    assert c and res.polynomial == target * c
    assert all(res.polynomial.evaluate(pt) == 0 for pt in [(0, 0), (1, 1), (2, 4)])
    assert not curve_membership([(0, 0), (1, 0), (0, 1)], 1)


# 10 --------------------------------------------------------------------------------------

TABLE = [
    (Q, "x", ["x + 1"], False, "Fails", "R3"),
    (Q, "x", ["-x"], False, "Holds", "R1"),
    (FieldSpec.prime(7), "x", ["3*x + 5"], False, "Holds", "R1"),
    (Q, "x,y", ["2*x", "3*y"], False, "Fails", "R4"),
    (Q, "x,y", ["y", "x"], False, "Holds", "R1"),
    (FieldSpec.prime(5), "x,y", ["x^2*y", "x*y"], True, "Holds", "R6"),
    (Q, "x,y", ["y", "x + y^2"], False, "Unknown(qn4)", "R5"),
    (Q, "x,y", ["x^-1*y", "x"], True, "Unknown(qn5)", "R7"),
]


def table_verdict(field, names, images, laurent):
    ring = (laurent_ring if laurent else poly_ring)(field, names)
    return decide(ring, AlgebraMap.from_strings(ring, images))


@criterion(10, "decision table rows with citations; identical traces across three runs")
@pytest.mark.parametrize("field,names,images,laurent,outcome,rule", TABLE)
def test_decision_table(field, names, images, laurent, outcome, rule):
    runs = [table_verdict(field, names, images, laurent) for _ in range(3)]
    assert len({v.to_json() for v in runs}) == 1
    v = runs[0]
    assert str(v) == outcome and v.rule == rule
    if rule == "R1":
        family = {"x": "R3"}.get(names, "R2")
        assert family in v.rules


# 11 --------------------------------------------------------------------------------------


@criterion(11, "special probe: N_n(x) = 2^(n(n-1)/2) x^n and least n with N_n(x) in (x^k) is k")
def test_special_probe():
    ring = poly_ring(Q, "x")
    alpha = AlgebraMap.from_strings(ring, ["2*x"])
    x = ring.gen(0)
    sx = sympy.Symbol("x")
    for n in range(1, 7):
        expanded = sympy.expand(sympy.prod([2**i * sx for i in range(n)]))
        assert expanded == 2 ** (n * (n - 1) // 2) * sx**n
        assert norm_product(x, n, alpha) == 2 ** (n * (n - 1) // 2) * x**n
    ideals = [Ideal.principal(x**k) for k in range(1, 6)]
    probe = special_probe(x, ideals, 8, alpha)
    assert [least for _, least in probe.hits] == [1, 2, 3, 4, 5]


# 12 --------------------------------------------------------------------------------------

FIXTURES = sorted(SPEC_DIR.glob("*.spec"))


@criterion(12, "CLI: fixtures round-trip through the pretty-printer; --json output byte-identical")
@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_cli_round_trip(path):
    spec = parse_spec(path.read_text())
    assert parse_spec(spec.pretty()) == spec


@criterion(12, "CLI: fixtures round-trip through the pretty-printer; --json output byte-identical")
@pytest.mark.parametrize(
    "argv",
    [
        ["decide", "henon.spec"],
        ["classify", "twisted_swap.spec"],
        ["order", "rotation.spec"],
        ["cycles", "henon.spec", "--prime", "5", "--list"],
        ["special", "quantum_plane.spec", "--a", "a", "--ideal", "cube"],
        ["verify-matrix-units", "--n", "4"],
    ],
    ids=lambda a: a[0],
)
def test_cli_json_stable(argv):
    argv = [str(SPEC_DIR / a) if a.endswith(".spec") else a for a in argv]
    outs = [
        subprocess.run([sys.executable, "-m", "skewlab", *argv, "--json"], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] and outs[0].startswith(b"{")
