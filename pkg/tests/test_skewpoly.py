from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewlab import (
    AlgebraMap,
    FieldSpec,
    Ideal,
    NotInvertible,
    NotStable,
    SkewLaurentPoly,
    SkewPoly,
    laurent_ring,
    left_divide,
    membership_one_minus_a_theta,
    norm_product,
    poly_ring,
    power_subring_decompose,
    skew_mul,
    special_probe,
)
from skewlab.polyring import MultiPoly
from skewlab.skewpoly import one_minus_a_theta, recompose
from skewlab.specfile import parse_skew

Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)
U = poly_ring(Q, "x")
X = U.gen(0)
DOUBLE = AlgebraMap.from_strings(U, ["2*x"])
P2 = poly_ring(Q, "x,y")
HENON = AlgebraMap.from_strings(P2, ["y", "x + y^2"])


def quantum_product(f, g, q):
    """Product in k<x, theta>/(theta x - q x theta) from the monomial rule
    x^a theta^b * x^c theta^d = q^(bc) x^(a+c) theta^(b+d)."""
    out = {}
    for b, r in f.coeffs.items():
        for d, s in g.coeffs.items():
            for (a,), cr in r.terms.items():
                for (c,), cs in s.terms.items():
                    key = (a + c, b + d)
                    out[key] = out.get(key, 0) + cr.to_fraction() * cs.to_fraction() * Fraction(q) ** (b * c)
    return {k: v for k, v in out.items() if v}


def as_table(f):
    return {(a, d): c.to_fraction() for d, r in f.coeffs.items() for (a,), c in r.terms.items()}


def test_commutation_rule():
    theta = SkewPoly.theta(HENON)
    for g in P2.gens():
        assert theta * SkewPoly.const(HENON, g) == SkewPoly.const(HENON, HENON(g)) * theta


def test_printing():
    f = SkewPoly(DOUBLE, {0: 3, 2: X})
    assert str(f) == "3 + x*theta^2"
    assert str(SkewPoly.zero(DOUBLE)) == "0"
    assert SkewPoly(DOUBLE, {}).degree() == -1


def test_right_coefficients_round_trip():
    f = SkewPoly(DOUBLE, {1: X, 3: X**2 + 1})
    assert SkewPoly.from_right(DOUBLE, f.right_coeffs()) == f


def test_laurent_theta_inverse():
    L = laurent_ring(Q, "x")
    alpha = AlgebraMap.from_strings(L, ["3*x"])
    t = SkewLaurentPoly.theta(alpha)
    ti = SkewLaurentPoly.theta_inv(alpha)
    assert t * ti == SkewLaurentPoly.one(alpha) == ti * t
    x = SkewLaurentPoly.const(alpha, L.gen(0))
    assert ti * x == SkewLaurentPoly.const(alpha, alpha.inverse()(L.gen(0))) * ti


def test_left_division_example():
    g = SkewPoly.theta(DOUBLE) - 1
    w = SkewPoly(DOUBLE, {2: X, 0: 5})
    h, r = left_divide(g, w)
    assert g * h + r == w and r.degree() < g.degree()


def test_left_division_needs_unit_lead():
    with pytest.raises(NotInvertible):
        left_divide(SkewPoly(DOUBLE, {1: X}), SkewPoly.theta(DOUBLE, 3))


def test_membership_examples():
    a = X
    g = one_minus_a_theta(DOUBLE, a)
    h = SkewPoly(DOUBLE, {0: 1, 2: X + 3})
    m = membership_one_minus_a_theta(g * h, a)
    assert m.member and m.cofactor == h
    assert not membership_one_minus_a_theta(SkewPoly.const(DOUBLE, 1), a)
    assert not membership_one_minus_a_theta(SkewPoly(DOUBLE, {1: 1}), a)


def test_norm_product():
    assert norm_product(X, 3, DOUBLE) == 8 * X**3
    assert norm_product(X, 1, DOUBLE) == X


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_special_probe_least_power(k):
    probe = special_probe(X, [Ideal.principal(X**k)], 8, DOUBLE)
    assert probe.hits[0][1] == k and probe.all_hit and probe.norms_nonzero


def test_special_probe_rejects_unstable_ideal():
    trans = AlgebraMap.from_strings(U, ["x + 1"])
    with pytest.raises(NotStable):
        special_probe(X, [Ideal.principal(X)], 3, trans)


def test_power_subring_decompose():
    f = SkewPoly(HENON, {0: P2("x"), 1: P2("y"), 3: P2("x*y"), 4: P2("1")})
    parts = power_subring_decompose(f, 2)
    assert all(d % 2 == 0 for p in parts for d in p.coeffs)
    assert recompose(parts) == f


# properties ------------------------------------------------------------------------

small = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 2))
upoly = st.dictionaries(st.tuples(st.integers(0, 3)), small, max_size=3).map(lambda d: MultiPoly(U, d))
skews = st.dictionaries(st.integers(0, 3), upoly, max_size=3).map(lambda d: SkewPoly(DOUBLE, d))
p2poly = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=3).map(lambda d: MultiPoly(P2, d))
henon_skews = st.dictionaries(st.integers(0, 2), p2poly, max_size=2).map(lambda d: SkewPoly(HENON, d))


@given(skews, skews)
def test_product_matches_quantum_rule(f, g):
    assert as_table(skew_mul(f, g)) == quantum_product(f, g, 2)


@given(henon_skews, henon_skews, henon_skews)
def test_associative_and_distributive(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(skews, st.integers(1, 3), small.filter(bool))
def test_left_division_contract(w, m, c):
    g = SkewPoly(DOUBLE, {m: U(c), 0: X})
    h, r = left_divide(g, w)
    assert g * h + r == w and r.degree() < m


@given(skews, upoly.filter(bool))
def test_membership_of_products(h, a):
    g = one_minus_a_theta(DOUBLE, a)
    res = membership_one_minus_a_theta(g * h, a)
    assert res.member and g * res.cofactor == g * h


@given(skews, upoly.filter(bool), small.filter(bool))
def test_shifted_by_constant_is_not_member(h, a, c):
    g = one_minus_a_theta(DOUBLE, a)
    assert not membership_one_minus_a_theta(g * h + SkewPoly.const(DOUBLE, c), a).member


@given(henon_skews, st.integers(1, 3))
def test_decompose_recompose(f, n):
    assert recompose(power_subring_decompose(f, n)) == f


@given(henon_skews)
def test_print_parse_round_trip(f):
    assert parse_skew(str(f), HENON) == f


def test_parse_respects_order():
    assert parse_skew("theta*x", HENON) == SkewPoly(HENON, {1: P2("y")})
