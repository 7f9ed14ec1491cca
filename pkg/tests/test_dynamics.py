import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewlab import (
    AlgebraMap,
    FieldSpec,
    PreconditionError,
    curve_membership,
    fixed_points_symbolic,
    laurent_ring,
    orbit,
    orbital_exponent,
    periodic_points_ff,
    point_map,
    poly_ring,
)
from skewlab.dynamics import curve_monomials, rational_roots

Q = FieldSpec.rationals()


def henon(p, images=("y", "x + y^2")):
    return AlgebraMap.from_strings(poly_ring(FieldSpec.prime(p), "x,y"), list(images))


def brute_cycles(p, phi):
    pts = list(itertools.product(range(p), repeat=2))
    seen, lengths = set(), {}
    for pt in pts:
        if pt in seen:
            continue
        cur, n = pt, 0
        while True:
            seen.add(cur)
            cur = phi(cur)
            n += 1
            if cur == pt:
                break
        lengths[n] = lengths.get(n, 0) + 1
    return lengths


def test_point_map_direction():
    phi = point_map(henon(5))
    assert tuple(int(c.value) for c in phi((1, 2))) == (2, 0)


def test_f2_cycles_exact():
    dec = periodic_points_ff(henon(2))
    assert dec.histogram == {1: 1, 3: 1}
    cycles = [list(cyc) for cyc in dec.cycles]
    assert [(0, 0)] in cycles
    three = next(c for c in cycles if len(c) == 3)
    i = three.index((0, 1))
    assert three[i:] + three[:i] == [(0, 1), (1, 1), (1, 0)]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("images", [("y", "x + y^2"), ("y", "-x + y^3 + 1"), ("x + y", "y")])
def test_cycles_match_enumeration(p, images):
    alpha = henon(p, images)
    phi = point_map(alpha)
    dec = periodic_points_ff(alpha)
    assert dec.histogram == brute_cycles(p, lambda pt: tuple(int(c.value) for c in phi(pt)))
    assert sum(n * c for n, c in dec.histogram.items()) == p * p == dec.total_points


def test_laurent_cycles_on_torus():
    L = laurent_ring(FieldSpec.prime(5), "x,y")
    dec = periodic_points_ff(AlgebraMap.monomial(L, [[0, -1], [1, 0]]))
    assert dec.total_points == 16


def test_exports():
    dec = periodic_points_ff(henon(3))
    assert dec.histogram_csv().splitlines()[0] == "length,count"
    assert dec.to_json() == periodic_points_ff(henon(3)).to_json()


def as_ints(points):
    return sorted(tuple(int(c.value) for c in pt) for pt in points)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_symbolic_fixed_points_match_enumeration(p):
    alpha = henon(p)
    rep = fixed_points_symbolic(alpha, 1)
    dec = periodic_points_ff(alpha)
    assert rep.complete
    assert as_ints(rep.points) == sorted(dec.fixed_points())


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("images", [("y", "x + y^2"), ("y", "2*x + y^2 + 1")])
def test_symbolic_period_two_matches_enumeration(p, images):
    alpha = henon(p, images)
    rep = fixed_points_symbolic(alpha, 2)
    assert as_ints(rep.points) == periodic_points_ff(alpha).points_of_period_dividing(2)


def test_symbolic_over_rationals():
    alpha = AlgebraMap.from_strings(poly_ring(Q, "x,y"), ["y", "2*x + y^2 - 2"])
    rep = fixed_points_symbolic(alpha, 1)
    # x^2 + x - 2 = (x - 1)(x + 2)
    assert sorted(a.to_fraction() for a, _ in rep.points) == [-2, 1]


def test_rational_roots():
    roots, complete = rational_roots([Q(-2), Q(1), Q(1)], Q)
    assert sorted(r.to_fraction() for r in roots) == [-2, 1] and complete
    roots, complete = rational_roots([Q(-2), Q(0), Q(1)], Q)
    assert roots == [] and complete


def test_orbits():
    alpha = AlgebraMap.from_strings(poly_ring(Q, "x,y"), ["y", "x + y^2"])
    assert orbit((0, 0), alpha).describe() == "Periodic(1)"
    assert orbit((1, 0), alpha, max_steps=5).describe() == "OpenBeyond(5)"
    rot = AlgebraMap.linear(poly_ring(Q, "x,y"), [[0, -1], [1, 0]])
    assert orbit((1, 2), rot).period == 4


def test_orbital_exponent():
    trans = AlgebraMap.from_strings(poly_ring(Q, "x,y"), ["x + 1", "y"])
    exp = orbital_exponent([(0, 0), (2, 0), (5, 0)], trans)
    assert exp.n == 6
    assert orbital_exponent([(0, 0), (0, 1)], trans).n == 1
    rot = AlgebraMap.linear(poly_ring(Q, "x,y"), [[0, -1], [1, -1]])
    with pytest.raises(PreconditionError):
        orbital_exponent([(1, 0)], rot)


def test_curve_examples():
    res = curve_membership([(0, 0), (1, 1), (2, 4)], 2)
    assert res and all(res.polynomial.evaluate(pt) == 0 for pt in [(0, 0), (1, 1), (2, 4), (3, 9)])
    assert not curve_membership([(0, 0), (1, 0), (0, 1)], 1)


def test_curve_distinct_points():
    with pytest.raises(PreconditionError):
        curve_membership([(0, 0), (0, 0)], 1)


def test_curve_monomials():
    assert curve_monomials(1) == [(0, 0), (1, 0), (0, 1)]
    assert len(curve_monomials(3)) == 10


pts = st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), unique=True, max_size=8)


@given(pts, st.integers(1, 3))
def test_curve_vanishes_or_points_are_generic(points, d):
    res = curve_membership(points, d)
    n = len(curve_monomials(d))
    if res:
        assert all(res.polynomial.evaluate(pt) == 0 for pt in points)
        assert res.rank < n
    else:
        assert res.rank == n
