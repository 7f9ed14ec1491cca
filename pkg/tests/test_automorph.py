import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewlab import AlgebraMap, FieldSpec, NotInvertible, PreconditionError, UnsupportedClass, laurent_ring, poly_ring, quotient_ring
from skewlab.automorph import classify_plane, linear_finite_order_test, minimal_polynomial, order

Q = FieldSpec.rationals()
F5 = FieldSpec.prime(5)
P2 = poly_ring(Q, "x,y")


def brute_order(alpha, limit):
    for m in range(1, limit + 1):
        if alpha.power(m).is_identity():
            return m
    return None


@pytest.mark.parametrize(
    "images,kind",
    [
        (["2*x", "3*y"], "triangular_i"),
        (["2*x", "y + 1"], "triangular_ii"),
        (["4*x + y^2", "2*y"], "triangular_iii"),
        (["y", "x + y^2"], "henon"),
        (["y", "-x + y^3 + 1"], "henon"),
        (["x + y", "x"], "linear"),
        (["x + y^2", "3*y"], "unclassified"),
        (["x*y", "y"], "unclassified"),
    ],
)
def test_plane_classes(images, kind):
    alpha = AlgebraMap.from_strings(P2, images)
    assert classify_plane(alpha).kind == kind


def test_tri_iii_mismatch_note():
    c = classify_plane(AlgebraMap.from_strings(P2, ["x + y^2", "3*y"]))
    assert c.kind == "unclassified" and c.notes


def test_composition_square_flag():
    h = AlgebraMap.from_strings(P2, ["y", "x + y^2"])
    g = AlgebraMap.from_strings(P2, ["y", "2*x + y^3"])
    comp = AlgebraMap.compose_list([h, g])
    assert classify_plane(comp).square is True
    t = AlgebraMap.from_strings(P2, ["2*x", "y + 1"])
    assert classify_plane(AlgebraMap.compose_list([h, t])).square is None
    lin = AlgebraMap.from_strings(P2, ["x + y", "y"])
    assert classify_plane(AlgebraMap.compose_list([lin, t])).square is False


def test_classify_plane_needs_plane():
    with pytest.raises(UnsupportedClass):
        classify_plane(AlgebraMap.from_strings(poly_ring(Q, "x"), ["2*x"]))


@pytest.mark.parametrize(
    "images",
    [["y", "x + y^2"], ["8*x + y^3", "2*y"], ["x + y", "y"], ["2*x", "y - 1"], ["y", "-x + y^2 + 1"]],
)
def test_inverse_round_trip(images):
    alpha = AlgebraMap.from_strings(P2, images)
    inv = alpha.inverse()
    for g in P2.gens():
        assert alpha(inv(g)) == g and inv(alpha(g)) == g


def test_laurent_monomial_inverse():
    L = laurent_ring(Q, "x,y")
    alpha = AlgebraMap.monomial(L, [[2, 1], [1, 1]])
    inv = alpha.inverse()
    for g in L.gens():
        assert alpha(inv(g)) == g
    scaled = AlgebraMap.from_strings(L, ["2*x", "3*x*y^-1"])
    for g in L.gens():
        assert scaled(scaled.inverse()(g)) == g


def test_laurent_image_must_be_unit():
    with pytest.raises(PreconditionError):
        AlgebraMap.from_strings(laurent_ring(Q, "x"), ["x + 1"])


def test_non_invertible():
    U = poly_ring(Q, "x")
    with pytest.raises(NotInvertible):
        AlgebraMap.from_strings(U, ["x^2"]).inverse()


@pytest.mark.parametrize(
    "matrix,expected",
    [
        ([[0, -1], [1, 0]], "Finite(4)"),
        ([[0, -1], [1, -1]], "Finite(3)"),
        ([[0, -1], [1, 1]], "Finite(6)"),
        ([[-1, 0], [0, -1]], "Finite(2)"),
        ([[1, 0], [0, 1]], "Finite(1)"),
    ],
)
def test_linear_finite_orders(matrix, expected):
    assert str(linear_finite_order_test(matrix, Q)) == expected


@pytest.mark.parametrize("matrix", [[[1, 1], [0, 1]], [[2, 1], [1, 1]], [[-1, 1], [0, -1]], [[2, 0], [0, 1]]])
def test_linear_infinite(matrix):
    assert linear_finite_order_test(matrix, Q).is_infinite


def test_minimal_polynomial_of_scalar_matrix():
    assert len(minimal_polynomial([[3, 0], [0, 3]], Q)) == 2


def test_order_over_finite_field_matches_iteration():
    rng = random.Random(7)
    for _ in range(20):
        while True:
            A = [[rng.randrange(5) for _ in range(2)] for _ in range(2)]
            if (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % 5:
                break
        alpha = AlgebraMap.linear(poly_ring(F5, "x,y"), A)
        v = order(alpha)
        assert v.is_finite and v.n == brute_order(alpha, 600)


@pytest.mark.parametrize(
    "field,images",
    [
        (FieldSpec.prime(5), ["2*x + y^2", "3*y"]),
        (FieldSpec.prime(5), ["x + y", "y"]),
        (FieldSpec.prime(5), ["x + y^3", "y"]),
        (FieldSpec.prime(7), ["2*x", "y + 3"]),
        (FieldSpec.prime(3), ["2*x + 1"]),
    ],
)
def test_structured_orders_match_iteration(field, images):
    names = "x,y" if len(images) == 2 else "x"
    alpha = AlgebraMap.from_strings(poly_ring(field, names), images)
    v = order(alpha)
    assert v.is_finite and v.n == brute_order(alpha, 200)


def test_henon_infinite_and_affine_char0():
    assert order(AlgebraMap.from_strings(P2, ["y", "x + y^2"])).is_infinite
    assert order(AlgebraMap.from_strings(poly_ring(Q, "x"), ["x + 1"])).is_infinite
    assert str(order(AlgebraMap.from_strings(poly_ring(Q, "x"), ["-x + 3"]))) == "Finite(2)"


def test_monomial_orders():
    L = laurent_ring(Q, "x,y")
    assert str(order(AlgebraMap.monomial(L, [[0, -1], [1, 0]]))) == "Finite(4)"
    assert order(AlgebraMap.monomial(L, [[2, 1], [1, 1]])).is_infinite


def test_quotient_ring_order_by_iteration():
    Z = FieldSpec.cyclotomic(6)
    U = poly_ring(Z, "x")
    S = quotient_ring(U, U("x^3 - 1")).ring
    alpha = AlgebraMap.from_strings(S, ["zeta^2*x"])
    assert str(order(alpha)) == "Finite(3)"


def test_unknown_beyond_bound():
    S = quotient_ring(poly_ring(Q, "x"), poly_ring(Q, "x")("x^2")).ring
    v = order(AlgebraMap.from_strings(S, ["2*x"]), bound=5)
    assert str(v) == "UnknownBeyondBound(5)"


ints = st.integers(-3, 3)


@settings(max_examples=40)
@given(ints, ints, ints, ints)
def test_gl2z_order_matches_iteration(a, b, c, d):
    if a * d - b * c not in (1, -1):
        return
    v = linear_finite_order_test([[a, b], [c, d]], Q)
    alpha = AlgebraMap.linear(P2, [[a, b], [c, d]])
    m = brute_order(alpha, 100)
    if v.is_finite:
        assert m == v.n
    else:
        assert m is None


@given(st.integers(1, 3), st.integers(1, 3))
def test_power_is_composition(i, j):
    alpha = AlgebraMap.from_strings(P2, ["y", "x + y^2"])
    assert alpha.power(i).compose(alpha.power(j)) == alpha.power(i + j)
