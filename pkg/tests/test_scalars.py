from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from skewlab import FieldMismatch, FieldSpec, cyclotomic_poly, root_of_unity_order
from skewlab.scalars import euler_phi, is_root_of_unity

Q = FieldSpec.rationals()


def test_rational_arithmetic():
    assert Q(Fraction(1, 2)) + Q(Fraction(1, 3)) == Q(Fraction(5, 6))
    assert Q(3).inverse() == Fraction(1, 3)
    assert Q("2/4") == Fraction(1, 2)


def test_prime_field_arithmetic():
    F7 = FieldSpec.prime(7)
    assert F7(3) * F7(5) == 1
    assert F7(3).inverse() == 5
    assert F7(Fraction(1, 2)) == 4
    assert F7(-1) == 6
    assert list(F7.elements())[-1] == 6


@pytest.mark.parametrize("p", [0, 1, 4, 9, 2**64 + 13])
def test_bad_primes(p):
    with pytest.raises(ValueError):
        FieldSpec.prime(p)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        FieldSpec.prime(5)(1) + FieldSpec.prime(7)(1)


def test_zero_inverse():
    with pytest.raises(ZeroDivisionError):
        Q(0).inverse()


@pytest.mark.parametrize("d", list(range(1, 40)) + [105, 210])
def test_cyclotomic_matches_sympy(d):
    t = sympy.symbols("t")
    expected = sympy.Poly(sympy.cyclotomic_poly(d, t), t).all_coeffs()[::-1]
    assert list(cyclotomic_poly(d)) == [int(c) for c in expected]


def test_cyclotomic_small():
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


@pytest.mark.parametrize("n", [1, 3, 4, 5, 6, 8, 12])
def test_zeta_has_order_n(n):
    F = FieldSpec.cyclotomic(n)
    z = F.zeta()
    assert z**n == 1
    assert root_of_unity_order(z) == n
    assert F.degree == euler_phi(n)


def test_minus_zeta6_has_order_3():
    F = FieldSpec.cyclotomic(6)
    assert root_of_unity_order(-F.zeta()) == 3
    assert root_of_unity_order(F.zeta()) == 6


def test_qzeta_non_root_of_unity():
    F = FieldSpec.cyclotomic(5)
    assert root_of_unity_order(F.zeta() + 1) is None
    assert root_of_unity_order(F(2)) is None
    assert root_of_unity_order(-F.zeta()) == 10


@pytest.mark.parametrize("p", [2, 3, 7, 13])
def test_fp_orders_brute_force(p):
    F = FieldSpec.prime(p)
    for a in range(1, p):
        k = next(k for k in range(1, p) if pow(a, k, p) == 1)
        assert root_of_unity_order(F(a)) == k


def test_rational_roots_of_unity():
    assert root_of_unity_order(Q(1)) == 1
    assert root_of_unity_order(Q(-1)) == 2
    assert not is_root_of_unity(Q(2))


def test_printing():
    F = FieldSpec.cyclotomic(6)
    assert str(F.zeta() ** 2) == "(zeta - 1)"
    assert str(Q(Fraction(-3, 4))) == "-3/4"
    assert str(FieldSpec.prime(5)) == "Fp(5)"


fields = st.sampled_from([Q, FieldSpec.prime(5), FieldSpec.prime(7), FieldSpec.cyclotomic(5), FieldSpec.cyclotomic(12)])


@st.composite
def scalar_triples(draw):
    F = draw(fields)

    def one():
        if F.kind == "Qzeta":
            coeffs = draw(st.lists(st.integers(-4, 4), min_size=F.degree, max_size=F.degree))
            return sum((F(c) * F.zeta() ** i for i, c in enumerate(coeffs)), F(0))
        return F(Fraction(draw(st.integers(-20, 20)), draw(st.integers(1, 6))) if F.kind == "Q" else draw(st.integers(0, 100)))

    return F, one(), one(), one()


@given(scalar_triples())
def test_field_axioms(t):
    F, a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == F(0)
    if a:
        assert a * a.inverse() == F(1)
        assert (a / a) == F(1)
        assert a ** -2 == (a * a).inverse()


@given(scalar_triples())
def test_hash_consistent_with_eq(t):
    _, a, b, _ = t
    if a == b:
        assert hash(a) == hash(b)
