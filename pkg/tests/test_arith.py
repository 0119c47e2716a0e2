import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superspecial.arith import Fp2, Poly, is_prime, legendre_symbol, poly_pow

PRIMES = (7, 13, 101)


def elements(p):
    return st.tuples(st.integers(0, p - 1), st.integers(0, p - 1)).map(lambda ab: Fp2(p)(*ab))


@st.composite
def field_and_elements(draw, n=3):
    p = draw(st.sampled_from(PRIMES))
    return (p, *[draw(elements(p)) for _ in range(n)])


@given(field_and_elements())
def test_ring_axioms(args):
    _, a, b, c = args
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(field_and_elements(n=1))
def test_inverse(args):
    _, a = args
    if a:
        assert a * a.inverse() == 1
        assert a / a == 1
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


@given(field_and_elements(n=1))
def test_square_root(args):
    p, a = args
    s = (a * a).sqrt()
    assert s * s == a * a
    root = a.sqrt()
    assert (root is None) == (not a.is_square())


@given(field_and_elements(n=1))
def test_text_and_code_round_trip(args):
    p, a = args
    F = Fp2(p)
    assert F.parse(str(a)) == a
    assert F.from_code(a.code) == a


def test_frobenius_is_an_automorphism():
    F = Fp2(13)
    rng = random.Random(1)
    for _ in range(50):
        a, b = F.random_element(rng), F.random_element(rng)
        assert (a * b) ** 13 == a ** 13 * b ** 13
        assert a ** (13 * 13) == a


def test_generator_is_a_root_of_the_non_residue():
    for p in (7, 11, 13, 97):
        F = Fp2(p)
        assert F.t * F.t == F.r
        assert legendre_symbol(F.r, p) == -1
        assert all(legendre_symbol(k, p) == 1 for k in range(1, F.r))


def test_exactly_half_of_the_units_are_squares():
    F = Fp2(11)
    squares = sum(1 for a in F.elements() if a and a.is_square())
    assert squares == (121 - 1) // 2


def test_field_is_cached_and_validated():
    assert Fp2(13) is Fp2(13)
    for bad in (4, 5, 9, 2, 3):
        with pytest.raises(ValueError):
            Fp2(bad)


def test_parse_forms():
    F = Fp2(13)
    assert F.parse("t") == F.t
    assert F.parse("-t") == -F.t
    assert F.parse("3-2*t") == 3 - 2 * F.t
    assert F.parse("5*t+1") == 1 + 5 * F.t
    with pytest.raises(ValueError):
        F.parse("")


def test_is_prime_and_legendre():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert legendre_symbol(-1, 13) == 1
    assert legendre_symbol(-1, 11) == -1
    assert legendre_symbol(13, 13) == 0


class TestPoly:
    def test_trailing_zeros_trimmed(self):
        F = Fp2(7)
        assert Poly(F, [1, 2, 0, 0]).degree == 1
        assert Poly(F, []).degree == -1

    def test_roots_round_trip(self):
        F = Fp2(13)
        rng = random.Random(7)
        for _ in range(20):
            roots = {F.random_element(rng) for _ in range(5)}
            f = Poly.from_roots(F, roots, lead=3)
            assert set(f.roots()) == roots
            assert f.lead == 3

    def test_roots_with_multiplicity(self):
        F = Fp2(11)
        f = Poly.from_roots(F, [F(2), F(2), F(5)])
        assert sorted(f.roots()) == [F(2), F(2), F(5)]

    def test_zero_polynomial_has_no_root_set(self):
        with pytest.raises(ValueError):
            Poly(Fp2(7), []).roots()

    @settings(max_examples=30)
    @given(st.lists(st.integers(0, 12), min_size=1, max_size=6), st.lists(st.integers(0, 12), min_size=1, max_size=6), st.integers(0, 12))
    def test_product_evaluates_pointwise(self, a, b, x):
        F = Fp2(13)
        f, g = Poly(F, a), Poly(F, b)
        assert (f * g)(F(x)) == f(F(x)) * g(F(x))
        assert (f + g)(F(x)) == f(F(x)) + g(F(x))

    def test_power_matches_repeated_product(self):
        F = Fp2(17)
        f = Poly(F, [F.t, 3, 0, 1])
        expected = Poly(F, [1])
        for _ in range(9):
            expected = expected * f
        assert poly_pow(f, 9) == expected
        assert f ** 9 == expected

    def test_derivative(self):
        F = Fp2(7)
        f = Poly(F, [1, 1, 1, 1])
        assert f.derivative() == Poly(F, [1, 2, 3])

    def test_serialize_round_trip(self):
        F = Fp2(13)
        f = Poly(F, [F.t, 0, -1, 3 + 2 * F.t])
        assert Poly.parse(F, f.serialize()) == f
        with pytest.raises(ValueError):
            Poly.parse(F, "1,,2")

    def test_divmod_linear(self):
        F = Fp2(13)
        f = Poly.from_roots(F, [F(1), F(4), F.t])
        q, r = f.divmod_linear(F(4))
        assert r == 0
        assert set(q.roots()) == {F(1), F.t}
