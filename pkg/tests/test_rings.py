import random

import pytest
from hypothesis import given, strategies as st

from esplib.errors import RingMismatch, UnsupportedMembership, NotUnimodular
from esplib.rings import (ZZ, Excision, ExcisionZ, Modular, PolyRing, hom_f, hom_g,
                          ideal_contains, inner, parse_ideal, parse_ring, ring_from_json,
                          section_g, unimodular_witness)

Z8 = Modular(8)
Z9 = Modular(9)
F5x = PolyRing(Modular(5), ("x",))
Zab = PolyRing(ZZ, ("a", "b"))

RINGS = [
    ZZ,
    Z8,
    Modular(7),
    Zab,
    F5x,
    Excision(Z8, Z8.ideal(2)),
    ExcisionZ(Z9, Z9.ideal(3)),
    ExcisionZ(ZZ, ZZ.ideal(2)),
]


@pytest.mark.parametrize("R", RINGS, ids=str)
def test_ring_axioms_randomized(R):
    rng = random.Random(7)
    for _ in range(1000):
        a, b, c = (R.random_element(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a + R.zero == a and a * R.one == a
        assert a - a == R.zero


def test_arithmetic_examples():
    assert ZZ(2) + ZZ(3) == ZZ(5)
    assert Modular(4)(2) * Modular(4)(2) == 0
    a, b = Zab.gens()
    assert (a + b) * (a - b) == a ** 2 - b ** 2
    assert str((a + b) * (a - b)) == "a^2 - b^2"


def test_residues_are_reduced():
    assert Z8(-3).v == 5
    assert Z8(19).v == 3


def test_excision_multiplication_examples():
    E = ExcisionZ(ZZ, ZZ.ideal(1))
    assert E((2, 3)) * E((1, -1)) == E((2, -2))
    x = E((5, 7))
    assert E.one * x == x
    assert E((0, 3)) * E((0, 4)) == E((0, 12))


def test_excision_over_r_plus_i():
    R = Excision(Z8, Z8.ideal(2))
    x, y = R((3, 2)), R((5, 4))
    # (3,2)(5,4) = (15, 12 + 10 + 8) = (7, 6) mod 8
    assert x * y == R((7, 6))
    with pytest.raises(ValueError):
        R((1, 3))  # 3 is not in (2)


def test_hom_f_and_g_examples():
    E = ExcisionZ(ZZ, ZZ.ideal(2))
    assert hom_f(E((3, 2))) == ZZ(5)
    R = Excision(Z8, Z8.ideal(2))
    assert hom_g(R((1, 2))) == Z8(3)
    assert hom_g(section_g(R, Z8(5))) == Z8(5)
    assert section_g(R, Z8(5)) == R((5, 0))


@pytest.mark.parametrize("R", [ExcisionZ(Z9, Z9.ideal(3)), ExcisionZ(ZZ, ZZ.ideal(2))], ids=str)
def test_f_is_multiplicative(R):
    rng = random.Random(3)
    for _ in range(300):
        x, y = R.random_element(rng), R.random_element(rng)
        assert hom_f(x * y) == hom_f(x) * hom_f(y)
        assert hom_f(x + y) == hom_f(x) + hom_f(y)


def test_g_is_multiplicative_and_has_section():
    R = Excision(Z8, Z8.ideal(2))
    rng = random.Random(4)
    for _ in range(300):
        x, y = R.random_element(rng), R.random_element(rng)
        assert hom_g(x * y) == hom_g(x) * hom_g(y)
        a = Z8.random_element(rng)
        assert hom_g(section_g(R, a)) == a


def test_ideal_membership_examples():
    assert ideal_contains(ZZ.ideal(2), ZZ(6))
    assert not ideal_contains(Modular(4).ideal(2), Modular(4)(1))
    X = PolyRing(ZZ, ("X",))
    x = X.gen("X")
    assert ideal_contains(X.ideal(x), x ** 2 - 3 * x)
    assert not ideal_contains(X.ideal(x), x + 1)


def test_membership_univariate_prime_field():
    x = F5x.gen("x")
    I = F5x.ideal(x ** 2 + 1)
    assert I.contains((x ** 2 + 1) * (x + 3))
    assert not I.contains(x + 1)


def test_unsupported_membership_raises():
    a, b = Zab.gens()
    with pytest.raises(UnsupportedMembership):
        Zab.ideal(a + b).contains(a)


@pytest.mark.parametrize("R,gens", [(ZZ, [6]), (Z8, [2]), (Modular(12), [4, 6])], ids=str)
def test_ideal_absorption(R, gens):
    rng = random.Random(11)
    I = R.ideal(*gens)
    for _ in range(300):
        x = I.random_member(rng)
        a = R.random_element(rng)
        assert I.contains(x)
        assert I.contains(a * x)


def test_ideal_absorption_excision():
    R = Excision(Z8, Z8.ideal(2))
    K = R.kernel_ideal()
    rng = random.Random(5)
    for _ in range(300):
        x = R((0, 2 * rng.randrange(4)))
        a = R.random_element(rng)
        assert K.contains(x) and K.contains(a * x)
    assert not K.contains(R((1, 0)))


def test_unit_ideal_detected():
    assert Z8.ideal(3).is_unit_ideal()
    assert not Z8.ideal(2).is_unit_ideal()


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        Z8(1) + Modular(9)(1)
    with pytest.raises(RingMismatch):
        Z8(1) == Modular(9)(1)


@pytest.mark.parametrize("text", ["Z", "Z/8", "F5", "poly(Z;a0,a1,b0,b1)", "excision(Z/8;(2))",
                                  "excisionZ(Z/9;(3))", "poly(Z/5;x)"])
def test_parse_and_json_roundtrip(text):
    R = parse_ring(text)
    assert ring_from_json(R.to_json()) == R
    rng = random.Random(1)
    for _ in range(20):
        x = R.random_element(rng)
        assert R.element_from_json(x.to_json()) == x


def test_canonical_json_examples():
    assert ZZ.to_json() == {"kind": "Integers"}
    assert Z8.to_json() == {"kind": "Modular", "modulus": "8"}
    assert ZZ(12345678901234567890).to_json() == "12345678901234567890"
    a, b = Zab.gens()
    assert (2 * a * b - 3).to_json() == [[[1, 1], "2"], [[0, 0], "-3"]]
    assert ExcisionZ(ZZ, ZZ.ideal(2))((3, 4)).to_json() == ["3", "4"]


def test_parse_ideal_and_elements():
    R = parse_ring("poly(Z;a0,a1)")
    I = parse_ideal(R, "(a0, a1^2)")
    assert len(I.generators) == 2
    assert R.parse("a0*a1 - 2*a1^2") == R.gen("a0") * R.gen("a1") - 2 * R.gen("a1") ** 2


def test_unimodular_witness():
    v = [ZZ(6), ZZ(10), ZZ(15)]
    u = unimodular_witness(v)
    assert inner(u, v) == ZZ.one
    with pytest.raises(NotUnimodular):
        unimodular_witness([ZZ(4), ZZ(6)])
    w = [Z8(2), Z8(3)]
    assert inner(unimodular_witness(w), w) == Z8.one
    x = F5x.gen("x")
    p = [x ** 2 + 1, x]
    assert inner(unimodular_witness(p), p) == F5x.one


def test_poly_exact_division_and_units():
    a, b = Zab.gens()
    assert Zab.exact_div((a + b) * (a - 2 * b), a + b) == a - 2 * b
    R = PolyRing(Modular(4), ("t",))
    t = R.gen("t")
    u = 1 + 2 * t
    assert u.is_unit() and u * u.inverse() == R.one


def test_excision_units():
    R = Excision(Z8, Z8.ideal(2))
    x = R((3, 2))
    assert x.is_unit() and x * x.inverse() == R.one
    E = ExcisionZ(Z9, Z9.ideal(3))
    y = E((1, 3))
    assert y.is_unit() and y * y.inverse() == E.one
    assert not E((2, 0)).is_unit()


@given(st.integers(2, 50), st.integers(), st.integers(), st.integers())
def test_modular_matches_integer_arithmetic(m, a, b, c):
    R = Modular(m)
    assert (R(a) * R(b) + R(c)).v == (a * b + c) % m
