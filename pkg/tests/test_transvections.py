import random

import pytest

from esplib.errors import DimensionMismatch, NotInKernel, OrthogonalityViolated, WitnessInvalid
from esplib.forms import hat
from esplib.matrix import Matrix
from esplib.rings import ZZ, Modular, inner
from esplib.suslin import witness_pair
from esplib.transvections import (b_solutions, derived_b, kernel_decomposition, outer,
                                  pair_transvection, pair_transvection_product, rank1_transvection,
                                  reconstruct, solve_b_by_expansion, symbolic_orthogonal_family,
                                  symbolic_rank1, symplecticity)

Z8 = Modular(8)


def zz(*xs):
    return tuple(ZZ(x) for x in xs)


def test_rank1_example():
    assert rank1_transvection(ZZ(1), zz(1, 0, 0, 0)).tolist() == [
        ["1", "1", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]
    with pytest.raises(DimensionMismatch):
        rank1_transvection(ZZ(1), zz(1, 0, 0))


def test_pair_example():
    assert pair_transvection(zz(1, 0, 0, 0), zz(0, 0, 1, 0)).tolist() == [
        ["1", "0", "0", "1"], ["0", "1", "0", "0"], ["0", "1", "1", "0"], ["0", "0", "0", "1"]]


@pytest.mark.parametrize("size", [2, 4, 6])
def test_rank1_symplectic_symbolically(size):
    a, v = symbolic_rank1(size)
    assert symplecticity(rank1_transvection(a, v))


def test_rank1_additive_in_a():
    R = symbolic_rank1(4)[0].ring
    a, v = symbolic_rank1(4)
    b = a * a + R.gen("v1")
    assert rank1_transvection(a, v) @ rank1_transvection(b, v) == rank1_transvection(a + b, v)
    assert rank1_transvection(a, v) @ rank1_transvection(-a, v) == Matrix.identity(R, 4)


def test_rank1_relative_congruence():
    I = Z8.ideal(2)
    rng = random.Random(0)
    for _ in range(50):
        v = tuple(Z8(rng.randrange(8)) for _ in range(4))
        M = rank1_transvection(Z8(2 * rng.randrange(4)), v, I)
        assert M.congruent_mod(Matrix.identity(Z8, 4), I)
    with pytest.raises(AssertionError):
        rank1_transvection(Z8(1), (Z8(1), Z8(0), Z8(0), Z8(0)), I)


def test_pair_requires_orthogonality():
    with pytest.raises(OrthogonalityViolated):
        pair_transvection(zz(1, 0, 0, 0), zz(0, 1, 0, 0))
    assert inner(hat(zz(1, 0, 0, 0)), zz(0, 1, 0, 0)) == ZZ(1)


def test_pair_symplectic_random():
    rng = random.Random(1)
    for R in (ZZ, Z8):
        for _ in range(50):
            w = tuple(R(rng.randint(-4, 4)) for _ in range(4))
            wh = hat(w)
            v = [R.zero] * 4
            for p in range(4):
                for q in range(p + 1, 4):
                    s = R(rng.randint(-3, 3))
                    v[p] = v[p] + s * wh[q]
                    v[q] = v[q] - s * wh[p]
            assert symplecticity(pair_transvection(v, w))


def test_kernel_example_frozen():
    c = kernel_decomposition(zz(3, -2), zz(2, 3), zz(-1, 1))
    assert c == {(1, 2): ZZ(3), (2, 1): ZZ(2)}
    assert reconstruct(c, zz(2, 3)) == zz(3, -2)


def test_kernel_errors():
    with pytest.raises(WitnessInvalid):
        kernel_decomposition(zz(3, -2), zz(2, 3), zz(1, 1))
    with pytest.raises(NotInKernel):
        kernel_decomposition(zz(1, 1), zz(2, 3), zz(-1, 1))
    with pytest.raises(DimensionMismatch):
        kernel_decomposition(zz(1), zz(2, 3), zz(-1, 1))


@pytest.mark.parametrize("R", [ZZ, Modular(7), Z8], ids=str)
def test_kernel_decomposition_500(R):
    rng = random.Random(2)
    for _ in range(500):
        n = rng.randint(2, 5)
        v, u = witness_pair(rng, n - 1, R)
        w = [R.zero] * n
        for _ in range(3):
            i, j = rng.sample(range(n), 2)
            c = R(rng.randint(-5, 5))
            w[i] = w[i] + c * v[j]
            w[j] = w[j] - c * v[i]
        assert reconstruct(kernel_decomposition(w, v, u), v) == tuple(w)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_pair_product_symbolic(k):
    vs, w = symbolic_orthogonal_family(k, 4)
    pp = pair_transvection_product(vs, w)
    assert pp.product() == pp.lhs
    assert pp.b == solve_b_by_expansion(vs, w)
    if k == 1:
        assert pp.b == w[0].ring.zero


def test_b_closed_form_two_factors():
    vs, w = symbolic_orthogonal_family(2, 4)
    assert derived_b(vs, w) == -inner(hat(vs[0]), vs[1])


def test_pair_product_over_z8_frozen():
    rng = random.Random(1)
    w = [Z8(rng.randrange(8)) for _ in range(4)]
    wh = hat(w)
    vs = []
    for _ in range(3):
        v = [Z8.zero] * 4
        for p in range(4):
            for q in range(p + 1, 4):
                s = Z8(2 * rng.randrange(4))
                v[p] = v[p] + s * wh[q]
                v[q] = v[q] - s * wh[p]
        vs.append(tuple(v))
    pp = pair_transvection_product(vs, w, Z8.ideal(2))
    assert pp.b == Z8(4)
    assert b_solutions(vs, w) == [Z8(4)]


def test_b_in_ideal_random_z8():
    rng = random.Random(3)
    I = Z8.ideal(2)
    for _ in range(20):
        w = [Z8(rng.randrange(8)) for _ in range(4)]
        wh = hat(w)
        vs = []
        for _ in range(rng.randint(1, 4)):
            v = [Z8.zero] * 4
            for p in range(4):
                for q in range(p + 1, 4):
                    s = Z8(2 * rng.randrange(4))
                    v[p] = v[p] + s * wh[q]
                    v[q] = v[q] - s * wh[p]
            vs.append(tuple(v))
        pp = pair_transvection_product(vs, w, I)
        assert pp.b in b_solutions(vs, w) and I.contains(pp.b)
        assert pp.correction.congruent_mod(Matrix.identity(Z8, 4), I)


def test_pair_product_rejects_entries_outside_ideal():
    w = (Z8(1), Z8(0), Z8(0), Z8(0))
    with pytest.raises(ValueError):
        pair_transvection_product([(Z8(1), Z8(0), Z8(0), Z8(0))], w, Z8.ideal(2))


def test_outer_product():
    assert outer(zz(1, 2), zz(3, 4)).tolist() == [["3", "4"], ["6", "8"]]
