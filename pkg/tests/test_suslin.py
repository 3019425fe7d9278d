import random

import pytest

from esplib.errors import DimensionMismatch
from esplib.forms import alternative_sigma_jr, j_form
from esplib.matrix import Matrix, det_bareiss
from esplib.rings import ZZ, Modular, inner
from esplib.suslin import (SuslinData, conjugated_symplectic_check, factorial_orbit_check,
                           factorial_row, module_verdicts, suslin_matrix, symbolic_data,
                           verify_det_formula, verify_product_identity, verify_suslin_identity,
                           witness_pair)


def zz(*xs):
    return tuple(ZZ(x) for x in xs)


def test_suslin_small_structure():
    assert suslin_matrix(zz(5), zz(7)).tolist() == [["5"]]
    assert suslin_matrix(zz(2, 3), zz(-1, 1)).tolist() == [["2", "3"], ["-1", "-1"]]
    d = symbolic_data(2)
    R = d.ring
    a0, a1, a2 = (R.gen(f"a{k}") for k in range(3))
    b0, b1, b2 = (R.gen(f"b{k}") for k in range(3))
    S = d.S
    assert S.nrows == 4
    assert S.row(0) == (a0, R.zero, a1, a2)
    assert S.row(3)[3] == b0


def test_suslin_dimension_checks():
    with pytest.raises(DimensionMismatch):
        suslin_matrix(zz(1, 2), zz(1))
    with pytest.raises(ValueError):
        suslin_matrix(zz(*range(8)), zz(*range(8)))


def test_factorial_row_examples():
    assert factorial_row(zz(2, 3, 4, 5)) == zz(2, 3, 16, 125)
    assert factorial_row(zz(7, 1)) == zz(7, 1)


def test_worked_pair():
    d = SuslinData(zz(2, 3), zz(-1, 1))
    assert d.pairing == ZZ.one
    assert d.product_identity() and d.residue_identity() and d.det_formula()
    assert d.conjugated_symplectic()
    assert conjugated_symplectic_check(1, (2, 3), (-1, 1))


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_product_identity_symbolic(r):
    assert verify_product_identity(r)


def test_product_identity_r5():
    assert verify_product_identity(5)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6])
def test_suslin_identities(r):
    assert verify_suslin_identity(r, n_numeric=10, seed=1)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_det_formula(r):
    assert verify_det_formula(r)


def test_det_formula_numeric_general_pairing():
    rng = random.Random(4)
    for _ in range(20):
        v = zz(*(rng.randint(-5, 5) for _ in range(3)))
        w = zz(*(rng.randint(-5, 5) for _ in range(3)))
        assert det_bareiss(suslin_matrix(v, w)) == inner(v, w) ** 2


def test_witness_pairs_are_unimodular():
    rng = random.Random(7)
    for r in range(0, 5):
        for _ in range(100):
            v, w = witness_pair(rng, r)
            assert inner(v, w) == ZZ.one
    R = Modular(8)
    v, w = witness_pair(rng, 3, R)
    assert inner(v, w) == R.one


def test_random_pairs_all_checks():
    rng = random.Random(2)
    for r in (1, 2, 5):
        for _ in range(5 if r == 5 else 30):
            d = SuslinData(*witness_pair(rng, r))
            assert d.product_identity() and d.residue_identity()
            if r % 4 == 1:
                assert d.conjugated_symplectic()
            if r % 4 == 2:
                assert d.conjugated_form_check()


def test_alternative_sigma_gives_same_verdicts():
    for r in (1, 2):
        alt = alternative_sigma_jr(r)
        a = module_verdicts(r, None, seed=3, count=10)
        b = module_verdicts(r, alt, seed=3, count=10)
        assert a == b and all(a.values())


def test_json_payload():
    d = SuslinData(zz(2, 3), zz(-1, 1)).to_json()
    assert d["S_text"] == [["2", "3"], ["-1", "-1"]]
    assert Matrix.from_json(d["J"]) == j_form(1)


def test_factorial_congruence_property():
    # if v = e1 mod I then the factorial row is e1 mod I as well
    rng = random.Random(5)
    R = Modular(8)
    for _ in range(100):
        v = (R(1 + 2 * rng.randrange(4)),) + tuple(R(2 * rng.randrange(4)) for _ in range(3))
        f = factorial_row(v)
        assert (f[0] - R.one).v % 2 == 0 and all(x.v % 2 == 0 for x in f[1:])


def test_factorial_orbit_check():
    R = Modular(8)
    assert factorial_orbit_check((1, 2, 2, 2), R.ideal(2), R)
    assert factorial_orbit_check((3, 2, 2, 6), R.ideal(2), R)
    with pytest.raises(ValueError):
        factorial_orbit_check((1, 2), R.ideal(2), R)
