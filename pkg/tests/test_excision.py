import random

import pytest

from esplib import excision
from esplib.errors import CongruenceError, DetCheckFailed, RingMismatch
from esplib.excision import (check_congruent_e1, is_kernel_identity, lift_matrix, lift_row,
                             project, project_matrix, random_relative_sl, relative_witness_pair,
                             suslin_lift_check)
from esplib.matrix import Matrix
from esplib.rings import ZZ, Excision, ExcisionZ, Modular

Z8 = Modular(8)
Z9 = Modular(9)


def test_lift_row_example():
    T = ExcisionZ(ZZ, ZZ.ideal(2))
    r = lift_row((ZZ(3), ZZ(2)), T)
    assert r.lifted == (T((1, 2)), T((0, 2)))
    assert r.projected() == (ZZ(3), ZZ(2))
    assert r.to_json() == {"host_row": ["3", "2"], "lifted": [["1", "2"], ["0", "2"]], "provenance": "Z+J"}
    U = Excision(Z8, Z8.ideal(2))
    assert lift_row((Z8(3), Z8(2)), U).provenance == "R+J"


def test_lift_row_rejects_non_congruent():
    T = ExcisionZ(ZZ, ZZ.ideal(2))
    with pytest.raises(CongruenceError):
        lift_row((ZZ(2), ZZ(2)), T)
    with pytest.raises(CongruenceError):
        check_congruent_e1((ZZ(1), ZZ(1)), ZZ.ideal(2))


def test_lift_matrix_example():
    T = ExcisionZ(ZZ, ZZ.ideal(2))
    A = Matrix(ZZ, [[3, 2], [4, 3]])
    S = lift_matrix(A, T)
    assert S.tolist() == [["(1, 2)", "(0, 2)"], ["(0, 4)", "(1, 2)"]]
    assert project_matrix(S, T) == A
    assert is_kernel_identity(S, T)


def test_lift_is_unique_over_finite_excision():
    # every entry with the right image and the right class mod 0 + J is the one we pick
    U = Excision(Z8, Z8.ideal(2))
    K = U.kernel_ideal()
    for a in (Z8(1), Z8(3), Z8(5), Z8(7)):
        cands = [x for x in U.elements() if project(x, U) == a and K.contains(x - U.one)]
        assert cands == [lift_row((a, Z8(0)), U).lifted[0]]
    for a in (Z8(0), Z8(2), Z8(6)):
        cands = [x for x in U.elements() if project(x, U) == a and K.contains(x)]
        assert cands == [lift_row((Z8(1), a), U).lifted[1]]


@pytest.mark.parametrize("host,g", [(Z9, 3), (ZZ, 2), (Z8, 2)], ids=str)
def test_lift_is_multiplicative(host, g):
    rng = random.Random(4)
    I = host.ideal(g)
    T = ExcisionZ(host, I)
    for _ in range(15):
        size = rng.randint(2, 3)
        a = random_relative_sl(rng, size, I, length=3, conj_length=1).evaluate()
        b = random_relative_sl(rng, size, I, length=3, conj_length=1).evaluate()
        assert lift_matrix(a @ b, T) == lift_matrix(a, T) @ lift_matrix(b, T)


def test_lifts_into_r_plus_j():
    rng = random.Random(5)
    I = Z8.ideal(2)
    U = Excision(Z8, I)
    for _ in range(20):
        a = random_relative_sl(rng, 3, I, length=3).evaluate()
        S = lift_matrix(a, U)
        assert project_matrix(S, U) == a and is_kernel_identity(S, U)


def test_lift_matrix_errors():
    T = ExcisionZ(ZZ, ZZ.ideal(2))
    with pytest.raises(CongruenceError):
        lift_matrix(Matrix(ZZ, [[1, 1], [0, 1]]), T)
    with pytest.raises(CongruenceError):
        lift_matrix(Matrix(ZZ, [[3, 0], [0, 1]]), T)  # det 3
    with pytest.raises(RingMismatch):
        lift_matrix(Matrix.identity(Z8, 2), T)


def test_det_check_failure_detected(monkeypatch):
    T = ExcisionZ(ZZ, ZZ.ideal(2))
    monkeypatch.setattr(excision, "det_berkowitz", lambda S: T((1, 2)))
    with pytest.raises(DetCheckFailed):
        lift_matrix(Matrix(ZZ, [[3, 2], [4, 3]]), T)


def test_suslin_lift_examples():
    T = ExcisionZ(ZZ, ZZ.ideal(2))
    assert suslin_lift_check((ZZ(3), ZZ(2)), (ZZ(3), ZZ(-4)), T)
    rng = random.Random(6)
    for host, g in ((Z9, 3), (ZZ, 2)):
        I = host.ideal(g)
        T = ExcisionZ(host, I)
        for r in (1, 2):
            for _ in range(3):
                assert suslin_lift_check(*relative_witness_pair(rng, r, I, length=6), T)
