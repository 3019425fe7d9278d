import random

import pytest

from esplib.errors import CapExceeded
from esplib.matrix import row_times
from esplib.orbits import (absolute_generators, absolute_orbit, enumerate_unimodular_rows,
                           enumerate_unit_containing_rows, orbit_bfs, orbit_tree,
                           relative_orbit_certify, relative_orbit_tree)
from esplib.rings import Modular
from esplib.words import LINEAR, SYMPL

E1 = (1, 0, 0, 0)


@pytest.mark.parametrize("m,count", [(2, 15), (3, 80), (4, 240), (5, 624), (6, 1200), (8, 3840)])
def test_absolute_orbit_of_e1_is_all_unimodular_rows(m, count):
    R = Modular(m)
    lin = absolute_orbit(E1, R, LINEAR)
    sym = absolute_orbit(E1, R, SYMPL)
    assert len(lin) == len(sym) == count
    assert lin == sym == enumerate_unimodular_rows(R, 4)


def test_unit_containing_rows_over_local_rings():
    for m, count in ((2, 15), (4, 240)):
        R = Modular(m)
        assert enumerate_unit_containing_rows(R, 4) == absolute_orbit(E1, R, SYMPL)
        assert len(enumerate_unit_containing_rows(R, 4)) == count


def test_small_orbits_frozen():
    R = Modular(4)
    assert len(absolute_orbit((1, 0), R, SYMPL)) == 12
    # a non-unimodular start stays within 2*(unimodular rows mod 2)
    assert len(absolute_orbit((2, 0, 0, 0), R, SYMPL)) == 15


def test_orbit_independent_of_generator_order():
    R = Modular(6)
    gens = absolute_generators(4, R, SYMPL)
    shuffled = list(gens)
    random.Random(3).shuffle(shuffled)
    assert orbit_bfs(E1, gens, R) == orbit_bfs(E1, shuffled, R)


def test_orbit_cap():
    R = Modular(8)
    with pytest.raises(CapExceeded):
        absolute_orbit(E1, R, SYMPL, cap=100)


def test_orbit_requires_finite_ring():
    from esplib.rings import ZZ
    with pytest.raises(ValueError):
        absolute_orbit((ZZ(1), ZZ(0)), ZZ, SYMPL)


def test_tree_words_reach_every_row():
    R = Modular(4)
    tree = orbit_tree(E1, absolute_generators(4, R, SYMPL), R)
    rng = random.Random(0)
    for row in rng.sample(sorted(tree.rows), 40):
        w = tree.word_to_start(row, SYMPL)
        v = tuple(R(x) for x in row)
        assert w.apply(v) == tuple(R(x) for x in E1)
        assert row_times(v, w.evaluate()) == tuple(R(x) for x in E1)


@pytest.mark.parametrize("m,g,size", [(4, 2, 16), (8, 2, 256), (8, 4, 16)])
def test_relative_certification_frozen(m, g, size):
    R = Modular(m)
    I = R.ideal(g)
    for flavor in (LINEAR, SYMPL):
        c = relative_orbit_certify(E1, I, flavor, R)
        assert c.certified and c.level == 1
        assert len(c.lower) == len(c.upper) == size
    lin = relative_orbit_certify(E1, I, LINEAR, R)
    sym = relative_orbit_certify(E1, I, SYMPL, R)
    assert lin.lower == sym.lower


def test_relative_degenerate_ideals():
    R = Modular(4)
    unit = relative_orbit_certify(E1, R.ideal(1), SYMPL, R)
    assert unit.certified and unit.level == 0 and len(unit.lower) == 240
    zero = relative_orbit_certify(E1, R.ideal(0), SYMPL, R)
    assert zero.certified and zero.lower == frozenset({E1})


def test_relative_orbit_rows_congruent_to_start():
    R = Modular(8)
    I = R.ideal(2)
    c = relative_orbit_certify(E1, I, SYMPL, R)
    for row in c.lower:
        assert all((a - b) % 2 == 0 for a, b in zip(row, E1))


def test_relative_tree_words_have_ideal_parameters():
    R = Modular(4)
    I = R.ideal(2)
    tree = relative_orbit_tree(E1, I, SYMPL, R, level=1)
    for row in sorted(tree.rows):
        w = tree.word_to_start(row, SYMPL, I)
        assert w.apply(tuple(R(x) for x in row)) == tuple(R(x) for x in E1)
        assert all(I.contains(z) for z in w.inner_parameters())


def test_certificate_json():
    R = Modular(4)
    d = relative_orbit_certify(E1, R.ideal(2), SYMPL, R).to_json()
    assert d["certified"] is True and d["level"] == 1
