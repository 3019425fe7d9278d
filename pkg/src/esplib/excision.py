"""Lifting rows and matrices congruent to the identity into Z + J and R + J."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import CongruenceError, DetCheckFailed, RingMismatch
from .matrix import Matrix, det_berkowitz, mat_det
from .rings import Excision, ExcisionZ, Ideal, Ring, RingElement, inner
from .suslin import suslin_matrix
from .words import LINEAR, GroupWord, random_relative_word

Target = Union[Excision, ExcisionZ]


def _host(target: Target) -> Ring:
    if isinstance(target, ExcisionZ):
        return target.host
    if isinstance(target, Excision):
        return target.base
    raise TypeError(f"not an excision ring: {target}")


def project(x: RingElement, target: Target) -> RingElement:
    """f for Z + J, g for R + J."""
    return target.hom_f(x) if isinstance(target, ExcisionZ) else target.hom_g(x)


def _lift_entry(x: RingElement, diagonal: bool, target: Target) -> RingElement:
    H = _host(target)
    if diagonal:
        return target((1, (x - H.one)))
    return target((0, x))


@dataclass(frozen=True)
class LiftedRow:
    host_row: tuple
    lifted: tuple
    provenance: str  # "Z+J" or "R+J"

    def projected(self) -> tuple:
        target = self.lifted[0].ring
        return tuple(project(x, target) for x in self.lifted)

    def to_json(self):
        return {"host_row": [x.to_json() for x in self.host_row],
                "lifted": [x.to_json() for x in self.lifted],
                "provenance": self.provenance}


def check_congruent_e1(v: Sequence[RingElement], ideal: Ideal):
    H = ideal.ring
    for k, x in enumerate(v):
        if x.ring != H:
            raise RingMismatch("row and ideal live over different rings")
        y = x - H.one if k == 0 else x
        if not ideal.contains(y):
            raise CongruenceError(f"entry {k + 1} of the row is not congruent to e1 mod {ideal.short()}")


def lift_row(v: Sequence[RingElement], target: Target) -> LiftedRow:
    """Componentwise lift of a row congruent to e1: first entry (1, v1 - 1), others (0, v_k)."""
    check_congruent_e1(v, target.ideal)
    lifted = tuple(_lift_entry(x, k == 0, target) for k, x in enumerate(v))
    prov = "Z+J" if isinstance(target, ExcisionZ) else "R+J"
    out = LiftedRow(tuple(v), lifted, prov)
    assert out.projected() == tuple(v)
    return out


def check_congruent_identity(alpha: Matrix, ideal: Ideal):
    H = ideal.ring
    for i in range(alpha.nrows):
        for j in range(alpha.ncols):
            x = alpha[i, j] - H.one if i == j else alpha[i, j]
            if not ideal.contains(x):
                raise CongruenceError(f"entry ({i + 1},{j + 1}) is not congruent to the identity mod {ideal.short()}")


def lift_matrix(alpha: Matrix, target: Target, check_det: bool = True) -> Matrix:
    """The entrywise lift S of alpha = I mod J, with f(S) = alpha and S = I mod 0 + J.

    det alpha = 1 is checked in the host, and det S = (1, 0) is verified with the
    division-free determinant.
    """
    H = _host(target)
    if alpha.ring != H:
        raise RingMismatch(f"matrix over {alpha.ring}, lift target over {H}")
    if not alpha.is_square():
        raise CongruenceError("lift_matrix needs a square matrix")
    check_congruent_identity(alpha, target.ideal)
    if check_det and mat_det(alpha) != H.one:
        raise CongruenceError("det alpha is not 1")
    n = alpha.nrows
    S = Matrix._raw(target, tuple(tuple(_lift_entry(alpha[i, j], i == j, target) for j in range(n))
                                  for i in range(n)))
    if check_det:
        d = det_berkowitz(S)
        if d != target.one:
            raise DetCheckFailed(f"det of the lift is {d}, expected (1, 0)")
    return S


def project_matrix(S: Matrix, target: Target) -> Matrix:
    H = _host(target)
    return Matrix._raw(H, tuple(tuple(project(x, target) for x in row) for row in S.rows))


def is_kernel_identity(S: Matrix, target: Target) -> bool:
    """S = I mod 0 + J."""
    K = target.kernel_ideal()
    return S.congruent_mod(Matrix.identity(target, S.nrows), K)


def suslin_lift_check(v: Sequence[RingElement], w: Sequence[RingElement], target: Target) -> bool:
    """lift_matrix(S_r(v, w)) equals S_r(lift(v), lift(w)) entry for entry."""
    S = suslin_matrix(v, w)
    check_congruent_identity(S, target.ideal)
    lhs = lift_matrix(S, target)
    rhs = suslin_matrix(lift_row(v, target).lifted, lift_row(w, target).lifted)
    return lhs == rhs


def relative_witness_pair(rng: random.Random, r: int, ideal: Ideal, length: int = 4) -> tuple:
    """Rows v = e1 E and w = e1 (E^-1)^t with E a relative elementary word, so <v, w> = 1."""
    R = ideal.ring
    n = r + 1
    word = random_relative_word(rng, n, R, ideal, length, LINEAR, conj_length=1)
    E = word.evaluate()
    Einv = word.inverse().evaluate()
    v = E.row(0)
    w = Einv.T.row(0)
    assert inner(v, w) == R.one
    return v, w


def random_relative_sl(rng: random.Random, size: int, ideal: Ideal, length: int = 4,
                       conj_length: int = 2) -> GroupWord:
    return random_relative_word(rng, size, ideal.ring, ideal, length, LINEAR, conj_length=conj_length)
