"""Constructive reductions: Euclidean rows to e1, shortening, and the symplectic peel.

Every reduction returns a certificate (input, word, output) which can be
replayed letter by letter.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .errors import (FirstRowNotE1, InternalAssertion, NotSymplectic, NotUnimodular,
                     RingMismatch, SearchExhausted)
from .forms import psi
from .matrix import Matrix, perp, unit_row
from .rings import (Ideal, Integers, Modular, PolyRing, Ring, RingElement, ring_from_json,
                    unimodular_witness)
from .words import (LINEAR, SYMPL, ConjFrame, Elem, GroupWord, SymplElem, _apply_letter)


class RcmViolation(InternalAssertion):
    """The second column (or, after clearing row 2, the first column) is not a unit vector."""


class ReplayError(Exception):
    def __init__(self, letter: Optional[int], msg: str):
        super().__init__(msg)
        self.letter = letter


# certificates --------------------------------------------------------------


def _digest(state) -> str:
    if isinstance(state, Matrix):
        body = [[x.to_json() for x in r] for r in state.rows]
    else:
        body = [x.to_json() for x in state]
    return hashlib.sha256(json.dumps(body, separators=(",", ":")).encode()).hexdigest()[:16]


def _step(word: GroupWord, x, state):
    if isinstance(state, Matrix):
        return state @ word.letter_matrix(x)
    return tuple(_apply_letter(x, list(state)))


@dataclass
class ReductionCertificate:
    kind: str  # "row" or "matrix"
    input: object
    word: GroupWord
    output: object
    trace: list = field(default_factory=list)

    @classmethod
    def build(cls, kind, inp, word: GroupWord) -> "ReductionCertificate":
        state = inp
        trace = []
        for x in word.letters:
            state = _step(word, x, state)
            trace.append(_digest(state))
        return cls(kind, inp, word, state, trace)

    @property
    def ring(self) -> Ring:
        return self.word.ring

    @property
    def flavor(self) -> str:
        return self.word.flavor

    def replay(self) -> bool:
        """Re-run the word on the input; raises ReplayError naming the first bad letter."""
        state = self.input
        for k, x in enumerate(self.word.letters, start=1):
            state = _step(self.word, x, state)
            if k <= len(self.trace) and _digest(state) != self.trace[k - 1]:
                raise ReplayError(k, f"replay FAILED at letter {k}")
        if len(self.trace) != len(self.word.letters):
            raise ReplayError(len(self.word.letters), "trace length does not match the word")
        if state != self.output:
            raise ReplayError(None, "replay FAILED: final state differs from the claimed output")
        return True

    def to_json(self) -> dict:
        if self.kind == "matrix":
            enc = lambda m: m.to_json()
        else:
            enc = lambda v: [x.to_json() for x in v]
        return {"kind": self.kind, "ring": self.ring.to_json(), "flavor": self.flavor,
                "input": enc(self.input), "word": self.word.to_json(),
                "output": enc(self.output), "trace": list(self.trace)}

    @classmethod
    def from_json(cls, obj: dict, ring: Optional[Ring] = None) -> "ReductionCertificate":
        r = ring_from_json(obj["ring"])
        if ring is not None and r != ring:
            raise RingMismatch(f"certificate is over {r}, expected {ring}")
        word = GroupWord.from_json(obj["word"], r)
        if word.ring != r:
            raise RingMismatch("word ring differs from the certificate ring")
        if obj["kind"] == "matrix":
            dec = Matrix.from_json
            inp, out = dec(obj["input"]), dec(obj["output"])
            if inp.ring != r or out.ring != r:
                raise RingMismatch("matrix ring differs from the certificate ring")
        else:
            inp = tuple(r.element_from_json(x) for x in obj["input"])
            out = tuple(r.element_from_json(x) for x in obj["output"])
        return cls(obj["kind"], inp, word, out, list(obj.get("trace", [])))


# Euclidean reduction -------------------------------------------------------


def _euclidean(R: Ring) -> bool:
    return isinstance(R, (Integers, Modular)) or (isinstance(R, PolyRing) and R.is_euclidean)


def _euclid_on(v: list, idx: Sequence[int], R: Ring, emit: Callable[[int, int, RingElement], None]):
    """Euclid among the positions idx (0-based) until at most one is nonzero.

    ``emit(p, k, q)`` must perform v_k <- v_k + q v_p (and record it).
    """
    while True:
        nz = [k for k in idx if not v[k].is_zero()]
        if len(nz) <= 1:
            return nz[0] if nz else None
        p = min(nz, key=lambda k: (R.euclid_norm(v[k]), k))
        for k in nz:
            if k == p:
                continue
            q, _ = R.euclid_divmod(v[k], v[p])
            if not q.is_zero():
                emit(p, k, -q)


def reduce_to_e1(v: Sequence[RingElement]) -> ReductionCertificate:
    """An elementary word eps with v eps = e1 (Z, Z/m via lifts, F_p[x])."""
    v = list(v)
    n = len(v)
    if n < 2:
        raise ValueError("rows of length >= 2")
    R = v[0].ring
    if not _euclidean(R):
        raise NotImplementedError(f"no Euclidean reduction over {R}")
    inp = tuple(v)
    letters = []

    def emit(p, k, q):
        x = Elem(p + 1, k + 1, q)
        letters.append(x)
        v[:] = _apply_letter(x, v)

    p = _euclid_on(v, range(n), R, emit)
    if p is None or not v[p].is_unit():
        raise NotUnimodular(f"row {inp} generates a proper ideal")
    u = v[p]
    if p != 0:
        emit(p, 0, u.inverse())          # v_1 = 1
        emit(0, p, -u)                   # v_p = 0
    elif u != R.one:
        emit(0, 1, R.one)                # v_2 = u
        emit(1, 0, (R.one - u) * u.inverse())  # v_1 = 1
        emit(0, 1, -u)                   # v_2 = 0
    word = GroupWord(n, R, tuple(letters), LINEAR)
    cert = ReductionCertificate.build("row", inp, word)
    if cert.output != unit_row(R, n):
        raise InternalAssertion("Euclidean reduction did not reach e1")
    return cert


def symplectic_reduce_to_e1(v: Sequence[RingElement]) -> GroupWord:
    """A symplectic word eps with v eps = e1 over a Euclidean ring.

    Euclid inside every hyperbolic pair clears the even slots; with those zero,
    se_ij for odd i, j acts as a plain column operation on the odd slots.
    """
    v = list(v)
    n = len(v)
    if n % 2 or n < 2:
        raise ValueError("even length >= 2 required")
    R = v[0].ring
    if not _euclidean(R):
        raise NotImplementedError(f"no Euclidean reduction over {R}")
    inp = tuple(v)
    letters = []

    def emit(p, k, q):
        x = SymplElem(p + 1, k + 1, q)
        letters.append(x)
        v[:] = _apply_letter(x, v)

    for a in range(0, n, 2):
        p = _euclid_on(v, (a, a + 1), R, emit)
        if p == a + 1:
            emit(a + 1, a, R.one)         # v_a = v_{a+1}
            emit(a, a + 1, -R.one)        # v_{a+1} = 0
    p = _euclid_on(v, range(0, n, 2), R, emit)
    if p is None or not v[p].is_unit():
        raise NotUnimodular(f"row {inp} generates a proper ideal")
    assert all(v[k].is_zero() for k in range(1, n, 2))
    u = v[p]
    if p != 0:
        emit(p, 0, u.inverse())
        emit(0, p, -u)
    elif u != R.one:
        emit(0, 1, R.one)
        emit(1, 0, (R.one - u) * u.inverse())
        emit(0, 1, -u)
    if tuple(v) != unit_row(R, n):
        raise InternalAssertion("symplectic reduction did not reach e1")
    return GroupWord(n, R, tuple(letters), SYMPL)


def relative_symplectic_reduce_to_e1(v: Sequence[RingElement], ideal: Ideal) -> GroupWord:
    """A relative symplectic word (parameters of innermost letters in ideal) with v eps = e1.

    Needs v = e1 mod ideal with v_1 a unit; other cases go through the orbit search.
    """
    v = list(v)
    n = len(v)
    R = v[0].ring
    if n % 2 or n < 4:
        raise ValueError("relative reduction needs even length >= 4")
    for k, x in enumerate(v):
        if not ideal.contains(x - R.one if k == 0 else x):
            raise ValueError("row is not congruent to e1 mod the ideal")
    if not v[0].is_unit():
        raise NotUnimodular("first entry is not a unit; use the orbit-search reducer")
    letters = []

    def emit(x):
        letters.append(x)
        v[:] = _apply_letter(x, v)

    u_inv = v[0].inverse()
    for j in range(3, n + 1):
        # se_1j(z): v_j += z v_1, side effect on v_2 only
        if not v[j - 1].is_zero():
            emit(SymplElem(1, j, -v[j - 1] * u_inv))
    if not v[1].is_zero():
        emit(SymplElem(1, 2, -v[1] * u_inv))
    u = v[0]
    if u != R.one:
        # conjugate se_31(u^-1 - 1) by se_13(1), then clear slot 3
        outer_w = GroupWord(n, R, (SymplElem(1, 3, R.one),), SYMPL)
        inner_w = GroupWord(n, R, (SymplElem(3, 1, u.inverse() - R.one),), SYMPL)
        emit(ConjFrame(outer_w, inner_w))
        emit(SymplElem(1, 3, -v[2]))
    if tuple(v) != unit_row(R, n):
        raise InternalAssertion("relative reduction did not reach e1")
    return GroupWord(n, R, tuple(letters), SYMPL, ideal)


# reducers used by the peel ------------------------------------------------

RowReducer = Callable[[tuple], GroupWord]


def euclid_reducer(row) -> GroupWord:
    return symplectic_reduce_to_e1(row)


@lru_cache(maxsize=16)
def _bfs_tree(ring: Ring, size: int):
    from .orbits import absolute_generators, orbit_tree
    return orbit_tree(unit_row(ring, size), absolute_generators(size, ring, SYMPL), ring)


def bfs_reducer(row) -> GroupWord:
    """Path recovery in the orbit tree of e1 under all se_ij(z) (finite rings)."""
    R = row[0].ring
    tree = _bfs_tree(R, len(row))
    return tree.word_to_start(row, SYMPL)


@lru_cache(maxsize=16)
def _relative_bfs_tree(ring: Ring, size: int, ideal: Ideal, level: int):
    from .orbits import relative_orbit_tree
    return relative_orbit_tree(unit_row(ring, size), ideal, SYMPL, ring, level)


def relative_reducer(ideal: Ideal, level: int = 1) -> RowReducer:
    def reduce(row) -> GroupWord:
        R = row[0].ring
        if row[0].is_unit():
            return relative_symplectic_reduce_to_e1(row, ideal)
        tree = _relative_bfs_tree(R, len(row), ideal, level)
        return tree.word_to_start(row, SYMPL, ideal)
    return reduce


def relative_bfs_reducer(ideal: Ideal, level: int = 1) -> RowReducer:
    def reduce(row) -> GroupWord:
        tree = _relative_bfs_tree(row[0].ring, len(row), ideal, level)
        return tree.word_to_start(row, SYMPL, ideal)
    return reduce


# shortening -----------------------------------------------------------------


@dataclass
class ShortenResult:
    t: tuple
    row: tuple
    witness: tuple


def _ideal_candidates(ideal: Ideal, bound: int):
    R = ideal.ring
    if R.is_finite:
        return [x for x in R.elements() if ideal.contains(x)]
    if isinstance(R, Integers):
        import math
        g = 0
        for x in ideal.generators:
            g = math.gcd(g, x.v)
        out = [R(0)]
        for k in range(1, bound + 1):
            out += [R(k * g), R(-k * g)]
        return out
    raise NotImplementedError(f"shorten over {R}")


def shorten(v: Sequence[RingElement], ideal: Ideal, S: Optional[Sequence[int]] = None,
            bound: int = 6) -> ShortenResult:
    """t with t_i in ideal (zero off S) making (a_0 + a_m t_0, ..., a_{m-1} + a_m t_{m-1}) unimodular.

    Deterministic search: candidates ordered by residue (finite rings) or by
    absolute value (Z), vectors in product order.
    """
    v = tuple(v)
    m = len(v) - 1
    if m < 1:
        raise ValueError("need a row of length >= 2")
    R = v[0].ring
    S = range(m) if S is None else sorted(set(S))
    if any(not 0 <= i < m for i in S):
        raise ValueError("S must index the first m entries")
    cands = _ideal_candidates(ideal, bound)
    free = list(S)
    # search by increasing max |t_i| index in the candidate list
    order = sorted(itertools.product(range(len(cands)), repeat=len(free)), key=lambda ks: (max(ks, default=0), ks))
    last = v[m]
    for ks in order:
        t = [R.zero] * m
        for i, kk in zip(free, ks):
            t[i] = cands[kk]
        row = tuple(v[i] + last * t[i] for i in range(m))
        try:
            u = unimodular_witness(row)
        except NotUnimodular:
            continue
        return ShortenResult(tuple(t), row, u)
    raise SearchExhausted("no shortening found within the search bound")


# symplectic peel -------------------------------------------------------------


@dataclass
class PeelResult:
    word: GroupWord
    gamma: Matrix
    certificate: ReductionCertificate


def _check_symplectic(alpha: Matrix):
    if not alpha.is_square() or alpha.nrows % 2:
        raise NotSymplectic("symplectic matrices are square of even size")
    if not alpha.is_symplectic(psi(alpha.nrows, alpha.ring)):
        raise NotSymplectic("alpha^t psi alpha != psi")


def symplectic_peel(alpha: Matrix, eps_prime: GroupWord, relative_ideal: Optional[Ideal] = None) -> PeelResult:
    """Extend eps' by se_2j(z) letters so that alpha eps = I_2 + gamma (block sum)."""
    _check_symplectic(alpha)
    R = alpha.ring
    n2 = alpha.nrows
    if n2 < 4:
        raise ValueError("the peel needs size >= 4")
    if eps_prime.size != n2 or eps_prime.ring != R or eps_prime.flavor != SYMPL:
        raise FirstRowNotE1("eps' must be a symplectic word of the same size and ring")
    I = Matrix.identity(R, n2)
    if relative_ideal is not None:
        if not alpha.congruent_mod(I, relative_ideal):
            raise ValueError("alpha is not congruent to I mod the ideal")
        eps_prime = eps_prime.with_ideal(relative_ideal)  # re-validates the relative letters
    M = alpha @ eps_prime.evaluate()
    e1 = unit_row(R, n2, 1)
    if M.row(0) != e1:
        raise FirstRowNotE1("e1 alpha eps' is not e1")
    if M.col(1) != unit_row(R, n2, 2):
        raise RcmViolation("first row is e1 but the second column is not e2^t")
    letters = []
    order = list(range(3, n2 + 1)) + [1]
    for j in order:
        z = -M[1, j - 1]
        if z.is_zero():
            continue
        if relative_ideal is not None and not relative_ideal.contains(z):
            raise InternalAssertion(f"peel parameter {z} is not in the ideal")
        x = SymplElem(2, j, z)
        M = M @ x.matrix(n2, R)
        if M.row(0) != e1:
            raise InternalAssertion("appending se_2j changed the first row")
        letters.append(x)
    if M.row(1) != unit_row(R, n2, 2):
        raise InternalAssertion("row 2 was not cleared")
    if M.col(0) != e1:
        raise RcmViolation("after clearing row 2 the first column is not e1^t")
    gamma = M.submatrix(range(2, n2), range(2, n2))
    if perp(Matrix.identity(R, 2), gamma) != M:
        raise InternalAssertion("alpha eps is not block diagonal")
    word = GroupWord(n2, R, eps_prime.letters + tuple(letters), SYMPL, relative_ideal)
    cert = ReductionCertificate.build("matrix", alpha, word)
    if cert.output != M:
        raise InternalAssertion("certificate output differs from the peeled matrix")
    if relative_ideal is not None and not gamma.congruent_mod(Matrix.identity(R, n2 - 2), relative_ideal):
        raise InternalAssertion("gamma is not congruent to I mod the ideal")
    return PeelResult(word, gamma, cert)


def peel_iterate(alpha: Matrix, target_size: int, row_reducer: RowReducer = euclid_reducer,
                 relative_ideal: Optional[Ideal] = None) -> PeelResult:
    """Repeated peel: alpha eps = I_{2n-d} + gamma with gamma of size target_size."""
    _check_symplectic(alpha)
    R = alpha.ring
    n2 = alpha.nrows
    if target_size % 2 or not 2 <= target_size <= n2:
        raise ValueError("target size must be even, at least 2 and at most the matrix size")
    total = GroupWord(n2, R, (), SYMPL, relative_ideal)
    current = alpha
    offset = 0
    while current.nrows > target_size:
        step = symplectic_peel(current, row_reducer(current.row(0)), relative_ideal)
        total = total * step.word.shifted(offset, n2)
        current = step.gamma
        offset += 2
    cert = ReductionCertificate.build("matrix", alpha, total)
    expected = perp(Matrix.identity(R, offset), current) if offset else alpha
    if cert.output != expected:
        raise InternalAssertion("staged peel does not reproduce the block form")
    return PeelResult(total, current, cert)
