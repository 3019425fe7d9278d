"""Suslin matrices S_r(v, w), factorial rows and checks of the Suslin identities."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from .errors import DimensionMismatch, NotUnimodular
from .forms import MAX_R, SignedPermutation, j_form, psi, sigma_jr
from .matrix import Matrix, blocks, det_bareiss
from .rings import ZZ, Integers, PolyRing, Ring, RingElement, inner, unimodular_witness


def _check_r(r):
    if not 0 <= r <= MAX_R:
        raise ValueError(f"r out of range: need 0 <= r <= {MAX_R}")


def suslin_matrix(v: Sequence[RingElement], w: Sequence[RingElement], r: Optional[int] = None) -> Matrix:
    """The 2^r x 2^r Suslin matrix, by the two-block recursion."""
    if len(v) != len(w):
        raise DimensionMismatch("v and w must have the same length")
    if r is None:
        r = len(v) - 1
    _check_r(r)
    if len(v) != r + 1:
        raise DimensionMismatch(f"rows must have length r+1 = {r + 1}")
    return _suslin(tuple(v), tuple(w))


def _suslin(v, w) -> Matrix:
    R = v[0].ring
    if len(v) == 1:
        return Matrix._raw(R, ((v[0],),))
    h = 1 << (len(v) - 2)
    a0 = Matrix.identity(R, h).scale(v[0])
    b0 = Matrix.identity(R, h).scale(w[0])
    upper = _suslin(v[1:], w[1:])
    lower = -_suslin(w[1:], v[1:]).T
    return blocks(a0, upper, lower, b0)


def factorial_row(v: Sequence[RingElement]) -> tuple:
    """(v0, v1, v2^2, ..., vr^r)."""
    return tuple(x if k < 2 else x ** k for k, x in enumerate(v))


@dataclass
class SuslinData:
    v: tuple
    w: tuple
    sigma: Optional[SignedPermutation] = None

    def __post_init__(self):
        self.v, self.w = tuple(self.v), tuple(self.w)
        if len(self.v) != len(self.w):
            raise DimensionMismatch("v and w must have the same length")
        _check_r(self.r)

    @property
    def r(self) -> int:
        return len(self.v) - 1

    @property
    def ring(self) -> Ring:
        return self.v[0].ring

    @cached_property
    def S(self) -> Matrix:
        return suslin_matrix(self.v, self.w)

    @cached_property
    def S_rev(self) -> Matrix:
        return suslin_matrix(self.w, self.v)

    @cached_property
    def pairing(self) -> RingElement:
        return inner(self.v, self.w)

    @cached_property
    def J(self) -> Matrix:
        return j_form(self.r, self.ring)

    def product_identity(self) -> bool:
        I = Matrix.identity(self.ring, 1 << self.r).scale(self.pairing)
        return self.S @ self.S_rev.T == I and self.S_rev.T @ self.S == I

    def residue_identity(self) -> bool:
        """The Suslin identity selected by r mod 4."""
        r = self.r
        if r == 0:
            raise ValueError("the residue identities are stated for r >= 1")
        SJ = self.S @ self.J
        k = r % 4
        if k == 0:
            return SJ.T == SJ
        if k == 2:
            return SJ.T == -SJ
        return SJ @ self.S.T == self.J.scale(self.pairing)

    def det_formula(self) -> bool:
        if not 1 <= self.r <= 3:
            raise ValueError("determinant checks are capped at r <= 3")
        return det_bareiss(self.S) == self.pairing ** (1 << (self.r - 1))

    def conjugated(self, sigma: Optional[SignedPermutation] = None) -> Matrix:
        sigma = sigma or self.sigma or sigma_jr(self.r)
        s = sigma.matrix(self.ring)
        return s @ self.S @ s.T

    def conjugated_symplectic(self, sigma: Optional[SignedPermutation] = None) -> bool:
        if self.r % 4 != 1:
            raise ValueError("S_r is J_r-symplectic only for r = 1 mod 4")
        if self.pairing != self.ring.one:
            raise ValueError("conjugated symplectic check needs <v, w> = 1")
        m = self.conjugated(sigma)
        return m.is_symplectic(psi(1 << self.r, self.ring))

    def conjugated_form_check(self, sigma: Optional[SignedPermutation] = None) -> bool:
        """For r = 2 mod 4: sigma (S J) sigma^t is again alternating."""
        if self.r % 4 != 2:
            raise ValueError("needs r = 2 mod 4")
        sigma = sigma or self.sigma or sigma_jr(self.r)
        s = sigma.matrix(self.ring)
        m = s @ self.S @ self.J @ s.T
        return m.T == -m

    def to_json(self) -> dict:
        out = {"r": self.r, "ring": self.ring.to_json(),
               "v": [x.to_json() for x in self.v], "w": [x.to_json() for x in self.w],
               "pairing": self.pairing.to_json(),
               "S": self.S.to_json(), "S_text": self.S.tolist(), "J": j_form(self.r).to_json()}
        if self.r % 4 in (1, 2):
            out["sigma"] = (self.sigma or sigma_jr(self.r)).to_json()
        return out


# symbolic checks -----------------------------------------------------------


@lru_cache(maxsize=None)
def symbolic_ring(r: int) -> PolyRing:
    names = tuple(f"a{k}" for k in range(r + 1)) + tuple(f"b{k}" for k in range(r + 1))
    return PolyRing(ZZ, names)


def symbolic_data(r: int) -> SuslinData:
    R = symbolic_ring(r)
    g = R.gens()
    return SuslinData(g[: r + 1], g[r + 1:])


def verify_product_identity(r: int) -> bool:
    if not 0 <= r <= 5:
        raise ValueError("symbolic products are capped at r <= 5")
    return symbolic_data(r).product_identity()


def verify_suslin_identity(r: int, n_numeric: int = 20, seed: int = 0) -> bool:
    """Symbolic for r <= 5; for r = 6 on numeric witness pairs with <v, w> = 1."""
    if not 1 <= r <= MAX_R:
        raise ValueError(f"r out of range: need 1 <= r <= {MAX_R}")
    if r <= 5:
        return symbolic_data(r).residue_identity()
    rng = random.Random(seed)
    return all(SuslinData(v, w).residue_identity() for v, w in witness_pairs(rng, r, n_numeric))


def verify_det_formula(r: int) -> bool:
    if not 1 <= r <= 3:
        raise ValueError("determinant checks are capped at r <= 3")
    return symbolic_data(r).det_formula()


# numeric witnesses ---------------------------------------------------------


def witness_pair(rng: random.Random, r: int, ring: Ring = ZZ, bound: int = 9) -> tuple:
    """Random integer rows v, w of length r+1 with <v, w> = 1, mapped into ring."""
    while True:
        v = [ZZ(rng.randint(-bound, bound)) for _ in range(r + 1)]
        try:
            u = unimodular_witness(v)
        except NotUnimodular:
            continue
        # randomise w within the affine family u + (kernel combinations)
        w = list(u)
        for _ in range(2):
            i, j = rng.sample(range(r + 1), 2) if r >= 1 else (0, 0)
            if i == j:
                break
            t = rng.randint(-3, 3)
            # adding t*(v_j e_i - v_i e_j) keeps <v, w>
            w[i] = w[i] + v[j] * t
            w[j] = w[j] - v[i] * t
        assert inner(v, w) == ZZ.one
        if isinstance(ring, Integers):
            return tuple(v), tuple(w)
        return tuple(ring(x.v) for x in v), tuple(ring(x.v) for x in w)


def witness_pairs(rng: random.Random, r: int, count: int, ring: Ring = ZZ) -> list:
    return [witness_pair(rng, r, ring) for _ in range(count)]


def conjugated_symplectic_check(r: int, v=None, w=None, sigma: Optional[SignedPermutation] = None,
                                ring: Ring = ZZ, count: int = 20, seed: int = 0) -> bool:
    """sigma S_r sigma^-1 is psi-symplectic when <v, w> = 1 and r = 1 mod 4."""
    if r % 4 != 1 or r > 5:
        raise ValueError("conjugated symplectic check needs r = 1 mod 4 and r <= 5")
    if v is not None:
        return SuslinData(tuple(ring(x) for x in v), tuple(ring(x) for x in w)).conjugated_symplectic(sigma)
    rng = random.Random(seed)
    return all(SuslinData(a, b).conjugated_symplectic(sigma) for a, b in witness_pairs(rng, r, count, ring))


def module_verdicts(r: int, sigma: Optional[SignedPermutation] = None, seed: int = 0, count: int = 20) -> dict:
    """All boolean results of this module at level r, for a given conjugator."""
    out = {}
    if r <= 5:
        out["product_identity"] = verify_product_identity(r)
    if r >= 1:
        out["suslin_identity"] = verify_suslin_identity(r, count, seed)
    if 1 <= r <= 3:
        out["det_formula"] = verify_det_formula(r)
    if r % 4 == 1 and r <= 5:
        out["conjugated_symplectic"] = conjugated_symplectic_check(r, sigma=sigma, count=count, seed=seed)
    if r % 4 == 2:
        rng = random.Random(seed)
        out["conjugated_form"] = all(SuslinData(v, w).conjugated_form_check(sigma)
                                     for v, w in witness_pairs(rng, r, count))
    return out


# factorial rows relative to an ideal --------------------------------------


def factorial_orbit_check(v: Sequence, ideal, ring, flavor: str = "linear", level: int = 1) -> bool:
    """Finite check that (v0, v1, v2^2, ..., vn^n) and (v0, v1, ..., vn^(n!)) share a relative orbit.

    Returns True when the second row is reached inside the certified lower set
    (a sound witness of relative-orbit membership).
    """
    import math
    from .orbits import _ConjugateSets, _closure_rows
    v = tuple(ring(x) for x in v)
    n = len(v) - 1
    if n < 2:
        raise ValueError("needs rows of length >= 3")
    a = factorial_row(v)
    b = v[:-1] + (v[-1] ** math.factorial(n),)
    cs = _ConjugateSets(len(v), ring, flavor, ideal)
    lower = _closure_rows(a, cs.level(level)[0], ring, 1 << 22)
    return tuple(x.v for x in b) in lower
