"""Standard symplectic form, Suslin forms J_r, signed permutations and the hat map."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import DimensionMismatch
from .matrix import Matrix, perp, top
from .rings import ZZ, Ring, RingElement

MAX_R = 6


@dataclass(frozen=True)
class SignedPermutation:
    """Monomial +-1 matrix: column j carries signs[j-1] at row images[j-1] (1-based)."""

    images: tuple
    signs: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError("images must be a permutation of 1..n")
        if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1/-1, one per point")

    @property
    def size(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)), (1,) * n)

    def matrix(self, ring: Ring = ZZ) -> Matrix:
        n = self.size
        rows = [[0] * n for _ in range(n)]
        for j, (i, s) in enumerate(zip(self.images, self.signs)):
            rows[i - 1][j] = s
        return Matrix(ring, rows)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "SignedPermutation":
        if not m.is_square():
            raise DimensionMismatch("a signed permutation matrix is square")
        R = m.ring
        images, signs = [], []
        for j in range(m.ncols):
            nz = [(i, x) for i, x in enumerate(m.col(j)) if not x.is_zero()]
            if len(nz) != 1 or nz[0][1] not in (R.one, -R.one):
                raise ValueError("not a +-1 monomial matrix")
            i, x = nz[0]
            images.append(i + 1)
            signs.append(1 if x == R.one else -1)
        return cls(tuple(images), tuple(signs))

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        # (P Q) e_j = P (s_j e_{q(j)}) = s_j t_{q(j)} e_{p(q(j))}
        imgs = tuple(self.images[q - 1] for q in other.images)
        sgns = tuple(s * self.signs[q - 1] for q, s in zip(other.images, other.signs))
        return SignedPermutation(imgs, sgns)

    def inverse(self) -> "SignedPermutation":
        n = self.size
        imgs = [0] * n
        sgns = [0] * n
        for j, (i, s) in enumerate(zip(self.images, self.signs), start=1):
            imgs[i - 1] = j
            sgns[i - 1] = s
        return SignedPermutation(tuple(imgs), tuple(sgns))

    # orthogonal: the transpose is the inverse
    transpose = inverse

    def is_unsigned(self) -> bool:
        return all(s == 1 for s in self.signs)

    def to_json(self) -> dict:
        return {"images": list(self.images), "signs": list(self.signs)}

    @classmethod
    def from_json(cls, obj) -> "SignedPermutation":
        return cls(tuple(obj["images"]), tuple(obj["signs"]))


@dataclass(frozen=True)
class FormMatrix:
    matrix: Matrix

    @cached_property
    def perm(self) -> SignedPermutation:
        return SignedPermutation.from_matrix(self.matrix)

    def is_alternating(self) -> bool:
        return self.matrix.T == -self.matrix


def standard_form(n: int, ring: Ring = ZZ) -> Matrix:
    """psi_n: size 2n, +1 at (2i-1, 2i) and -1 at (2i, 2i-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    entries = {}
    for i in range(n):
        entries[(2 * i, 2 * i + 1)] = 1
        entries[(2 * i + 1, 2 * i)] = -1
    return Matrix.from_entries(ring, 2 * n, entries, base=Matrix.zeros(ring, 2 * n))


def psi(size: int, ring: Ring = ZZ) -> Matrix:
    """The standard form of the given even size."""
    if size % 2:
        raise DimensionMismatch("the standard form has even size")
    return standard_form(size // 2, ring)


@lru_cache(maxsize=None)
def _j_form_z(r: int) -> Matrix:
    if r == 0:
        return Matrix(ZZ, [[1]])
    prev = _j_form_z(r - 1)
    return perp(prev, -prev) if r % 2 == 0 else top(prev, -prev)


def j_form(r: int, ring: Ring = ZZ) -> Matrix:
    """Suslin's form J_r of size 2^r."""
    if not 0 <= r <= MAX_R:
        raise ValueError(f"r out of range: need 0 <= r <= {MAX_R}")
    m = _j_form_z(r)
    return m if ring == ZZ else m.map(lambda x: x.v, ring)


def _pairs(r: int):
    J = _j_form_z(r)
    pairs = []
    seen = set()
    for k in range(J.nrows):
        if k in seen:
            continue
        (l, x), = [(j, x) for j, x in enumerate(J.row(k)) if not x.is_zero()]
        seen.update((k, l))
        pairs.append((k + 1, l + 1) if x.v == 1 else (l + 1, k + 1))
    return pairs


def _sigma_from_pairs(pairs, signs_per_pair=None) -> SignedPermutation:
    n = 2 * len(pairs)
    images = [0] * n
    signs = [1] * n
    for i, (a, b) in enumerate(pairs):
        # row 2i+1 of sigma is e_a, row 2i+2 is e_b
        images[a - 1] = 2 * i + 1
        images[b - 1] = 2 * i + 2
        if signs_per_pair is not None:
            signs[a - 1] = signs[b - 1] = signs_per_pair[i]
    return SignedPermutation(tuple(images), tuple(signs))


def _check_r(r):
    if r not in (1, 2, 5, 6):
        raise ValueError(f"J_{r} is not antisymmetric (need r = 1, 2 mod 4 and r <= {MAX_R})")


def sigma_jr(r: int) -> SignedPermutation:
    """Permutation sigma with sigma J_r sigma^t = psi, pairs ordered by their smaller point."""
    _check_r(r)
    pairs = sorted(_pairs(r), key=min)
    sigma = _sigma_from_pairs(pairs)
    _verify_sigma(r, sigma)
    return sigma


def alternative_sigma_jr(r: int) -> SignedPermutation:
    """A second valid conjugator: pairs in reverse order, each pair negated."""
    _check_r(r)
    pairs = sorted(_pairs(r), key=min, reverse=True)
    sigma = _sigma_from_pairs(pairs, [-1] * len(pairs))
    _verify_sigma(r, sigma)
    return sigma


def _verify_sigma(r, sigma):
    s = sigma.matrix()
    if s @ _j_form_z(r) @ s.T != psi(2 ** r):
        raise AssertionError(f"sigma for J_{r} fails the conjugation identity")


def is_valid_sigma(r: int, sigma: SignedPermutation) -> bool:
    s = sigma.matrix()
    return s @ _j_form_z(r) @ s.T == psi(2 ** r)


def hat(v: Sequence[RingElement]) -> tuple:
    """v psi: (v1, v2, v3, v4, ...) -> (-v2, v1, -v4, v3, ...)."""
    if len(v) % 2:
        raise DimensionMismatch("hat needs an even-length row")
    out = []
    for k in range(0, len(v), 2):
        out.extend((-v[k + 1], v[k]))
    return tuple(out)
