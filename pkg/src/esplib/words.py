"""Elementary and elementary-symplectic generators and formal words in them.

Indices are 1-based throughout this module.  A word evaluates to the ordered
product of its letters; ``ConjFrame(g, h)`` evaluates to ``g h g^-1``.
Relative membership (in E_n(R, I) or ESp_2n(R, I)) is certified by the word's
shape, never decided from a bare matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionMismatch, InternalAssertion, MalformedWord, RingMismatch
from .forms import psi
from .matrix import Matrix, is_symplectic
from .rings import Ideal, PolyRing, Ring, RingElement, ZZ, ring_from_json

LINEAR = "linear"
SYMPL = "sympl"


def sigma_pair(i: int) -> int:
    """The partner index: 2k-1 <-> 2k."""
    if i < 1:
        raise ValueError("indices start at 1")
    return i + 1 if i % 2 else i - 1


def _check_ij(i, j, n):
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) out of range for size {n}")
    if i == j:
        raise ValueError("generators need i != j")


def elem_gen(i: int, j: int, lam, n: int, ring: Ring = ZZ) -> Matrix:
    """E_ij(lam) = I_n + lam e_ij."""
    _check_ij(i, j, n)
    return Matrix.from_entries(ring, n, {(i - 1, j - 1): ring(lam)})


def _sympl_entries(i, j, z):
    if i == sigma_pair(j):
        return {(i - 1, j - 1): z}
    sign = -1 if (i + j) % 2 == 0 else 1  # -(-1)^(i+j)
    return {(i - 1, j - 1): z, (sigma_pair(j) - 1, sigma_pair(i) - 1): sign * z}


@lru_cache(maxsize=None)
def _verified_shape(i: int, j: int, size: int) -> bool:
    # one symbolic check in Z[z] covers every parameter value
    R = PolyRing(ZZ, ("z",))
    m = Matrix.from_entries(R, size, _sympl_entries(i, j, R.gen("z")))
    if not is_symplectic(m, psi(size, R)):
        raise InternalAssertion(f"se_{i}{j} is not symplectic in size {size}")
    return True


def sympl_gen(i: int, j: int, z, size: int, ring: Ring = ZZ) -> Matrix:
    """se_ij(z); the two-term formula is used for every i != sigma(j), either order of i, j."""
    if size % 2:
        raise DimensionMismatch("symplectic generators need even size")
    _check_ij(i, j, size)
    _verified_shape(i, j, size)
    return Matrix.from_entries(ring, size, _sympl_entries(i, j, ring(z)))


@dataclass(frozen=True)
class Elem:
    i: int
    j: int
    lam: RingElement

    def matrix(self, n, ring):
        return elem_gen(self.i, self.j, self.lam, n, ring)

    def inverse(self):
        return Elem(self.i, self.j, -self.lam)

    def params(self):
        return (self.lam,)

    def act(self, v: list):
        v[self.j - 1] = v[self.j - 1] + self.lam * v[self.i - 1]

    def shifted(self, k):
        return Elem(self.i + k, self.j + k, self.lam)

    def to_json(self):
        return {"E": [self.i, self.j, self.lam.to_json()]}

    def __str__(self):
        return f"E{self.i}{self.j}({self.lam})"


@dataclass(frozen=True)
class SymplElem:
    i: int
    j: int
    z: RingElement

    def matrix(self, n, ring):
        return sympl_gen(self.i, self.j, self.z, n, ring)

    def inverse(self):
        return SymplElem(self.i, self.j, -self.z)

    def params(self):
        return (self.z,)

    def act(self, v: list):
        i, j, z = self.i, self.j, self.z
        si, sj = sigma_pair(i), sigma_pair(j)
        vi, vsj = v[i - 1], v[sj - 1]
        v[j - 1] = v[j - 1] + z * vi
        if i != sj:
            sign = -1 if (i + j) % 2 == 0 else 1
            v[si - 1] = v[si - 1] + sign * (z * vsj)

    def shifted(self, k):
        if k % 2:
            raise ValueError("symplectic letters shift by an even offset")
        return SymplElem(self.i + k, self.j + k, self.z)

    def to_json(self):
        return {"se": [self.i, self.j, self.z.to_json()]}

    def __str__(self):
        return f"se{self.i}{self.j}({self.z})"


@dataclass(frozen=True)
class DiagSign:
    """delta_j: identity with -1 at (j, j).  Not an elementary generator."""

    j: int

    def matrix(self, n, ring):
        if not 1 <= self.j <= n:
            raise IndexError("index out of range")
        return Matrix.from_entries(ring, n, {(self.j - 1, self.j - 1): -2})

    def inverse(self):
        return self

    def params(self):
        return ()

    def act(self, v: list):
        v[self.j - 1] = -v[self.j - 1]

    def shifted(self, k):
        return DiagSign(self.j + k)

    def to_json(self):
        return {"delta": self.j}

    def __str__(self):
        return f"delta{self.j}"


Generator = Union[Elem, SymplElem, DiagSign]


@dataclass(frozen=True)
class ConjFrame:
    outer: "GroupWord"
    inner: "GroupWord"

    def inverse(self):
        return ConjFrame(self.outer, self.inner.inverse())

    def shifted(self, k):
        return ConjFrame(self.outer.shifted(k), self.inner.shifted(k))

    def to_json(self):
        return {"conj": [self.outer._json_body(), self.inner._json_body()]}

    def __str__(self):
        return f"[{self.outer} | {self.inner}]"


Letter = Union[Elem, SymplElem, DiagSign, ConjFrame]


def _relative_ok(letter, ideal: Ideal) -> bool:
    if isinstance(letter, ConjFrame):
        return all(_relative_ok(x, ideal) for x in letter.inner.letters)
    if isinstance(letter, DiagSign):
        return False
    return all(ideal.contains(p) for p in letter.params())


@dataclass(frozen=True)
class GroupWord:
    size: int
    ring: Ring
    letters: tuple = ()
    flavor: str = SYMPL
    relative_ideal: Optional[Ideal] = None

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.flavor not in (LINEAR, SYMPL):
            raise MalformedWord(f"unknown flavor {self.flavor!r}")
        if self.flavor == SYMPL and self.size % 2:
            raise MalformedWord("symplectic words need even size")
        for x in self.letters:
            self._check_letter(x)
        if self.relative_ideal is not None:
            if self.relative_ideal.ring != self.ring:
                raise RingMismatch("relative ideal over a different ring")
            for x in self.letters:
                if not _relative_ok(x, self.relative_ideal):
                    raise MalformedWord(f"letter {x} does not certify membership relative to {self.relative_ideal}")

    def _check_letter(self, x):
        if isinstance(x, ConjFrame):
            for w in (x.outer, x.inner):
                if w.size != self.size or w.ring != self.ring or w.flavor != self.flavor:
                    raise MalformedWord("conjugation frame does not match the word")
            return
        if self.flavor == SYMPL and not isinstance(x, SymplElem):
            raise MalformedWord(f"symplectic words contain only se letters, got {x}")
        if self.flavor == LINEAR and isinstance(x, SymplElem):
            raise MalformedWord("linear words contain E and delta letters only")
        if isinstance(x, DiagSign):
            if not 1 <= x.j <= self.size:
                raise MalformedWord("index out of range")
            return
        if not isinstance(x, (Elem, SymplElem)):
            raise MalformedWord(f"not a letter: {x!r}")
        try:
            _check_ij(x.i, x.j, self.size)
        except (IndexError, ValueError) as exc:
            raise MalformedWord(str(exc)) from None
        for p in x.params():
            if not isinstance(p, RingElement) or p.ring != self.ring:
                raise MalformedWord(f"parameter {p!r} is not in {self.ring}")

    @classmethod
    def of(cls, size, ring, letters: Iterable = (), flavor=SYMPL, relative_ideal=None):
        return cls(size, ring, tuple(letters), flavor, relative_ideal)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if (other.size, other.ring, other.flavor) != (self.size, self.ring, self.flavor):
            raise MalformedWord("cannot concatenate incompatible words")
        rel = self.relative_ideal if self.relative_ideal == other.relative_ideal else None
        return GroupWord(self.size, self.ring, self.letters + other.letters, self.flavor, rel)

    def append(self, *letters) -> "GroupWord":
        return GroupWord(self.size, self.ring, self.letters + tuple(letters), self.flavor, self.relative_ideal)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.size, self.ring, tuple(x.inverse() for x in reversed(self.letters)),
                         self.flavor, self.relative_ideal)

    def shifted(self, k: int, size: Optional[int] = None) -> "GroupWord":
        """Re-index every letter by +k inside a word of the given size (block embedding)."""
        size = self.size + k if size is None else size
        return GroupWord(size, self.ring, tuple(x.shifted(k) for x in self.letters),
                         self.flavor, self.relative_ideal)

    def without_certificate(self) -> "GroupWord":
        return GroupWord(self.size, self.ring, self.letters, self.flavor, None)

    def with_ideal(self, ideal: Ideal) -> "GroupWord":
        return GroupWord(self.size, self.ring, self.letters, self.flavor, ideal)

    def letter_matrix(self, x) -> Matrix:
        if isinstance(x, ConjFrame):
            return x.outer.evaluate() @ x.inner.evaluate() @ x.outer.inverse().evaluate()
        return x.matrix(self.size, self.ring)

    @cached_property
    def _value(self) -> Matrix:
        m = Matrix.identity(self.ring, self.size)
        for x in self.letters:
            m = m @ self.letter_matrix(x)
        return m

    def evaluate(self) -> Matrix:
        return self._value

    def apply(self, v: Sequence) -> tuple:
        """v times the evaluated word, computed letter by letter."""
        if len(v) != self.size:
            raise DimensionMismatch("row length does not match the word size")
        out = [self.ring(x) for x in v]
        for x in self.letters:
            out = list(_apply_letter(x, out))
        return tuple(out)

    def parameters(self):
        """Every generator parameter, with conjugation frames flattened."""
        for x in self.letters:
            if isinstance(x, ConjFrame):
                yield from x.outer.parameters()
                yield from x.inner.parameters()
            else:
                yield from x.params()

    def inner_parameters(self):
        """Parameters of the relative (innermost) generators only."""
        for x in self.letters:
            if isinstance(x, ConjFrame):
                yield from x.inner.inner_parameters()
            else:
                yield from x.params()

    def _json_body(self) -> dict:
        return {"size": self.size, "flavor": self.flavor,
                "letters": [x.to_json() for x in self.letters]}

    def to_json(self) -> dict:
        d = self._json_body()
        d["ring"] = self.ring.to_json()
        if self.relative_ideal is not None:
            d["relative_ideal"] = [g.to_json() for g in self.relative_ideal.generators]
        return d

    @classmethod
    def from_json(cls, obj: dict, ring: Optional[Ring] = None) -> "GroupWord":
        if "ring" in obj:
            r = ring_from_json(obj["ring"])
            if ring is not None and r != ring:
                raise RingMismatch("nested word over a different ring")
            ring = r
        if ring is None:
            raise MalformedWord("word JSON without a ring")
        letters = []
        for x in obj["letters"]:
            if "se" in x:
                i, j, p = x["se"]
                letters.append(SymplElem(int(i), int(j), ring.element_from_json(p)))
            elif "E" in x:
                i, j, p = x["E"]
                letters.append(Elem(int(i), int(j), ring.element_from_json(p)))
            elif "delta" in x:
                letters.append(DiagSign(int(x["delta"])))
            elif "conj" in x:
                g, h = x["conj"]
                letters.append(ConjFrame(cls.from_json(g, ring), cls.from_json(h, ring)))
            else:
                raise MalformedWord(f"unknown letter {x!r}")
        rel = None
        if obj.get("relative_ideal"):
            rel = Ideal(ring, tuple(ring.element_from_json(g) for g in obj["relative_ideal"]))
        return cls(int(obj["size"]), ring, tuple(letters), obj.get("flavor", SYMPL), rel)

    def __str__(self):
        return " ".join(str(x) for x in self.letters) or "1"


def _apply_letter(x, v: list) -> list:
    if isinstance(x, ConjFrame):
        for y in x.outer.letters:
            v = _apply_letter(y, v)
        for y in x.inner.letters:
            v = _apply_letter(y, v)
        for y in x.outer.inverse().letters:
            v = _apply_letter(y, v)
        return v
    v = list(v)
    x.act(v)
    return v


def word_eval(w: GroupWord) -> Matrix:
    return w.evaluate()


def word_inverse(w: GroupWord) -> GroupWord:
    return w.inverse()


def transposition_word(i: int, j: int, n: int, ring: Ring = ZZ) -> GroupWord:
    """E_ji(1) E_ij(-1) E_ji(1) delta_j: evaluates to the permutation matrix of (i j)."""
    _check_ij(i, j, n)
    one = ring.one
    return GroupWord(n, ring, (Elem(j, i, one), Elem(i, j, -one), Elem(j, i, one), DiagSign(j)), LINEAR)


def elementary_generators(size: int, ring: Ring, params: Optional[Sequence] = None) -> list:
    """All E_ij(p) for i != j and p in params (default: every nonzero element of a finite ring)."""
    params = _default_params(ring, params)
    return [Elem(i, j, p) for i in range(1, size + 1) for j in range(1, size + 1) if i != j for p in params]


def symplectic_generators(size: int, ring: Ring, params: Optional[Sequence] = None) -> list:
    params = _default_params(ring, params)
    return [SymplElem(i, j, p) for i in range(1, size + 1) for j in range(1, size + 1) if i != j for p in params]


def _default_params(ring, params):
    if params is None:
        params = [x for x in ring.elements() if not x.is_zero()]
    return [ring(p) for p in params]


def random_word(rng, size: int, ring: Ring, length: int, flavor: str = SYMPL,
                param=None) -> GroupWord:
    """A random word in the plain generators; ``param(rng)`` draws parameters."""
    draw = param or (lambda r: ring.random_element(r))
    letters = []
    for _ in range(length):
        i = rng.randint(1, size)
        j = rng.choice([k for k in range(1, size + 1) if k != i])
        p = draw(rng)
        letters.append(SymplElem(i, j, p) if flavor == SYMPL else Elem(i, j, p))
    return GroupWord(size, ring, tuple(letters), flavor)


def random_relative_word(rng, size: int, ring: Ring, ideal: Ideal, length: int,
                         flavor: str = SYMPL, conj_length: int = 3) -> GroupWord:
    """A random product of conjugates g x g^-1 with x a generator whose parameter lies in ideal."""
    letters = []
    for _ in range(length):
        outer = random_word(rng, size, ring, rng.randint(0, conj_length), flavor)
        inner = random_word(rng, size, ring, 1, flavor, param=lambda r: ideal.random_member(r))
        letters.append(ConjFrame(outer, inner))
    return GroupWord(size, ring, tuple(letters), flavor, ideal)
