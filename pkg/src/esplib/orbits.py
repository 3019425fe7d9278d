"""Row orbits of finite rings under generator sets, and relative orbit certification.

Rows are reported in canonical form: tuples of payload keys (plain residues
over Z/m).  Over Z/m the breadth-first search is vectorised with numpy on
integer row codes; other finite rings use a plain dictionary search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CapExceeded, RingMismatch
from .matrix import Matrix
from .rings import Ideal, Modular, Ring, RingElement
from .words import (LINEAR, ConjFrame, GroupWord,
                    elementary_generators, symplectic_generators)

DEFAULT_CAP = 1 << 22
DENSE_LIMIT = 1 << 26
CONJ_CAP = 200_000
_CHUNK = 1 << 21


def _key_row(v: Sequence[RingElement]) -> tuple:
    return tuple(x.key() for x in v)


class _ModEngine:
    def __init__(self, m: int, n: int):
        self.m = m
        self.n = n
        self.powers = np.array([m ** (n - 1 - k) for k in range(n)], dtype=np.int64)
        self.space = m ** n

    def encode(self, rows: np.ndarray) -> np.ndarray:
        return rows @ self.powers

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[:, None] // self.powers[None, :]) % self.m

    def closure(self, start: np.ndarray, mats: np.ndarray, cap: int, parents: bool,
                within: Optional[np.ndarray] = None):
        """BFS from the start codes under right multiplication by mats (K, n, n).

        Returns (sorted visited codes, parent_code, parent_gen); the parent maps
        are dicts or dense arrays depending on the size of the row space.
        """
        m = self.m
        dense = self.space <= DENSE_LIMIT
        if dense:
            seen = np.zeros(self.space, dtype=bool)
            pcode = np.full(self.space, -1, dtype=np.int64) if parents else None
            pgen = np.full(self.space, -1, dtype=np.int64) if parents else None
        else:
            seen_set = set()
            pcode, pgen = ({}, {}) if parents else (None, None)
        start = np.unique(np.asarray(start, dtype=np.int64))
        if dense:
            seen[start] = True
        else:
            seen_set.update(start.tolist())
        visited = [start]
        count = len(start)
        frontier = start
        K = len(mats)
        while len(frontier):
            rows = self.decode(frontier)
            F = len(frontier)
            step = max(1, _CHUNK // max(1, F * self.n))
            new_parts = []
            for k0 in range(0, K, step):
                block = mats[k0:k0 + step]
                prod = np.einsum("fi,kij->kfj", rows, block) % m
                codes = self.encode(prod).reshape(-1)
                if dense:
                    mask = ~seen[codes]
                else:
                    mask = np.fromiter((c not in seen_set for c in codes.tolist()), bool, len(codes))
                if not mask.any():
                    continue
                idx = np.nonzero(mask)[0]
                fresh, first = np.unique(codes[idx], return_index=True)
                src = idx[first]
                if dense:
                    seen[fresh] = True
                else:
                    seen_set.update(fresh.tolist())
                if parents:
                    pc = frontier[src % F]
                    pg = k0 + src // F
                    if dense:
                        pcode[fresh] = pc
                        pgen[fresh] = pg
                    else:
                        pcode.update(zip(fresh.tolist(), pc.tolist()))
                        pgen.update(zip(fresh.tolist(), pg.tolist()))
                new_parts.append(fresh)
                count += len(fresh)
                if count > cap:
                    raise CapExceeded(f"orbit exceeds the cap of {cap} rows")
            frontier = np.unique(np.concatenate(new_parts)) if new_parts else np.zeros(0, np.int64)
            visited.append(frontier)
        codes = np.unique(np.concatenate(visited))
        return codes, pcode, pgen


def _mod_matrix(letter, size: int, ring: Modular) -> np.ndarray:
    if isinstance(letter, Matrix):
        m = letter
    elif isinstance(letter, ConjFrame):
        m = letter.outer.evaluate() @ letter.inner.evaluate() @ letter.outer.inverse().evaluate()
    else:
        m = letter.matrix(size, ring)
    return np.array([[x.v for x in r] for r in m.rows], dtype=np.int64)


@dataclass
class OrbitTree:
    """A breadth-first orbit with parent links for word recovery."""

    ring: Ring
    size: int
    start: tuple
    rows: frozenset
    letter: Callable[[int], object]
    _parent: Callable[[tuple], Optional[tuple]] = field(repr=False)

    def __len__(self):
        return len(self.rows)

    def __contains__(self, row):
        return self.canon(row) in self.rows

    def canon(self, row) -> tuple:
        return tuple(x.key() if isinstance(x, RingElement) else self.ring(x).key() for x in row)

    def letters_from_start(self, row) -> list:
        """Letters L1..Lk with start * L1 * ... * Lk = row."""
        key = self.canon(row)
        if key not in self.rows:
            raise KeyError(f"row {row} is not in the orbit")
        out = []
        while key != self.start:
            key, g = self._parent(key)
            out.append(self.letter(g))
        out.reverse()
        return out

    def word_to_start(self, row, flavor: str, relative_ideal: Optional[Ideal] = None) -> GroupWord:
        """A word W with row * W = start."""
        w = GroupWord(self.size, self.ring, tuple(self.letters_from_start(row)), flavor)
        w = w.inverse()
        return w if relative_ideal is None else w.with_ideal(relative_ideal)


def _with_inverses(letters):
    out, seen = [], set()
    for x in letters:
        for y in (x, x.inverse()):
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def _build_tree(v, letters, mats, ring, size, cap) -> OrbitTree:
    """``letters[k]`` names the matrix ``mats[k]`` (a callable is allowed for lazy naming)."""
    letter = letters if callable(letters) else letters.__getitem__
    v = tuple(ring(x) for x in v)
    if isinstance(ring, Modular):
        eng = _ModEngine(ring.modulus, size)
        start_code = int(eng.encode(np.array([[x.v for x in v]], dtype=np.int64))[0])
        codes, pcode, pgen = eng.closure(np.array([start_code]), mats, cap, parents=True)
        rows = frozenset(tuple(int(a) for a in r) for r in eng.decode(codes))
        start = tuple(x.v for x in v)

        def parent(key):
            c = int(eng.encode(np.array([key], dtype=np.int64))[0])
            p = int(pcode[c])
            return tuple(int(a) for a in eng.decode(np.array([p]))[0]), int(pgen[c])

        return OrbitTree(ring, size, start, rows, letter, parent)
    # generic finite ring: mats is a list of Matrix
    from .matrix import row_times
    start = _key_row(v)
    par = {start: None}
    elems = {start: v}
    frontier = [v]
    while frontier:
        nxt = []
        for row in frontier:
            for k, M in enumerate(mats):
                w = row_times(row, M)
                key = _key_row(w)
                if key not in par:
                    par[key] = (_key_row(row), k)
                    elems[key] = w
                    nxt.append(w)
                    if len(par) > cap:
                        raise CapExceeded(f"orbit exceeds the cap of {cap} rows")
        frontier = nxt
    return OrbitTree(ring, size, start, frozenset(par), letter, lambda key: par[key])


def _letter_mats(letters, size, ring):
    if isinstance(ring, Modular):
        if not letters:
            return np.zeros((0, size, size), dtype=np.int64)
        return np.stack([_mod_matrix(x, size, ring) for x in letters])
    out = []
    for x in letters:
        if isinstance(x, ConjFrame):
            out.append(x.outer.evaluate() @ x.inner.evaluate() @ x.outer.inverse().evaluate())
        else:
            out.append(x.matrix(size, ring))
    return out


def _require_finite(ring):
    if not ring.is_finite:
        raise ValueError(f"orbit enumeration needs a finite ring, got {ring}")


def orbit_tree(v: Sequence, gens: Sequence, ring: Ring, cap: int = DEFAULT_CAP) -> OrbitTree:
    _require_finite(ring)
    letters = _with_inverses(gens)
    mats = _letter_mats(letters, len(v), ring)
    return _build_tree(v, letters, mats, ring, len(v), cap)


def orbit_bfs(v: Sequence, gens: Sequence, ring: Ring, cap: int = DEFAULT_CAP) -> frozenset:
    """Closure of {v} under right multiplication by gens (inverses are added)."""
    return orbit_tree(v, gens, ring, cap).rows


def absolute_generators(size: int, ring: Ring, flavor: str, params=None) -> list:
    if flavor == LINEAR:
        return elementary_generators(size, ring, params)
    return symplectic_generators(size, ring, params)


def absolute_orbit(v: Sequence, ring: Ring, flavor: str, cap: int = DEFAULT_CAP) -> frozenset:
    _require_finite(ring)
    return orbit_bfs(v, absolute_generators(len(v), ring, flavor), ring, cap)


# relative orbits ---------------------------------------------------------


@dataclass
class RelativeOrbitCertificate:
    lower: frozenset
    upper: frozenset
    certified: bool
    level: int
    stabilized: bool
    n_conjugates: int
    flavor: str

    def to_json(self) -> dict:
        return {"flavor": self.flavor, "certified": self.certified, "level": self.level,
                "stabilized": self.stabilized, "lower_size": len(self.lower),
                "upper_size": len(self.upper), "conjugates": self.n_conjugates}


class _ConjugateSets:
    """Levels C_0 = relative generators, C_{L+1} = C_L plus a c a^-1 for absolute a."""

    def __init__(self, size, ring, flavor, ideal, conjugator_params=None, cap=CONJ_CAP):
        self.size, self.ring, self.flavor, self.cap = size, ring, flavor, cap
        rel_params = [x for x in ideal.members() if not x.is_zero()]
        self.rel = absolute_generators(size, ring, flavor, rel_params) if rel_params else []
        self.abs = absolute_generators(size, ring, flavor, conjugator_params)
        self.abs_mats = _letter_mats(self.abs, size, ring)
        self.abs_inv = _letter_mats([a.inverse() for a in self.abs], size, ring)
        self.ideal = ideal
        self.levels = []

    def level(self, L):
        while len(self.levels) <= L:
            self._grow()
        return self.levels[L]

    def _grow(self):
        m = self.ring.modulus
        n = self.size
        if not self.levels:
            mats = _letter_mats(self.rel, n, self.ring)
            prov = [((), k) for k in range(len(self.rel))]
            self.levels.append((mats, prov))
            return
        mats, prov = self.levels[-1]
        if len(mats) == 0:
            self.levels.append((mats, prov))
            return
        if len(mats) * len(self.abs) > self.cap * 4:
            raise CapExceeded("conjugate set grows beyond the cap")
        conj = np.einsum("aij,kjl,alm->akim", self.abs_mats, mats, self.abs_inv) % m
        flat = np.concatenate([mats.reshape(len(mats), -1), conj.reshape(-1, n * n)])
        _, first = np.unique(flat, axis=0, return_index=True)
        first.sort()
        if len(first) > self.cap:
            raise CapExceeded(f"more than {self.cap} conjugated generators")
        K = len(mats)
        new_prov = []
        for idx in first.tolist():
            if idx < K:
                new_prov.append(prov[idx])
            else:
                a, k = divmod(idx - K, K)
                outer, g = prov[k]
                new_prov.append(((a,) + outer, g))
        self.levels.append((flat[first].reshape(-1, n, n), new_prov))

    def letter(self, L, k):
        outer, g = self.levels[L][1][k]
        inner = GroupWord(self.size, self.ring, (self.rel[g],), self.flavor)
        ow = GroupWord(self.size, self.ring, tuple(self.abs[a] for a in outer), self.flavor)
        return ConjFrame(ow, inner)


def _congruent_rows(rows: frozenset, v_key: tuple, ring: Modular, ideal: Ideal) -> frozenset:
    g = ring.modulus
    for x in ideal.generators:
        g = math.gcd(g, x.v)
    return frozenset(r for r in rows if all((a - b) % g == 0 for a, b in zip(r, v_key)))


def relative_orbit_certify(v: Sequence, ideal: Ideal, flavor: str, ring: Ring,
                           max_level: int = 3, cap: int = DEFAULT_CAP,
                           conjugator_params=None) -> RelativeOrbitCertificate:
    """Sandwich the orbit of v under E_n(R, I) (or ESp_n(R, I)) between two computable sets.

    lower: BFS closure under conjugates w g w^-1 (g a generator with parameter in
    the ideal, w a word of length <= L in absolute generators).  upper: the
    absolute orbit intersected with the rows congruent to v.  Equality
    certifies the relative orbit exactly.
    """
    if not isinstance(ring, Modular):
        raise NotImplementedError("relative certification is implemented over Z/m")
    if ideal.ring != ring:
        raise RingMismatch("ideal over a different ring")
    tree = _relative_tree_parts(v, ideal, flavor, ring, cap)
    upper = tree["upper"]
    cs = _ConjugateSets(len(v), ring, flavor, ideal, conjugator_params)
    prev = None
    lower = None
    for L in range(max_level + 1):
        mats, _ = cs.level(L)
        lower = _closure_rows(v, mats, ring, cap)
        if lower == upper:
            return RelativeOrbitCertificate(lower, upper, True, L, True, len(mats), flavor)
        if prev is not None and lower == prev:
            nxt, _ = cs.level(L + 1)
            if _closure_rows(v, nxt, ring, cap) == lower:
                return RelativeOrbitCertificate(lower, upper, False, L, True, len(mats), flavor)
        prev = lower
    return RelativeOrbitCertificate(lower, upper, False, max_level, False, len(cs.level(max_level)[0]), flavor)


def _relative_tree_parts(v, ideal, flavor, ring, cap):
    absolute = absolute_orbit(v, ring, flavor, cap)
    v_key = tuple(ring(x).v for x in v)
    return {"absolute": absolute, "upper": _congruent_rows(absolute, v_key, ring, ideal)}


def _closure_rows(v, mats, ring, cap) -> frozenset:
    eng = _ModEngine(ring.modulus, len(v))
    start = eng.encode(np.array([[ring(x).v for x in v]], dtype=np.int64))
    if len(mats) == 0:
        codes = start
    else:
        codes, _, _ = eng.closure(start, mats, cap, parents=False)
    return frozenset(tuple(int(a) for a in r) for r in eng.decode(codes))


def relative_orbit_tree(v: Sequence, ideal: Ideal, flavor: str, ring: Modular, level: int = 1,
                        conjugator_params=None, cap: int = DEFAULT_CAP) -> OrbitTree:
    """Orbit tree of v under conjugates of level <= level, for recovering relative words."""
    if not isinstance(ring, Modular):
        raise NotImplementedError("relative trees are implemented over Z/m")
    cs = _ConjugateSets(len(v), ring, flavor, ideal, conjugator_params)
    mats, prov = cs.level(level)
    return _build_tree(v, lambda k: cs.letter(level, k), mats, ring, len(v), cap)


def enumerate_unimodular_rows(ring: Modular, n: int) -> frozenset:
    """Independent oracle: every row whose entries generate the unit ideal of Z/m."""
    m = ring.modulus
    eng = _ModEngine(m, n)
    rows = eng.decode(np.arange(m ** n, dtype=np.int64))
    g = np.full(len(rows), m, dtype=np.int64)
    for k in range(n):
        g = np.gcd(g, rows[:, k])
    return frozenset(tuple(int(a) for a in r) for r in rows[g == 1])


def enumerate_unit_containing_rows(ring: Modular, n: int) -> frozenset:
    m = ring.modulus
    units = {a for a in range(m) if math.gcd(a, m) == 1}
    eng = _ModEngine(m, n)
    rows = eng.decode(np.arange(m ** n, dtype=np.int64))
    return frozenset(tuple(int(a) for a in r) for r in rows if any(int(a) in units for a in r))
