"""Symplectic transvections 1 + a v^t v^ and 1 + v^t w^ + w^t v^, and the kernel decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (DimensionMismatch, NoSolution, NotInKernel, OrthogonalityViolated,
                     RingMismatch, WitnessInvalid)
from .forms import hat, psi
from .matrix import Matrix
from .rings import Ideal, PolyRing, Ring, RingElement, ZZ, inner


def outer(v: Sequence[RingElement], w: Sequence[RingElement]) -> Matrix:
    """The rank-one matrix v^t w."""
    R = v[0].ring
    return Matrix._raw(R, tuple(tuple(a * b for b in w) for a in v))


def _check_size(v, min_size=2):
    if len(v) % 2 or len(v) < min_size:
        raise DimensionMismatch(f"need an even length >= {min_size}, got {len(v)}")


def rank1_transvection(a: RingElement, v: Sequence[RingElement], ideal: Optional[Ideal] = None) -> Matrix:
    """1 + a v^t v^.  With an ideal, checks the result is congruent to I mod it."""
    _check_size(v)
    R = v[0].ring
    a = R(a)
    m = Matrix.identity(R, len(v)) + outer(v, hat(v)).scale(a)
    if ideal is not None and not m.congruent_mod(Matrix.identity(R, len(v)), ideal):
        raise AssertionError("rank-one transvection is not congruent to I mod the ideal")
    return m


def check_orthogonal(v: Sequence[RingElement], w: Sequence[RingElement]):
    if len(v) != len(w):
        raise DimensionMismatch("rows of different length")
    if not inner(hat(v), w).is_zero():
        raise OrthogonalityViolated(f"<v^, w> = {inner(hat(v), w)} is not zero")


def pair_transvection(v: Sequence[RingElement], w: Sequence[RingElement]) -> Matrix:
    """1 + v^t w^ + w^t v^, requires <v^, w> = 0."""
    _check_size(v)
    check_orthogonal(v, w)
    R = v[0].ring
    return Matrix.identity(R, len(v)) + outer(v, hat(w)) + outer(w, hat(v))


@dataclass(frozen=True)
class TransvectionSpec:
    kind: str  # "rank1" or "pair"
    v: tuple
    a: Optional[RingElement] = None
    w: Optional[tuple] = None

    def matrix(self) -> Matrix:
        if self.kind == "rank1":
            return rank1_transvection(self.a, self.v)
        return pair_transvection(self.v, self.w)

    def to_json(self):
        out = {"kind": self.kind, "v": [x.to_json() for x in self.v]}
        if self.a is not None:
            out["a"] = self.a.to_json()
        if self.w is not None:
            out["w"] = [x.to_json() for x in self.w]
        return out


# kernel decomposition ------------------------------------------------------


def kernel_decomposition(w: Sequence[RingElement], v: Sequence[RingElement], u: Sequence[RingElement]) -> dict:
    """Coefficients {(i, j): w_i u_j} (1-based, i != j) with w = sum c_ij (v_j e_i - v_i e_j)."""
    if not len(w) == len(v) == len(u):
        raise DimensionMismatch("rows of different length")
    R = v[0].ring
    if inner(u, v) != R.one:
        raise WitnessInvalid("<u, v> is not 1")
    if not inner(w, v).is_zero():
        raise NotInKernel("<w, v> is not 0")
    n = len(v)
    return {(i + 1, j + 1): w[i] * u[j] for i in range(n) for j in range(n) if i != j}


def reconstruct(coeffs: dict, v: Sequence[RingElement]) -> tuple:
    R = v[0].ring
    out = [R.zero] * len(v)
    for (i, j), c in coeffs.items():
        out[i - 1] = out[i - 1] + c * v[j - 1]
        out[j - 1] = out[j - 1] - c * v[i - 1]
    return tuple(out)


# product of pair transvections --------------------------------------------


def derived_b(vs: Sequence[Sequence[RingElement]], w: Sequence[RingElement]) -> RingElement:
    """b = -sum_{i<j} <v_i^, v_j>.

    Each N_i = v_i^t w^ + w^t v_i^ satisfies N_i N_j = <v_i^, v_j> w^t w^ and all
    triple products vanish, so the product of the factors exceeds 1 + sum N_i
    by (sum_{i<j} <v_i^, v_j>) w^t w^, which (1 + b w^t w^) cancels.
    """
    R = w[0].ring
    b = R.zero
    hats = [hat(v) for v in vs]
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            b = b - inner(hats[i], vs[j])
    return b


@dataclass
class PairProduct:
    factors: list
    b: RingElement
    lhs: Matrix
    correction: Matrix

    def product(self) -> Matrix:
        out = Matrix.identity(self.b.ring, self.lhs.nrows)
        for f in self.factors:
            out = out @ f
        return out @ self.correction


def pair_transvection_product(vs: Sequence[Sequence[RingElement]], w: Sequence[RingElement],
                              ideal: Optional[Ideal] = None) -> PairProduct:
    """Factors 1 + v_i^t w^ + w^t v_i^ and b with 1 + sum(...) = prod(factors) (1 + b w^t w^)."""
    if not vs:
        raise ValueError("need at least one v")
    R = w[0].ring
    for v in vs:
        if v[0].ring != R:
            raise RingMismatch("rows over different rings")
        check_orthogonal(v, w)
        if ideal is not None and not all(ideal.contains(x) for x in v):
            raise ValueError("every v_i must have entries in the ideal")
    n = len(w)
    I = Matrix.identity(R, n)
    factors = [pair_transvection(v, w) for v in vs]
    lhs = I
    for v in vs:
        lhs = lhs + outer(v, hat(w)) + outer(w, hat(v))
    b = derived_b(vs, w)
    correction = I + outer(w, hat(w)).scale(b)
    out = PairProduct(factors, b, lhs, correction)
    if out.product() != lhs:
        raise NoSolution("the derived b does not satisfy the product identity")
    if ideal is not None and not ideal.contains(b):
        raise NoSolution("b is not in the ideal")
    return out


def solve_b_by_expansion(vs, w) -> RingElement:
    """Oracle: expand prod(factors), subtract the sum form, divide the residue by w^t w^."""
    R = w[0].ring
    n = len(w)
    I = Matrix.identity(R, n)
    prod = I
    lhs = I
    for v in vs:
        prod = prod @ pair_transvection(v, w)
        lhs = lhs + outer(v, hat(w)) + outer(w, hat(v))
    residue = prod - lhs
    # prod = lhs + c w^t w^  and  lhs (1 + b w^t w^) = lhs + b w^t w^, so b = -c
    base = outer(w, hat(w))
    pivot = next(((i, j) for i in range(n) for j in range(n) if not base[i, j].is_zero()), None)
    if pivot is None:
        if residue != Matrix.zeros(R, n):
            raise NoSolution("nonzero residue with w^t w^ = 0")
        return R.zero
    if R.is_finite and not R.is_domain:
        # zero divisors: b is only determined modulo an annihilator, take the first solution
        for c in R.elements():
            if residue == base.scale(c):
                return -c
        raise NoSolution("residue is not a multiple of w^t w^")
    c = R.exact_div(residue[pivot], base[pivot])
    if residue != base.scale(c):
        raise NoSolution("residue is not a multiple of w^t w^")
    return -c


def b_solutions(vs, w) -> list:
    """All b in a finite ring satisfying the product identity (brute force)."""
    R = w[0].ring
    n = len(w)
    I = Matrix.identity(R, n)
    prod = I
    lhs = I
    for v in vs:
        prod = prod @ pair_transvection(v, w)
        lhs = lhs + outer(v, hat(w)) + outer(w, hat(v))
    base = outer(w, hat(w))
    return [b for b in R.elements() if prod @ (I + base.scale(b)) == lhs]


# symbolic fixtures ---------------------------------------------------------


def symbolic_rank1(size: int):
    """(a, v) over Z[a, v1..v_size]."""
    names = ("a",) + tuple(f"v{k}" for k in range(1, size + 1))
    R = PolyRing(ZZ, names)
    g = R.gens()
    return g[0], g[1:]


def symbolic_orthogonal_family(k: int, size: int = 4, ring_base: Ring = ZZ):
    """Symbolic w and rows v_1..v_k with <v_i^, w> = 0 imposed by construction.

    Each v_i is a generic combination of the Koszul vectors w^_q e_p - w^_p e_q,
    which span the rows orthogonal to w^.
    """
    pairs = [(p, q) for p in range(size) for q in range(p + 1, size)]
    names = tuple(f"w{k}" for k in range(1, size + 1))
    names += tuple(f"s{i}_{t}" for i in range(1, k + 1) for t in range(len(pairs)))
    R = PolyRing(ring_base, names)
    g = R.gens()
    w = g[:size]
    wh = hat(w)
    coeffs = g[size:]
    vs = []
    for i in range(k):
        v = [R.zero] * size
        for t, (p, q) in enumerate(pairs):
            s = coeffs[i * len(pairs) + t]
            v[p] = v[p] + s * wh[q]
            v[q] = v[q] - s * wh[p]
        vs.append(tuple(v))
    return vs, w


def symplecticity(m: Matrix) -> bool:
    return m.is_symplectic(psi(m.nrows, m.ring))
