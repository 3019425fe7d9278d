"""Dense exact matrices over one ring.

Entries are :class:`RingElement` values; indexing is 0-based, while the
generator constructors elsewhere follow the 1-based convention of the
literature (E_12 touches row 0, column 1).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch, RingMismatch, SizeLimitExceeded
from .rings import Ideal, PolyRing, Ring, RingElement, ring_from_json

SYMBOLIC_SIZE_CAP = 64
DIVISION_FREE_CAP = 16


class Matrix:
    __slots__ = ("ring", "rows", "_hash")

    def __init__(self, ring: Ring, rows: Iterable[Iterable]):
        rows = tuple(tuple(ring(x) for x in row) for row in rows)
        if not rows or not rows[0]:
            raise DimensionMismatch("matrices must have at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged rows")
        if isinstance(ring, PolyRing) and max(len(rows), len(rows[0])) > SYMBOLIC_SIZE_CAP:
            raise SizeLimitExceeded(f"symbolic matrices are capped at {SYMBOLIC_SIZE_CAP}x{SYMBOLIC_SIZE_CAP}")
        self.ring = ring
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, ring, rows):
        m = object.__new__(cls)
        m.ring = ring
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls._raw(ring, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, ring: Ring, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls._raw(ring, tuple((ring.zero,) * m for _ in range(n)))

    @classmethod
    def from_entries(cls, ring: Ring, n: int, entries: dict, base: "Matrix | None" = None) -> "Matrix":
        """Identity (or ``base``) with the listed {(i, j): value} entries added."""
        rows = [list(r) for r in (base or cls.identity(ring, n)).rows]
        for (i, j), x in entries.items():
            rows[i][j] = rows[i][j] + ring(x)
        return cls._raw(ring, tuple(tuple(r) for r in rows))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        R = self.ring
        add, mul, isz = R._add, R._mul, R._is_zero
        zero = R._from_int(0)
        # sparse rows of the right factor, payload level
        right = [[(j, x.v) for j, x in enumerate(r) if not isz(x.v)] for r in other.rows]
        out = []
        for r in self.rows:
            acc = [zero] * other.ncols
            for k, x in enumerate(r):
                if isz(x.v):
                    continue
                xv = x.v
                for j, y in right[k]:
                    acc[j] = add(acc[j], mul(xv, y))
            out.append(tuple(RingElement(R, a) for a in acc))
        return Matrix._raw(R, tuple(out))

    __mul__ = __matmul__

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch")
        return Matrix._raw(self.ring, tuple(tuple(a + b for a, b in zip(r, s))
                                            for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch")
        return Matrix._raw(self.ring, tuple(tuple(a - b for a, b in zip(r, s))
                                            for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.ring, tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> "Matrix":
        c = self.ring(c)
        return Matrix._raw(self.ring, tuple(tuple(c * a for a in r) for r in self.rows))

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.ring, tuple(zip(*self.rows)))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"cannot compare matrices over {self.ring} and {other.ring}")
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def is_identity(self) -> bool:
        return self.is_square() and self == Matrix.identity(self.ring, self.nrows)

    def map(self, f, ring: Ring) -> "Matrix":
        """Apply an entrywise map (e.g. a ring homomorphism) into ``ring``."""
        return Matrix._raw(ring, tuple(tuple(ring(f(x)) for x in r) for r in self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.ring, tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def det(self) -> RingElement:
        return mat_det(self)

    def congruent_mod(self, other: "Matrix", ideal: Ideal) -> bool:
        return mat_congruent_mod(self, other, ideal)

    def is_symplectic(self, form: "Matrix") -> bool:
        return is_symplectic(self, form)

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "nrows": self.nrows, "ncols": self.ncols,
                "entries": [[x.to_json() for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        ring = ring_from_json(obj["ring"])
        m = cls(ring, [[ring.element_from_json(x) for x in r] for r in obj["entries"]])
        if m.shape != (obj["nrows"], obj["ncols"]):
            raise DimensionMismatch("declared shape does not match entries")
        return m

    def tolist(self):
        return [[str(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = "\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix({self.ring},\n[{body}])"


def mat_identity(ring: Ring, n: int) -> Matrix:
    return Matrix.identity(ring, n)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def mat_transpose(a: Matrix) -> Matrix:
    return a.T


def row_times(v: Sequence[RingElement], m: Matrix) -> tuple:
    """Row vector times matrix."""
    if len(v) != m.nrows:
        raise DimensionMismatch(f"row of length {len(v)} against {m.shape}")
    R = m.ring
    out = [R.zero] * m.ncols
    for x, r in zip(v, m.rows):
        x = R(x)
        if x.is_zero():
            continue
        for j, y in enumerate(r):
            if not y.is_zero():
                out[j] = out[j] + x * y
    return tuple(out)


def unit_row(ring: Ring, n: int, k: int = 1) -> tuple:
    """The row e_k (1-based) of length n."""
    return tuple(ring.one if i == k - 1 else ring.zero for i in range(n))


def perp(a: Matrix, b: Matrix) -> Matrix:
    """Block diagonal [[a, 0], [0, b]]."""
    if a.ring != b.ring:
        raise RingMismatch("perp of matrices over different rings")
    z = a.ring.zero
    top = tuple(r + (z,) * b.ncols for r in a.rows)
    bot = tuple((z,) * a.ncols + r for r in b.rows)
    return Matrix._raw(a.ring, top + bot)


def top(a: Matrix, b: Matrix) -> Matrix:
    """Anti-diagonal blocks [[0, a], [b, 0]]."""
    if a.ring != b.ring:
        raise RingMismatch("blocks over different rings")
    z = a.ring.zero
    upper = tuple((z,) * b.ncols + r for r in a.rows)
    lower = tuple(r + (z,) * a.ncols for r in b.rows)
    return Matrix._raw(a.ring, upper + lower)


def blocks(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    """[[a, b], [c, d]]."""
    upper = tuple(x + y for x, y in zip(a.rows, b.rows))
    lower = tuple(x + y for x, y in zip(c.rows, d.rows))
    return Matrix(a.ring, upper + lower)


def det_bareiss(m: Matrix) -> RingElement:
    """Fraction-free elimination; needs exact division, so integral domains only."""
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    R = m.ring
    n = m.nrows
    a = [list(r) for r in m.rows]
    sign = 1
    prev = R.one
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return R.zero
        p = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * p - aik * a[k][j]
                a[i][j] = num if prev == R.one else R.exact_div(num, prev)
        prev = p
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def det_berkowitz(m: Matrix) -> RingElement:
    """Division-free determinant (Berkowitz), valid over any commutative ring."""
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.nrows
    if n > DIVISION_FREE_CAP:
        raise SizeLimitExceeded(f"division-free determinant is capped at {DIVISION_FREE_CAP}x{DIVISION_FREE_CAP}")
    R = m.ring
    a = m.rows
    # coefficients of det(tI - A_r), leading coefficient first
    c = [R.one, -a[0][0]]
    for r in range(1, n):
        S = [a[i][r] for i in range(r)]
        Rw = [a[r][j] for j in range(r)]
        q = [R.one, -a[r][r]]
        vec = S
        for _ in range(r):
            q.append(-sum((x * y for x, y in zip(Rw, vec)), R.zero))
            vec = [sum((a[i][j] * vec[j] for j in range(r)), R.zero) for i in range(r)]
        # lower-triangular Toeplitz (r+2) x (r+1) times c
        c = [sum((q[i - j] * c[j] for j in range(max(0, i - len(q) + 1), min(i, r) + 1)), R.zero)
             for i in range(r + 2)]
    d = c[n]
    return d if n % 2 == 0 else -d


def mat_det(m: Matrix) -> RingElement:
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    if m.ring.is_domain:
        return det_bareiss(m)
    return det_berkowitz(m)


def mat_congruent_mod(m: Matrix, n: Matrix, ideal: Ideal) -> bool:
    if m.ring != n.ring or ideal.ring != m.ring:
        raise RingMismatch("congruence over different rings")
    if m.shape != n.shape:
        raise DimensionMismatch("shape mismatch")
    return all(ideal.contains(a - b) for r, s in zip(m.rows, n.rows) for a, b in zip(r, s))


def is_symplectic(m: Matrix, form: Matrix) -> bool:
    """True iff m^t form m = form."""
    if not (m.is_square() and form.is_square()) or m.nrows != form.nrows:
        raise DimensionMismatch("symplecticity needs square matrices of equal size")
    if m.nrows % 2:
        raise DimensionMismatch("symplectic forms live in even size")
    return m.T @ form @ m == form
