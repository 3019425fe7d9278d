"""Exact commutative rings: Z, Z/m, sparse polynomials over those, and excision rings.

A ring descriptor (``Integers()``, ``Modular(8)``, ...) owns the arithmetic on
raw payloads; :class:`RingElement` wraps a payload together with its ring and
provides the operators.  Descriptors are frozen dataclasses, so two
descriptors compare equal exactly when they describe the same ring.

Payloads:

* ``Integers`` / ``Modular``: a Python ``int`` (residues reduced into ``[0, m)``)
* ``PolyRing``: a dict ``{exponent tuple: nonzero int coefficient}``, never mutated
* ``Excision`` / ``ExcisionZ``: a pair ``(first, second)`` of payloads
"""

from __future__ import annotations

import ast
import math
import random
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Any, Iterator, Sequence

from .errors import NotUnimodular, RingMismatch, UnsupportedMembership


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _radical(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            out *= p
            while n % p == 0:
                n //= p
        p += 1
    return out * (n if n > 1 else 1)


class RingElement:
    __slots__ = ("ring", "v")

    def __init__(self, ring: "Ring", v: Any):
        self.ring = ring
        self.v = v

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.v
        if isinstance(other, int):
            return self.ring._from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = self.ring
        return RingElement(r, r._add(self.v, r._neg(o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = self.ring
        return RingElement(r, r._add(o, r._neg(self.v)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._mul(self.v, o))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring._neg(self.v))

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring._key(self.v) == self.ring._key(self.ring._from_int(other))
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"cannot compare {self.ring} with {other.ring}")
        return self.ring._key(self.v) == self.ring._key(other.v)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.ring._key(self.v))

    def __bool__(self):
        return not self.ring._is_zero(self.v)

    def is_zero(self) -> bool:
        return self.ring._is_zero(self.v)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def inverse(self) -> "RingElement":
        return self.ring.inverse(self)

    def key(self):
        """Hashable canonical form of the payload."""
        return self.ring._key(self.v)

    def to_json(self):
        return self.ring.element_to_json(self)

    def __repr__(self):
        return self.ring.format(self.v)

    __str__ = __repr__


class Ring:
    """Common surface of every ring descriptor."""

    is_domain = False
    is_finite = False
    is_euclidean = False

    # payload level, overridden per ring
    def _add(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _from_int(self, n: int):
        raise NotImplementedError

    def _is_zero(self, a) -> bool:
        raise NotImplementedError

    def _key(self, a):
        return a

    def format(self, a) -> str:
        return str(a)

    def _convert(self, x):
        raise TypeError(f"cannot build an element of {self} from {x!r}")

    def __call__(self, x) -> RingElement:
        if isinstance(x, RingElement):
            if x.ring != self:
                raise RingMismatch(f"{x.ring} element given where {self} expected")
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a ring element")
        if isinstance(x, int):
            return RingElement(self, self._from_int(x))
        return RingElement(self, self._convert(x))

    @cached_property
    def zero(self) -> RingElement:
        return RingElement(self, self._from_int(0))

    @cached_property
    def one(self) -> RingElement:
        return RingElement(self, self._from_int(1))

    def is_unit(self, x: RingElement) -> bool:
        raise NotImplementedError(f"unit test not available over {self}")

    def inverse(self, x: RingElement) -> RingElement:
        raise NotImplementedError(f"inverse not available over {self}")

    def exact_div(self, a: RingElement, b: RingElement) -> RingElement:
        """a / b when b divides a exactly (only needed over integral domains)."""
        raise NotImplementedError(f"exact division not available over {self}")

    def euclid_norm(self, a: RingElement) -> int:
        raise NotImplementedError(f"{self} is not Euclidean here")

    def euclid_divmod(self, a: RingElement, b: RingElement):
        raise NotImplementedError(f"{self} is not Euclidean here")

    def elements(self) -> Iterator[RingElement]:
        raise NotImplementedError(f"{self} is not finite")

    def random_element(self, rng: random.Random, **kw) -> RingElement:
        raise NotImplementedError

    def ideal(self, *gens) -> "Ideal":
        return Ideal(self, tuple(self(g) for g in gens))

    def contains(self, ideal: "Ideal", x: RingElement) -> bool:
        raise UnsupportedMembership(f"membership not decidable over {self}")

    def parse(self, text: str) -> RingElement:
        """Parse an element literal such as ``"3"`` or ``"a0*b1 - 2*x^2"``."""
        return _parse_expr(self, text)

    # JSON
    def to_json(self) -> dict:
        raise NotImplementedError

    def element_to_json(self, x: RingElement):
        raise NotImplementedError

    def element_from_json(self, obj) -> RingElement:
        raise NotImplementedError


@dataclass(frozen=True)
class Integers(Ring):
    is_domain = True
    is_euclidean = True

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _from_int(self, n):
        return n

    def _is_zero(self, a):
        return a == 0

    def _convert(self, x):
        if isinstance(x, str):
            return int(x)
        return super()._convert(x)

    def is_unit(self, x):
        return self(x).v in (1, -1)

    def inverse(self, x):
        x = self(x)
        if x.v not in (1, -1):
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        return x

    def exact_div(self, a, b):
        q, r = divmod(a.v, b.v)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return RingElement(self, q)

    def euclid_norm(self, a):
        return abs(a.v)

    def euclid_divmod(self, a, b):
        q, r = divmod(a.v, b.v)
        return RingElement(self, q), RingElement(self, r)

    def random_element(self, rng, bound=10, **kw):
        return RingElement(self, rng.randint(-bound, bound))

    def contains(self, ideal, x):
        g = 0
        for gen in ideal.generators:
            g = math.gcd(g, gen.v)
        return x.v == 0 if g == 0 else x.v % g == 0

    def to_json(self):
        return {"kind": "Integers"}

    def element_to_json(self, x):
        return str(x.v)

    def element_from_json(self, obj):
        return RingElement(self, int(obj))

    def __str__(self):
        return "Z"


ZZ = Integers()


@dataclass(frozen=True)
class Modular(Ring):
    modulus: int
    is_finite = True
    is_euclidean = True

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise ValueError("modulus must be an integer >= 2")

    @property
    def is_domain(self):
        return _is_prime(self.modulus)

    def _add(self, a, b):
        return (a + b) % self.modulus

    def _neg(self, a):
        return (-a) % self.modulus

    def _mul(self, a, b):
        return (a * b) % self.modulus

    def _from_int(self, n):
        return n % self.modulus

    def _is_zero(self, a):
        return a == 0

    def _convert(self, x):
        if isinstance(x, str):
            return int(x) % self.modulus
        return super()._convert(x)

    def is_unit(self, x):
        return math.gcd(self(x).v, self.modulus) == 1

    def inverse(self, x):
        return RingElement(self, pow(self(x).v, -1, self.modulus))

    def exact_div(self, a, b):
        if not self.is_domain:
            raise NotImplementedError("exact division over Z/m needs m prime")
        return a * self.inverse(b)

    def euclid_norm(self, a):
        return a.v

    def euclid_divmod(self, a, b):
        # Euclid on the canonical lifts in [0, m)
        q, r = divmod(a.v, b.v)
        return RingElement(self, q % self.modulus), RingElement(self, r)

    def elements(self):
        return (RingElement(self, k) for k in range(self.modulus))

    def random_element(self, rng, **kw):
        return RingElement(self, rng.randrange(self.modulus))

    def contains(self, ideal, x):
        g = self.modulus
        for gen in ideal.generators:
            g = math.gcd(g, gen.v)
        return x.v % g == 0

    def to_json(self):
        return {"kind": "Modular", "modulus": str(self.modulus)}

    def element_to_json(self, x):
        return str(x.v)

    def element_from_json(self, obj):
        return RingElement(self, int(obj) % self.modulus)

    def __str__(self):
        return f"Z/{self.modulus}"


def _grlex(e):
    return (sum(e), e)


@dataclass(frozen=True)
class PolyRing(Ring):
    """Sparse multivariate polynomials over ``Integers`` or ``Modular``."""

    base: Ring
    variables: tuple

    def __post_init__(self):
        if not isinstance(self.base, (Integers, Modular)):
            raise ValueError("polynomial base must be Z or Z/m")
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables) or not self.variables:
            raise ValueError("variables must be distinct and nonempty")

    @property
    def nvars(self):
        return len(self.variables)

    @property
    def is_domain(self):
        return self.base.is_domain

    @property
    def is_euclidean(self):
        return self.nvars == 1 and isinstance(self.base, Modular) and self.base.is_domain

    def _c(self, c):
        return c % self.base.modulus if isinstance(self.base, Modular) else c

    def _add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            s = self._c(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return out

    def _neg(self, a):
        return {e: self._c(-c) for e, c in a.items()}

    def _mul(self, a, b):
        if not a or not b:
            return {}
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in ((e, self._c(c)) for e, c in out.items()) if c}

    def _from_int(self, n):
        c = self._c(n)
        return {(0,) * self.nvars: c} if c else {}

    def _is_zero(self, a):
        return not a

    def _key(self, a):
        return frozenset(a.items())

    def _convert(self, x):
        if isinstance(x, str):
            return self.parse(x).v
        if isinstance(x, dict):
            out = {}
            for e, c in x.items():
                e = tuple(int(k) for k in e)
                if len(e) != self.nvars or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent vector {e}")
                c = self._c(int(c))
                if c:
                    out[e] = c
            return out
        return super()._convert(x)

    def gen(self, name: str) -> RingElement:
        k = self.variables.index(name)
        e = tuple(1 if i == k else 0 for i in range(self.nvars))
        return RingElement(self, {e: 1})

    def gens(self) -> tuple:
        return tuple(self.gen(n) for n in self.variables)

    def constant(self, x: RingElement) -> RingElement:
        return self(x.v)

    def terms(self, a: RingElement):
        """Terms as (exponents, coefficient) in descending graded-lex order."""
        return sorted(a.v.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def leading(self, a):
        e = max(a, key=_grlex)
        return e, a[e]

    def degree(self, a: RingElement) -> int:
        return max((sum(e) for e in a.v), default=-1)

    def _coeff_div(self, a, b):
        if isinstance(self.base, Modular):
            return (a * pow(b, -1, self.base.modulus)) % self.base.modulus
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("coefficient division is not exact")
        return q

    def exact_div(self, a, b):
        if not b.v:
            raise ZeroDivisionError("division by zero polynomial")
        if isinstance(self.base, Modular) and not self.base.is_domain:
            raise NotImplementedError("exact division needs a domain")
        rem = dict(a.v)
        quo: dict = {}
        lb, cb = self.leading(b.v)
        while rem:
            le, ce = self.leading(rem)
            d = tuple(x - y for x, y in zip(le, lb))
            if min(d) < 0:
                raise ArithmeticError(f"{b} does not divide {a}")
            q = self._coeff_div(ce, cb)
            quo[d] = q
            rem = self._add(rem, self._neg(self._mul({d: q}, b.v)))
        return RingElement(self, quo)

    def is_unit(self, x):
        x = self(x)
        if not x.v:
            return False
        zero = (0,) * self.nvars
        c0 = x.v.get(zero, 0)
        if isinstance(self.base, Integers):
            return len(x.v) == 1 and c0 in (1, -1)
        m = self.base.modulus
        if math.gcd(c0, m) != 1:
            return False
        rad = _radical(m)
        return all(c % rad == 0 for e, c in x.v.items() if e != zero)

    def inverse(self, x):
        x = self(x)
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit")
        zero = (0,) * self.nvars
        c0 = x.v[zero]
        if len(x.v) == 1:
            return RingElement(self, {zero: self.base.inverse(self.base(c0)).v})
        # unit + nilpotent: geometric series terminates
        u_inv = self(self.base.inverse(self.base(c0)).v)
        nil = -(x * u_inv - 1)
        total, term = self.one, self.one
        while True:
            term = term * nil
            if term.is_zero():
                break
            total = total + term
        return total * u_inv

    # univariate Euclid over a prime field
    def _udivmod(self, a, b):
        m = self.base.modulus
        rem = dict(a)
        quo = {}
        db = max(e[0] for e in b)
        inv = pow(b[(db,)], -1, m)
        while rem:
            dr = max(e[0] for e in rem)
            if dr < db:
                break
            c = (rem[(dr,)] * inv) % m
            quo[(dr - db,)] = c
            rem = self._add(rem, self._neg(self._mul({(dr - db,): c}, b)))
        return quo, rem

    def euclid_norm(self, a):
        if not self.is_euclidean:
            raise NotImplementedError(f"{self} is not Euclidean here")
        return self.degree(a)

    def euclid_divmod(self, a, b):
        if not self.is_euclidean:
            raise NotImplementedError(f"{self} is not Euclidean here")
        q, r = self._udivmod(a.v, b.v)
        return RingElement(self, q), RingElement(self, r)

    def random_element(self, rng, max_degree=2, max_terms=3, bound=5, **kw):
        out = self.zero
        for _ in range(rng.randint(0, max_terms)):
            e = [0] * self.nvars
            for _ in range(rng.randint(0, max_degree)):
                e[rng.randrange(self.nvars)] += 1
            c = rng.randint(-bound, bound)
            out = out + RingElement(self, self._convert({tuple(e): c}))
        return out

    def contains(self, ideal, x):
        gens = [g for g in ideal.generators if g.v]
        if not gens:
            return not x.v
        if any(self.is_unit(g) for g in gens):
            return True
        var_idx = []
        for g in gens:
            if len(g.v) == 1:
                (e, c), = g.v.items()
                if sum(e) == 1 and self.base.is_unit(self.base(c)):
                    var_idx.append(e.index(1))
                    continue
            var_idx = None
            break
        if var_idx is not None:
            return all(any(e[k] > 0 for k in var_idx) for e in x.v)
        if self.is_euclidean:
            g = reduce(self._ugcd, (g.v for g in gens))
            _, r = self._udivmod(x.v, g)
            return not r
        raise UnsupportedMembership(
            f"membership in {ideal} over {self} needs a variable-generated ideal "
            "or a univariate prime-field ring")

    def _ugcd(self, a, b):
        while b:
            a, b = b, self._udivmod(a, b)[1]
        return a

    def format(self, a):
        if not a:
            return "0"
        parts = []
        for e, c in sorted(a.items(), key=lambda t: _grlex(t[0]), reverse=True):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"kind": "Poly", "base": self.base.to_json(), "variables": list(self.variables)}

    def element_to_json(self, x):
        return [[list(e), str(c)] for e, c in self.terms(x)]

    def element_from_json(self, obj):
        return RingElement(self, self._convert({tuple(e): int(c) for e, c in obj}))

    def __str__(self):
        return f"poly({self.base};{','.join(self.variables)})"


@dataclass(frozen=True)
class Excision(Ring):
    """The ring R + I on pairs, (x, i)(y, j) = (xy, xj + yi + ij)."""

    base: Ring
    ideal: "Ideal"

    def __post_init__(self):
        if self.ideal.ring != self.base:
            raise RingMismatch("excision ideal must be an ideal of the base ring")

    @property
    def is_finite(self):
        return self.base.is_finite

    def _add(self, a, b):
        B = self.base
        return (B._add(a[0], b[0]), B._add(a[1], b[1]))

    def _neg(self, a):
        return (self.base._neg(a[0]), self.base._neg(a[1]))

    def _mul(self, a, b):
        B = self.base
        (x, i), (y, j) = a, b
        return (B._mul(x, y), B._add(B._add(B._mul(x, j), B._mul(y, i)), B._mul(i, j)))

    def _from_int(self, n):
        return (self.base._from_int(n), self.base._from_int(0))

    def _is_zero(self, a):
        return self.base._is_zero(a[0]) and self.base._is_zero(a[1])

    def _key(self, a):
        return (self.base._key(a[0]), self.base._key(a[1]))

    def _convert(self, x):
        x0, x1 = x
        a, i = self.base(x0), self.base(x1)
        try:
            ok = self.ideal.contains(i)
        except UnsupportedMembership:
            ok = True
        if not ok:
            raise ValueError(f"second component {i} is not in {self.ideal}")
        return (a.v, i.v)

    def pair(self, x: RingElement):
        return RingElement(self.base, x.v[0]), RingElement(self.base, x.v[1])

    def format(self, a):
        return f"({self.base.format(a[0])}, {self.base.format(a[1])})"

    def hom_g(self, x: RingElement) -> RingElement:
        """(x, i) -> x + i in the base ring."""
        return RingElement(self.base, self.base._add(*self(x).v))

    def section_g(self, x: RingElement) -> RingElement:
        return RingElement(self, (self.base(x).v, self.base._from_int(0)))

    def kernel_ideal(self) -> "Ideal":
        """The ideal 0 + I."""
        z = self.base._from_int(0)
        return Ideal(self, tuple(RingElement(self, (z, g.v)) for g in self.ideal.generators))

    def is_unit(self, x):
        a, i = self.pair(self(x))
        return a.is_unit() and (a + i).is_unit()

    def inverse(self, x):
        a, i = self.pair(self(x))
        ai = a.inverse()
        return RingElement(self, (ai.v, ((a + i).inverse() - ai).v))

    def elements(self):
        ideal_elems = [x for x in self.base.elements() if self.ideal.contains(x)]
        for a in self.base.elements():
            for i in ideal_elems:
                yield RingElement(self, (a.v, i.v))

    def random_element(self, rng, **kw):
        a = self.base.random_element(rng, **kw)
        i = self.ideal.random_member(rng, **kw)
        return RingElement(self, (a.v, i.v))

    def contains(self, ideal, x):
        return _excision_contains(self, ideal, x)

    def to_json(self):
        return {"kind": "Excision", "base": self.base.to_json(),
                "ideal": [g.to_json() for g in self.ideal.generators]}

    def element_to_json(self, x):
        a, i = self.pair(x)
        return [a.to_json(), i.to_json()]

    def element_from_json(self, obj):
        return self((self.base.element_from_json(obj[0]), self.base.element_from_json(obj[1])))

    def __str__(self):
        return f"excision({self.base};{self.ideal.short()})"


@dataclass(frozen=True)
class ExcisionZ(Ring):
    """The ring Z + I for an ideal I of a host ring; (n, i)(m, j) = (nm, nj + mi + ij)."""

    host: Ring
    ideal: "Ideal"

    def __post_init__(self):
        if self.ideal.ring != self.host:
            raise RingMismatch("excision ideal must be an ideal of the host ring")

    def _add(self, a, b):
        return (a[0] + b[0], self.host._add(a[1], b[1]))

    def _neg(self, a):
        return (-a[0], self.host._neg(a[1]))

    def _mul(self, a, b):
        H = self.host
        (n, i), (m, j) = a, b
        nj = H._mul(H._from_int(n), j)
        mi = H._mul(H._from_int(m), i)
        return (n * m, H._add(H._add(nj, mi), H._mul(i, j)))

    def _from_int(self, n):
        return (n, self.host._from_int(0))

    def _is_zero(self, a):
        return a[0] == 0 and self.host._is_zero(a[1])

    def _key(self, a):
        return (a[0], self.host._key(a[1]))

    def _convert(self, x):
        n, x1 = x
        if isinstance(n, RingElement):
            n = ZZ(n).v
        i = self.host(x1)
        try:
            ok = self.ideal.contains(i)
        except UnsupportedMembership:
            ok = True
        if not ok:
            raise ValueError(f"second component {i} is not in {self.ideal}")
        return (int(n), i.v)

    def pair(self, x: RingElement):
        return x.v[0], RingElement(self.host, x.v[1])

    def format(self, a):
        return f"({a[0]}, {self.host.format(a[1])})"

    def hom_f(self, x: RingElement) -> RingElement:
        """(m, i) -> m + i in the host ring."""
        n, i = self(x).v
        return RingElement(self.host, self.host._add(self.host._from_int(n), i))

    def kernel_ideal(self) -> "Ideal":
        return Ideal(self, tuple(RingElement(self, (0, g.v)) for g in self.ideal.generators))

    def is_unit(self, x):
        n, i = self.pair(self(x))
        return n in (1, -1) and (i + n).is_unit()

    def inverse(self, x):
        n, i = self.pair(self(x))
        if n not in (1, -1):
            raise ZeroDivisionError(f"{x} is not a unit")
        t = (i + n).inverse() - n
        return RingElement(self, (n, t.v))

    def random_element(self, rng, bound=5, **kw):
        i = self.ideal.random_member(rng, bound=bound, **kw)
        return RingElement(self, (rng.randint(-bound, bound), i.v))

    def contains(self, ideal, x):
        if not isinstance(self.host, (Integers, Modular)):
            raise UnsupportedMembership("Z + I ideals are decided only over Z or Z/m hosts")
        return _excision_contains(self, ideal, x)

    def to_json(self):
        return {"kind": "ExcisionZ", "host": self.host.to_json(),
                "ideal": [g.to_json() for g in self.ideal.generators]}

    def element_to_json(self, x):
        n, i = self.pair(x)
        return [str(n), i.to_json()]

    def element_from_json(self, obj):
        return self((int(obj[0]), self.host.element_from_json(obj[1])))

    def __str__(self):
        return f"excisionZ({self.host};{self.ideal.short()})"


def _excision_contains(ring, ideal, x) -> bool:
    host = ring.host if isinstance(ring, ExcisionZ) else ring.base
    if any(ring.is_unit(g) for g in ideal.generators):
        return True
    firsts = [g.v[0] for g in ideal.generators]
    zero_first = ring._from_int(0)[0]
    if any(f != zero_first for f in firsts):
        raise UnsupportedMembership("only ideals of the form 0 + J are decided over excision rings")
    if x.v[0] != zero_first:
        return False
    inner = Ideal(host, tuple(RingElement(host, g.v[1]) for g in ideal.generators))
    return inner.contains(RingElement(host, x.v[1]))


@dataclass(frozen=True)
class Ideal:
    """A finitely generated ideal, given by its generators."""

    ring: Ring
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        for g in gens:
            if not isinstance(g, RingElement) or g.ring != self.ring:
                raise RingMismatch(f"generator {g!r} is not in {self.ring}")
        object.__setattr__(self, "generators", gens)

    def contains(self, x) -> bool:
        return self.ring.contains(self, self.ring(x))

    __contains__ = contains

    def is_unit_ideal(self) -> bool:
        try:
            return self.contains(self.ring.one)
        except UnsupportedMembership:
            return any(self.ring.is_unit(g) for g in self.generators)

    def random_member(self, rng: random.Random, **kw) -> RingElement:
        """A random combination of the generators."""
        R = self.ring
        out = R.zero
        for g in self.generators:
            out = out + R.random_element(rng, **kw) * g
        return out

    def members(self) -> list:
        """All elements, for a finite ring (in the ring's enumeration order)."""
        return [x for x in self.ring.elements() if self.contains(x)]

    def short(self) -> str:
        return "(" + ",".join(str(g) for g in self.generators) + ")"

    def to_json(self):
        return {"ring": self.ring.to_json(), "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, obj) -> "Ideal":
        ring = ring_from_json(obj["ring"])
        return cls(ring, tuple(ring.element_from_json(g) for g in obj["generators"]))

    def __str__(self):
        return self.short()


def ideal_contains(ideal: Ideal, x) -> bool:
    return ideal.contains(x)


def hom_f(x: RingElement) -> RingElement:
    if not isinstance(x.ring, ExcisionZ):
        raise RingMismatch("hom_f is defined on Z + I")
    return x.ring.hom_f(x)


def hom_g(x: RingElement) -> RingElement:
    if not isinstance(x.ring, Excision):
        raise RingMismatch("hom_g is defined on R + I")
    return x.ring.hom_g(x)


def section_g(ring: Excision, x) -> RingElement:
    return ring.section_g(x)


def ring_from_json(obj: dict) -> Ring:
    kind = obj["kind"]
    if kind == "Integers":
        return ZZ
    if kind == "Modular":
        return Modular(int(obj["modulus"]))
    if kind == "Poly":
        return PolyRing(ring_from_json(obj["base"]), tuple(obj["variables"]))
    if kind in ("Excision", "ExcisionZ"):
        inner = ring_from_json(obj["base" if kind == "Excision" else "host"])
        ideal = Ideal(inner, tuple(inner.element_from_json(g) for g in obj["ideal"]))
        return Excision(inner, ideal) if kind == "Excision" else ExcisionZ(inner, ideal)
    raise ValueError(f"unknown ring kind {kind!r}")


def _split_top(text: str, sep: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def parse_ring(text: str) -> Ring:
    """Parse descriptors like ``Z``, ``Z/8``, ``poly(Z;a0,a1)``, ``excision(Z/8;(2))``."""
    t = text.replace(" ", "")
    if t in ("Z", "ZZ"):
        return ZZ
    if t.startswith("Z/"):
        return Modular(int(t[2:]))
    if t.startswith("F") and t[1:].isdigit():
        p = int(t[1:])
        if not _is_prime(p):
            raise ValueError(f"F{p}: {p} is not prime")
        return Modular(p)
    for prefix in ("poly(", "excision(", "excisionZ(", "excisionz("):
        if t.startswith(prefix) and t.endswith(")"):
            inner = t[len(prefix):-1]
            left, right = _split_top(inner, ";")
            base = parse_ring(left)
            if prefix == "poly(":
                return PolyRing(base, tuple(right.split(",")))
            if not (right.startswith("(") and right.endswith(")")):
                raise ValueError(f"ideal must be written as (g1,...): {right!r}")
            ideal = base.ideal(*[base.parse(g) for g in _split_top(right[1:-1], ",")])
            return Excision(base, ideal) if prefix == "excision(" else ExcisionZ(base, ideal)
    raise ValueError(f"cannot parse ring descriptor {text!r}")


def parse_ideal(ring: Ring, text: str) -> Ideal:
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    return ring.ideal(*[ring.parse(g) for g in _split_top(t, ",")])


def _parse_expr(ring: Ring, text: str) -> RingElement:
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return ring(node.value)
        if isinstance(node, ast.Name) and isinstance(ring, PolyRing):
            return ring.gen(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                k = node.right
                if not (isinstance(k, ast.Constant) and isinstance(k.value, int)):
                    raise ValueError("exponents must be integer literals")
                return ev(node.left) ** k.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        if isinstance(node, ast.Tuple) and isinstance(ring, (Excision, ExcisionZ)) and len(node.elts) == 2:
            inner = ring.base if isinstance(ring, Excision) else ring.host
            first = ev_in(inner if isinstance(ring, Excision) else ZZ, node.elts[0])
            return ring((first, ev_in(inner, node.elts[1])))
        raise ValueError(f"unsupported syntax in element literal {text!r}")

    def ev_in(r, node):
        return _parse_expr(r, ast.unparse(node))

    return ev(tree)


def unimodular_witness(row: Sequence[RingElement]) -> tuple:
    """A row u with sum(u_i * v_i) = 1, via extended Euclid (Euclidean rings only).

    Raises NotUnimodular when the row generates a proper ideal.
    """
    if not row:
        raise NotUnimodular("empty row")
    R = row[0].ring
    if not R.is_euclidean:
        raise NotImplementedError(f"no witness procedure over {R}")
    # invariant: g = sum(coef_k * row_k)
    g = row[0]
    coef = [R.one] + [R.zero] * (len(row) - 1)
    for k in range(1, len(row)):
        a, b = g, row[k]
        s0, t0, s1, t1 = R.one, R.zero, R.zero, R.one
        while not b.is_zero():
            q, r = R.euclid_divmod(a, b)
            a, b = b, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        g = a
        coef = [c * s0 for c in coef]
        coef[k] = t0
    if not g.is_unit():
        raise NotUnimodular(f"row generates the ideal ({g}), not the unit ideal")
    ginv = g.inverse()
    return tuple(c * ginv for c in coef)


def inner(v: Sequence[RingElement], w: Sequence[RingElement]) -> RingElement:
    if len(v) != len(w):
        raise ValueError("rows of different length")
    if not v:
        raise ValueError("empty rows")
    total = v[0] * w[0]
    for a, b in zip(v[1:], w[1:]):
        total = total + a * b
    return total


def is_unimodular(row: Sequence[RingElement]) -> bool:
    try:
        unimodular_witness(row)
    except NotUnimodular:
        return False
    return True
