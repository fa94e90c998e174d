"""Exact arithmetic in rational quaternion algebras (a, b / Q).

Elements are stored in the basis 1, i, j, ij with i^2 = a, j^2 = b and
ij = -ji.  Coordinates are ``fractions.Fraction`` (integers are accepted
and promoted).  Local invariants are computed with Hilbert symbols; the
2-adic symbol is obtained from the product formula.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt

from sympy import factorint, isprime

INFINITY = "inf"


def _check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    _check_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _odd_hilbert(a: int, b: int, p: int) -> int:
    # factor out p-powers: a = p^alpha u, b = p^beta w, then the classical
    # formula reduces to Legendre symbols of units
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p**alpha, b // p**beta
    sign = 1
    if alpha % 2 and beta % 2:
        # (p, p)_p = (-1, p)_p = (-1/p)
        sign = legendre_symbol(-1, p)
    val = sign
    if beta % 2:
        val *= legendre_symbol(u, p)
    if alpha % 2:
        val *= legendre_symbol(w, p)
    return val


def _places(a: int, b: int) -> list:
    primes = set(factorint(abs(2 * a * b)))
    return [INFINITY] + sorted(primes)


def hilbert_symbol(a: int, b: int, v) -> int:
    """Hilbert symbol (a, b)_v at a prime v or at v = ``INFINITY``.

    Odd primes use the unit/valuation table; v = 2 is recovered from the
    product formula over all other places.
    """
    a, b = int(a), int(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if v == INFINITY:
        return -1 if (a < 0 and b < 0) else 1
    v = int(v)
    if not isprime(v):
        raise ValueError(f"{v} is not a prime")
    if v != 2:
        return _odd_hilbert(a, b, v)
    prod = 1
    for w in _places(a, b):
        if w != 2:
            prod *= hilbert_symbol(a, b, w)
    return prod


def hilbert_symbol_2adic_table(a: int, b: int) -> int:
    """Direct 2-adic formula, kept only as an independent cross-check."""
    alpha, beta = valuation(a, 2), valuation(b, 2)
    u, w = a >> alpha, b >> beta
    eps = lambda x: ((x - 1) // 2) % 2
    omega = lambda x: ((x * x - 1) // 8) % 2
    e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class QuatAlgebra:
    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("quaternion algebra needs nonzero a, b")

    @cached_property
    def ramified_places(self) -> frozenset:
        return frozenset(v for v in _places(self.a, self.b)
                         if hilbert_symbol(self.a, self.b, v) == -1)

    @cached_property
    def discriminant(self) -> int:
        d = 1
        for v in self.ramified_places:
            if v != INFINITY:
                d *= v
        return d

    @property
    def is_definite(self) -> bool:
        return INFINITY in self.ramified_places

    def is_split_at(self, q: int) -> bool:
        return hilbert_symbol(self.a, self.b, q) == 1

    def element(self, *coords) -> "QuatElement":
        return QuatElement(self, *coords)

    def basis(self):
        return tuple(QuatElement(self, *[int(k == n) for k in range(4)])
                     for n in range(4))


def ramified_places(H: QuatAlgebra) -> frozenset:
    return H.ramified_places


def discriminant(H: QuatAlgebra) -> int:
    return H.discriminant


@dataclass(frozen=True, eq=False)
class QuatElement:
    algebra: QuatAlgebra
    x0: Fraction = Fraction(0)
    x1: Fraction = Fraction(0)
    x2: Fraction = Fraction(0)
    x3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("x0", "x1", "x2", "x3"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def coords(self) -> tuple:
        return (self.x0, self.x1, self.x2, self.x3)

    def _same(self, other: "QuatElement") -> None:
        if self.algebra != other.algebra:
            raise ValueError("elements live in different algebras")

    def __eq__(self, other):
        if not isinstance(other, QuatElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash((self.algebra, self.coords))

    def __add__(self, other):
        if not isinstance(other, QuatElement):
            other = QuatElement(self.algebra, other)
        self._same(other)
        return QuatElement(self.algebra, *(s + t for s, t in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElement(self.algebra, *(-s for s in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QuatElement):
            c = Fraction(other)
            return QuatElement(self.algebra, *(c * s for s in self.coords))
        self._same(other)
        a, b = self.algebra.a, self.algebra.b
        return QuatElement(self.algebra, *quat_mul(self.coords, other.coords, a, b))

    def __rmul__(self, other):
        return self * other

    def conj(self) -> "QuatElement":
        return QuatElement(self.algebra, self.x0, -self.x1, -self.x2, -self.x3)

    def trace(self) -> Fraction:
        return 2 * self.x0

    def norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inverse(self) -> "QuatElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element has zero norm")
        return self.conj() * (1 / n)

    def __repr__(self):
        return f"QuatElement({', '.join(str(c) for c in self.coords)})"


def quat_mul(x, y, a, b):
    """Product of coordinate 4-tuples in (a, b / Q); works for any ring."""
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    return (x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1)


# -- exact numbers in Q(sqrt r) and Q(i, sqrt a, sqrt p) ----------------------

@dataclass(frozen=True)
class QuadraticSurd:
    """u + v*sqrt(r) with rational u, v."""
    u: Fraction
    v: Fraction
    r: int

    def __add__(self, o):
        return QuadraticSurd(self.u + o.u, self.v + o.v, self.r)

    def __sub__(self, o):
        return QuadraticSurd(self.u - o.u, self.v - o.v, self.r)

    def __mul__(self, o):
        return QuadraticSurd(self.u * o.u + self.r * self.v * o.v,
                             self.u * o.v + self.v * o.u, self.r)

    def __float__(self):
        return float(self.u) + float(self.v) * self.r ** 0.5


class Surd:
    """Element of Q(i, sqrt a, sqrt p) as rational coordinates on the basis
    {1, sqrt a, sqrt p, sqrt ap} x {1, i}.

    Keys are ``(mask, imag)`` with mask bit 0 for sqrt a and bit 1 for sqrt p.
    """

    __slots__ = ("a", "p", "c")

    def __init__(self, a: int, p: int, coeffs=None):
        self.a, self.p = a, p
        self.c = {k: Fraction(v) for k, v in (coeffs or {}).items() if v != 0}

    def _radicand(self, mask):
        return (self.a if mask & 1 else 1) * (self.p if mask & 2 else 1)

    def __add__(self, o):
        c = dict(self.c)
        for k, v in o.c.items():
            c[k] = c.get(k, 0) + v
        return Surd(self.a, self.p, c)

    def __neg__(self):
        return Surd(self.a, self.p, {k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        out: dict = {}
        for (m1, i1), v1 in self.c.items():
            for (m2, i2), v2 in o.c.items():
                scale = self._radicand(m1 & m2)
                sign = -1 if (i1 and i2) else 1
                key = (m1 ^ m2, i1 ^ i2)
                out[key] = out.get(key, 0) + sign * scale * v1 * v2
        return Surd(self.a, self.p, out)

    def conjugate(self) -> "Surd":
        return Surd(self.a, self.p,
                    {(m, i): (-v if i else v) for (m, i), v in self.c.items()})

    def __eq__(self, o):
        return isinstance(o, Surd) and (self - o).c == {}

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def rational(self) -> Fraction:
        """Value when the element is rational; raises otherwise."""
        if any(k != (0, 0) for k in self.c):
            raise ValueError("surd is not rational")
        return self.c.get((0, 0), Fraction(0))

    def __complex__(self):
        z = 0j
        for (m, i), v in self.c.items():
            t = float(v) * self._radicand(m) ** 0.5
            z += 1j * t if i else t
        return z

    def __repr__(self):
        return f"Surd({complex(self)})"


def embed_sl2(h: QuatElement):
    """Matrix of h in M(2, Q(sqrt a)) under the fixed embedding
    [[x0 + x1 sqrt a, x2 + x3 sqrt a], [b (x2 - x3 sqrt a), x0 - x1 sqrt a]].
    """
    a, b = h.algebra.a, h.algebra.b
    if a <= 0:
        raise ValueError("embedding into M(2, R) needs a > 0")
    x0, x1, x2, x3 = h.coords
    S = lambda u, v: QuadraticSurd(Fraction(u), Fraction(v), a)
    return ((S(x0, x1), S(x2, x3)),
            (S(b * x2, -b * x3), S(x0, -x1)))


def surd_matmul(M, N):
    return tuple(tuple(M[r][0] * N[0][c] + M[r][1] * N[1][c] for c in range(2))
                 for r in range(2))


def surd_det(M):
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


def su11_entries(x, a: int, p: int):
    """Exact (A, C) for the disc matrix [[A, conj C], [C, conj A]] of
    x0 + x1 i + x2 j + x3 ij, with i^2 = a, j^2 = p."""
    x0, x1, x2, x3 = x
    A = Surd(a, p, {(0, 0): x0, (3, 1): x3})
    C = Surd(a, p, {(1, 0): x1, (2, 1): x2})
    return A, C


def embed_su11(g, a: int | None = None, p: int | None = None):
    """Exact SU(1,1) matrix of a norm-one element.

    ``g`` is a ``QuatElement`` of (a, p / Q) or anything with ``coords``
    plus ``a``/``p`` attributes (e.g. a ``GroupElement``).
    """
    if isinstance(g, QuatElement):
        a, p = g.algebra.a, g.algebra.b
        coords = g.coords
    else:
        coords = g.coords
        a = g.a if a is None else a
        p = g.p if p is None else p
    x0, x1, x2, x3 = coords
    if x0 * x0 - a * x1 * x1 - p * x2 * x2 + a * p * x3 * x3 != 1:
        raise ValueError("element does not have norm 1")
    A, C = su11_entries(coords, a, p)
    return ((A, C.conjugate()), (C, A.conjugate()))


def matrix_to_complex(M):
    import numpy as np
    return np.array([[complex(e) for e in row] for row in M])


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
