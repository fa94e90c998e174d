"""Enumeration of Gamma_{p,a}: integer solutions of

    x0^2 - a x1^2 - p x2^2 + a p x3^2 = 1

in shells of constant m = a x1^2 + p x2^2 (= |C|^2 of the disc matrix).
Elements are taken modulo +-1 with the first nonzero coordinate positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isqrt

import numpy as np
from sympy import isprime

from .arith import legendre_symbol, quat_mul


def is_valid_pair(p: int, a: int) -> bool:
    return invalid_reason(p, a) is None


def invalid_reason(p: int, a: int) -> str | None:
    """Why (p, a) is not admissible, or None."""
    if p < 3 or p % 2 == 0 or not isprime(p):
        return "p is not an odd prime"
    if not 1 < a < p:
        return "a is not in the range 1 < a < p"
    if legendre_symbol(a, p) != -1:
        return "a is a quadratic residue mod p"
    return None


def _canonical(x):
    for c in x:
        if c:
            return x if c > 0 else tuple(-t for t in x)
    return x


@dataclass(frozen=True)
class GroupElement:
    x0: int
    x1: int
    x2: int
    x3: int
    p: int
    a: int

    def __post_init__(self):
        if self.norm() != 1:
            raise ValueError(f"{self.coords} has norm {self.norm()} != 1")

    @classmethod
    def make(cls, x, p, a, canonical=True):
        x = tuple(int(t) for t in x)
        if canonical:
            x = _canonical(x)
        return cls(*x, p=p, a=a)

    @classmethod
    def identity(cls, p, a):
        return cls(1, 0, 0, 0, p, a)

    @property
    def coords(self):
        return (self.x0, self.x1, self.x2, self.x3)

    def norm(self) -> int:
        a, p = self.a, self.p
        return (self.x0 ** 2 - a * self.x1 ** 2 - p * self.x2 ** 2
                + a * p * self.x3 ** 2)

    @property
    def c_norm_sq(self) -> int:
        return self.a * self.x1 ** 2 + self.p * self.x2 ** 2

    @property
    def a_norm_sq(self) -> int:
        return self.x0 ** 2 + self.a * self.p * self.x3 ** 2

    @property
    def trace(self) -> int:
        return 2 * self.x0

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        z = quat_mul(self.coords, other.coords, self.a, self.p)
        return GroupElement.make(z, self.p, self.a)

    def inverse(self) -> "GroupElement":
        return GroupElement.make((self.x0, -self.x1, -self.x2, -self.x3), self.p, self.a)

    def is_identity(self) -> bool:
        return self.coords == (1, 0, 0, 0)

    @cached_property
    def su11(self):
        """Float disc matrix [[A, conj C], [C, conj A]]."""
        import numpy as np
        ra, rp = self.a ** 0.5, self.p ** 0.5
        A = complex(self.x0, self.x3 * (self.a * self.p) ** 0.5)
        C = complex(self.x1 * ra, self.x2 * rp)
        return np.array([[A, C.conjugate()], [C, A.conjugate()]])

    def __repr__(self):
        return f"GroupElement{self.coords}"


@dataclass
class EnumerationShell:
    m: int
    members: list


def _reps_c(p, a, lo, hi):
    """{m: [(x1, x2), ...]} for a x1^2 + p x2^2 = m, lo <= m < hi, all signs."""
    out: dict = {}
    x2 = 0
    while p * x2 * x2 < hi:
        rest_lo = lo - p * x2 * x2
        rest_hi = hi - p * x2 * x2
        x1_lo = 0 if rest_lo <= 0 else isqrt((rest_lo - 1) // a) + 1
        x1 = x1_lo
        while a * x1 * x1 < rest_hi:
            m = a * x1 * x1 + p * x2 * x2
            if m >= lo:
                bucket = out.setdefault(m, [])
                for s1 in ((1, -1) if x1 else (1,)):
                    for s2 in ((1, -1) if x2 else (1,)):
                        bucket.append((s1 * x1, s2 * x2))
            x1 += 1
        x2 += 1
    return out


def _reps_b(p, a, n):
    """All (x0, x3) with x0^2 + a p x3^2 = n."""
    ap = a * p
    out = []
    x3 = 0
    while ap * x3 * x3 <= n:
        r = n - ap * x3 * x3
        x0 = isqrt(r)
        if x0 * x0 == r:
            for s0 in ((1, -1) if x0 else (1,)):
                for s3 in ((1, -1) if x3 else (1,)):
                    out.append((s0 * x0, s3 * x3))
        x3 += 1
    return out


def _reps_b_range(p, a, lo, hi):
    """{n: [(x0, x3), ...]} for x0^2 + a p x3^2 = n, lo <= n < hi."""
    return _reps_c(a * p, 1, lo, hi)


def shell(p: int, a: int, m: int) -> list:
    """Group elements (mod +-1) with a x1^2 + p x2^2 = m, lexicographic."""
    return _shell_from(p, a, m, _reps_c(p, a, m, m + 1).get(m, []))


def _shell_from(p, a, m, creps, breps=None):
    if not creps:
        return []
    if breps is None:
        breps = _reps_b(p, a, m + 1)
    if not breps:
        return []
    seen = set()
    for (x1, x2) in creps:
        for (x0, x3) in breps:
            x = _canonical((x0, x1, x2, x3))
            if x != (1, 0, 0, 0):
                seen.add(x)
    return [GroupElement(*x, p=p, a=a) for x in sorted(seen)]


def enumerate_shells(p: int, a: int, m_max: int | None = None, m_min: int = 0,
                     block: int = 256):
    """Yield nonempty ``EnumerationShell`` objects in increasing m.

    With ``m_max=None`` the generator is unbounded.
    """
    reason = invalid_reason(p, a)
    if reason:
        raise ValueError(f"invalid pair ({p}, {a}): {reason}")
    lo = m_min
    while m_max is None or lo <= m_max:
        hi = lo + block if m_max is None else min(lo + block, m_max + 1)
        creps = _reps_c(p, a, lo, hi)
        breps = _reps_b_range(p, a, lo + 1, hi + 1)
        for m in sorted(creps):
            members = _shell_from(p, a, m, creps[m], breps.get(m + 1, []))
            if members:
                yield EnumerationShell(m, members)
        lo = hi
        block = min(block * 2, 1 << 16)


def canonical_rows(X):
    """Flip each row of an integer array so its first nonzero entry is positive."""
    X = np.asarray(X, dtype=np.int64)
    nz = X != 0
    first = np.where(nz.any(axis=1), nz.argmax(axis=1), 0)
    sign = np.where(X[np.arange(len(X)), first] < 0, -1, 1)
    return X * sign[:, None]


def _binary_reps(u: int, v: int, n_max: int):
    """(n, s, t) with u s^2 + v t^2 = n <= n_max, all signs, sorted by n."""
    s = np.arange(-isqrt(n_max // u), isqrt(n_max // u) + 1, dtype=np.int64)
    t = np.arange(-isqrt(n_max // v), isqrt(n_max // v) + 1, dtype=np.int64)
    S, T = np.meshgrid(s, t, indexing="ij")
    S, T = S.ravel(), T.ravel()
    n = u * S * S + v * T * T
    keep = n <= n_max
    order = np.argsort(n[keep], kind="stable")
    return n[keep][order], S[keep][order], T[keep][order]


def element_array(p: int, a: int, m_max: int):
    """All elements with 0 < m <= m_max as an (N, 4) int64 array of canonical
    coordinates, sorted by (m, x0, x1, x2, x3).  Same set as ``enumerate_shells``
    without building ``GroupElement`` objects."""
    reason = invalid_reason(p, a)
    if reason:
        raise ValueError(f"invalid pair ({p}, {a}): {reason}")
    cm, x1, x2 = _binary_reps(a, p, m_max)
    bn, x0, x3 = _binary_reps(1, a * p, m_max + 1)
    # join a x1^2 + p x2^2 = m with x0^2 + a p x3^2 = m + 1
    vals, first, counts = np.unique(bn, return_index=True, return_counts=True)
    pos = np.searchsorted(vals, cm + 1)
    pos = np.minimum(pos, len(vals) - 1)
    hit = (vals[pos] == cm + 1) & (cm > 0)
    ci = np.flatnonzero(hit)
    reps = counts[pos[ci]]
    total = int(reps.sum())
    if total == 0:
        return np.zeros((0, 4), dtype=np.int64)
    c_idx = np.repeat(ci, reps)
    offs = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
    b_idx = np.repeat(first[pos[ci]], reps) + offs
    rows = canonical_rows(np.column_stack([x0[b_idx], x1[c_idx], x2[c_idx], x3[b_idx]]))
    keyed = np.unique(np.column_stack([cm[c_idx], rows]), axis=0)
    return keyed[:, 1:]


def enumerate_elements(p, a, m_max):
    for sh in enumerate_shells(p, a, m_max):
        yield from sh.members


def is_torsion(g: GroupElement) -> bool:
    return g.x0 == 0 and not g.is_identity()


def torsion_scan(p: int, a: int, m_max: int) -> list:
    """Every torsion element with m <= m_max."""
    X = element_array(p, a, m_max)
    return [GroupElement(*(int(t) for t in row), p=p, a=a) for row in X[X[:, 0] == 0]]


def gamma0_filter(g: GroupElement) -> bool:
    return g.x2 % g.a == 0


def gamma0_congruence_violations(elements) -> list:
    """Elements of Gamma^0 with x0 not congruent to +-1 mod a.

    Modulo +-1 the stronger congruence x0 = 1 (mod a) is read as x0 = +-1;
    these are recorded rather than assumed.
    """
    out = []
    for g in elements:
        if gamma0_filter(g) and (g.x0 % g.a) not in (1 % g.a, (-1) % g.a):
            out.append(g)
    return out
