"""Orders in rational quaternion algebras and their covolumes.

An order is given by a Z-basis of four elements, the first being 1.  The
reduced discriminant comes from the Gram matrix of the trace form, the
Eichler invariant at q from the Jacobson radical of O/qO, and the area of
O^1 \\ H from the local unit indices of O inside a maximal order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt, pi, prod

import sympy
from sympy import factorint, isprime

from .arith import QuatAlgebra, QuatElement, legendre_symbol, valuation

SPLIT = "split"


class NotAnOrder(ValueError):
    """Raised when a basis is not closed under multiplication."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def _solve_rational(M, rhs):
    """Solve M x = rhs exactly (M square, list of lists of Fractions)."""
    A = sympy.Matrix(M)
    sol = A.LUsolve(sympy.Matrix(rhs))
    return [Fraction(int(s.p), int(s.q)) for s in sol]


def _mat_inverse(M):
    inv = sympy.Matrix(M).inv()
    return [[Fraction(int(e.p), int(e.q)) for e in inv.row(r)] for r in range(inv.rows)]


class QuatOrder:
    """A Z-order with basis ``basis`` (a sequence of four QuatElements)."""

    def __init__(self, basis, check=True):
        basis = tuple(basis)
        if len(basis) != 4:
            raise ValueError("an order needs a basis of four elements")
        H = basis[0].algebra
        if any(x.algebra != H for x in basis):
            raise ValueError("basis elements from different algebras")
        self.algebra: QuatAlgebra = H
        self.basis = basis
        if basis[0] != H.element(1):
            raise ValueError("first basis element must be 1")
        if check:
            self.structure_constants  # noqa: B018  (validates closure)

    @classmethod
    def canonical(cls, p: int, a: int) -> "QuatOrder":
        """Z[1, i, j, ij] in the algebra with i^2 = a, j^2 = p."""
        return cls(QuatAlgebra(a, p).basis())

    @cached_property
    def _coord_matrix(self):
        # columns are basis vectors in 1,i,j,ij coordinates
        return [[self.basis[c].coords[r] for c in range(4)] for r in range(4)]

    @cached_property
    def _coord_inverse(self):
        return _mat_inverse(self._coord_matrix)

    def coordinates(self, h: QuatElement):
        """Coordinates of h in the order basis (rational in general)."""
        inv = self._coord_inverse
        return [sum(inv[r][k] * h.coords[k] for k in range(4)) for r in range(4)]

    def contains(self, h: QuatElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(h))

    @cached_property
    def structure_constants(self):
        """c[i][j][k] with x_i x_j = sum_k c[i][j][k] x_k, all integers."""
        c = [[None] * 4 for _ in range(4)]
        for i, j in itertools.product(range(4), repeat=2):
            prod_ij = self.basis[i] * self.basis[j]
            coords = self.coordinates(prod_ij)
            if any(t.denominator != 1 for t in coords):
                raise NotAnOrder(f"x{i} * x{j} = {prod_ij} is not in the lattice",
                                 witness=(i, j, prod_ij))
            c[i][j] = [int(t) for t in coords]
        for x in self.basis:
            if x.trace().denominator != 1 or x.norm().denominator != 1:
                raise NotAnOrder(f"{x} is not integral", witness=x)
        return c

    @cached_property
    def gram(self):
        return [[int((x * y).trace()) for y in self.basis] for x in self.basis]

    @cached_property
    def reduced_discriminant(self) -> int:
        det = int(sympy.Matrix(self.gram).det())
        d = isqrt(abs(det))
        if d * d != abs(det) or d == 0:
            raise NotAnOrder(f"|det Gram| = {abs(det)} is not a nonzero square")
        return d

    @cached_property
    def dual_basis(self):
        """b_0..b_3 with trace(b_i x_j) = delta_ij."""
        inv = _mat_inverse(self.gram)
        H = self.algebra
        duals = []
        for i in range(4):
            b = H.element(0)
            for k in range(4):
                b = b + self.basis[k] * inv[i][k]
            duals.append(b)
        return tuple(duals)

    @cached_property
    def ternary_form(self) -> "TernaryForm":
        d = self.reduced_discriminant
        b = self.dual_basis[1:]
        # d * n(sum X_k b_k): matrix entries d * trd(b_k conj(b_l)) / 2
        M = [[Fraction(d) * (b[k] * b[l].conj()).trace() / 2 for l in range(3)]
             for k in range(3)]
        return TernaryForm(M)

    def is_maximal(self) -> bool:
        return self.reduced_discriminant == self.algebra.discriminant

    def change_basis(self, U) -> "QuatOrder":
        """Order with basis x'_r = sum_c U[r][c] x_c (U unimodular, row 0 = e_0)."""
        H = self.algebra
        new = []
        for row in U:
            h = H.element(0)
            for c, coeff in enumerate(row):
                h = h + self.basis[c] * coeff
            new.append(h)
        return QuatOrder(new)

    def local_invariant(self, q: int) -> "LocalInvariant":
        n = valuation(self.reduced_discriminant, q)
        e = eichler_invariant_radical(self, q)
        nu = unit_norm_index(self, q)
        split = self.algebra.is_split_at(q)
        idx = local_unit_index(q, n, e, split, nu) if n else Fraction(1)
        return LocalInvariant(q, e, nu, idx, split, n)


@dataclass(frozen=True)
class LocalInvariant:
    q: int
    eichler_invariant: object
    norm_index: int
    unit_index: Fraction
    split: bool
    exponent: int


class TernaryForm:
    """f(X) = X^T M X with a symmetric rational matrix M."""

    def __init__(self, M):
        self.matrix = tuple(tuple(Fraction(x) for x in row) for row in M)

    def coefficients(self):
        """(f11, f22, f33, f12, f13, f23) in f = sum f_kk X_k^2 + sum f_kl X_k X_l."""
        M = self.matrix
        return (M[0][0], M[1][1], M[2][2], 2 * M[0][1], 2 * M[0][2], 2 * M[1][2])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients())

    def determinant(self) -> Fraction:
        return Fraction(sympy.Matrix(self.matrix).det())

    def __call__(self, X):
        M = self.matrix
        return sum(M[k][l] * X[k] * X[l] for k in range(3) for l in range(3))

    def __repr__(self):
        return f"TernaryForm{self.coefficients()}"


# -- Eichler invariant ---------------------------------------------------------

def _nullspace_mod(rows, q):
    """Basis of {x : rows . x = 0 mod q} as lists of ints."""
    M = sympy.Matrix(rows)
    n = M.cols
    # row reduce over F_q by hand (sympy's modular rref is version dependent)
    A = [[int(x) % q for x in M.row(r)] for r in range(M.rows)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((k for k in range(r, len(A)) if A[k][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, q)
        A[r] = [(x * inv) % q for x in A[r]]
        for k in range(len(A)):
            if k != r and A[k][c]:
                f = A[k][c]
                A[k] = [(x - f * y) % q for x, y in zip(A[k], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(A, pivots):
            v[pc] = (-row[f]) % q
        basis.append(v)
    return basis


def _rank_mod(vectors, q):
    if not vectors:
        return 0
    n = len(vectors[0])
    return n - len(_nullspace_mod(vectors, q)) if vectors else 0


class _ResidueAlgebra:
    """O/qO: elements are coordinate vectors over F_q in the order basis."""

    def __init__(self, order: QuatOrder, q: int):
        self.q = q
        self.c = [[[x % q for x in order.structure_constants[i][j]] for j in range(4)]
                  for i in range(4)]
        self.tr = [int(x.trace()) % q for x in order.basis]
        self.nrm_basis = [int(x.norm()) for x in order.basis]
        self.order = order

    def mul(self, x, y):
        q = self.q
        out = [0] * 4
        for i in range(4):
            if x[i]:
                for j in range(4):
                    if y[j]:
                        f = x[i] * y[j]
                        cij = self.c[i][j]
                        for k in range(4):
                            out[k] += f * cij[k]
        return [v % q for v in out]

    def trace(self, x):
        return sum(t * v for t, v in zip(self.tr, x)) % self.q

    def norm(self, x):
        h = self.order.algebra.element(0)
        for b, v in zip(self.order.basis, x):
            h = h + b * v
        return int(h.norm()) % self.q


def jacobson_radical(order: QuatOrder, q: int):
    """F_q-basis of J(O/qO), as coordinate vectors in the order basis.

    J is the radical of the reduced-trace pairing, cut down to the kernel of
    the reduced norm when q = 2 (the norm is additive there).
    """
    A = _ResidueAlgebra(order, q)
    e = [[int(k == n) for k in range(4)] for n in range(4)]
    rows = [[A.trace(A.mul(e[i], e[j])) for i in range(4)] for j in range(4)]
    R = _nullspace_mod(rows, q)
    if q == 2 and R:
        # nrd is F_2-linear on R
        vals = [A.norm(v) for v in R]
        if any(vals):
            k = vals.index(1)
            pivot = R[k]
            R = [[(x + y) % 2 for x, y in zip(v, pivot)] if val else v
                 for idx, (v, val) in enumerate(zip(R, vals)) if idx != k]
    for v in R:
        if A.trace(v) or A.norm(v):
            raise ArithmeticError("radical candidate contains a non-nilpotent element")
    return R, A


def _classify_quadratic(t, n, q):
    """+1 if x^2 - t x + n splits with distinct roots over F_q, -1 if irreducible."""
    if q == 2:
        if t % 2 == 0:
            return 0
        return 1 if n % 2 == 0 else -1
    disc = (t * t - 4 * n) % q
    if disc == 0:
        return 0
    return legendre_symbol(disc, q)


def eichler_invariant_radical(order: QuatOrder, q: int):
    """Eichler invariant e(O_q) from O/qO modulo its Jacobson radical.

    Returns ``SPLIT`` when O_q is M(2, Z_q) (quotient of dimension 4).
    """
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    J, A = jacobson_radical(order, q)
    dim_quot = 4 - len(J)
    if dim_quot == 4:
        return SPLIT
    if dim_quot == 1:
        return 0
    if dim_quot != 2:
        raise ArithmeticError(f"O/J(O) has impossible dimension {dim_quot}")
    # the quotient is spanned by 1 and some basis vector outside F_q + J
    span = [[1, 0, 0, 0]] + J
    for k in range(1, 4):
        v = [int(k == n) for n in range(4)]
        if _rank_mod(span + [v], q) > len(span):
            res = _classify_quadratic(A.trace(v), A.norm(v), q)
            if res == 0:
                raise ArithmeticError("quotient by the radical is not semisimple")
            return res
    raise ArithmeticError("could not find a generator of O/J(O)")


def diagonalize_mod(form: TernaryForm, q: int):
    """Diagonalize an integral ternary form over Z_q (q odd).

    Returns a list of (unit, exponent) pairs sorted by exponent, each entry
    standing for unit * q^exponent.  Pivots are chosen of minimal valuation.
    """
    if q == 2:
        raise ValueError("2-adic diagonalization is not supported")
    M = [list(row) for row in form.matrix]
    n = 3
    out = []
    active = list(range(n))

    def val(x):
        return 10**9 if x == 0 else valuation(x.numerator, q) - valuation(x.denominator, q)

    while active:
        # best diagonal pivot; fall back to an off-diagonal pair
        best = min(active, key=lambda k: val(M[k][k]))
        off = min(((k, l) for k in active for l in active if k < l),
                  key=lambda kl: val(M[kl[0]][kl[1]]), default=None)
        if off is not None and val(M[off[0]][off[1]]) < val(M[best][best]):
            k, l = off
            # X_k -> X_k + X_l makes the diagonal entry 2 M_kl + M_kk + M_ll
            for r in range(n):
                M[r][k] += M[r][l]
            for c in range(n):
                M[k][c] += M[l][c]
            best = k
        piv = M[best][best]
        if piv == 0:
            for _ in active:
                out.append((0, 10**9))
            break
        for r in active:
            if r == best:
                continue
            f = M[r][best] / piv
            for c in range(n):
                M[r][c] -= f * M[best][c]
            for c in range(n):
                M[c][r] -= f * M[c][best]
        active.remove(best)
        v = val(piv)
        unit = piv / Fraction(q) ** v
        u = unit.numerator * pow(unit.denominator, -1, q) % q
        out.append((u, v))
    return sorted(out, key=lambda t: t[1])


def eichler_invariant_form(f, q: int):
    """Eichler invariant from a diagonal ternary form over Z_q, q odd.

    ``f`` is either a ``TernaryForm`` (diagonalized here) or a sequence of
    (unit, exponent) pairs.  The leading unit is scaled to 1 first.
    """
    if q == 2 or not isprime(q):
        raise ValueError("the form criterion needs an odd prime")
    diag = diagonalize_mod(f, q) if isinstance(f, TernaryForm) else sorted(f, key=lambda t: t[1])
    if len(diag) != 3:
        raise ValueError("expected a ternary form")
    (c1, e1), (u, r), (w, s) = diag
    if e1 != 0 or c1 % q == 0 or u % q == 0 or w % q == 0:
        raise ValueError("form is not of the shape X1^2 + u q^r X2^2 + w q^s X3^2")
    inv = pow(c1, -1, q)
    u = u * inv % q
    if s == 0:
        return SPLIT
    if r >= 1:
        return 0
    return legendre_symbol(-u, q)


# -- norm indices, unit indices, covolume --------------------------------------

def norm_index(p: int, a: int, q: int) -> int:
    """[Z_q^* : n(O_q^*)] for the canonical order by the closed-form rule
    (2 at q = 2 when 4 | a, otherwise 1)."""
    if q == 2:
        return 2 if a % 4 == 0 else 1
    return 1


def unit_norm_index(order: QuatOrder, q: int) -> int:
    """[Z_q^* : n(O_q^*)] by enumerating O/q^k O (k = 1 for odd q, 3 for q = 2)."""
    mod = 8 if q == 2 else q
    classes = {1} if q == 2 else set()
    B = [[int((order.basis[i] * order.basis[j].conj()).trace()) for j in range(4)]
         for i in range(4)]
    # n(x) = 1/2 sum_ij x_i x_j trd(b_i conj b_j)
    total = 4 if q == 2 else 2
    for x in itertools.product(range(mod), repeat=4):
        two_n = sum(B[i][j] * x[i] * x[j] for i in range(4) for j in range(4))
        n = (two_n // 2) % mod
        if n % q == 0:
            continue
        classes.add(n if q == 2 else legendre_symbol(n, q))
        if len(classes) == total:
            break
    return total // len(classes)


def local_unit_index(q: int, n: int, e, split: bool, norm_idx: int) -> Fraction:
    """[M_q^1 : O_q^1] for d(O_q) = q^n, Eichler invariant e."""
    if n < 1 or e not in (-1, 0, 1) or q - e <= 0:
        raise ValueError("invalid local data")
    if split:
        units = Fraction(q ** (n - 1) * (q * q - 1), q - e)
    else:
        units = Fraction(q ** (n - 1) * (q + 1), q - e)
    result = units / norm_idx
    if result <= 0:
        raise ArithmeticError("non-positive local index")
    return result


def maximal_covolume_over_pi(dH: int) -> Fraction:
    """Area of M^1 \\ H divided by pi for a maximal order of discriminant dH."""
    return Fraction(prod(q - 1 for q in factorint(dH)), 3)


def normalized_volume(dH: int) -> Fraction:
    """Area with respect to ds / 2 pi: phi(dH) / 6."""
    return maximal_covolume_over_pi(dH) / 2


@dataclass(frozen=True)
class Covolume:
    over_pi: Fraction          # area / pi, exact
    maximal_over_pi: Fraction
    index: Fraction            # [M^1 : O^1]
    local: tuple

    @property
    def area(self) -> float:
        return float(self.over_pi) * pi

    @property
    def normalized(self) -> Fraction:
        return self.over_pi / 2


def covolume(order: QuatOrder) -> Covolume:
    H = order.algebra
    if H.is_definite:
        raise ValueError("definite algebra: O^1 is finite")
    d = order.reduced_discriminant
    local = tuple(order.local_invariant(q) for q in sorted(factorint(d)))
    index = prod((li.unit_index for li in local), start=Fraction(1))
    base = maximal_covolume_over_pi(H.discriminant)
    return Covolume(base * index, base, index, local)


def covolume_closed_form(order: QuatOrder) -> Fraction:
    """Area / pi as d(O) prod [Z_q^*:N]^-1 (q^2-1)/(q(q-e)) / 3."""
    d = order.reduced_discriminant
    out = Fraction(d, 3)
    for q in factorint(d):
        e = eichler_invariant_radical(order, q)
        nu = unit_norm_index(order, q)
        out *= Fraction(q * q - 1, q * (q - e)) / nu
    return out


def canonical_covolume(p: int, a: int) -> Covolume:
    return covolume(QuatOrder.canonical(p, a))
