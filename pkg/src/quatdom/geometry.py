"""Hyperbolic geometry on the unit disc.

Geodesic half-planes are stored as Minkowski vectors N = (h, n1, n2); the
half-plane is {X : B(X, N) >= 0} on the hyperboloid, B(X, Y) = x0 y0 - x1 y1
- x2 y2, which in Klein coordinates k is the Euclidean half-plane
n . k <= h.  The exterior of the isometric circle with center o is the
half-plane N = (1, Re o, Im o).
"""
from __future__ import annotations

import cmath
import math
from functools import cached_property
from dataclasses import dataclass, field

import numpy as np

TOL = 1e-10
J = np.array([1.0, -1.0, -1.0])

CAYLEY = np.array([[1j, 1], [1, 1j]])


class ParabolicElementError(ArithmeticError):
    pass


class DegenerateConfiguration(ArithmeticError):
    pass


def mobius_apply(M, z):
    """Apply the Moebius map of a 2x2 matrix; ``math.inf`` stands for infinity."""
    (a, b), (c, d) = M
    if z == math.inf or (isinstance(z, complex) and cmath.isinf(z)):
        if c == 0:
            return math.inf
        return a / c
    num, den = a * z + b, c * z + d
    if den == 0:
        if num == 0:
            raise ZeroDivisionError("0/0 in Moebius action")
        return math.inf
    return num / den


def mobius_inverse(M):
    (a, b), (c, d) = M
    return np.array([[d, -b], [-c, a]])


def bilinear(X, Y):
    return X[0] * Y[0] - X[1] * Y[1] - X[2] * Y[2]


def disc_to_hyperboloid(z: complex):
    r2 = abs(z) ** 2
    s = 1.0 - r2
    return np.array([(1 + r2) / s, 2 * z.real / s, 2 * z.imag / s])


def hyperboloid_to_disc(X) -> complex:
    if X[0] <= 0:
        X = -X
    if abs(bilinear(X, X)) < 1e-300 or bilinear(X, X) <= 0:
        # ideal point: normalise onto the unit circle
        n = math.hypot(X[1], X[2])
        return complex(X[1] / n, X[2] / n)
    X = X / math.sqrt(bilinear(X, X))
    return complex(X[1], X[2]) / (X[0] + 1.0)


def disc_distance(z: complex, w: complex) -> float:
    num = 2 * abs(z - w) ** 2
    den = (1 - abs(z) ** 2) * (1 - abs(w) ** 2)
    return math.acosh(1 + num / den)


def halfplane_distance(z: complex, w: complex) -> float:
    return math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def su11_moebius(g):
    """Float disc matrix of a GroupElement (or a 2x2 array)."""
    return g.su11 if hasattr(g, "su11") else np.asarray(g)


# -- isometric circles ---------------------------------------------------------

@dataclass(frozen=True)
class IsometricCircle:
    center: complex
    radius: float
    owner: object
    nearest_point_value: float

    @property
    def normal(self):
        return np.array([1.0, self.center.real, self.center.imag])

    def nearest_point(self) -> complex:
        c = self.center
        return c * (1 - self.radius / abs(c))


def isometric_circle(g) -> IsometricCircle | None:
    """{z : |C z + conj A| = 1}: center -conj(A)/C, radius 1/|C|."""
    if g.c_norm_sq == 0:
        return None
    M = g.su11
    A, C = M[0, 0], M[1, 0]
    center = -A.conjugate() / C
    radius = 1.0 / math.sqrt(g.c_norm_sq)
    return IsometricCircle(center, radius, g, hutchinson_value(g))


def hutchinson_value(g) -> float:
    """F(z_g) = 1 - |z_g|^2 at the circle point nearest 0, = 2 / (|A| + 1)."""
    if g.c_norm_sq == 0:
        raise ValueError("element has no isometric circle")
    absA = math.sqrt(1 + g.c_norm_sq)
    return 2.0 / (absA + 1.0)


def element_order(g, limit: int = 12):
    """Order of g in SL(2) by exact powering (None if > limit)."""
    from .arith import quat_mul
    x = (1, 0, 0, 0)
    for k in range(1, limit + 1):
        x = quat_mul(x, g.coords, g.a, g.p)
        if x == (1, 0, 0, 0):
            return k
    return None


def classify(g) -> str:
    if g.is_identity():
        return "identity"
    t = abs(g.trace)
    if t > 2:
        return "hyperbolic"
    if t < 2:
        order = element_order(g)
        if order not in (4, 6):
            raise ArithmeticError(f"elliptic {g} has order {order}")
        return "elliptic"
    raise ParabolicElementError(f"{g} is parabolic")


def fixed_point(g) -> complex:
    """Fixed point in the disc of an elliptic element."""
    M = su11_moebius(g)
    A, Cb, C = M[0, 0], M[0, 1], M[1, 0]
    if abs(C) < 1e-300:
        return 0j
    # C z^2 + (conj A - A) z - conj C = 0
    disc = cmath.sqrt((A.conjugate() - A) ** 2 + 4 * C * Cb)
    roots = [((A - A.conjugate()) + s * disc) / (2 * C) for s in (1, -1)]
    return min(roots, key=abs)


def norm_sl2(g) -> int:
    """Sum of squared entries of the real matrix
    [[x0 + x1 sqrt a, sqrt p (x2 + x3 sqrt a)], [sqrt p (x2 - x3 sqrt a), x0 - x1 sqrt a]].
    """
    return 2 * (g.x0 ** 2 + g.a * g.x1 ** 2) + 2 * g.p * (g.x2 ** 2 + g.a * g.x3 ** 2)


def sl2_matrix(g):
    ra, rp = math.sqrt(g.a), math.sqrt(g.p)
    return np.array([[g.x0 + g.x1 * ra, rp * (g.x2 + g.x3 * ra)],
                     [rp * (g.x2 - g.x3 * ra), g.x0 - g.x1 * ra]])


def translation_distance_from_norm(norm: float) -> float:
    """rho(i, g i) = arccosh(||g|| / 2)."""
    return math.acosh(norm / 2.0)


@dataclass(frozen=True)
class RadiusFromNorm:
    formula: float    # 1 / sqrt(||g|| - 2)
    direct: float     # 1 / |C| = 2 / sqrt(||g|| - 2)


def circle_radius_from_norm(norm: float) -> RadiusFromNorm:
    if norm <= 2:
        raise ValueError("no isometric circle for ||g|| <= 2")
    root = math.sqrt(norm - 2)
    return RadiusFromNorm(1.0 / root, 2.0 / root)


# -- half-planes and predicates ------------------------------------------------

@dataclass(frozen=True)
class HalfPlane:
    """{X : B(X, N) >= 0}, optionally tagged with a label."""
    normal: np.ndarray
    label: object = None
    exact: tuple | None = None   # integer (m, u, v), see ``exact_side``

    def value(self, z: complex) -> float:
        """sinh of the signed distance from z to the boundary (positive inside)."""
        X = disc_to_hyperboloid(z)
        return bilinear(X, self.normal) / math.sqrt(-bilinear(self.normal, self.normal))

    def contains(self, z: complex, tol: float = TOL) -> bool:
        return self.value(z) >= -tol

    def geodesic(self):
        """('circle', center, radius) or ('diameter', unit direction)."""
        h, n1, n2 = self.normal
        n = complex(n1, n2)
        if abs(h) < 1e-15 * abs(n):
            return ("diameter", n / abs(n) * 1j)
        o = n / h
        return ("circle", o, math.sqrt(abs(o) ** 2 - 1))

    def ideal_points(self):
        """Endpoints of the boundary geodesic on the unit circle."""
        h, n1, n2 = self.normal
        nn = n1 * n1 + n2 * n2
        base = complex(n1, n2) * (h / nn)
        disc = 1 - h * h / nn
        if disc <= 0:
            return []
        off = complex(-n2, n1) * math.sqrt(disc / nn)
        return [base + off, base - off]


def bisector_triple(g) -> tuple:
    """Integer (m, u, v) with the isometric-circle normal ~ (m, -sqrt(a) u, sqrt(p) v)."""
    x0, x1, x2, x3 = g.coords
    return (g.c_norm_sq, x0 * x1 - g.p * x2 * x3, g.a * x1 * x3 + x0 * x2)


def ford_halfplane(g) -> HalfPlane:
    circ = isometric_circle(g)
    return HalfPlane(circ.normal, g, bisector_triple(g))


def dirichlet_halfplane(g, c: complex = 0j) -> HalfPlane:
    """{x : rho(x, c) <= rho(x, g c)}, bounded by the perpendicular bisector."""
    M = su11_moebius(g)
    gc = mobius_apply(M, c)
    N = disc_to_hyperboloid(gc) - disc_to_hyperboloid(c)
    # at the origin this is the isometric circle of g^-1
    exact = bisector_triple(g.inverse()) if c == 0 else None
    return HalfPlane(N, g, exact)


def circle_circle_intersection(c1: complex, r1: float, c2: complex, r2: float,
                               tol: float = TOL):
    """Intersection points of two circles; raises on tangency within tol."""
    d = abs(c2 - c1)
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol or d == 0:
        return []
    if abs(d - (r1 + r2)) <= tol or abs(d - abs(r1 - r2)) <= tol:
        raise DegenerateConfiguration("circles are tangent within tolerance")
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    u = (c2 - c1) / d
    base = c1 + a * u
    return [base + 1j * h * u, base - 1j * h * u]


def point_in_exterior(z: complex, circle: IsometricCircle, tol: float = TOL) -> bool:
    return abs(z - circle.center) >= circle.radius - tol


# -- polygons ------------------------------------------------------------------

@dataclass
class HyperbolicPolygon:
    """Counterclockwise polygon in the disc with geodesic edges.

    ``owners[k]`` labels the edge from ``vertices[k]`` to ``vertices[k+1]``;
    ``None`` marks a free arc of the unit circle.
    """
    vertices: list
    owners: list = field(default_factory=list)

    def edges(self):
        n = len(self.vertices)
        for k in range(n):
            yield self.vertices[k], self.vertices[(k + 1) % n], (
                self.owners[k] if self.owners else None)

    def is_closed(self) -> bool:
        return bool(self.vertices) and all(abs(v) < 1 for v in self.vertices) and (
            not self.owners or all(o is not None for o in self.owners))


def _direction(v: complex, w: complex) -> float:
    """Angle of the geodesic from v towards w, measured at v."""
    if abs(v) >= 1.0:
        raise ValueError("direction at an ideal point")
    return cmath.phase((w - v) / (1 - v.conjugate() * w))


def interior_angles(vertices) -> list:
    n = len(vertices)
    out = []
    for k in range(n):
        v = vertices[k]
        if abs(v) >= 1 - 1e-15:
            out.append(0.0)
            continue
        prev, nxt = vertices[k - 1], vertices[(k + 1) % n]
        ang = (_direction(v, prev) - _direction(v, nxt)) % (2 * math.pi)
        out.append(ang)
    return out


def polygon_area(P) -> float:
    """Gauss-Bonnet area (n - 2) pi - sum of interior angles."""
    verts = P.vertices if isinstance(P, HyperbolicPolygon) else list(P)
    if isinstance(P, HyperbolicPolygon) and P.owners and any(o is None for o in P.owners):
        raise ValueError("polygon is not closed")
    if len(verts) < 3:
        raise ValueError("polygon needs at least three vertices")
    return (len(verts) - 2) * math.pi - sum(interior_angles(verts))


# -- convex regions cut out by half-planes ------------------------------------

@dataclass(eq=False)
class _Vertex:
    X: np.ndarray            # unit hyperboloid vector, or null vector with X[0] = 1
    planes: tuple = ()       # the two half-planes meeting here (finite vertices)

    @cached_property
    def z(self) -> complex:
        return hyperboloid_to_disc(self.X)


@dataclass
class _Edge:
    start: _Vertex
    end: _Vertex
    plane: HalfPlane | None  # None for a free arc of the unit circle


def _ideal(theta: float) -> _Vertex:
    return _Vertex(np.array([1.0, math.cos(theta), math.sin(theta)]))


def _is_ideal(X) -> bool:
    return abs(bilinear(X, X)) < 1e-9 * X[0] * X[0]


def _theta(V) -> float:
    X = V.X if isinstance(V, _Vertex) else V
    return math.atan2(X[2], X[1])


def _normalize(X):
    if X[0] < 0:
        X = -X
    b = bilinear(X, X)
    if b > 0:
        return X / math.sqrt(b)
    return X / X[0]


def _signed(plane: HalfPlane, X) -> float:
    """Invariant signed position of X w.r.t. the plane (sinh distance)."""
    N = plane.normal
    s = bilinear(X, N) / math.sqrt(-bilinear(N, N))
    if _is_ideal(X):
        return s / X[0]
    return s


def _meet(N1, N2):
    X = np.cross(J * N1, J * N2)
    return _normalize(X)


def _sign(x) -> int:
    return int(x > 0) - int(x < 0)


def exact_side(t1, t2, t3) -> int:
    """Side of the vertex (plane 1) x (plane 2) relative to plane 3.

    Each ``t`` is the integer triple (m, u, v) of a bisector whose normal
    is (m, -sqrt(a) u, sqrt(p) v).  The vertex is then
    (sqrt(ap) X0, sqrt(p) X1, sqrt(a) X2) with integer X, and the sign of
    B(vertex, N3) is an integer determinant.
    """
    m1, u1, v1 = t1
    m2, u2, v2 = t2
    m3, u3, v3 = t3
    X0 = u2 * v1 - u1 * v2
    X1 = m1 * v2 - m2 * v1
    X2 = m1 * u2 - m2 * u1
    if X0 == 0:
        raise DegenerateConfiguration("bisectors do not meet inside the disc")
    return _sign(X0) * _sign(X0 * m3 + X1 * u3 - X2 * v3)


class ConvexRegion:
    """The intersection of the closed disc with a family of half-planes.

    The boundary is a counterclockwise cycle of edges, each either a
    geodesic segment on a labelled half-plane or a free arc of the unit
    circle.  Half-planes are added one at a time with ``clip``.  Planes
    carrying an integer ``exact`` triple are compared with exact integer
    predicates at finite vertices, so concurrent bisectors (common at
    the vertices of arithmetic domains) never create sliver edges.
    """

    def __init__(self, tol: float = TOL):
        self.tol = tol
        self.edges: list[_Edge] = []
        self.full = True
        self._Z = None   # cached disc coordinates of the vertices
        self._arcs = []

    # the initial state is the whole disc
    def _first_cut(self, plane: HalfPlane):
        pts = plane.ideal_points()
        if not pts:
            if plane.value(0j) < 0:
                raise DegenerateConfiguration("half-plane misses the disc")
            return False
        P, Q = (_ideal(cmath.phase(z)) for z in pts)
        # interior on the left of the segment S -> E
        n = np.array(plane.normal[1:])
        d = Q.X[1:] - P.X[1:]
        left = np.array([-d[1], d[0]])
        S, E = (P, Q) if left @ (-n) > 0 else (Q, P)
        self.edges = [_Edge(S, E, plane), _Edge(E, S, None)]
        self._Z = None
        self.full = False
        return True

    @property
    def closed(self) -> bool:
        return not self.full and all(e.plane is not None for e in self.edges)

    def vertices(self):
        return [e.start.z for e in self.edges]

    def _disc_array(self):
        if self._Z is None:
            self._Z = np.array(self.vertices(), dtype=complex)
            self._arcs = [e for e in self.edges if e.plane is None]
        return self._Z

    def max_vertex_modulus(self) -> float:
        return float(np.abs(self._disc_array()).max())

    def _suspects(self, plane: HalfPlane):
        """Indices of vertices not clearly inside the plane (cheap float test).

        With N = (h, n) and o = n / h the Minkowski value at z is
        h (|z - o|^2 - r^2) / (1 - |z|^2), so the sign is that of
        h (|z - o|^2 - |o|^2 + 1); rounding error here is ~1e-16 |o|^2.
        """
        Z = self._disc_array()
        h, n1, n2 = plane.normal
        if abs(h) < 1e-12:
            return range(len(Z))
        o = complex(n1, n2) / h
        val = math.copysign(1.0, h) * (np.abs(Z - o) ** 2 - abs(o) ** 2 + 1)
        return np.flatnonzero(val <= 1e-9 * (1 + abs(o) ** 2))

    def polygon(self) -> HyperbolicPolygon:
        return HyperbolicPolygon(self.vertices(),
                                 [e.plane.label if e.plane else None for e in self.edges])

    def side(self, plane: HalfPlane, V: _Vertex) -> int:
        """+1 inside, 0 on the boundary geodesic, -1 outside."""
        if any(q is plane for q in V.planes):
            return 0
        if plane.exact is not None and len(V.planes) == 2 and all(
                q.exact is not None for q in V.planes):
            return exact_side(V.planes[0].exact, V.planes[1].exact, plane.exact)
        s = _signed(plane, V.X)
        return 0 if abs(s) <= self.tol else _sign(s)

    def _vertex_sides(self, plane: HalfPlane) -> list:
        sv = [1] * len(self.edges)
        edges = self.edges
        for i in self._suspects(plane):
            sv[i] = self.side(plane, edges[i].start)
        return sv

    def would_cut(self, plane: HalfPlane) -> bool:
        if self.full:
            return bool(plane.ideal_points())
        return self._cuts(plane, self._vertex_sides(plane))

    def _cuts(self, plane, sv) -> bool:
        return min(sv) < 0 or any(self._arc_crossings(e, plane) for e in self._arcs)

    def _arc_crossings(self, e, plane):
        t0 = _theta(e.start)
        span = (_theta(e.end) - t0) % (2 * math.pi)
        if span == 0:
            span = 2 * math.pi
        out = []
        for z in plane.ideal_points():
            dt = (cmath.phase(z) - t0) % (2 * math.pi)
            if 1e-12 < dt < span - 1e-12:
                out.append(dt)
        return sorted(out)

    def _split_arc(self, e: _Edge, plane: HalfPlane):
        cuts = self._arc_crossings(e, plane)
        if not cuts:
            return [e]
        t0 = _theta(e.start)
        pts = [e.start] + [_ideal(t0 + dt) for dt in cuts] + [e.end]
        return [_Edge(pts[k], pts[k + 1], None) for k in range(len(pts) - 1)]

    def _arc_inside(self, e: _Edge, plane: HalfPlane) -> bool:
        t0 = _theta(e.start)
        span = (_theta(e.end) - t0) % (2 * math.pi) or 2 * math.pi
        return _signed(plane, _ideal(t0 + span / 2).X) >= 0

    def clip(self, plane: HalfPlane) -> bool:
        """Intersect with ``plane``; True if the region changed."""
        if self.full:
            return self._first_cut(plane)
        sv = self._vertex_sides(plane)
        if not self._cuts(plane, sv):
            return False
        edges = self.edges
        n = len(edges)
        pieces, keep = [], []
        for i, e in enumerate(edges):
            s0, s1 = sv[i], sv[(i + 1) % n]
            if e.plane is None:
                for piece in self._split_arc(e, plane):
                    pieces.append(piece)
                    keep.append(self._arc_inside(piece, plane))
            elif s0 * s1 < 0:
                X = _meet(e.plane.normal, plane.normal)
                if X[0] <= 0 or bilinear(X, X) <= 0:
                    raise DegenerateConfiguration("crossing point is not in the disc")
                V = _Vertex(X, (e.plane, plane))
                pieces += [_Edge(e.start, V, e.plane), _Edge(V, e.end, e.plane)]
                keep += [s0 > 0, s1 > 0]
            else:
                pieces.append(e)
                keep.append(s0 >= 0 and s1 >= 0)
        if not any(keep):
            raise DegenerateConfiguration("half-plane removes the whole region")
        if all(keep):
            return False
        m = len(pieces)
        # rotate so that the removed run sits at the end
        first_removed = keep.index(False)
        start = next(k for k in range(first_removed, first_removed + m)
                     if keep[k % m])
        runs = sum(1 for k in range(m) if keep[k] != keep[(k + 1) % m])
        if runs != 2:
            raise DegenerateConfiguration("non-convex clip (multiple removed runs)")
        kept = [pieces[(start + k) % m] for k in range(m) if keep[(start + k) % m]]
        self.edges = kept + [_Edge(kept[-1].end, kept[0].start, plane)]
        self._Z = None
        return True

    @property
    def min_separation(self) -> float:
        """Shortest finite edge, in hyperbolic length."""
        out = math.inf
        for e in self.edges:
            if e.plane is None or _is_ideal(e.start.X) or _is_ideal(e.end.X):
                continue
            out = min(out, math.acosh(max(1.0, bilinear(e.start.X, e.end.X))))
        return out

    def area(self) -> float:
        if not self.closed:
            return math.inf
        return region_area(self.edges)


def region_area(edges) -> float:
    """Gauss-Bonnet from the half-plane normals meeting at each vertex."""
    n = len(edges)
    total = 0.0
    for k in range(n):
        N1, N2 = edges[k - 1].plane.normal, edges[k].plane.normal
        c = bilinear(N1, N2) / math.sqrt(bilinear(N1, N1) * bilinear(N2, N2))
        total += math.acos(max(-1.0, min(1.0, c)))
    return (n - 2) * math.pi - total
