import cmath
import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from quatdom.geometry import (CAYLEY, ConvexRegion, DegenerateConfiguration, HalfPlane,
                              HyperbolicPolygon, ParabolicElementError, bilinear,
                              circle_circle_intersection, circle_radius_from_norm, classify,
                              dirichlet_halfplane, disc_distance, disc_to_hyperboloid,
                              element_order, exact_side, fixed_point, ford_halfplane,
                              halfplane_distance, hutchinson_value, interior_angles, hyperboloid_to_disc,
                              isometric_circle, mobius_apply, mobius_inverse, norm_sl2,
                              polygon_area, sl2_matrix, translation_distance_from_norm)
from quatdom.lattice import GroupElement, enumerate_elements
from oracles import disc_distance as disc_distance_oracle
from oracles import polygon_area_quadrature

g32 = GroupElement(2, 0, 1, 0, p=3, a=2)
ELEMENTS = list(enumerate_elements(5, 2, 500)) + list(enumerate_elements(3, 2, 300))
disc_points = st.builds(lambda r, t: r * cmath.exp(1j * t),
                        st.floats(0, 0.95), st.floats(0, 2 * math.pi))


def test_mobius_basics():
    assert mobius_apply(np.eye(2), 0.3 + 0.2j) == 0.3 + 0.2j
    assert abs(mobius_apply(CAYLEY, 1j)) < 1e-15
    assert mobius_apply(np.array([[1, 0], [1, 1]]), math.inf) == 1
    assert mobius_apply(np.array([[1, 2], [1, 1]]), -1) == math.inf
    with pytest.raises(ZeroDivisionError):
        mobius_apply(np.array([[1, 1], [1, 1]]), -1)


@given(disc_points, st.sampled_from(ELEMENTS))
def test_mobius_inverse(z, g):
    M = g.su11
    w = mobius_apply(M, z)
    assert abs(w) < 1
    assert abs(mobius_apply(mobius_inverse(M), w) - z) < 1e-9 * (1 + abs(g.x0))


@given(disc_points, disc_points, st.sampled_from(ELEMENTS))
def test_elements_are_isometries(z, w, g):
    d = disc_distance(z, w)
    dg = disc_distance(mobius_apply(g.su11, z), mobius_apply(g.su11, w))
    assert dg == pytest.approx(d, rel=1e-6, abs=1e-6)


@given(disc_points, disc_points)
def test_distance_against_hyperboloid(z, w):
    X, Y = disc_to_hyperboloid(z), disc_to_hyperboloid(w)
    assert abs(hyperboloid_to_disc(X) - z) < 1e-12
    assert math.cosh(disc_distance(z, w)) == pytest.approx(bilinear(X, Y), rel=1e-9)


def test_isometric_circle_example():
    c = isometric_circle(g32)
    assert c.radius == pytest.approx(1 / math.sqrt(3))
    assert abs(c.center) ** 2 == pytest.approx(4 / 3)
    assert isometric_circle(GroupElement.identity(3, 2)) is None


@pytest.mark.parametrize("g", ELEMENTS[:60])
def test_isometric_circles_are_orthogonal_to_boundary(g):
    c = isometric_circle(g)
    assert abs(c.center) ** 2 == pytest.approx(c.radius ** 2 + 1, rel=1e-12)
    # g maps its isometric circle to that of g^-1 with |derivative| = 1 there
    z = c.center + c.radius * cmath.exp(0.7j)
    A, C = g.su11[0, 0], g.su11[1, 0]
    assert abs(C * z + A.conjugate()) == pytest.approx(1, rel=1e-9)
    ci = isometric_circle(g.inverse())
    assert abs(abs(mobius_apply(g.su11, z) - ci.center) - ci.radius) < 1e-9


def test_hutchinson_value():
    assert hutchinson_value(SimpleNamespace(c_norm_sq=1)) == pytest.approx(0.828427, abs=1e-6)
    vals = []
    for g in ELEMENTS[:80]:
        c = isometric_circle(g)
        z = c.nearest_point()
        assert hutchinson_value(g) == pytest.approx(1 - abs(z) ** 2, rel=1e-9)
        vals.append((g.c_norm_sq, hutchinson_value(g)))
    vals.sort()
    for (m1, f1), (m2, f2) in zip(vals, vals[1:]):
        assert m1 == m2 or f2 < f1


def test_norm_and_distance():
    ident = GroupElement.identity(3, 2)
    assert norm_sl2(ident) == 2
    assert translation_distance_from_norm(2) == 0
    assert norm_sl2(g32) == 14
    assert translation_distance_from_norm(14) == pytest.approx(math.acosh(7))
    M = sl2_matrix(g32)
    gi = (M[0, 0] * 1j + M[0, 1]) / (M[1, 0] * 1j + M[1, 1])
    assert halfplane_distance(1j, gi) == pytest.approx(math.acosh(7))
    assert float(np.sum(M * M)) == pytest.approx(14)


@pytest.mark.parametrize("g", ELEMENTS[:40])
def test_norm_identities(g):
    assert norm_sl2(g) == norm_sl2(g.inverse())
    assert norm_sl2(g) == 4 * g.c_norm_sq + 2
    assert np.linalg.det(sl2_matrix(g)) == pytest.approx(1, rel=1e-9, abs=1e-9)
    # direct radius 1/|C| is twice the value 1/sqrt(||g|| - 2)
    r = circle_radius_from_norm(norm_sl2(g))
    assert r.direct == pytest.approx(isometric_circle(g).radius)
    assert r.direct == pytest.approx(2 * r.formula)


def test_radius_example():
    r = circle_radius_from_norm(14)
    assert r.direct == pytest.approx(0.5774, abs=1e-4)
    assert r.formula == pytest.approx(0.2887, abs=1e-4)
    with pytest.raises(ValueError):
        circle_radius_from_norm(2)


def test_classify():
    assert classify(g32) == "hyperbolic"
    e = GroupElement(0, 1, 1, 1, p=3, a=2)
    assert classify(e) == "elliptic"
    assert element_order(e) == 4
    assert classify(GroupElement.identity(3, 2)) == "identity"
    z = fixed_point(e)
    assert abs(z) < 1
    assert abs(mobius_apply(e.su11, z) - z) < 1e-12
    fake = SimpleNamespace(is_identity=lambda: False, trace=2)
    with pytest.raises(ParabolicElementError):
        classify(fake)


def _triangle(alpha, beta, gamma):
    """Vertices of a geodesic triangle with the given angles, first vertex at 0."""
    cb = (math.cos(beta) + math.cos(alpha) * math.cos(gamma)) / (math.sin(alpha) * math.sin(gamma))
    cc = (math.cos(gamma) + math.cos(alpha) * math.cos(beta)) / (math.sin(alpha) * math.sin(beta))
    b, c = math.acosh(cb), math.acosh(cc)
    return [0j, complex(math.tanh(c / 2)), math.tanh(b / 2) * cmath.exp(1j * alpha)]


def test_triangle_area():
    V = _triangle(math.pi / 2, math.pi / 3, math.pi / 7)
    angles = sorted(interior_angles(V))
    assert angles == pytest.approx(sorted([math.pi / 2, math.pi / 3, math.pi / 7]), abs=1e-12)
    assert polygon_area(V) == pytest.approx(math.pi / 42, abs=1e-12)


def test_ideal_triangle():
    V = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    assert polygon_area(V) == pytest.approx(math.pi)


def test_polygon_area_errors():
    with pytest.raises(ValueError):
        polygon_area([0j, 0.5])
    with pytest.raises(ValueError):
        polygon_area(HyperbolicPolygon([0j, 0.5, 0.5j], [1, None, 2]))


def _polygon(seed, n):
    rng = np.random.default_rng(seed)
    while True:
        t = np.sort(rng.uniform(0, 2 * math.pi, n))
        gaps = np.diff(np.append(t, t[0] + 2 * math.pi))
        if gaps.max() < 0.9 * math.pi and gaps.min() > 0.05:
            break
    r = rng.uniform(0.1, 0.9, n)
    return [float(ri) * cmath.exp(1j * ti) for ri, ti in zip(r, t)]


@pytest.mark.parametrize("seed,n", [(1, 3), (2, 5), (3, 7), (4, 4), (5, 9)])
def test_area_matches_quadrature(seed, n):
    V = _polygon(seed, n)
    assert polygon_area(V) == pytest.approx(polygon_area_quadrature(V), abs=1e-9)


@given(st.integers(0, 10_000), st.integers(3, 8), st.floats(0, 2 * math.pi),
       st.sampled_from(ELEMENTS[:30]))
@settings(max_examples=40, deadline=None)
def test_area_is_isometry_invariant(seed, n, theta, g):
    V = _polygon(seed, n)
    A = polygon_area(V)
    assert polygon_area([v * cmath.exp(1j * theta) for v in V]) == pytest.approx(A, abs=1e-9)
    W = [mobius_apply(g.su11, v) for v in V]
    assume(max(abs(w) for w in W) < 0.999)
    assert polygon_area(W) == pytest.approx(A, rel=1e-6)


@pytest.mark.parametrize("g", ELEMENTS[:30])
def test_bisectors_are_equidistant(g):
    # the isometric circle of g bisects 0 and g^-1(0)
    c = isometric_circle(g)
    far = mobius_apply(g.inverse().su11, 0j)
    for phi in np.linspace(0, 2 * math.pi, 12):
        z = c.center + c.radius * cmath.exp(1j * phi)
        if abs(z) < 0.99:
            assert disc_distance(z, 0j) == pytest.approx(disc_distance(z, far), rel=1e-7)
    # off-center Dirichlet bisectors
    cen = 0.1 + 0.05j
    H = dirichlet_halfplane(g, cen)
    gc = mobius_apply(g.su11, cen)
    assert H.contains(cen)
    assert not H.contains(gc)
    for z in H.ideal_points():
        w = 0.97 * z + 0.03 * cen
        # points near the boundary geodesic are near-equidistant: value ~ difference
        assert abs(H.value(w)) < 1


def test_dirichlet_at_origin_matches_ford():
    for g in ELEMENTS[:30]:
        F = ford_halfplane(g.inverse())
        D = dirichlet_halfplane(g)
        for z in [0.3, 0.5j, -0.4 - 0.2j, 0.7 + 0.1j]:
            assert (F.value(z) >= 0) == (D.value(z) >= 0)


def test_distance_oracle_agrees():
    for z, w in [(0j, 0.5), (0.3j, -0.2 + 0.1j), (0.9, 0.91)]:
        assert disc_distance(z, w) == pytest.approx(disc_distance_oracle(z, w), rel=1e-12)


def test_circle_intersections():
    assert circle_circle_intersection(0j, 1, 3 + 0j, 1) == []
    pts = circle_circle_intersection(0j, 1, 1 + 0j, 1)
    assert len(pts) == 2
    for z in pts:
        assert abs(z) == pytest.approx(1) and abs(z - 1) == pytest.approx(1)
    with pytest.raises(DegenerateConfiguration):
        circle_circle_intersection(0j, 1, 2 + 0j, 1)


def _float_side(t1, t2, t3):
    """Sign of plane t3 at the meeting point of t1, t2, all in floats."""
    def normal(t):
        m, u, v = t
        return np.array([m, -math.sqrt(a) * u, math.sqrt(p) * v])
    n1, n2, n3 = normal(t1), normal(t2), normal(t3)
    X = np.cross(n1 * J, n2 * J)
    if X[0] < 0:
        X = -X
    return np.sign(bilinear(X, n3)), X


p, a = 5, 2
J = np.array([1.0, -1.0, -1.0])


def test_exact_side_agrees_with_floats():
    from quatdom.geometry import bisector_triple
    els = ELEMENTS[:40]
    checked = 0
    for g1 in els[:12]:
        for g2 in els[12:24]:
            if g1.p != 5 or g2.p != 5:
                continue
            t1, t2 = bisector_triple(g1), bisector_triple(g2)
            for g3 in els[24:40]:
                if g3.p != 5:
                    continue
                t3 = bisector_triple(g3)
                try:
                    s = exact_side(t1, t2, t3)
                except DegenerateConfiguration:
                    continue
                fs, X = _float_side(t1, t2, t3)
                if abs(bilinear(X, np.array([t3[0], -math.sqrt(a) * t3[1], math.sqrt(p) * t3[2]]))) > 1e-6:
                    assert s == fs
                    checked += 1
    assert checked > 100


def test_region_clipping():
    R = ConvexRegion(1e-10)
    assert not R.closed
    for g in enumerate_elements(5, 2, 200):
        R.clip(ford_halfplane(g))
    assert R.closed
    P = R.polygon()
    assert P.is_closed()
    assert R.area() == pytest.approx(polygon_area(P), rel=1e-12)
    # every vertex lies outside (or on) every isometric circle used
    for g in enumerate_elements(5, 2, 200):
        H = ford_halfplane(g)
        assert all(H.value(v) > -1e-9 for v in P.vertices)


def test_halfplane_geodesic():
    H = ford_halfplane(g32)
    kind, o, r = H.geodesic()
    assert kind == "circle"
    c = isometric_circle(g32)
    assert abs(o - c.center) < 1e-12 and r == pytest.approx(c.radius)
    D = HalfPlane(np.array([0.0, 1.0, 0.0]))
    assert D.geodesic()[0] == "diameter"
