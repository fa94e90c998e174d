"""Ford and Dirichlet fundamental domains for Gamma_{p,a} on the unit disc.

Isometric circles are inserted in ascending m = |C|^2 (Hutchinson's
order).  Once the region is closed, shells are consumed up to the epsilon
cutoff, and the result is accepted only when its Gauss-Bonnet area matches
the covolume of the canonical order.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .bounds import johansson_epsilon, shell_bound_from_epsilon
from .geometry import (TOL, ConvexRegion, HyperbolicPolygon, classify, fixed_point,
                       dirichlet_halfplane, disc_distance, disc_to_hyperboloid,
                       ford_halfplane, isometric_circle, mobius_apply, norm_sl2,
                       polygon_area)
from .lattice import (GroupElement, canonical_rows, element_array, enumerate_shells,
                      invalid_reason)
from .orders import Covolume, canonical_covolume

log = logging.getLogger(__name__)

CERT_RTOL = 1e-6


def default_tolerance() -> float:
    return float(os.environ.get("QUATDOM_TOL", TOL))


@dataclass
class FordConfig:
    tol: float = field(default_factory=default_tolerance)
    eps_k: float = 3.0
    vol_norm: str = "hyperbolic"
    max_shells: int = 5_000_000
    # skip shells that provably miss the closed region (all vertices inside
    # |z| <= R); set False to walk every shell up to the epsilon cutoff
    vertex_cutoff: bool = True


class CertificationError(RuntimeError):
    def __init__(self, msg, domain=None):
        super().__init__(msg)
        self.domain = domain


@dataclass
class FordDomain:
    p: int
    a: int
    polygon: HyperbolicPolygon
    generators: list
    sides: list                 # owner of each side, counterclockwise
    shells_consumed: int
    area: float
    covolume: Covolume
    certified: bool
    epsilon_used: float
    circles: list               # every isometric circle inserted
    closure_m: int | None
    stats: dict = field(default_factory=dict)
    method: str = "ford"
    center: complex = 0j

    @property
    def relative_area_error(self) -> float:
        return abs(self.area - self.covolume.area) / self.covolume.area


def _vertex_cutoff_m(R: float) -> int:
    """Shells with m beyond this have isometric discs outside |z| <= R."""
    if R <= 0:
        return 0
    r_star = (1 - R * R) / (2 * R)
    return math.floor(1.0 / (r_star * r_star)) + 1


def build_ford_domain(p: int, a: int, config: FordConfig | None = None) -> FordDomain:
    config = config or FordConfig()
    reason = invalid_reason(p, a)
    if reason:
        raise ValueError(f"invalid pair ({p}, {a}): {reason}")
    cov = canonical_covolume(p, a)
    eps = johansson_epsilon(cov.area, config.eps_k, config.vol_norm)
    m_eps = shell_bound_from_epsilon(eps)
    region = ConvexRegion(config.tol)
    circles = []
    closure_m = None
    closure_area = math.inf
    m_last = 0
    stop = m_eps
    for sh in enumerate_shells(p, a):
        if sh.m > config.max_shells:
            break
        if sh.m > stop:
            if not region.closed:
                stop = sh.m  # keep going until closed
            else:
                area = region.area()
                if abs(area - cov.area) <= CERT_RTOL * cov.area:
                    break
                if config.vertex_cutoff and stop < m_eps:
                    break  # provably complete: the area identity failed
                eps /= 2
                m_eps = shell_bound_from_epsilon(eps)
                log.info("(%d,%d) area %.9g != %.9g, deepening to m=%d",
                         p, a, area, cov.area, m_eps)
                stop = m_eps
                if sh.m > stop:
                    continue
        m_last = sh.m
        for g in sh.members:
            circ = isometric_circle(g)
            circles.append(circ)
            region.clip(ford_halfplane(g))
        if region.closed:
            if closure_m is None:
                closure_m = sh.m
                closure_area = region.area()
            if config.vertex_cutoff:
                stop = min(m_eps, max(sh.m, _vertex_cutoff_m(region.max_vertex_modulus())))
    try:
        dom = _finish(p, a, region, cov, eps, m_last, circles, closure_m, config)
    except CertificationError as err:
        if err.domain is not None:
            err.domain.stats["area_at_closure"] = closure_area
        raise
    # is the first closed region already fundamental?
    dom.stats["area_at_closure"] = closure_area
    dom.stats["certified_at_closure"] = abs(closure_area - cov.area) <= CERT_RTOL * cov.area
    if dom.stats["certified_at_closure"]:
        log.info("(%d,%d) certified at first closure m=%d", p, a, closure_m)
    return dom


def _finish(p, a, region, cov, eps, m_last, circles, closure_m, config,
            method="ford", center=0j):
    if not region.closed:
        dom = FordDomain(p, a, region.polygon(), [], [], m_last, math.inf, cov, False,
                         eps, circles, None, method=method, center=center)
        raise CertificationError(f"({p},{a}): region not closed by m={m_last}", dom)
    poly = region.polygon()
    area = polygon_area(poly)
    sides = [e.plane.label for e in region.edges]
    if method == "dirichlet":
        # the side on the bisector of c and g c is paired by g^-1
        sides = [g.inverse() for g in sides]
        poly = HyperbolicPolygon(poly.vertices, sides)
    certified = abs(area - cov.area) <= CERT_RTOL * cov.area
    dom = FordDomain(p, a, poly, extract_generators_from_sides(sides), sides, m_last,
                     area, cov, certified, eps, circles, closure_m,
                     method=method, center=center)
    dom.stats = _stats(dom, region)
    if not certified:
        raise CertificationError(
            f"({p},{a}): area {area:.12g} vs covolume {cov.area:.12g}", dom)
    return dom


def extract_generators_from_sides(sides) -> list:
    seen = set()
    out = []
    for g in sides:
        key = g.coords
        if key in seen:
            continue
        seen.add(key)
        seen.add(g.inverse().coords)
        out.append(g)
    return out


def extract_generators(D: FordDomain) -> list:
    if any(o is None for o in D.polygon.owners):
        raise ValueError("domain has a free side; it is not closed")
    return extract_generators_from_sides(D.sides)


def side_pairing_errors(D: FordDomain) -> list:
    """For each side, the endpoint mismatch between g(side) and its partner."""
    verts = D.polygon.vertices
    n = len(verts)
    by_owner = {}
    for k, g in enumerate(D.sides):
        by_owner.setdefault(g.coords, []).append((verts[k], verts[(k + 1) % n]))
    errs = []
    for k, g in enumerate(D.sides):
        s, e = verts[k], verts[(k + 1) % n]
        M = g.su11
        gs, ge = mobius_apply(M, s), mobius_apply(M, e)
        partners = by_owner.get(g.inverse().coords, [])
        if not partners:
            errs.append(math.inf)
            continue
        # orientation reverses: g(start) -> partner end
        errs.append(min(max(abs(gs - pe), abs(ge - ps)) for ps, pe in partners))
    return errs


def vertex_cycles(D: FordDomain, tol: float = 1e-7) -> list:
    """Classes of vertices under the side pairings, with their angle sums."""
    from .geometry import interior_angles

    verts = D.polygon.vertices
    n = len(verts)
    angles = interior_angles(verts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for k, g in enumerate(D.sides):
        M = g.su11
        for v_idx in (k, (k + 1) % n):
            w = mobius_apply(M, verts[v_idx])
            for j in range(n):
                if abs(verts[j] - w) < tol:
                    parent[find(v_idx)] = find(j)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return [(idx, sum(angles[i] for i in idx)) for idx in classes.values()]


def _stats(D: FordDomain, region) -> dict:
    gens = D.generators
    kinds = [classify(g) for g in gens]
    cycles = vertex_cycles(D)
    elliptic_cycles = []
    points = []
    for idx, s in cycles:
        k = 2 * math.pi / s
        if abs(k - round(k)) < 1e-6 and round(k) > 1:
            elliptic_cycles.append(round(k))
            points.append(D.polygon.vertices[idx[0]])
    # an elliptic side generator fixes the midpoint of its own side
    elliptic_sides = [g for g in D.sides if g.x0 == 0]
    points += [fixed_point(g) for g in elliptic_sides]
    orders = sorted(elliptic_cycles + [2] * len(elliptic_sides))
    chi_orb = -D.area / (2 * math.pi)
    genus2 = 2 + chi_orb * -1 - sum(1 - 1 / k for k in orders)
    return {
        "n_sides": len(D.sides),
        "n_generators": len(gens),
        "max_x0": max(abs(g.x0) for g in gens),
        "max_norm": max(norm_sl2(g) for g in gens),
        "max_m": max(g.c_norm_sq for g in gens),
        "min_radius": min(1 / math.sqrt(g.c_norm_sq) for g in gens),
        "elliptic_vertex_count": len(orders),
        "elliptic_orders": orders,
        "elliptic_points": points,
        "n_elliptic_generators": kinds.count("elliptic"),
        "genus": round(genus2 / 2),
        "vertex_cycles": len(cycles),
        "min_vertex_separation": region.min_separation,
        "max_vertex_modulus": max(abs(v) for v in D.polygon.vertices),
        "circles_consumed": len(D.circles),
    }


def circles_cutting(D: FordDomain, elements, tol: float = TOL) -> list:
    """Elements whose isometric discs meet the interior of D."""
    out = []
    verts = D.polygon.vertices
    for g in elements:
        plane = ford_halfplane(g)
        if any(plane.value(v) < -tol for v in verts):
            out.append(g)
    return out


# -- Dirichlet domains ---------------------------------------------------------

def _hyperboloid_rows(z):
    r2 = np.abs(z) ** 2
    s = 1.0 - r2
    return np.column_stack([(1 + r2) / s, 2 * z.real / s, 2 * z.imag / s])


def default_dirichlet_schedule(covolume_area: float, n: int = 8) -> list:
    diam = 2 * math.acosh(1 + covolume_area / math.pi)
    k1 = 2 * math.cosh(2 * diam)
    return [k1 * 2 ** i for i in range(n)]


def build_dirichlet_domain(p: int, a: int, center: complex = 0j, schedule=None,
                           tol: float | None = None,
                           max_shells: int = 2_000_000) -> FordDomain:
    """Dirichlet domain D(c) = intersection of {rho(x, c) <= rho(x, g c)}.

    ``schedule`` lists increasing thresholds k_i on 2 cosh rho(c, g c); the
    first compact D_{k_n} fixes the final radius
    R = 2 max(r_n / 2, max rho(c, x)) with r_n = arccosh(k_n / 2).
    A search needing shells beyond ``max_shells`` raises CertificationError.
    """
    tol = default_tolerance() if tol is None else tol
    region = ConvexRegion(tol)
    reason = invalid_reason(p, a)
    if reason:
        raise ValueError(f"invalid pair ({p}, {a}): {reason}")
    cov = canonical_covolume(p, a)
    schedule = list(schedule or default_dirichlet_schedule(cov.area))
    rho0 = disc_distance(0j, center)
    C = disc_to_hyperboloid(center)

    if center != 0:
        # a center fixed by some element would give a degenerate bisector
        for sh in enumerate_shells(p, a, 64):
            for g in sh.members:
                if abs(mobius_apply(g.su11, center) - center) < 1e-9:
                    raise ValueError(f"center {center} is fixed by {g.coords}")

    def elements_within(dist):
        """(d, coords, g c) for rho(c, g c) <= dist, sorted by (d, coords)."""
        # rho(c, g c) <= dist implies rho(0, g 0) <= dist + 2 rho0
        m_max = math.floor((math.cosh(dist + 2 * rho0) - 1) / 2) + 1
        if m_max > max_shells:
            dom = FordDomain(p, a, region.polygon(), [], [], 0, math.inf, cov, False,
                             0.0, [], None, method="dirichlet", center=center)
            raise CertificationError(
                f"({p},{a}): Dirichlet radius {dist:.3g} needs shells to m={m_max}", dom)
        G = element_array(p, a, m_max)
        inv = canonical_rows(G * np.array([1, -1, -1, -1]))
        # g and g^-1 coincide as maps when x0 = 0
        X = np.concatenate([G, inv[G[:, 0] != 0]])
        A = X[:, 0] + 1j * X[:, 3] * math.sqrt(a * p)
        Cc = X[:, 1] * math.sqrt(a) + 1j * X[:, 2] * math.sqrt(p)
        gc = (A * center + np.conj(Cc)) / (Cc * center + np.conj(A))
        r2 = np.abs(gc) ** 2
        cosh_d = 1 + 2 * np.abs(gc - center) ** 2 / ((1 - abs(center) ** 2) * (1 - r2))
        d = np.arccosh(np.maximum(cosh_d, 1.0))
        keep = d <= dist
        X, d, gc = X[keep], d[keep], gc[keep]
        order = np.lexsort((X[:, 3], X[:, 2], X[:, 1], X[:, 0], d))
        return d[order], X[order], gc[order]

    def element(row):
        return GroupElement(*(int(t) for t in row), p=p, a=a)

    def clip_range(dists, rows, images, lo, limit):
        """Clip by rows lo.. with distance <= limit; return the next index."""
        k = lo
        n = int(np.searchsorted(dists, limit, side="right"))
        while k < n and not region.closed:
            region.clip(dirichlet_halfplane(element(rows[k]), center))
            k += 1
        while k < n:
            # a plane keeping every vertex strictly inside cannot cut the
            # (convex, shrinking) region; only the rest are clipped exactly
            hi = min(n, k + 4096)
            V = _hyperboloid_rows(np.array(region.vertices()))
            N = _hyperboloid_rows(images[k:hi]) - C
            scale = np.sqrt(-(N[:, 0] ** 2 - N[:, 1] ** 2 - N[:, 2] ** 2))
            vals = (V[:, :1] * N[:, 0] - V[:, 1:2] * N[:, 1] - V[:, 2:] * N[:, 2]) / scale
            for j in np.flatnonzero(vals.min(axis=0) < 1e-7):
                region.clip(dirichlet_halfplane(element(rows[k + j]), center))
            k = hi
        return k

    k_n = None
    idx = 0
    for k in schedule:
        r = math.acosh(k / 2)
        # each search extends the previous one, whose sorted prefix is clipped
        dists, rows, images = elements_within(r)
        idx = clip_range(dists, rows, images, idx, r)
        if region.closed:
            k_n = k
            break
    if k_n is None:
        dom = FordDomain(p, a, region.polygon(), [], [], 0, math.inf, cov, False,
                         0.0, [], None, method="dirichlet", center=center)
        raise CertificationError(f"({p},{a}): Dirichlet schedule exhausted", dom)
    r_n = math.acosh(k_n / 2)
    far = max(disc_distance(center, v) for v in region.vertices())
    R = 2 * max(r_n / 2, far)
    if R > r_n:
        dists, rows, images = elements_within(R)
    clip_range(dists, rows, images, idx, R)
    dom = _finish(p, a, region, cov, 0.0, 0, [], None, None,
                  method="dirichlet", center=center)
    dom.stats["R"] = R
    dom.stats["k_n"] = k_n
    return dom
