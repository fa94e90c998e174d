"""Serialization of domains and sweeps: CSV rows, JSON dumps, SVG drawings
and plain-text reports."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from xml.sax.saxutils import escape

from .arith import QuatAlgebra
from .bounds import BoundReport, compare_bounds, discrepancy_summary
from .domain import (CertificationError, FordConfig, FordDomain, build_dirichlet_domain,
                     build_ford_domain)
from .geometry import classify, norm_sl2
from .orders import (QuatOrder, canonical_covolume, eichler_invariant_form,
                     eichler_invariant_radical)


@dataclass
class SweepRow:
    p: int
    a: int
    d_H: int
    d_O: int
    n_generators: int
    max_x0: int
    max_norm: int
    covolume_over_pi: Fraction
    area: float
    epsilon_used: float
    shells_consumed: int
    certified: bool
    elliptic_vertices: int
    runtime_ms: int


COLUMNS = [f.name for f in fields(SweepRow)]
_FLOAT = {"area", "epsilon_used"}


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def format_float(x: float) -> str:
    return format(float(x), ".12g")


def format_cell(name: str, value) -> str:
    if name == "covolume_over_pi":
        return format_rational(value)
    if name == "certified":
        return "true" if value else "false"
    if name in _FLOAT:
        return format_float(value)
    return str(int(value))


def parse_cell(name: str, text: str):
    if name == "covolume_over_pi":
        return parse_rational(text)
    if name == "certified":
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean {text!r}")
        return text == "true"
    if name in _FLOAT:
        return float(text)
    return int(text)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([format_cell(c, getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def parse_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != COLUMNS:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    return [SweepRow(**{c: parse_cell(c, rec[c]) for c in COLUMNS}) for rec in reader]


def sweep_row(p: int, a: int, config: FordConfig | None = None,
              timings: bool = False) -> SweepRow:
    """Build one domain; failures become an uncertified row."""
    t0 = time.perf_counter()
    order = QuatOrder.canonical(p, a)
    cov = canonical_covolume(p, a)
    dom = None
    try:
        dom = build_ford_domain(p, a, config)
    except CertificationError as err:
        dom = err.domain
    except Exception:  # recorded, never fatal for a sweep
        dom = None
    ms = round((time.perf_counter() - t0) * 1000) if timings else 0
    gens = dom.generators if dom is not None else []
    return SweepRow(
        p=p, a=a,
        d_H=QuatAlgebra(a, p).discriminant,
        d_O=order.reduced_discriminant,
        n_generators=len(gens),
        max_x0=max((abs(g.x0) for g in gens), default=0),
        max_norm=max((norm_sl2(g) for g in gens), default=0),
        covolume_over_pi=cov.over_pi,
        area=dom.area if dom is not None else math.inf,
        epsilon_used=dom.epsilon_used if dom is not None else 0.0,
        shells_consumed=dom.shells_consumed if dom is not None else 0,
        certified=bool(dom is not None and dom.certified),
        elliptic_vertices=(dom.stats.get("elliptic_vertex_count", 0)
                           if dom is not None else 0),
        runtime_ms=ms,
    )


# -- JSON ----------------------------------------------------------------------

def domain_to_json(D: FordDomain) -> dict:
    return {
        "p": D.p,
        "a": D.a,
        "generators": [list(g.coords) for g in D.generators],
        "area": D.area,
        "covolume": f"{format_rational(D.covolume.over_pi)} * pi",
        "certified": D.certified,
    }


def write_json(D: FordDomain, path) -> None:
    with open(path, "w") as fh:
        json.dump(domain_to_json(D), fh, indent=1)
        fh.write("\n")


# -- SVG -----------------------------------------------------------------------

def _pt(z: complex) -> str:
    # y is flipped by the group transform
    return f"{z.real:.9f},{z.imag:.9f}"


def _boundary_path(D: FordDomain) -> str:
    verts = D.polygon.vertices
    n = len(verts)
    parts = [f"M {_pt(verts[0])}"]
    for k, owner in enumerate(D.polygon.owners or [None] * n):
        v, w = verts[k], verts[(k + 1) % n]
        if owner is None:
            # free arc of the unit circle, counterclockwise
            large = 1 if (math.atan2(w.imag, w.real) - math.atan2(v.imag, v.real)) % (2 * math.pi) > math.pi else 0
            parts.append(f"A 1,1 0 {large},1 {_pt(w)}")
            continue
        plane = _side_plane(D, owner)
        kind = plane.geodesic()
        if kind[0] == "diameter":
            parts.append(f"L {_pt(w)}")
            continue
        _, o, r = kind
        sweep = 1 if ((w - o) / (v - o)).imag > 0 else 0
        parts.append(f"A {r:.9f},{r:.9f} 0 0,{sweep} {_pt(w)}")
    parts.append("Z")
    return " ".join(parts)


def _side_plane(D, owner):
    from .geometry import dirichlet_halfplane, ford_halfplane
    if D.method == "dirichlet":
        return dirichlet_halfplane(owner.inverse(), D.center)
    return ford_halfplane(owner)


def render_svg(D: FordDomain, path=None, size: int = 800) -> str:
    """Unit circle, every consumed isometric circle, the boundary and a legend."""
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        'viewBox="-1.1 -1.1 2.2 2.4">',
        '<g transform="scale(1,-1)">',
        '<circle class="unit" cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.004"/>',
        '<g class="isometric" fill="none" stroke="#7a9cc6" stroke-width="0.001">',
    ]
    for c in D.circles:
        out.append(f'<circle cx="{c.center.real:.9f}" cy="{c.center.imag:.9f}" r="{c.radius:.9f}"/>')
    out.append("</g>")
    if D.polygon.vertices:
        out.append(f'<path class="boundary" d="{_boundary_path(D)}" fill="#f3d9a4" '
                   'fill-opacity="0.5" stroke="#b2182b" stroke-width="0.006"/>')
    for z in D.stats.get("elliptic_points", []):
        out.append(f'<circle class="elliptic" cx="{z.real:.9f}" cy="{z.imag:.9f}" '
                   'r="0.012" fill="#1b7837"/>')
    out.append("</g>")
    legend = (f"(p, a) = ({D.p}, {D.a})   area = {D.area:.9g}   "
              f"covolume = {format_rational(D.covolume.over_pi)} pi   "
              f"certified = {str(D.certified).lower()}")
    out.append(f'<text class="legend" x="-1.08" y="1.22" font-size="0.05" '
               f'font-family="monospace">{escape(legend)}</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# -- text reports --------------------------------------------------------------

def invariants_report(p: int, a: int) -> str:
    H = QuatAlgebra(a, p)
    order = QuatOrder.canonical(p, a)
    cov = canonical_covolume(p, a)
    f = order.ternary_form
    lines = [
        f"H = ({a}, {p} / Q)",
        f"ramified places: {sorted(H.ramified_places, key=lambda v: (v == 'inf', 0 if v == 'inf' else v))}",
        f"d_H = {H.discriminant}",
        f"d(O) = {order.reduced_discriminant}",
        f"ternary form (f11, f22, f33, f12, f13, f23): {tuple(int(c) if c.denominator == 1 else str(c) for c in f.coefficients())}",
        "local data at q | d(O):",
    ]
    for li in cov.local:
        q = li.q
        form_e = eichler_invariant_form(f, q) if q % 2 else "-"
        lines.append(
            f"  q = {q}: exponent {li.exponent}, "
            f"{'split' if li.split else 'ramified'}, "
            f"Eichler invariant {eichler_invariant_radical(order, q)} "
            f"(form: {form_e}), norm index {li.norm_index}, "
            f"[M^1:O^1]_q = {str(li.unit_index)}")
    lines += [
        f"[M^1 : O^1] = {str(cov.index)}",
        f"maximal covolume = {str(cov.maximal_over_pi)} pi",
        f"covolume = {str(cov.over_pi)} pi = {cov.area:.12g}",
        f"normalized volume = {str(cov.normalized)}",
    ]
    return "\n".join(lines)


def bounds_report(rep: BoundReport) -> str:
    chain = rep.chalk_norm_chain
    lines = [
        f"(p, a) = ({rep.p}, {rep.a})",
        f"  Chalk N bound        {rep.chalk_N_bound}   (exact sides {rep.exact_n_sides}, "
        f"generators {rep.exact_n_generators})",
        f"  Chalk ||A_1|| bound  {float(chain[0]):.6g}",
        f"  Chalk ||A_N|| bound  {_mp_str(chain[-1])}",
        f"  Johansson epsilon    {rep.johansson_epsilon:.6g} ({rep.normalization})",
        f"  Johansson norm bound {rep.johansson_norm_bound:.6g}",
        f"  exact max norm       {rep.exact_max_norm}",
        f"  exact max x0         {rep.exact_max_x0}",
        f"  ratio bound / exact  {rep.ratio_over_exact:.6g} "
        f"(log10 {rep.log10_ratio:+.3f})",
        f"  cutoff sound         {rep.sound}",
    ]
    return "\n".join(lines)


def _mp_str(x) -> str:
    import mpmath
    return mpmath.nstr(x, 6)


def bounds_summary(reports) -> str:
    s = discrepancy_summary(reports)
    if s["max_over"] is None:
        return "no certified pairs"
    under = (f"largest under-estimate x{s['max_under']:.3g}" if s["max_under"] > 1
             else "never under-estimates")
    return (f"pairs: {len(reports)}   largest over-estimate x{s['max_over']:.3g}   "
            f"{under}   "
            f"geometric-mean factor x{s['geo_mean_factor']:.3g}")


def analysis_report(D: FordDomain, k: float = 3.0, normalization: str = "hyperbolic") -> str:
    lines = [invariants_report(D.p, D.a), ""]
    lines.append(f"method: {D.method}   center: {D.center}")
    lines.append(f"area = {D.area:.12g}   covolume = {D.covolume.area:.12g}   "
                 f"relative error {D.relative_area_error:.2e}   certified = {D.certified}")
    st = D.stats
    lines.append(f"sides {st.get('n_sides')}   generators {st.get('n_generators')}   "
                 f"genus {st.get('genus')}   elliptic vertices {st.get('elliptic_vertex_count')} "
                 f"{st.get('elliptic_orders')}")
    lines.append(f"shells consumed to m = {D.shells_consumed}   closure at m = {D.closure_m}   "
                 f"epsilon = {D.epsilon_used:.6g}")
    lines.append("generators (x0, x1, x2, x3)   trace   type")
    for g in D.generators:
        lines.append(f"  {g.coords}   {g.trace}   {classify(g)}")
    if D.generators:
        lines.append("")
        lines.append(bounds_report(compare_bounds(D, k, normalization)))
    return "\n".join(lines)


def build(p, a, method="ford", config: FordConfig | None = None):
    config = config or FordConfig()
    if method == "dirichlet":
        return build_dirichlet_domain(p, a, tol=config.tol)
    return build_ford_domain(p, a, config)
