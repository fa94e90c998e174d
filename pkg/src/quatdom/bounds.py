"""Theoretical bounds on generators: Chalk's chain and Johansson's epsilon."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from sympy import totient

from .arith import QuatAlgebra


def johansson_epsilon(volume: float, k: float = 3.0, normalization: str = "hyperbolic") -> float:
    """(1/k) (1 - sqrt(V / (2 + V))) for k > 2.

    ``normalization="arithmetic"`` measures V with ds / 2 pi, i.e. divides a
    hyperbolic area by 2 pi first.
    """
    if k <= 2:
        raise ValueError("k must exceed 2")
    if volume <= 0:
        raise ValueError("volume must be positive")
    if normalization == "arithmetic":
        volume = volume / (2 * math.pi)
    elif normalization != "hyperbolic":
        raise ValueError(f"unknown normalization {normalization!r}")
    return (1.0 - math.sqrt(volume / (2.0 + volume))) / k


def norm_bound_from_epsilon(eps: float) -> float:
    """Largest ||g|| whose isometric circle radius 2/sqrt(||g|| - 2) exceeds eps."""
    return 2.0 + 4.0 / (eps * eps)


def shell_bound_from_epsilon(eps: float) -> int:
    """Largest m = |C|^2 with radius 1/sqrt(m) > eps."""
    m = math.floor(1.0 / (eps * eps))
    if m * eps * eps >= 1.0:
        m -= 1
    return m


@dataclass
class ChalkBounds:
    N: int
    first_norm: float
    chain: list   # mpmath numbers, ||A_1|| .. ||A_N||


def chalk_bounds(p: int, a: int) -> ChalkBounds:
    """N <= 6 + phi(d_H), ||A_1|| < 2 + 4 N / pi and the quintic chain."""
    dH = QuatAlgebra(a, p).discriminant
    N = 6 + int(totient(dH))
    first = 2 + 4 * N / math.pi
    c2 = mpmath.mpf(9) / 64 * mpmath.mpf(p) ** 2 / mpmath.mpf(dH) ** 2 * N
    chain = [mpmath.mpf(first)]
    for _ in range(N - 1):
        chain.append(c2 * chain[-1] ** 5)
    return ChalkBounds(N, first, chain)


@dataclass
class BoundReport:
    p: int
    a: int
    chalk_N_bound: int
    chalk_norm_chain: list
    johansson_epsilon: float
    johansson_norm_bound: float
    exact_max_norm: int
    exact_n_generators: int
    exact_n_sides: int
    exact_max_x0: int
    ratio_over_exact: float
    normalization: str = "hyperbolic"
    extra: dict = field(default_factory=dict)

    @property
    def log10_ratio(self) -> float:
        return math.log10(self.ratio_over_exact)

    @property
    def sound(self) -> bool:
        return self.johansson_norm_bound >= self.exact_max_norm


def compare_bounds(domain, k: float = 3.0, normalization: str = "hyperbolic") -> BoundReport:
    """Exact statistics of a certified domain against the theoretical bounds."""
    from .geometry import norm_sl2

    p, a = domain.p, domain.a
    ch = chalk_bounds(p, a)
    eps = johansson_epsilon(domain.covolume.area, k, normalization)
    bound = norm_bound_from_epsilon(eps)
    gens = domain.generators
    max_norm = max(norm_sl2(g) for g in gens)
    return BoundReport(
        p=p, a=a,
        chalk_N_bound=ch.N,
        chalk_norm_chain=ch.chain,
        johansson_epsilon=eps,
        johansson_norm_bound=bound,
        exact_max_norm=max_norm,
        exact_n_generators=len(gens),
        exact_n_sides=domain.stats["n_sides"],
        exact_max_x0=max(abs(g.x0) for g in gens),
        ratio_over_exact=bound / max_norm,
        normalization=normalization,
        extra={"paper_radius_norm_bound": 2.0 + 1.0 / (eps * eps)},
    )


def discrepancy_summary(reports) -> dict:
    """Largest over/under-estimation factors and the geometric-mean factor."""
    ratios = [r.ratio_over_exact for r in reports]
    if not ratios:
        return {"max_over": None, "max_under": None, "geo_mean_factor": None}
    over = max(ratios)
    under = min(ratios)
    logs = [abs(math.log(r)) for r in ratios]
    return {
        "max_over": over if over > 1 else 1.0,
        "max_under": 1 / under if under < 1 else 1.0,
        "geo_mean_factor": math.exp(sum(logs) / len(logs)),
    }
