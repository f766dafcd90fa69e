"""Exponent-plane analysis for the coupled system: admissible windows and curves.

All quantities are closed-form functions of the nonlinearity exponents p, q,
the dimension N, and the split parameter r.  Region predicates use strict
inequalities; scan rows classify near-boundary points separately instead of
collapsing them to true/false.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PQPoint:
    """A point of the exponent plane with ambient dimension N."""

    p: float
    q: float
    N: int

    def __post_init__(self) -> None:
        if not (self.p > 1.0 and self.q > 1.0):
            raise ValueError(f"exponents must exceed 1, got p={self.p}, q={self.q}")
        if self.N < 1:
            raise ValueError(f"dimension must be at least 1, got {self.N}")


def hyperbola_gap(pt: PQPoint) -> float:
    """Subcriticality margin 1/(p+1) + 1/(q+1) - (N-2)/N.

    Positive below the dividing hyperbola, zero on it.  For N <= 2 there is
    no constraint and +inf is returned.
    """
    if pt.N <= 2:
        return math.inf
    return 1.0 / (pt.p + 1.0) + 1.0 / (pt.q + 1.0) - (pt.N - 2.0) / pt.N


def admissible_r_interval(pt: PQPoint) -> tuple[float, float] | None:
    """Open interval of split parameters r giving a well-defined energy.

    The window is N[1/2 - 1/(q+1)] < r < 2 - N[1/2 - 1/(p+1)], intersected
    with (0, 2); it is nonempty exactly when the point is subcritical.  For
    N <= 2 every r in (0, 2) works and the full interval is returned.
    """
    if pt.N <= 2:
        return (0.0, 2.0)
    lo = max(0.0, pt.N * (0.5 - 1.0 / (pt.q + 1.0)))
    hi = min(2.0, 2.0 - pt.N * (0.5 - 1.0 / (pt.p + 1.0)))
    if lo >= hi:
        return None
    return (lo, hi)


def formula_r_window(pt: PQPoint) -> tuple[float, float] | None:
    """Validity window of the interpolation/growth exponent formulas.

    For N >= 3 this coincides with the admissible interval; for N <= 2 it is
    strictly smaller than (0, 2) because the interpolation exponents must
    stay in (0, 1].
    """
    lo = max(0.0, pt.N * (0.5 - 1.0 / (pt.q + 1.0)))
    hi = min(2.0, 2.0 - pt.N * (0.5 - 1.0 / (pt.p + 1.0)))
    if lo >= hi:
        return None
    return (lo, hi)


def _check_r(pt: PQPoint, r: float) -> None:
    window = formula_r_window(pt)
    if window is None:
        raise ValueError(
            f"no valid split parameter exists for p={pt.p}, q={pt.q}, N={pt.N}"
        )
    if not window[0] < r < window[1]:
        raise ValueError(
            f"r={r} outside the valid window ({window[0]}, {window[1]}) "
            f"for p={pt.p}, q={pt.q}, N={pt.N}"
        )


def interpolation_exponents(pt: PQPoint, r: float) -> tuple[float, float]:
    """L2-vs-Sobolev interpolation exponents for the two nonlinear norms.

    Returns (theta, zeta) with
        theta = 1 - (N/r)(1/2 - 1/(q+1)),
        zeta  = 1 - (N/(2-r))(1/2 - 1/(p+1)),
    both in (0, 1] on the valid window (the classical Gagliardo-Nirenberg
    exponents when r is an integer).
    """
    _check_r(pt, r)
    theta = 1.0 - (pt.N / r) * (0.5 - 1.0 / (pt.q + 1.0))
    zeta = 1.0 - (pt.N / (2.0 - r)) * (0.5 - 1.0 / (pt.p + 1.0))
    return theta, zeta


def growth_exponents(pt: PQPoint, r: float) -> tuple[float, float, float]:
    """Level-growth exponents (q1, p1, alpha) at split parameter r.

    q1 = ((q+1)/(q-1)) (r/N) - 1/2 governs the u-nonlinearity, p1 the
    mirrored quantity with r -> 2-r and q -> p; alpha = min(q1, p1) and the
    k-th minimax level grows at least like k^(2 alpha).
    """
    _check_r(pt, r)
    q1 = (pt.q + 1.0) / (pt.q - 1.0) * (r / pt.N) - 0.5
    p1 = (pt.p + 1.0) / (pt.p - 1.0) * ((2.0 - r) / pt.N) - 0.5
    return q1, p1, min(q1, p1)


@dataclass(frozen=True)
class RThresholds:
    """The three split-parameter thresholds of the growth-rate comparison."""

    balanced: float  # r where the two growth exponents coincide
    lower: float     # growth comparison needs r above this
    upper: float     # and below this (mirrored branch)


def r_thresholds(pt: PQPoint) -> RThresholds:
    """Thresholds for r: balance point and the feasibility bounds.

    balanced = (p+1)(q-1)/(pq-1) is where q1 = p1 (equal to 1 when p = q);
    lower = (N/2)((q-1)/(q+1))((2p+1)/p) and
    upper = 2 - (N/2)((p-1)/(p+1))((2p+1)/p)
    bound the window where the minimax growth rate beats the symmetry-defect
    rate on the q >= p branch.
    """
    balanced = (pt.p + 1.0) * (pt.q - 1.0) / (pt.p * pt.q - 1.0)
    lower = (pt.N / 2.0) * (pt.q - 1.0) / (pt.q + 1.0) * (2.0 * pt.p + 1.0) / pt.p
    upper = 2.0 - (pt.N / 2.0) * (pt.p - 1.0) / (pt.p + 1.0) * (2.0 * pt.p + 1.0) / pt.p
    return RThresholds(balanced=balanced, lower=lower, upper=upper)


def defect_rates(pt: PQPoint) -> tuple[float, float]:
    """Growth rates ((q+1)/q, (p+1)/p) of the symmetry-defect recursion."""
    return (pt.q + 1.0) / pt.q, (pt.p + 1.0) / pt.p


def multiplicity_margin(pt: PQPoint) -> float:
    """Signed margin of the multiplicity-region condition (active branch).

    Positive inside the region.  The condition reads
        1/(p+1) + 1/(q+1) + (p+1)/(p(q+1)) > (2N-2)/N   when q >= p,
    with p and q swapped when q <= p; at p = q the branches agree.
    """
    if pt.N < 3:
        raise ValueError(
            f"the multiplicity region is defined for N >= 3 only, got N={pt.N}; "
            "lower dimensions carry no growth constraint"
        )
    base = 1.0 / (pt.p + 1.0) + 1.0 / (pt.q + 1.0)
    if pt.q >= pt.p:
        extra = (pt.p + 1.0) / (pt.p * (pt.q + 1.0))
    else:
        extra = (pt.q + 1.0) / (pt.q * (pt.p + 1.0))
    return base + extra - (2.0 * pt.N - 2.0) / pt.N


def in_multiplicity_region(pt: PQPoint) -> bool:
    """Strict test of the multiplicity-region condition."""
    return multiplicity_margin(pt) > 0.0


@dataclass(frozen=True)
class OptimalR:
    """Best split parameter and whether the growth comparison succeeds there."""

    r_star: float
    feasible: bool


def optimal_r(pt: PQPoint) -> OptimalR | None:
    """Maximize min(2 q1, 2 p1) over the admissible window.

    q1 increases and p1 decreases in r, so the maximum sits at the balance
    point, clipped to the window; feasible records whether the strict
    comparison min(2 q1, 2 p1) > max((q+1)/q, (p+1)/p) holds there.  Returns
    None when no admissible r exists (supercritical point).
    """
    window = formula_r_window(pt)
    if window is None:
        return None
    balanced = r_thresholds(pt).balanced
    eps = 1e-12 * (window[1] - window[0])
    r_star = min(max(balanced, window[0] + eps), window[1] - eps)
    q1, p1, _ = growth_exponents(pt, r_star)
    feasible = 2.0 * min(q1, p1) > max(defect_rates(pt))
    return OptimalR(r_star=r_star, feasible=feasible)


@dataclass(frozen=True)
class BoundCurveRow:
    k: int
    lower: float
    upper: float


@dataclass(frozen=True)
class BoundCurves:
    """Lower/upper level-growth curves and whether they eventually cross."""

    rows: tuple[BoundCurveRow, ...]
    contradiction: bool
    crossover_k: int | None


def bound_curves(
    pt: PQPoint,
    r: float,
    k_range: range,
    gamma: float = 1.0,
    alpha1: float = 1.0,
    alpha2: float = 1.0,
) -> BoundCurves:
    """Tabulate gamma k^(2 alpha) against alpha1 k^((q+1)/q) + alpha2 k^((p+1)/p).

    The contradiction flag is set when the lower exponent strictly exceeds
    the larger upper exponent, so the lower curve eventually overtakes the
    upper one; crossover_k is the first k in (or beyond) the range where it
    does for the supplied constants.  Constants default to 1: only the
    exponents, not the constants, are determined by the analysis.
    """
    _, _, alpha = growth_exponents(pt, r)
    rate_u, rate_v = defect_rates(pt)
    contradiction = 2.0 * alpha > max(rate_u, rate_v)
    rows = tuple(
        BoundCurveRow(
            k=k,
            lower=gamma * float(k) ** (2.0 * alpha),
            upper=alpha1 * float(k) ** rate_u + alpha2 * float(k) ** rate_v,
        )
        for k in k_range
    )
    crossover = None
    if contradiction:
        k = max(k_range.start, 1)
        while True:
            lower = gamma * float(k) ** (2.0 * alpha)
            upper = alpha1 * float(k) ** rate_u + alpha2 * float(k) ** rate_v
            if lower > upper:
                crossover = k
                break
            k *= 2
            if k > 10**9:
                break
    return BoundCurves(rows=rows, contradiction=contradiction, crossover_k=crossover)


@dataclass(frozen=True)
class RegionRow:
    """One scan entry of the exponent plane."""

    p: float
    q: float
    hyperbola_gap: float
    subcritical: bool
    status: str  # "inside" | "outside" | "boundary"
    r_star: float | None
    feasible: bool | None


def region_scan(
    N: int,
    p_grid: list[float],
    q_grid: list[float],
    band: float = 1e-9,
) -> list[RegionRow]:
    """Classify every grid point; rows come out in (p outer, q inner) order."""
    rows = []
    for p in p_grid:
        for q in q_grid:
            pt = PQPoint(p=p, q=q, N=N)
            gap = hyperbola_gap(pt)
            subcritical = gap > 0.0
            if not subcritical:
                status = "outside"
                r_best = None
                feasible = None
            else:
                margin = multiplicity_margin(pt)
                if abs(margin) < band:
                    status = "boundary"
                else:
                    status = "inside" if margin > 0.0 else "outside"
                best = optimal_r(pt)
                r_best = best.r_star if best is not None else None
                feasible = best.feasible if best is not None else None
            rows.append(
                RegionRow(
                    p=p,
                    q=q,
                    hyperbola_gap=gap,
                    subcritical=subcritical,
                    status=status,
                    r_star=r_best,
                    feasible=feasible,
                )
            )
    return rows


def hyperbola_boundary_p(q: float, N: float) -> float:
    """p on the dividing hyperbola at given q (real N > 2 allowed for curves).

    Solves 1/(p+1) + 1/(q+1) = (N-2)/N; at q = 1 this gives (N+4)/(N-4).
    """
    inv = (N - 2.0) / N - 1.0 / (q + 1.0)
    if inv <= 0.0:
        return math.inf
    return 1.0 / inv - 1.0


def multiplicity_boundary_p(q: float, N: float) -> float:
    """p >= q on the multiplicity-region boundary at given q.

    Solves 1/(p+1) + 1/(q+1) + (q+1)/(q(p+1)) = (2N-2)/N for p; at q = 1
    this gives (3N+4)/(3N-4).
    """
    rhs = (2.0 * N - 2.0) / N - 1.0 / (q + 1.0)
    coeff = 1.0 + (q + 1.0) / q
    if rhs <= 0.0:
        return math.inf
    return coeff / rhs - 1.0


@dataclass(frozen=True)
class RegionReport:
    """Every scalar of the exponent analysis for one (p, q, N) and one r."""

    p: float
    q: float
    N: int
    hyperbola_gap: float
    admissible_r: tuple[float, float] | None
    r: float | None
    q1: float | None
    p1: float | None
    alpha_r: float | None
    r_balanced: float
    r_lower: float
    r_upper: float
    in_region: bool
    optimal_r: float | None
    lower_exponent: float | None
    upper_exponents: tuple[float, float]


def region_report(pt: PQPoint, r: float | None = None) -> RegionReport:
    """Assemble the full scalar report; r defaults to the optimal choice."""
    gap = hyperbola_gap(pt)
    window = admissible_r_interval(pt)
    thresholds = r_thresholds(pt)
    best = optimal_r(pt)
    if r is None and best is not None:
        r = best.r_star
    q1 = p1 = alpha = None
    if r is not None and formula_r_window(pt) is not None:
        q1, p1, alpha = growth_exponents(pt, r)
    return RegionReport(
        p=pt.p,
        q=pt.q,
        N=pt.N,
        hyperbola_gap=gap,
        admissible_r=window,
        r=r,
        q1=q1,
        p1=p1,
        alpha_r=alpha,
        r_balanced=thresholds.balanced,
        r_lower=thresholds.lower,
        r_upper=thresholds.upper,
        in_region=in_multiplicity_region(pt) if pt.N >= 3 else False,
        optimal_r=best.r_star if best is not None else None,
        lower_exponent=2.0 * alpha if alpha is not None else None,
        upper_exponents=defect_rates(pt),
    )
