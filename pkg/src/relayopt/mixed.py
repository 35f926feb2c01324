"""Optimal mixed transmission (MT): time-sharing the direct-link and
relay-assisted modes under one average power budget.

Throughput of the best mix is the upper concave envelope of the two
budget-to-throughput curves c_d and c_r.  Where the envelope follows a
curve, the corresponding pure mode is optimal; where it runs along a
common tangent segment, the budget is split across the two tangency
abscissae.  The tangency pairs (a on c_d, b on c_r) satisfy

    c_d'(a) = c_r'(b)  and  c_d'(a) (a - b) = c_d(a) - c_r(b),

and the number of solutions (0, 1, or 2) fixes the envelope shape.  A
grid-based envelope oracle cross-checks every classification; structural
disagreement is surfaced as InconsistencyError rather than patched over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dlt import DltCurve, dlt_curve, solve_dlt
from .model import (
    ChannelGains,
    CircuitModel,
    InconsistencyError,
    MixedCase,
    MixedSolution,
    ModeAllocation,
    ValidationError,
)
from .numerics import DEFAULT_SEARCH, SearchConfig, solve_stationary_2d
from .rat_dl import RatDlCurve, rat_dl_curve, solve_rat_dl

_ENVELOPE_TOL = 1e-3


@dataclass(frozen=True)
class TangentStructure:
    """Envelope classification for one (gains, circuit) pair.

    tangents is () for CASE1, (t1, t2) for CASE2 and (t3, t4, t5, t6)
    for CASE3, always sorted ascending.  Odd positions touch c_d, even
    positions touch c_r:  CASE2 bridges c_r at t1 to c_d at t2; CASE3
    bridges c_d at t3 to c_r at t4 and c_r at t5 back to c_d at t6.
    """

    case: MixedCase
    tangents: tuple[float, ...]
    window: float  # envelope validated on [0, window]


def default_p_max(gains: ChannelGains, circuit: CircuitModel) -> float:
    """Starting width of the tangency search window."""
    d = dlt_curve(gains, circuit)
    r = rat_dl_curve(gains, circuit)
    return 4.0 * (d.breakpoint + r.p_ee2 + r.p_ee3 + 2.0 * circuit.alpha_r)


def upper_concave_hull(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vertices of the upper concave hull of the points (x_i, y_i).

    x must be strictly increasing.  Returns the hull vertex coordinates;
    linear interpolation between them dominates every input point.
    """
    hx: list[float] = []
    hy: list[float] = []
    for xi, yi in zip(x, y):
        while len(hx) >= 2:
            cross = (hx[-1] - hx[-2]) * (yi - hy[-2]) - (hy[-1] - hy[-2]) * (xi - hx[-2])
            if cross >= 0.0:  # middle point is not above the chord: drop it
                hx.pop()
                hy.pop()
            else:
                break
        hx.append(float(xi))
        hy.append(float(yi))
    return np.asarray(hx), np.asarray(hy)


def _validation_grid(window: float, n: int = 1000) -> np.ndarray:
    # log spacing keeps the resolution proportional to the budget, which
    # matches how fast the curves bend; always include the origin
    grid = np.geomspace(window * 1e-5, window, n)
    return np.concatenate(([0.0], grid))


def _structure_values(
    p: np.ndarray, case: MixedCase, tangents: tuple[float, ...],
    d: DltCurve, r: RatDlCurve,
) -> np.ndarray:
    dv = d.values(p)
    if case is MixedCase.CASE1:
        return dv
    rv = r.values(p)
    out = np.empty_like(dv)
    if case is MixedCase.CASE2:
        t1, t2 = tangents
        slope = (d.value(t2) - r.value(t1)) / (t2 - t1)
        base = r.value(t1)
        low = p <= t1
        high = p >= t2
        mid = ~(low | high)
        out[low] = rv[low]
        out[high] = dv[high]
        out[mid] = base + slope * (p[mid] - t1)
        return out
    t3, t4, t5, t6 = tangents
    s1 = (r.value(t4) - d.value(t3)) / (t4 - t3)
    s2 = (d.value(t6) - r.value(t5)) / (t6 - t5)
    out[:] = dv
    seg1 = (p > t3) & (p < t4)
    seg2 = (p > t5) & (p < t6)
    relay = (p >= t4) & (p <= t5)
    out[seg1] = d.value(t3) + s1 * (p[seg1] - t3)
    out[relay] = rv[relay]
    out[seg2] = r.value(t5) + s2 * (p[seg2] - t5)
    return out


def _envelope_gap(
    case: MixedCase, tangents: tuple[float, ...],
    d: DltCurve, r: RatDlCurve, window: float,
) -> float:
    grid = _validation_grid(window)
    raw = np.maximum(d.values(grid), r.values(grid))
    hx, hy = upper_concave_hull(grid, raw)
    hull = np.interp(grid, hx, hy)
    analytic = _structure_values(grid, case, tangents, d, r)
    return float(np.max(np.abs(analytic - hull)))


def _seed_lattice(
    a_lo: float, b_lo: float, window: float, n: int
) -> list[tuple[float, float]]:
    if a_lo >= window or b_lo >= window:
        return []
    a_axis = np.geomspace(a_lo, window, n)
    b_axis = np.geomspace(b_lo, window, n)
    return [(float(a), float(b)) for a in a_axis for b in b_axis]


def _classify(
    gains: ChannelGains,
    circuit: CircuitModel,
    p_max: float | None,
    cfg: SearchConfig,
) -> TangentStructure:
    gains.require_admissible()
    d = dlt_curve(gains, circuit, cfg)
    r = rat_dl_curve(gains, circuit, cfg)

    def residual(x: tuple[float, float]) -> tuple[float, float]:
        a, b = x
        if a <= 0.0 or b <= 0.0:
            raise ValueError("tangency abscissae must be positive")
        sd = d.slope(a)
        return (sd - r.slope(b), sd * (a - b) - (d.value(a) - r.value(b)))

    window = p_max if p_max is not None else default_p_max(gains, circuit)
    window = max(window, 2.0 * d.breakpoint, 2.0 * r.bp_onoff)
    # widen until the direct-link curve has taken over at the far end;
    # every common tangent lies left of such a point's neighborhood
    for _ in range(60):
        if d.value(window) >= r.value(window):
            break
        window *= 2.0
    else:
        raise InconsistencyError(
            "direct-link curve never overtook the relay curve while widening "
            "the search window; parameters look pathological"
        )
    window *= 2.0  # margin: tangency abscissae can sit beyond the crossing

    a_lo = d.breakpoint * 1.0000001
    b_lo = r.bp_onoff * 1.0000001
    sep_tol = 1e-4

    last_gap = math.inf
    n_seed = 8
    for _attempt in range(5):
        seeds = _seed_lattice(a_lo, b_lo, window, n_seed)
        roots = solve_stationary_2d(residual, seeds, cfg)
        roots = [
            (a, b)
            for a, b in roots
            if a > a_lo and b > b_lo and abs(a - b) > sep_tol and a < 1e12 and b < 1e12
        ]

        structure: TangentStructure | None = None
        if len(roots) == 0:
            structure = TangentStructure(MixedCase.CASE1, (), window)
        elif len(roots) == 1:
            a, b = roots[0]
            if b < a:
                structure = TangentStructure(MixedCase.CASE2, (b, a), window)
        elif len(roots) == 2:
            (a1, b1), (a2, b2) = roots
            if a1 < b1 < b2 < a2:
                structure = TangentStructure(MixedCase.CASE3, (a1, b1, b2, a2), window)
        else:
            raise InconsistencyError(
                f"tangency system produced {len(roots)} distinct solutions; "
                f"expected at most 2 (roots: {roots})"
            )

        if structure is not None:
            hi = max((structure.tangents or (0.0,))) * 1.3
            win_val = max(window, hi)
            gap = _envelope_gap(structure.case, structure.tangents, d, r, win_val)
            if gap <= _ENVELOPE_TOL:
                return TangentStructure(structure.case, structure.tangents, win_val)
            last_gap = min(last_gap, gap)

        window *= 2.0
        n_seed += 4

    raise InconsistencyError(
        "tangency classification never matched the envelope oracle "
        f"(best agreement {last_gap:.3e}, tolerance {_ENVELOPE_TOL:.0e})"
    )


@lru_cache(maxsize=1024)
def _classify_cached(
    h_sd: float, h_sr: float, h_rd: float,
    alpha_d: float, alpha_r: float,
    p_max: float, cfg: SearchConfig,
) -> TangentStructure:
    gains = ChannelGains(h_sd=h_sd, h_sr=h_sr, h_rd=h_rd)
    circuit = CircuitModel.from_aggregates(alpha_d=alpha_d, alpha_r=alpha_r)
    return _classify(gains, circuit, p_max if p_max > 0.0 else None, cfg)


def classify_and_tangents(
    gains: ChannelGains,
    circuit: CircuitModel,
    p_max: float | None = None,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> TangentStructure:
    """Classify the envelope shape and locate all tangency abscissae."""
    if p_max is not None and p_max <= 0.0:
        raise ValidationError(f"p_max must be > 0, got {p_max}")
    return _classify_cached(
        float(gains.h_sd), float(gains.h_sr), float(gains.h_rd),
        float(circuit.alpha_d), float(circuit.alpha_r),
        float(p_max) if p_max is not None else 0.0, cfg,
    )


def c_m(p_0: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    """Average throughput of optimal mixed transmission at budget p_0."""
    if p_0 < 0.0:
        raise ValidationError(f"budget must be >= 0, got {p_0}")
    if not gains.relay_admissible:
        return dlt_curve(gains, circuit).value(p_0)
    st = classify_and_tangents(gains, circuit)
    d = dlt_curve(gains, circuit)
    r = rat_dl_curve(gains, circuit)
    return float(
        _structure_values(np.asarray([p_0]), st.case, st.tangents, d, r)[0]
    )


def grid_envelope(
    gains: ChannelGains,
    circuit: CircuitModel,
    window: float,
    n: int = 1000,
) -> tuple[np.ndarray, np.ndarray]:
    """Numerical upper concave envelope of max(c_d, c_r) on [0, window]."""
    d = dlt_curve(gains, circuit)
    r = rat_dl_curve(gains, circuit)
    grid = _validation_grid(window, n)
    raw = np.maximum(d.values(grid), r.values(grid))
    hx, hy = upper_concave_hull(grid, raw)
    return grid, np.interp(grid, hx, hy)


def solve_mixed(
    p_0: float,
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> MixedSolution:
    """Optimal (theta, P_A, P_B) split of budget p_0 between DLT and RAT-DL.

    theta is the fraction of slots run as DLT.  A relay below the
    admissibility threshold degrades gracefully to pure DLT.
    """
    if p_0 < 0.0:
        raise ValidationError(f"budget must be >= 0, got {p_0}")

    def pure_dlt(case: MixedCase) -> MixedSolution:
        sol = solve_dlt(p_0, gains, circuit, cfg)
        return MixedSolution(
            p_a_star=p_0, p_b_star=0.0, theta_star=1.0,
            throughput=sol.alloc.throughput, case_label=case,
            dlt_alloc=sol.alloc, rat_alloc=ModeAllocation.silent(),
        )

    if not gains.relay_admissible:
        return pure_dlt(MixedCase.CASE1)

    st = classify_and_tangents(gains, circuit, cfg=cfg)
    d = dlt_curve(gains, circuit, cfg)
    r = rat_dl_curve(gains, circuit, cfg)

    def pure_rat() -> MixedSolution:
        sol = solve_rat_dl(p_0, gains, circuit, cfg)
        return MixedSolution(
            p_a_star=0.0, p_b_star=p_0, theta_star=0.0,
            throughput=sol.alloc.throughput, case_label=st.case,
            dlt_alloc=ModeAllocation.silent(), rat_alloc=sol.alloc,
        )

    def mix(p_a: float, p_b: float) -> MixedSolution:
        theta = (p_0 - p_b) / (p_a - p_b)
        throughput = theta * d.value(p_a) + (1.0 - theta) * r.value(p_b)
        return MixedSolution(
            p_a_star=p_a, p_b_star=p_b, theta_star=theta,
            throughput=throughput, case_label=st.case,
            dlt_alloc=solve_dlt(p_a, gains, circuit, cfg).alloc,
            rat_alloc=solve_rat_dl(p_b, gains, circuit, cfg).alloc,
        )

    if st.case is MixedCase.CASE1 or p_0 == 0.0:
        return pure_dlt(st.case)
    if st.case is MixedCase.CASE2:
        t1, t2 = st.tangents
        if p_0 >= t2:
            return pure_dlt(st.case)
        if p_0 <= t1:
            return pure_rat()
        return mix(t2, t1)
    t3, t4, t5, t6 = st.tangents
    if p_0 <= t3 or p_0 >= t6:
        return pure_dlt(st.case)
    if t4 <= p_0 <= t5:
        return pure_rat()
    if p_0 < t4:
        return mix(t3, t4)
    return mix(t6, t5)
