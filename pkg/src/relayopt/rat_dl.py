"""Relay-assisted transmission with the direct link active (RAT-DL).

The relay must decode the source's half-slot message, which caps the
useful relay power at the decode-equality curve

    p_r_limit(p_s) = p_s (h_sr - h_sd) / (h_rd (1 + p_s h_sd)).

Under an average power budget p_b with per-slot circuit draw alpha_r the
optimum is one of four operating points:

  CASE1  bursty transmission at the unconstrained energy-efficiency
         optimum of the combined rate (decode constraint slack),
  CASE2  bursty transmission at the best point on the decode-equality
         curve (decode constraint active),
  CASE3  continuous transmission with the water-filling split of the
         full budget (decode constraint slack),
  CASE4  continuous transmission on the decode-equality curve.

Which one applies is decided by four closed-form conditions on the
candidate points; as defense in depth the solver also compares all
feasible candidates and keeps the best.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .model import (
    LN2,
    ChannelGains,
    CircuitModel,
    DegenerateChannelError,
    Mode,
    ModeAllocation,
    ValidationError,
    capacity,
    df_rate,
)
from .numerics import (
    DEFAULT_SEARCH,
    BracketError,
    SearchConfig,
    bisect_root,
    bracket_above,
    maximize_unimodal,
)


class RatDlCase(Enum):
    CASE1_EE_INTERIOR = "CASE1_EE_INTERIOR"
    CASE2_DECODE_BINDING = "CASE2_DECODE_BINDING"
    CASE3_POWER_BINDING = "CASE3_POWER_BINDING"
    CASE4_BOTH_BINDING = "CASE4_BOTH_BINDING"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RatDlSolution:
    case: RatDlCase
    p_s: float
    p_r: float
    prob: float
    throughput: float
    p_ee2: float
    p_ee3: float
    p_ee4: float
    u: float           # linear coefficient of the full-power decode quadratic
    v: float | None    # its positive root; None when p_b < alpha_r
    alloc: ModeAllocation


def _scan_then_golden(f, cfg: SearchConfig) -> tuple[float, float]:
    """Locate the maximum of a rise-then-fall objective on (0, inf).

    bracket_above gives the decay scale; a deterministic log-spaced scan
    then pins the best region before golden-section polish, guarding
    against mild non-unimodality of ratio objectives.
    """
    lo, hi = bracket_above(f, cfg)
    grid = np.geomspace(hi * 1e-6, hi, 64)
    vals = [f(float(x)) for x in grid]
    k = int(np.argmax(vals))
    left = 0.0 if k == 0 else float(grid[k - 1])
    right = float(grid[k + 1]) if k + 1 < len(grid) else hi
    return maximize_unimodal(f, left, right, cfg)


@dataclass(frozen=True)
class RatDlCurve:
    """Precomputed RAT-DL structure for one (gains, alpha_r) pair."""

    h_sd: float
    h_sr: float
    h_rd: float
    alpha_r: float
    p_ee2: float
    p_ee3: float
    ee_interior: float   # throughput per Watt at (p_ee2, p_ee3)
    p_ee4: float
    ee_decode: float     # throughput per Watt at the decode-curve optimum
    s2: bool             # decode constraint slack at (p_ee2, p_ee3)
    bp_onoff: float      # budget where the duty cycle reaches 1
    decode_switches: tuple[float, ...]  # budgets where the full-power split
    #   changes between the water-filling and the decode-equality branch

    # -- geometry helpers ------------------------------------------------

    def decode_limit(self, p_s: float) -> float:
        return p_s * (self.h_sr - self.h_sd) / (self.h_rd * (1.0 + p_s * self.h_sd))

    def _quad_lin_coeff(self, p_b: float) -> float:
        # linear coefficient of h_sd h_rd v^2 + u v - 2 (p_b - alpha_r) h_rd = 0,
        # the full-duty power balance along the decode-equality curve
        return (
            self.h_sr
            + self.h_rd
            - self.h_sd
            + 2.0 * self.alpha_r * self.h_sd * self.h_rd
            - 2.0 * self.h_sd * self.h_rd * p_b
        )

    def full_power_root(self, p_b: float) -> float:
        if p_b < self.alpha_r:
            raise ValidationError(
                f"continuous transmission needs p_b >= alpha_r "
                f"({self.alpha_r}), got {p_b}"
            )
        b = self._quad_lin_coeff(p_b)
        disc = b * b + 8.0 * (p_b - self.alpha_r) * self.h_sd * self.h_rd * self.h_rd
        return (-b + math.sqrt(disc)) / (2.0 * self.h_sd * self.h_rd)

    def waterfill_pair(self, p_b: float) -> tuple[float, float]:
        # split 2 (p_b - alpha_r) across the two destination-side links
        # with equalized marginal rates; when the equal-marginal point
        # falls outside the quadrant the whole spend goes to one link
        rad = p_b - self.alpha_r
        half_gap = (self.h_sd - self.h_rd) / (2.0 * self.h_sd * self.h_rd)
        f = half_gap + rad
        g = rad - half_gap
        spend = max(0.0, 2.0 * rad)
        if g < 0.0:
            return spend, 0.0
        if f < 0.0:
            return 0.0, spend
        return f, g

    # -- case logic ------------------------------------------------------

    def _s1(self, p_b: float) -> bool:
        return self.p_ee2 + self.p_ee3 > 2.0 * (p_b - self.alpha_r)

    def _s3(self, p_b: float) -> bool:
        q4 = self.decode_limit(self.p_ee4)
        return self.p_ee4 + q4 > 2.0 * (p_b - self.alpha_r)

    def _s4(self, p_b: float) -> bool:
        if p_b < self.alpha_r:
            return False
        f, g = self.waterfill_pair(p_b)
        return g < self.decode_limit(f)

    def case_at(self, p_b: float) -> RatDlCase:
        # below the duty-cycle knee the bursty point applies; beyond it the
        # full spend goes to whichever of the water-filling and the
        # decode-equality points is admissible.  Checking decode slack on
        # the water-filling point in the decode-binding-burst geometry too
        # matters with a strong source-relay link: the constraint can fall
        # slack again at large budgets even though it binds at the
        # efficiency pair.
        if self.s2:
            if self._s1(p_b):
                return RatDlCase.CASE1_EE_INTERIOR
        elif self._s3(p_b):
            return RatDlCase.CASE2_DECODE_BINDING
        if self._s4(p_b):
            return RatDlCase.CASE3_POWER_BINDING
        return RatDlCase.CASE4_BOTH_BINDING

    # -- curve evaluation ------------------------------------------------

    def value(self, p_b: float) -> float:
        if p_b < 0.0:
            raise ValidationError(f"budget must be >= 0, got {p_b}")
        case = self.case_at(p_b)
        if case is RatDlCase.CASE1_EE_INTERIOR:
            return self.ee_interior * p_b
        if case is RatDlCase.CASE2_DECODE_BINDING:
            return self.ee_decode * p_b
        if case is RatDlCase.CASE3_POWER_BINDING:
            f, g = self.waterfill_pair(p_b)
            return 0.5 * (capacity(f * self.h_sd) + capacity(g * self.h_rd))
        v = self.full_power_root(p_b)
        return 0.5 * capacity(v * self.h_sr)

    def values(self, p_b: np.ndarray) -> np.ndarray:
        p = np.asarray(p_b, dtype=float)
        if np.any(p < 0.0):
            raise ValidationError("budgets must be >= 0")
        out = np.empty_like(p)

        spend = 2.0 * (p - self.alpha_r)
        if self.s2:
            onoff = self.p_ee2 + self.p_ee3 > spend
            out[onoff] = self.ee_interior * p[onoff]
        else:
            q4 = self.decode_limit(self.p_ee4)
            onoff = self.p_ee4 + q4 > spend
            out[onoff] = self.ee_decode * p[onoff]

        rest = ~onoff
        if np.any(rest):
            pr = p[rest]
            rad = pr - self.alpha_r
            half_gap = (self.h_sd - self.h_rd) / (2.0 * self.h_sd * self.h_rd)
            f_raw = half_gap + rad
            g_raw = rad - half_gap
            spend = np.maximum(0.0, 2.0 * rad)
            f = np.where(g_raw < 0.0, spend, np.where(f_raw < 0.0, 0.0, f_raw))
            g = np.where(g_raw < 0.0, 0.0, np.where(f_raw < 0.0, spend, g_raw))
            wf_ok = g < f * (self.h_sr - self.h_sd) / (
                self.h_rd * (1.0 + f * self.h_sd)
            )
            res = np.empty_like(pr)
            if np.any(wf_ok):
                res[wf_ok] = 0.5 * (
                    np.log1p(f[wf_ok] * self.h_sd) + np.log1p(g[wf_ok] * self.h_rd)
                ) / LN2
            full = ~wf_ok
            if np.any(full):
                b = (
                    self.h_sr
                    + self.h_rd
                    - self.h_sd
                    + 2.0 * self.alpha_r * self.h_sd * self.h_rd
                    - 2.0 * self.h_sd * self.h_rd * pr[full]
                )
                disc = b * b + 8.0 * (pr[full] - self.alpha_r) * self.h_sd * self.h_rd**2
                v = (-b + np.sqrt(np.maximum(disc, 0.0))) / (2.0 * self.h_sd * self.h_rd)
                res[full] = 0.5 * np.log1p(np.maximum(v, 0.0) * self.h_sr) / LN2
            out[rest] = res
        return out

    def slope(self, p_b: float) -> float:
        case = self.case_at(p_b)
        if case is RatDlCase.CASE1_EE_INTERIOR:
            return self.ee_interior
        if case is RatDlCase.CASE2_DECODE_BINDING:
            return self.ee_decode
        # curved branches: central difference; the curve is differentiable
        # across its breakpoints so straddling them is harmless
        h = 1e-6 * max(1.0, p_b)
        lo = max(p_b - h, 0.0)
        return (self.value(p_b + h) - self.value(lo)) / (p_b + h - lo)

    def breakpoints(self) -> tuple[float, ...]:
        bps = [self.bp_onoff]
        # relay power stays clamped at zero for a stretch after the duty
        # cycle saturates whenever the EE pair sits on the source axis;
        # water-filling resumes where the relay link's marginal rate
        # catches up
        half_gap = (self.h_sd - self.h_rd) / (2.0 * self.h_sd * self.h_rd)
        release = self.alpha_r + half_gap
        if release > self.bp_onoff:
            bps.append(release)
        bps.extend(self.decode_switches)
        return tuple(sorted(bps))

    # -- full solve ------------------------------------------------------

    def _objective(self, p_s: float, p_r: float, p_b: float, gains: ChannelGains) -> float:
        tot = p_s + p_r + 2.0 * self.alpha_r
        prob = min(1.0, 2.0 * p_b / tot) if tot > 0.0 else 0.0
        return prob * df_rate(p_s, p_r, gains)

    def solve(self, p_b: float, gains: ChannelGains) -> RatDlSolution:
        if p_b < 0.0:
            raise ValidationError(f"budget must be >= 0, got {p_b}")
        q4 = self.decode_limit(self.p_ee4)
        candidates: dict[RatDlCase, tuple[float, float]] = {
            RatDlCase.CASE1_EE_INTERIOR: (self.p_ee2, self.p_ee3),
            RatDlCase.CASE2_DECODE_BINDING: (self.p_ee4, q4),
        }
        v: float | None = None
        if p_b >= self.alpha_r:
            candidates[RatDlCase.CASE3_POWER_BINDING] = self.waterfill_pair(p_b)
            v = self.full_power_root(p_b)
            candidates[RatDlCase.CASE4_BOTH_BINDING] = (
                v,
                max(0.0, 2.0 * (p_b - self.alpha_r) - v),
            )

        tol = 1e-9 * max(1.0, p_b, self.p_ee2 + self.p_ee3)

        def feasible(pt: tuple[float, float]) -> bool:
            p_s, p_r = pt
            if p_s < 0.0 or p_r < 0.0:
                return False
            if p_s + p_r < 2.0 * (p_b - self.alpha_r) - tol:
                return False
            return p_r <= self.decode_limit(p_s) + tol

        case = self.case_at(p_b)
        scored = {
            c: self._objective(pt[0], pt[1], p_b, gains)
            for c, pt in candidates.items()
            if feasible(pt)
        }
        if not scored:
            raise ValidationError(
                f"no feasible relay operating point at p_b={p_b}"
            )
        best_case = max(scored, key=lambda c: scored[c])
        # the condition logic and the explicit comparison agree in the
        # interior of each region; on boundaries and in degenerate corner
        # configurations keep whichever value wins
        if case not in scored or scored[case] < scored[best_case] - 1e-9 * max(1.0, scored[best_case]):
            case = best_case

        p_s, p_r = candidates[case]
        tot = p_s + p_r + 2.0 * self.alpha_r
        prob = min(1.0, 2.0 * p_b / tot) if tot > 0.0 else 0.0
        throughput = prob * df_rate(p_s, p_r, gains)
        alloc = ModeAllocation(
            mode=Mode.RAT_DL,
            p_s=p_s,
            p_r=p_r,
            prob=prob,
            throughput=throughput,
            avg_power=prob * (0.5 * (p_s + p_r) + self.alpha_r),
        )
        return RatDlSolution(
            case=case,
            p_s=p_s,
            p_r=p_r,
            prob=prob,
            throughput=throughput,
            p_ee2=self.p_ee2,
            p_ee3=self.p_ee3,
            p_ee4=self.p_ee4,
            u=self._quad_lin_coeff(p_b),
            v=v,
            alloc=alloc,
        )


# ---------------------------------------------------------------------------


def _check_rat_dl_inputs(gains: ChannelGains, circuit: CircuitModel) -> None:
    gains.require_admissible()
    if gains.h_sd <= 0.0:
        raise DegenerateChannelError(
            "relay mode with direct link needs h_sd > 0; "
            "use the no-direct-link mode when the direct path is absent"
        )
    if gains.h_rd <= 0.0 or gains.h_sr <= 0.0:
        raise DegenerateChannelError(
            f"relay links need positive gains, got h_sr={gains.h_sr}, h_rd={gains.h_rd}"
        )
    if circuit.alpha_r <= 0.0:
        raise DegenerateChannelError(
            "alpha_r must be > 0 for the bursty optimum to exist"
        )


def _ee_pair(
    h_sd: float, h_rd: float, alpha_r: float, cfg: SearchConfig
) -> tuple[float, float, float]:
    """Joint maximizer of [C(p_s h_sd) + C(p_r h_rd)] / (p_s + p_r + 2 alpha_r).

    Interior stationary points satisfy equal marginal rates, which pins
    p_r = p_s + (1/h_sd - 1/h_rd); searching along that ridge plus the two
    axes covers interior and clamped optima.
    """
    two_a = 2.0 * alpha_r

    def joint(p_s: float, p_r: float) -> float:
        return (capacity(p_s * h_sd) + capacity(p_r * h_rd)) / (p_s + p_r + two_a)

    ridge_off = 1.0 / h_sd - 1.0 / h_rd
    base = max(0.0, -ridge_off)

    def along_ridge(t: float) -> float:
        return joint(base + t, base + t + ridge_off)

    best: tuple[float, float, float] | None = None
    try:
        t_star, val = _scan_then_golden(along_ridge, cfg)
    except BracketError:
        t_star, val = 0.0, along_ridge(0.0)
    best = (base + t_star, base + t_star + ridge_off, val)

    for on_source in (True, False):
        h = h_sd if on_source else h_rd

        def axis(p: float, h: float = h) -> float:
            return capacity(p * h) / (p + two_a)

        try:
            p_star, val = _scan_then_golden(axis, cfg)
        except BracketError:  # pragma: no cover - axis EE always rises from 0
            continue
        pt = (p_star, 0.0) if on_source else (0.0, p_star)
        if val > best[2]:
            best = (pt[0], pt[1], val)

    return best


@lru_cache(maxsize=2048)
def _build_curve(
    h_sd: float, h_sr: float, h_rd: float, alpha_r: float, cfg: SearchConfig
) -> RatDlCurve:
    p2, p3, ee_int = _ee_pair(h_sd, h_rd, alpha_r, cfg)

    gap = h_sr - h_sd
    a_coeff = h_sr + h_rd - h_sd + 2.0 * alpha_r * h_sd * h_rd

    def decode_limit(p_s: float) -> float:
        return p_s * gap / (h_rd * (1.0 + p_s * h_sd))

    def on_curve_eff(p: float) -> float:
        if p <= 0.0:
            return 0.0
        den = h_sd * h_rd * p * p + a_coeff * p + 2.0 * alpha_r * h_rd
        return (1.0 + p * h_sd) * h_rd * capacity(p * h_sr) / den

    p4, _ = _scan_then_golden(on_curve_eff, cfg)
    q4 = decode_limit(p4)
    ee_dec = (capacity(p4 * h_sd) + capacity(q4 * h_rd)) / (p4 + q4 + 2.0 * alpha_r)

    s2 = p3 < decode_limit(p2)
    pair_on = (p2, p3) if s2 else (p4, q4)
    bp_onoff = 0.5 * (pair_on[0] + pair_on[1]) + alpha_r

    half_gap = (h_sd - h_rd) / (2.0 * h_sd * h_rd)

    def wf_margin(p_b: float) -> float:
        rad = p_b - alpha_r
        f = half_gap + rad
        g = rad - half_gap
        if g < 0.0:
            f, g = max(0.0, 2.0 * rad), 0.0
        elif f < 0.0:
            f, g = 0.0, 2.0 * rad
        return decode_limit(f) - g

    # beyond the duty-cycle knee the decode margin of the water-filling
    # split is concave once both powers are interior, so it crosses zero
    # at most twice; a geometric sweep brackets every crossing (the
    # margin falls like -p_b eventually, so the sweep always ends below
    # zero)
    xs = [bp_onoff + 1e-9 * max(1.0, bp_onoff)]
    while xs[-1] < 1e14:
        xs.append(xs[-1] * 1.25 + 0.05)
    ms = [wf_margin(x) for x in xs]
    switches = [
        bisect_root(wf_margin, a, b, cfg)
        for a, b, fa, fb in zip(xs, xs[1:], ms, ms[1:])
        if (fa > 0.0) != (fb > 0.0)
    ]
    decode_switches = tuple(switches)

    return RatDlCurve(
        h_sd=h_sd,
        h_sr=h_sr,
        h_rd=h_rd,
        alpha_r=alpha_r,
        p_ee2=p2,
        p_ee3=p3,
        ee_interior=ee_int,
        p_ee4=p4,
        ee_decode=ee_dec,
        s2=s2,
        bp_onoff=bp_onoff,
        decode_switches=decode_switches,
    )


def rat_dl_curve(
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> RatDlCurve:
    _check_rat_dl_inputs(gains, circuit)
    return _build_curve(
        float(gains.h_sd),
        float(gains.h_sr),
        float(gains.h_rd),
        float(circuit.alpha_r),
        cfg,
    )


def p_ee2_p_ee3(
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> tuple[float, float]:
    """Energy-efficiency optimal burst pair ignoring the decode constraint."""
    curve = rat_dl_curve(gains, circuit, cfg)
    return curve.p_ee2, curve.p_ee3


def p_ee4(
    p_b: float,
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> float:
    """Energy-efficiency optimal source power on the decode-equality curve.

    The budget cancels out of the efficiency objective, so the result does
    not depend on p_b; the argument is kept for interface symmetry.
    """
    del p_b
    return rat_dl_curve(gains, circuit, cfg).p_ee4


def v_root(
    p_b: float,
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> float:
    """Source power of the continuous-transmission point on the
    decode-equality curve: positive root of the power-balance quadratic."""
    return rat_dl_curve(gains, circuit, cfg).full_power_root(p_b)


def solve_rat_dl(
    p_b: float,
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> RatDlSolution:
    return rat_dl_curve(gains, circuit, cfg).solve(p_b, gains)


def c_r(p_b: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    """Average RAT-DL throughput at budget p_b."""
    return rat_dl_curve(gains, circuit).value(p_b)


def c_r_prime(p_b: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    """Slope of c_r: exact on the linear branches, central difference on
    the curved ones."""
    return rat_dl_curve(gains, circuit).slope(p_b)
