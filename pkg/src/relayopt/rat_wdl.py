"""Relay-assisted transmission without a usable direct link (RAT-WDL).

The destination only listens to the relay's half slot, so the rate is
0.5 min{C(p_s h_sr), C(p_r h_rd)} and the optimum always balances the
two hops exactly: p_r = (h_sr / h_rd) p_s.  That collapses the problem
to one burst power with circuit draw alpha_e, giving the familiar
bursty-then-continuous budget curve.  No admissibility condition is
needed because the relay is the only path.
"""

from __future__ import annotations

from dataclasses import dataclass
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
)
from .numerics import DEFAULT_SEARCH, SearchConfig, bracket_above, maximize_unimodal


@dataclass(frozen=True)
class RatWdlCurve:
    h_sr: float
    h_rd: float
    alpha_e: float
    p_ee5: float      # energy-efficiency optimal source burst power
    ee_max: float     # throughput per Watt of budget on the bursty branch
    breakpoint: float

    def effective_gain(self) -> float:
        # one Watt of slot budget channels 2 h_sr h_rd / (h_sr + h_rd)
        # of SNR through the balanced two-hop link
        return 2.0 * self.h_sr * self.h_rd / (self.h_sr + self.h_rd)

    def value(self, p_c: float) -> float:
        if p_c < 0.0:
            raise ValidationError(f"budget must be >= 0, got {p_c}")
        if p_c <= self.breakpoint:
            return self.ee_max * p_c
        return 0.5 * capacity(self.effective_gain() * (p_c - self.alpha_e))

    def values(self, p_c: np.ndarray) -> np.ndarray:
        p = np.asarray(p_c, dtype=float)
        if np.any(p < 0.0):
            raise ValidationError("budgets must be >= 0")
        beyond = p > self.breakpoint
        out = self.ee_max * p
        if np.any(beyond):
            snr = self.effective_gain() * np.maximum(p - self.alpha_e, 0.0)
            out = np.where(beyond, 0.5 * np.log1p(snr) / LN2, out)
        return out

    def slope(self, p_c: float) -> float:
        if p_c < 0.0:
            raise ValidationError(f"budget must be >= 0, got {p_c}")
        if p_c <= self.breakpoint:
            return self.ee_max
        eff = self.effective_gain()
        return 0.5 * eff / (LN2 * (1.0 + eff * (p_c - self.alpha_e)))

    def breakpoints(self) -> tuple[float, ...]:
        return (self.breakpoint,)


@dataclass(frozen=True)
class RatWdlSolution:
    p_ee5: float
    ee_max: float
    alloc: ModeAllocation


def _check_wdl_inputs(gains: ChannelGains, circuit: CircuitModel) -> float:
    if gains.h_sr <= 0.0 or gains.h_rd <= 0.0:
        raise DegenerateChannelError(
            f"two-hop mode needs h_sr > 0 and h_rd > 0, "
            f"got h_sr={gains.h_sr}, h_rd={gains.h_rd}"
        )
    alpha_e = circuit.require_alpha_e()
    if alpha_e <= 0.0:
        raise DegenerateChannelError(
            "alpha_e must be > 0 for the bursty optimum to exist"
        )
    return alpha_e


@lru_cache(maxsize=2048)
def _build_curve(
    h_sr: float, h_rd: float, alpha_e: float, cfg: SearchConfig
) -> RatWdlCurve:
    def efficiency(p_s: float) -> float:
        if p_s <= 0.0:
            return 0.0
        # slot budget spent at source power p_s with the balanced split:
        # 0.5 (p_s + p_r) + alpha_e, p_r = (h_sr/h_rd) p_s
        return (
            h_rd
            * capacity(p_s * h_sr)
            / ((h_sr + h_rd) * p_s + 2.0 * h_rd * alpha_e)
        )

    lo, hi = bracket_above(efficiency, cfg)
    p_star, ee = maximize_unimodal(efficiency, lo, hi, cfg)
    return RatWdlCurve(
        h_sr=h_sr,
        h_rd=h_rd,
        alpha_e=alpha_e,
        p_ee5=p_star,
        ee_max=ee,
        breakpoint=0.5 * (h_sr + h_rd) / h_rd * p_star + alpha_e,
    )


def rat_wdl_curve(
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> RatWdlCurve:
    alpha_e = _check_wdl_inputs(gains, circuit)
    return _build_curve(float(gains.h_sr), float(gains.h_rd), float(alpha_e), cfg)


def p_ee5(
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> float:
    """Source burst power maximizing two-hop throughput per Watt."""
    return rat_wdl_curve(gains, circuit, cfg).p_ee5


def solve_rat_wdl(
    p_c: float,
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> RatWdlSolution:
    """Optimal no-direct-link relay allocation under budget p_c."""
    if p_c < 0.0:
        raise ValidationError(f"budget must be >= 0, got {p_c}")
    curve = rat_wdl_curve(gains, circuit, cfg)
    if p_c == 0.0:
        return RatWdlSolution(curve.p_ee5, curve.ee_max, ModeAllocation.silent())
    alpha_e = curve.alpha_e
    p_s = max(
        curve.p_ee5,
        2.0 * gains.h_rd * (p_c - alpha_e) / (gains.h_sr + gains.h_rd),
    )
    p_r = gains.h_sr / gains.h_rd * p_s
    prob = 2.0 * p_c / (p_s + p_r + 2.0 * alpha_e)
    throughput = prob * 0.5 * capacity(p_s * gains.h_sr)
    alloc = ModeAllocation(
        mode=Mode.RAT_WDL,
        p_s=p_s,
        p_r=p_r,
        prob=min(1.0, prob),
        throughput=throughput,
        avg_power=prob * (0.5 * (p_s + p_r) + alpha_e),
    )
    return RatWdlSolution(curve.p_ee5, curve.ee_max, alloc)


def c_e(p_c: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    """Average two-hop throughput at budget p_c."""
    return rat_wdl_curve(gains, circuit).value(p_c)


def c_e_prime(p_c: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    return rat_wdl_curve(gains, circuit).slope(p_c)
