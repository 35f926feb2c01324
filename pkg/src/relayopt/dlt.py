"""Direct-link transmission (DLT).

With constant circuit draw alpha_d, the throughput-optimal policy under
an average power budget P_A is bursty: transmit at the energy-efficiency
maximizing power p_ee1 with just enough duty cycle to spend the budget,
and fall back to continuous transmission once the budget exceeds
p_ee1 + alpha_d.  The resulting budget-to-throughput curve c_d is the
straight line through the origin up to that breakpoint and the pure AWGN
log curve beyond it.
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
class DltCurve:
    """Precomputed direct-link curve for one (h_sd, alpha_d) pair."""

    h_sd: float
    alpha_d: float
    p_ee1: float     # energy-efficiency optimal burst power
    ee_max: float    # throughput per Watt on the bursty branch
    breakpoint: float  # p_ee1 + alpha_d: budget where duty cycle hits 1

    def value(self, p_a: float) -> float:
        if p_a < 0.0:
            raise ValidationError(f"budget must be >= 0, got {p_a}")
        if p_a <= self.breakpoint:
            return self.ee_max * p_a
        return capacity((p_a - self.alpha_d) * self.h_sd)

    def values(self, p_a: np.ndarray) -> np.ndarray:
        p = np.asarray(p_a, dtype=float)
        if np.any(p < 0.0):
            raise ValidationError("budgets must be >= 0")
        beyond = p > self.breakpoint
        out = self.ee_max * p
        if np.any(beyond):
            out = np.where(
                beyond,
                np.log1p(np.maximum(p - self.alpha_d, 0.0) * self.h_sd) / LN2,
                out,
            )
        return out

    def slope(self, p_a: float) -> float:
        if p_a < 0.0:
            raise ValidationError(f"budget must be >= 0, got {p_a}")
        if p_a <= self.breakpoint:
            return self.ee_max
        return self.h_sd / (LN2 * (1.0 + (p_a - self.alpha_d) * self.h_sd))

    def breakpoints(self) -> tuple[float, ...]:
        return (self.breakpoint,)


@dataclass(frozen=True)
class DltSolution:
    p_ee1: float
    ee_max: float
    alloc: ModeAllocation


def _check_dlt_inputs(gains: ChannelGains, circuit: CircuitModel) -> None:
    if gains.h_sd <= 0.0:
        raise DegenerateChannelError(
            f"direct link needs h_sd > 0, got {gains.h_sd}"
        )
    if circuit.alpha_d <= 0.0:
        raise DegenerateChannelError(
            "alpha_d must be > 0: with zero circuit draw the efficiency "
            "sup is at vanishing power and no bursty optimum exists "
            "(model the classical case with an explicit tiny alpha_d)"
        )


@lru_cache(maxsize=4096)
def _build_curve(h_sd: float, alpha_d: float, cfg: SearchConfig) -> DltCurve:
    def efficiency(p: float) -> float:
        if p <= 0.0:
            return 0.0
        return capacity(p * h_sd) / (p + alpha_d)

    lo, hi = bracket_above(efficiency, cfg)
    p_star, ee = maximize_unimodal(efficiency, lo, hi, cfg)
    return DltCurve(
        h_sd=h_sd,
        alpha_d=alpha_d,
        p_ee1=p_star,
        ee_max=ee,
        breakpoint=p_star + alpha_d,
    )


def dlt_curve(
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> DltCurve:
    _check_dlt_inputs(gains, circuit)
    return _build_curve(float(gains.h_sd), float(circuit.alpha_d), cfg)


def p_ee1(
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> float:
    """Burst power maximizing C(p h_sd) / (p + alpha_d)."""
    return dlt_curve(gains, circuit, cfg).p_ee1


def solve_dlt(
    p_a: float,
    gains: ChannelGains,
    circuit: CircuitModel,
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> DltSolution:
    """Optimal direct-link allocation under average power budget p_a."""
    if p_a < 0.0:
        raise ValidationError(f"budget must be >= 0, got {p_a}")
    curve = dlt_curve(gains, circuit, cfg)
    if p_a == 0.0:
        return DltSolution(curve.p_ee1, curve.ee_max, ModeAllocation.silent())
    p_s = max(curve.p_ee1, p_a - circuit.alpha_d)
    prob = p_a / (p_s + circuit.alpha_d)
    alloc = ModeAllocation(
        mode=Mode.DLT,
        p_s=p_s,
        p_r=0.0,
        prob=min(prob, 1.0),
        throughput=prob * capacity(p_s * gains.h_sd),
        avg_power=prob * (p_s + circuit.alpha_d),
    )
    return DltSolution(curve.p_ee1, curve.ee_max, alloc)


def c_d(p_a: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    """Average direct-link throughput at budget p_a."""
    return dlt_curve(gains, circuit).value(p_a)


def c_d_prime(p_a: float, gains: ChannelGains, circuit: CircuitModel) -> float:
    """Slope of c_d; at the breakpoint the two branches agree."""
    return dlt_curve(gains, circuit).slope(p_a)
