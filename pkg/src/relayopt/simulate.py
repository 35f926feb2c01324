"""Slotted Monte-Carlo execution of a mode allocation.

Each slot independently transmits with the allocation's probability (or
deterministically with the matching duty cycle), accrues the mode's
instantaneous rate while on, and draws burst power plus the mode's
circuit aggregate.  Long-run empirical averages must reproduce the
analytic throughput and sit on the power budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    ChannelGains,
    CircuitModel,
    Mode,
    ModeAllocation,
    ValidationError,
    capacity,
    df_rate,
)
from .rat_dl import rat_dl_curve

RNG_ALGORITHM = "pcg64"  # numpy default_rng bit generator


@dataclass(frozen=True)
class SimReport:
    n_slots: int
    empirical_throughput: float
    empirical_avg_power: float
    analytic_throughput: float
    budget: float
    rng_seed: int
    rng_algorithm: str = RNG_ALGORITHM
    throughput_stderr: float = 0.0
    power_stderr: float = 0.0


def _slot_rate(alloc: ModeAllocation, gains: ChannelGains) -> float:
    if alloc.mode is Mode.SILENT:
        return 0.0
    if alloc.mode is Mode.DLT:
        return capacity(alloc.p_s * gains.h_sd)
    # both relay modes: the decode-and-forward slot rate; for hop-balanced
    # no-direct-link allocations this coincides with 0.5 C(p_s h_sr)
    return df_rate(alloc.p_s, alloc.p_r, gains)


def _slot_circuit(alloc: ModeAllocation, circuit: CircuitModel) -> float:
    if alloc.mode is Mode.SILENT:
        return 0.0
    if alloc.mode is Mode.DLT:
        return circuit.alpha_d
    if alloc.mode is Mode.RAT_WDL:
        return circuit.require_alpha_e()
    return circuit.alpha_r


def _slot_power(alloc: ModeAllocation, circuit: CircuitModel) -> float:
    if alloc.mode is Mode.SILENT:
        return 0.0
    burst = alloc.p_s if alloc.mode is Mode.DLT else 0.5 * (alloc.p_s + alloc.p_r)
    return burst + _slot_circuit(alloc, circuit)


def simulate(
    alloc: ModeAllocation,
    gains: ChannelGains,
    circuit: CircuitModel,
    n_slots: int,
    seed: int,
    duty_cycle: bool = False,
) -> SimReport:
    """Run n_slots and report empirical vs analytic averages.

    duty_cycle=True replaces the Bernoulli on/off draw with the
    deterministic pattern that matches the probability exactly over any
    long horizon (useful for noise-free regression checks).
    """
    if n_slots <= 0:
        raise ValidationError(f"n_slots must be positive, got {n_slots}")
    rate = _slot_rate(alloc, gains)
    power = _slot_power(alloc, circuit)

    if duty_cycle:
        idx = np.arange(1, n_slots + 1, dtype=float)
        on = np.floor(idx * alloc.prob) - np.floor((idx - 1.0) * alloc.prob) >= 1.0
    else:
        rng = np.random.default_rng(seed)
        on = rng.random(n_slots) < alloc.prob

    frac_on = float(np.count_nonzero(on)) / n_slots
    emp_tp = frac_on * rate
    emp_pw = frac_on * power
    # Bernoulli standard errors of the slot means
    var_frac = frac_on * (1.0 - frac_on) / n_slots
    se = float(np.sqrt(max(var_frac, 0.0)))

    return SimReport(
        n_slots=n_slots,
        empirical_throughput=emp_tp,
        empirical_avg_power=emp_pw,
        analytic_throughput=alloc.throughput,
        budget=alloc.avg_power,
        rng_seed=seed,
        throughput_stderr=se * rate,
        power_stderr=se * power,
    )


def baseline_cdlt(
    p_0: float, gains: ChannelGains, circuit: CircuitModel
) -> ModeAllocation:
    """Constant (always-on) direct-link transmission spending the budget."""
    if p_0 < 0.0:
        raise ValidationError(f"budget must be >= 0, got {p_0}")
    if p_0 <= circuit.alpha_d:
        return ModeAllocation.silent()
    p_s = p_0 - circuit.alpha_d
    return ModeAllocation(
        mode=Mode.DLT,
        p_s=p_s,
        p_r=0.0,
        prob=1.0,
        throughput=capacity(p_s * gains.h_sd),
        avg_power=p_0,
    )


def baseline_crat_dl(
    p_0: float, gains: ChannelGains, circuit: CircuitModel
) -> ModeAllocation:
    """Constant relay-assisted transmission on the decode-equality curve."""
    if p_0 < 0.0:
        raise ValidationError(f"budget must be >= 0, got {p_0}")
    gains.require_admissible()
    if p_0 <= circuit.alpha_r:
        return ModeAllocation.silent()
    curve = rat_dl_curve(gains, circuit)
    v = curve.full_power_root(p_0)
    p_r = max(0.0, 2.0 * (p_0 - circuit.alpha_r) - v)
    return ModeAllocation(
        mode=Mode.RAT_DL,
        p_s=v,
        p_r=p_r,
        prob=1.0,
        throughput=df_rate(v, p_r, gains),
        avg_power=0.5 * (v + p_r) + circuit.alpha_r,
    )
