"""Direct-link throughput curve and allocation."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relayopt import (
    ChannelGains,
    CircuitModel,
    DegenerateChannelError,
    Mode,
    ValidationError,
    c_d,
    c_d_prime,
    capacity,
    dlt_curve,
    solve_dlt,
)

from oracles import oracle_direct

# computed with tests/oracles.py on the h_sd=1, alpha_d=0.2 bench setup
BENCH_P_EE1 = 0.6960942335882325
BENCH_EE_MAX = 0.850598406392007
BENCH_BREAKPOINT = 0.8960942335882325


def test_bench_curve_constants(bench_gains, bench_circuit):
    curve = dlt_curve(bench_gains, bench_circuit)
    assert curve.p_ee1 == pytest.approx(BENCH_P_EE1, abs=1e-6)
    assert curve.ee_max == pytest.approx(BENCH_EE_MAX, abs=1e-9)
    assert curve.breakpoint == pytest.approx(BENCH_BREAKPOINT, abs=1e-6)


def test_efficiency_point_is_a_local_max(bench_gains, bench_circuit):
    curve = dlt_curve(bench_gains, bench_circuit)

    def eff(p):
        return capacity(p * bench_gains.h_sd) / (p + bench_circuit.alpha_d)

    best = eff(curve.p_ee1)
    for d in (-1e-4, 1e-4):
        assert eff(curve.p_ee1 + d) <= best + 1e-12


def test_bursty_branch_is_linear(bench_gains, bench_circuit):
    curve = dlt_curve(bench_gains, bench_circuit)
    assert curve.value(0.45) == pytest.approx(0.45 * curve.ee_max, abs=1e-12)
    assert curve.value(0.0) == 0.0
    assert curve.slope(0.1) == curve.ee_max


def test_bench_allocation_matches_grid_oracle(bench_gains, bench_circuit):
    sol = solve_dlt(0.45, bench_gains, bench_circuit)
    assert sol.alloc.mode is Mode.DLT
    assert sol.alloc.prob == pytest.approx(0.5021793279464191, abs=1e-9)
    assert sol.alloc.throughput == pytest.approx(0.3827692828764032, abs=1e-9)

    _, oracle_val = oracle_direct(0.45, bench_gains.h_sd, bench_circuit.alpha_d)
    assert sol.alloc.throughput >= oracle_val - 1e-6


def test_value_and_slope_continuous_at_breakpoint(bench_gains, bench_circuit):
    curve = dlt_curve(bench_gains, bench_circuit)
    bp = curve.breakpoint
    h = 1e-8
    assert abs(curve.value(bp + h) - curve.value(bp - h)) < 1e-7
    # tangency: the linear branch leaves the saturated branch smoothly
    assert curve.slope(bp + 1e-9) == pytest.approx(curve.ee_max, rel=1e-6)


@given(p_a=st.floats(min_value=1e-6, max_value=5.0))
def test_budget_spent_exactly(bench_gains, bench_circuit, p_a):
    sol = solve_dlt(p_a, bench_gains, bench_circuit)
    assert sol.alloc.avg_power == pytest.approx(p_a, rel=1e-12)
    assert sol.alloc.throughput == pytest.approx(
        c_d(p_a, bench_gains, bench_circuit), rel=1e-12
    )


def test_zero_budget_is_silence(bench_gains, bench_circuit):
    sol = solve_dlt(0.0, bench_gains, bench_circuit)
    assert sol.alloc.mode is Mode.SILENT
    assert sol.alloc.throughput == 0.0


def test_vector_values_match_scalar(bench_gains, bench_circuit):
    curve = dlt_curve(bench_gains, bench_circuit)
    grid = np.linspace(0.0, 3.0, 57)
    vec = curve.values(grid)
    ref = np.array([curve.value(float(x)) for x in grid])
    assert np.max(np.abs(vec - ref)) < 1e-14


def test_prime_matches_finite_differences(bench_gains, bench_circuit):
    for p_a in (0.3, 1.5, 2.5):
        fd = (
            c_d(p_a + 5e-6, bench_gains, bench_circuit)
            - c_d(p_a - 5e-6, bench_gains, bench_circuit)
        ) / 1e-5
        assert c_d_prime(p_a, bench_gains, bench_circuit) == pytest.approx(
            fd, abs=1e-6
        )


def test_degenerate_inputs_rejected(bench_circuit, bench_gains):
    dead = ChannelGains(h_sd=0.0, h_sr=10.0, h_rd=3.0)
    with pytest.raises(DegenerateChannelError):
        dlt_curve(dead, bench_circuit)
    free = CircuitModel.from_aggregates(alpha_d=0.0, alpha_r=0.24)
    with pytest.raises(DegenerateChannelError):
        dlt_curve(bench_gains, free)
    with pytest.raises(ValidationError):
        solve_dlt(-0.5, bench_gains, bench_circuit)
