"""Optimal time-sharing between direct and relayed bursts."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relayopt import (
    ChannelGains,
    CircuitModel,
    MixedCase,
    ValidationError,
    c_d,
    c_m,
    c_r,
    classify_and_tangents,
    default_p_max,
    dlt_curve,
    grid_envelope,
    rat_dl_curve,
    solve_mixed,
    upper_concave_hull,
)

# bench envelope: one tangent bridge from the relay curve to the direct curve
BENCH_T1 = 12.436042389553908
BENCH_T2 = 20.95313093144371
BENCH_WINDOW = 34.032857661222145
BENCH_DEFAULT_P_MAX = 8.508214415305536


def test_bench_classification(bench_gains, bench_circuit):
    struct = classify_and_tangents(bench_gains, bench_circuit)
    assert struct.case is MixedCase.CASE2
    t1, t2 = struct.tangents
    assert t1 == pytest.approx(BENCH_T1, rel=1e-6)
    assert t2 == pytest.approx(BENCH_T2, rel=1e-6)
    assert struct.window == pytest.approx(BENCH_WINDOW, rel=1e-6)


def test_default_window_expands_to_hold_tangents(bench_gains, bench_circuit):
    # the seed window is far below the bridge; classification must widen it
    assert default_p_max(bench_gains, bench_circuit) == pytest.approx(
        BENCH_DEFAULT_P_MAX, rel=1e-6
    )
    struct = classify_and_tangents(bench_gains, bench_circuit)
    assert struct.window > struct.tangents[-1]


def test_bench_tangency_identities(bench_gains, bench_circuit):
    struct = classify_and_tangents(bench_gains, bench_circuit)
    t1, t2 = struct.tangents
    d = dlt_curve(bench_gains, bench_circuit)
    r = rat_dl_curve(bench_gains, bench_circuit)
    chord = (d.value(t2) - r.value(t1)) / (t2 - t1)
    assert r.slope(t1) == pytest.approx(chord, abs=1e-6)
    assert d.slope(t2) == pytest.approx(chord, abs=1e-6)


def test_direct_dominant_geometry():
    # marginal relay admissibility with a weak relay-destination link:
    # the direct curve is the whole envelope
    gains = ChannelGains(h_sd=1.0, h_sr=2.0, h_rd=0.5)
    circuit = CircuitModel.from_aggregates(alpha_d=0.2, alpha_r=0.24)
    struct = classify_and_tangents(gains, circuit)
    assert struct.case is MixedCase.CASE1
    assert struct.tangents == ()
    for p_0 in (0.3, 1.0, 4.0):
        assert c_m(p_0, gains, circuit) == pytest.approx(
            c_d(p_0, gains, circuit), rel=1e-12
        )


def test_relay_island_geometry():
    # cheap direct circuitry but a hugely stronger two-hop path: the relay
    # curve pokes above the direct one only on a middle band, giving two
    # tangent bridges
    gains = ChannelGains(h_sd=1.0, h_sr=50.0, h_rd=50.0)
    circuit = CircuitModel.from_aggregates(alpha_d=0.001, alpha_r=2.0)
    struct = classify_and_tangents(gains, circuit)
    assert struct.case is MixedCase.CASE3
    t3, t4, t5, t6 = struct.tangents
    assert t3 == pytest.approx(0.43586647596194433, rel=1e-3)
    assert t4 == pytest.approx(2.847472002113842, rel=1e-3)
    assert t5 == pytest.approx(66.85880029289689, rel=1e-3)
    assert t6 == pytest.approx(127.77365005167232, rel=1e-3)

    d = dlt_curve(gains, circuit)
    r = rat_dl_curve(gains, circuit)
    for a, b, left, right in ((t3, t4, d, r), (t5, t6, r, d)):
        chord = (right.value(b) - left.value(a)) / (b - a)
        assert left.slope(a) == pytest.approx(chord, abs=1e-5)
        assert right.slope(b) == pytest.approx(chord, abs=1e-5)


def test_pure_relay_region(bench_gains, bench_circuit):
    sol = solve_mixed(0.5, bench_gains, bench_circuit)
    assert sol.theta_star == 0.0
    assert sol.p_b_star == 0.5
    assert sol.throughput == pytest.approx(
        c_r(0.5, bench_gains, bench_circuit), rel=1e-12
    )
    assert sol.dlt_alloc.throughput == 0.0


def test_bridge_region(bench_gains, bench_circuit):
    p_0 = 15.0
    sol = solve_mixed(p_0, bench_gains, bench_circuit)
    theta_expected = (p_0 - BENCH_T1) / (BENCH_T2 - BENCH_T1)
    assert sol.theta_star == pytest.approx(theta_expected, rel=1e-6)
    # time-share accounting: the split spends exactly the budget
    assert sol.theta_star * sol.p_a_star + (
        1.0 - sol.theta_star
    ) * sol.p_b_star == pytest.approx(p_0, rel=1e-9)
    # and beats both pure options strictly inside the bridge
    assert sol.throughput > c_d(p_0, bench_gains, bench_circuit) + 1e-6
    assert sol.throughput > c_r(p_0, bench_gains, bench_circuit) + 1e-6


def test_pure_direct_region(bench_gains, bench_circuit):
    p_0 = 25.0
    sol = solve_mixed(p_0, bench_gains, bench_circuit)
    assert sol.theta_star == 1.0
    assert sol.throughput == pytest.approx(
        c_d(p_0, bench_gains, bench_circuit), rel=1e-12
    )


def test_inadmissible_relay_degrades_to_direct():
    gains = ChannelGains(h_sd=1.0, h_sr=1.2, h_rd=3.0)
    circuit = CircuitModel.from_aggregates(alpha_d=0.2, alpha_r=0.24)
    sol = solve_mixed(1.0, gains, circuit)
    assert sol.case_label is MixedCase.CASE1
    assert sol.theta_star == 1.0
    assert c_m(1.0, gains, circuit) == pytest.approx(
        c_d(1.0, gains, circuit), rel=1e-12
    )


@given(p_0=st.floats(min_value=0.0, max_value=30.0))
def test_envelope_dominates_both_curves(bench_gains, bench_circuit, p_0):
    val = c_m(p_0, bench_gains, bench_circuit)
    assert val >= c_d(p_0, bench_gains, bench_circuit) - 1e-9
    assert val >= c_r(p_0, bench_gains, bench_circuit) - 1e-9


@given(
    a=st.floats(min_value=0.0, max_value=34.0),
    b=st.floats(min_value=0.0, max_value=34.0),
)
def test_envelope_midpoint_concavity(bench_gains, bench_circuit, a, b):
    mid = 0.5 * (a + b)
    lhs = c_m(mid, bench_gains, bench_circuit)
    rhs = 0.5 * (
        c_m(a, bench_gains, bench_circuit) + c_m(b, bench_gains, bench_circuit)
    )
    assert lhs >= rhs - 1e-9


def test_matches_numerical_hull(bench_gains, bench_circuit):
    struct = classify_and_tangents(bench_gains, bench_circuit)
    grid, hull = grid_envelope(bench_gains, bench_circuit, struct.window, n=1500)
    probe = grid[:: len(grid) // 40]
    ref = np.interp(probe, grid, hull)
    ours = np.array([c_m(float(p), bench_gains, bench_circuit) for p in probe])
    assert np.max(np.abs(ours - ref)) < 1e-3


def test_hull_of_concave_points_is_identity():
    x = np.linspace(0.0, 4.0, 41)
    y = np.sqrt(x)
    hx, hy = upper_concave_hull(x, y)
    back = np.interp(x, hx, hy)
    assert np.max(np.abs(back - y)) < 1e-12


def test_hull_bridges_a_dip():
    x = np.array([0.0, 1.0, 2.0])
    y = np.array([0.0, 0.1, 1.0])
    hx, hy = upper_concave_hull(x, y)
    assert np.interp(1.0, hx, hy) == pytest.approx(0.5, abs=1e-12)


def test_validation():
    gains = ChannelGains(h_sd=1.0, h_sr=10.0, h_rd=3.0)
    circuit = CircuitModel.from_aggregates(alpha_d=0.2, alpha_r=0.24)
    with pytest.raises(ValidationError):
        solve_mixed(-1.0, gains, circuit)
    with pytest.raises(ValidationError):
        c_m(-1.0, gains, circuit)
    with pytest.raises(ValidationError):
        classify_and_tangents(gains, circuit, p_max=0.0)
