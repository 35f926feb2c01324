"""Throughput-optimal power allocation for a half-duplex decode-and-forward
relay link whose radios draw constant circuit power per active mode.

The library exposes per-scheme solvers (direct link, relay with and without
a direct link), the optimal time-share between direct and relayed bursts,
closed-form average-throughput curves with their breakpoints and slopes,
and a slotted Monte-Carlo simulator for validating allocations.
"""

from .dlt import DltSolution, c_d, c_d_prime, dlt_curve, p_ee1, solve_dlt
from .mixed import (
    TangentStructure,
    c_m,
    classify_and_tangents,
    default_p_max,
    grid_envelope,
    solve_mixed,
    upper_concave_hull,
)
from .model import (
    ChannelGains,
    CircuitModel,
    DegenerateChannelError,
    InconsistencyError,
    MixedCase,
    MixedSolution,
    Mode,
    ModeAllocation,
    RelayInadmissibleError,
    ValidationError,
    capacity,
    derive_aggregates,
    df_rate,
)
from .numerics import BracketError, NumericsError, SearchConfig
from .rat_dl import (
    RatDlCase,
    RatDlSolution,
    c_r,
    c_r_prime,
    p_ee2_p_ee3,
    p_ee4,
    rat_dl_curve,
    solve_rat_dl,
    v_root,
)
from .rat_wdl import RatWdlSolution, c_e, c_e_prime, p_ee5, rat_wdl_curve, solve_rat_wdl
from .simulate import SimReport, baseline_cdlt, baseline_crat_dl, simulate

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ChannelGains",
    "CircuitModel",
    "DegenerateChannelError",
    "DltSolution",
    "InconsistencyError",
    "MixedCase",
    "MixedSolution",
    "Mode",
    "ModeAllocation",
    "NumericsError",
    "RatDlCase",
    "RatDlSolution",
    "RatWdlSolution",
    "RelayInadmissibleError",
    "SearchConfig",
    "SimReport",
    "TangentStructure",
    "ValidationError",
    "baseline_cdlt",
    "baseline_crat_dl",
    "c_d",
    "c_d_prime",
    "c_e",
    "c_e_prime",
    "c_m",
    "c_r",
    "c_r_prime",
    "capacity",
    "classify_and_tangents",
    "default_p_max",
    "derive_aggregates",
    "df_rate",
    "dlt_curve",
    "grid_envelope",
    "p_ee1",
    "p_ee2_p_ee3",
    "p_ee4",
    "p_ee5",
    "rat_dl_curve",
    "rat_wdl_curve",
    "simulate",
    "solve_dlt",
    "solve_mixed",
    "solve_rat_dl",
    "solve_rat_wdl",
    "upper_concave_hull",
    "v_root",
    "__version__",
]
