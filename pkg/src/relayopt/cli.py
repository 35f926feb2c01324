"""Command line front end.

Subcommands:
    solve     one budget, all requested schemes, summary plus CSV rows
    sweep     CSV over a swept scalar (budget, a gain, or a circuit draw)
    region    winner map over the (h_sr, h_rd) plane at a fixed budget
    simulate  slotted Monte-Carlo run of one scheme's allocation

Scenario files are flat ``key = value`` text with ``#`` comments; see
``parse_scenario`` for the key set.  All gains are linear unless --db is
given, in which case gain values are converted as 10^(x/10) on input.

Exit codes: 0 success, 2 configuration error, 3 numerical inconsistency,
4 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import sys
from dataclasses import dataclass, replace
from typing import IO, Iterator

import numpy as np

from . import __version__
from .dlt import solve_dlt
from .mixed import solve_mixed
from .model import (
    ChannelGains,
    CircuitModel,
    InconsistencyError,
    ValidationError,
)
from .numerics import NumericsError
from .rat_dl import solve_rat_dl
from .rat_wdl import solve_rat_wdl
from .simulate import baseline_cdlt, baseline_crat_dl, simulate

SCHEMES = ("DLT", "RAT_DL", "RAT_WDL", "MT", "CDLT", "CRAT_DL")
SIM_SCHEMES = ("DLT", "RAT_DL", "RAT_WDL", "CDLT", "CRAT_DL", "SILENT")
SWEEP_VARIABLES = ("P0", "h_sr", "h_rd", "alpha_d", "alpha_r")

SWEEP_COLUMNS = (
    "variable", "value", "mode", "p_s", "p_r", "prob", "theta", "throughput", "case_label"
)
REGION_COLUMNS = ("h_sr", "h_rd", "winner", "theta", "throughput")
SIM_COLUMNS = (
    "mode", "n_slots", "empirical_throughput", "empirical_avg_power",
    "analytic_throughput", "budget", "rng_seed", "rng_algorithm",
    "throughput_stderr", "power_stderr",
)


class ConfigError(ValueError):
    """Scenario file or flag combination is invalid."""


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class RegionSpec:
    h_sr_start: float
    h_sr_stop: float
    h_sr_steps: int
    h_rd_start: float
    h_rd_stop: float
    h_rd_steps: int


@dataclass(frozen=True)
class Scenario:
    gains: ChannelGains
    circuit: CircuitModel
    p0: float | None = None
    modes: tuple[str, ...] = SCHEMES
    sweep: SweepSpec | None = None
    region: RegionSpec | None = None


_GAIN_KEYS = ("h_sd", "h_sr", "h_rd")
_AGG_KEYS = ("alpha_d", "alpha_r", "alpha_e")
_RAW_KEYS = ("p_ct_s", "p_cr_r", "p_ct_r", "p_cr_d")
_SWEEP_KEYS = ("sweep_variable", "sweep_from", "sweep_to", "sweep_steps")
_REGION_KEYS = (
    "region_h_sr_from", "region_h_sr_to", "region_h_sr_steps",
    "region_h_rd_from", "region_h_rd_to", "region_h_rd_steps",
)
_KNOWN_KEYS = frozenset(
    _GAIN_KEYS + _AGG_KEYS + _RAW_KEYS + _SWEEP_KEYS + _REGION_KEYS + ("p0", "modes")
)


def _parse_float(raw: dict[str, str], key: str) -> float:
    try:
        return float(raw[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: not a number: {raw[key]!r}") from exc


def _parse_int(raw: dict[str, str], key: str) -> int:
    try:
        return int(raw[key])
    except ValueError as exc:
        raise ConfigError(f"{key}: not an integer: {raw[key]!r}") from exc


def parse_scenario(text: str, db_gains: bool = False) -> Scenario:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value

    for key in _GAIN_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")
    gains_vals = {k: _parse_float(raw, k) for k in _GAIN_KEYS}
    if db_gains:
        gains_vals = {k: 10.0 ** (v / 10.0) for k, v in gains_vals.items()}
    try:
        gains = ChannelGains(**gains_vals)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    have_raw = [k for k in _RAW_KEYS if k in raw]
    have_agg = [k for k in ("alpha_d", "alpha_r") if k in raw]
    try:
        if have_raw:
            if len(have_raw) != len(_RAW_KEYS):
                missing = sorted(set(_RAW_KEYS) - set(have_raw))
                raise ConfigError(f"raw circuit draws incomplete; missing {missing}")
            if have_agg or "alpha_e" in raw:
                raise ConfigError(
                    "give either raw circuit draws or alpha_* aggregates, not both"
                )
            circuit = CircuitModel.from_components(
                *(_parse_float(raw, k) for k in _RAW_KEYS)
            )
        else:
            if len(have_agg) != 2:
                missing = sorted({"alpha_d", "alpha_r"} - set(have_agg))
                raise ConfigError(f"missing circuit keys {missing}")
            circuit = CircuitModel.from_aggregates(
                alpha_d=_parse_float(raw, "alpha_d"),
                alpha_r=_parse_float(raw, "alpha_r"),
                alpha_e=_parse_float(raw, "alpha_e") if "alpha_e" in raw else None,
            )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    p0 = _parse_float(raw, "p0") if "p0" in raw else None
    if p0 is not None and p0 < 0.0:
        raise ConfigError(f"p0 must be >= 0, got {p0}")

    modes: tuple[str, ...] = SCHEMES
    if "modes" in raw:
        modes = tuple(m.strip() for m in raw["modes"].split(",") if m.strip())
        bad = [m for m in modes if m not in SCHEMES]
        if bad:
            raise ConfigError(f"modes: unknown scheme(s) {bad}; choose from {list(SCHEMES)}")
        if not modes:
            raise ConfigError("modes: empty list")

    sweep = None
    have_sweep = [k for k in _SWEEP_KEYS if k in raw]
    if have_sweep:
        if len(have_sweep) != len(_SWEEP_KEYS):
            missing = sorted(set(_SWEEP_KEYS) - set(have_sweep))
            raise ConfigError(f"sweep specification incomplete; missing {missing}")
        variable = raw["sweep_variable"]
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep_variable must be one of {list(SWEEP_VARIABLES)}, got {variable!r}"
            )
        sweep = SweepSpec(
            variable=variable,
            start=_parse_float(raw, "sweep_from"),
            stop=_parse_float(raw, "sweep_to"),
            steps=_parse_int(raw, "sweep_steps"),
        )
        if not (sweep.start < sweep.stop):
            raise ConfigError("sweep_from must be < sweep_to")
        if sweep.steps < 2:
            raise ConfigError(f"sweep_steps must be >= 2, got {sweep.steps}")

    region = None
    have_region = [k for k in _REGION_KEYS if k in raw]
    if have_region:
        if len(have_region) != len(_REGION_KEYS):
            missing = sorted(set(_REGION_KEYS) - set(have_region))
            raise ConfigError(f"region specification incomplete; missing {missing}")
        region = RegionSpec(
            h_sr_start=_parse_float(raw, "region_h_sr_from"),
            h_sr_stop=_parse_float(raw, "region_h_sr_to"),
            h_sr_steps=_parse_int(raw, "region_h_sr_steps"),
            h_rd_start=_parse_float(raw, "region_h_rd_from"),
            h_rd_stop=_parse_float(raw, "region_h_rd_to"),
            h_rd_steps=_parse_int(raw, "region_h_rd_steps"),
        )
        for lo, hi, steps, name in (
            (region.h_sr_start, region.h_sr_stop, region.h_sr_steps, "h_sr"),
            (region.h_rd_start, region.h_rd_stop, region.h_rd_steps, "h_rd"),
        ):
            if not (lo < hi):
                raise ConfigError(f"region_{name}_from must be < region_{name}_to")
            if steps < 2:
                raise ConfigError(f"region_{name}_steps must be >= 2, got {steps}")

    return Scenario(
        gains=gains, circuit=circuit, p0=p0, modes=modes, sweep=sweep, region=region
    )


def dump_scenario(scenario: Scenario) -> str:
    """Canonical text form; parse_scenario(dump_scenario(s)) recovers s."""
    lines = ["# relayopt scenario"]
    g = scenario.gains
    for key in _GAIN_KEYS:
        lines.append(f"{key} = {getattr(g, key)!r}")
    c = scenario.circuit
    if c.p_ct_s is not None:
        for key in _RAW_KEYS:
            lines.append(f"{key} = {getattr(c, key)!r}")
    else:
        lines.append(f"alpha_d = {c.alpha_d!r}")
        lines.append(f"alpha_r = {c.alpha_r!r}")
        if c.alpha_e is not None:
            lines.append(f"alpha_e = {c.alpha_e!r}")
    if scenario.p0 is not None:
        lines.append(f"p0 = {scenario.p0!r}")
    lines.append("modes = " + ",".join(scenario.modes))
    if scenario.sweep is not None:
        s = scenario.sweep
        lines.append(f"sweep_variable = {s.variable}")
        lines.append(f"sweep_from = {s.start!r}")
        lines.append(f"sweep_to = {s.stop!r}")
        lines.append(f"sweep_steps = {s.steps}")
    if scenario.region is not None:
        r = scenario.region
        lines.append(f"region_h_sr_from = {r.h_sr_start!r}")
        lines.append(f"region_h_sr_to = {r.h_sr_stop!r}")
        lines.append(f"region_h_sr_steps = {r.h_sr_steps}")
        lines.append(f"region_h_rd_from = {r.h_rd_start!r}")
        lines.append(f"region_h_rd_to = {r.h_rd_stop!r}")
        lines.append(f"region_h_rd_steps = {r.h_rd_steps}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _scheme_cells(
    scheme: str, p0: float, gains: ChannelGains, circuit: CircuitModel
) -> dict[str, str]:
    """p_s, p_r, prob, theta, throughput, case_label cells for one scheme.

    Cells that do not apply (relay scheme on an inadmissible channel,
    per-burst powers of a time-shared scheme) stay empty.
    """
    empty = {k: "" for k in ("p_s", "p_r", "prob", "theta", "throughput", "case_label")}
    if scheme == "DLT":
        alloc = solve_dlt(p0, gains, circuit).alloc
        return empty | {
            "p_s": _fmt(alloc.p_s), "p_r": _fmt(alloc.p_r),
            "prob": _fmt(alloc.prob), "throughput": _fmt(alloc.throughput),
        }
    if scheme == "RAT_DL":
        if not gains.relay_admissible:
            return empty
        sol = solve_rat_dl(p0, gains, circuit)
        return empty | {
            "p_s": _fmt(sol.p_s), "p_r": _fmt(sol.p_r),
            "prob": _fmt(sol.prob), "throughput": _fmt(sol.throughput),
            "case_label": str(sol.case),
        }
    if scheme == "RAT_WDL":
        alloc = solve_rat_wdl(p0, gains, circuit).alloc
        return empty | {
            "p_s": _fmt(alloc.p_s), "p_r": _fmt(alloc.p_r),
            "prob": _fmt(alloc.prob), "throughput": _fmt(alloc.throughput),
        }
    if scheme == "MT":
        sol = solve_mixed(p0, gains, circuit)
        cells = empty | {
            "theta": _fmt(sol.theta_star), "throughput": _fmt(sol.throughput),
        }
        if gains.relay_admissible:
            cells["case_label"] = str(sol.case_label)
        return cells
    if scheme == "CDLT":
        alloc = baseline_cdlt(p0, gains, circuit)
        return empty | {
            "p_s": _fmt(alloc.p_s), "p_r": _fmt(alloc.p_r),
            "prob": _fmt(alloc.prob), "throughput": _fmt(alloc.throughput),
        }
    if scheme == "CRAT_DL":
        if not gains.relay_admissible:
            return empty
        alloc = baseline_crat_dl(p0, gains, circuit)
        return empty | {
            "p_s": _fmt(alloc.p_s), "p_r": _fmt(alloc.p_r),
            "prob": _fmt(alloc.prob), "throughput": _fmt(alloc.throughput),
        }
    raise ConfigError(f"unknown scheme {scheme!r}")


@contextlib.contextmanager
def _out_stream(path: str | None) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _write_csv(
    stream: IO[str], columns: tuple[str, ...], rows: list[dict[str, str]]
) -> None:
    stream.write(f"# relayopt {__version__}\n")
    writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def _require_p0(scenario: Scenario, override: float | None) -> float:
    if override is not None:
        if override < 0.0:
            raise ConfigError(f"p0 must be >= 0, got {override}")
        return override
    if scenario.p0 is None:
        raise ConfigError("p0 is required (set it in the scenario file or pass --p0)")
    return scenario.p0


def cmd_solve(scenario: Scenario, p0: float, out: str | None) -> int:
    if "MT" in scenario.modes and not scenario.gains.relay_admissible:
        print(
            "warning: relay inadmissible (h_sr < 2 h_sd); MT falls back to pure DLT",
            file=sys.stderr,
        )
    rows = []
    summary = []
    for scheme in scenario.modes:
        cells = _scheme_cells(scheme, p0, scenario.gains, scenario.circuit)
        rows.append({"variable": "P0", "value": _fmt(p0), "mode": scheme} | cells)
        shown = ", ".join(
            f"{k}={cells[k]}" for k in ("p_s", "p_r", "prob", "theta", "throughput", "case_label")
            if cells[k] != ""
        )
        summary.append(f"{scheme:8s} {shown if shown else '(not applicable)'}")
    print(f"budget P0 = {_fmt(p0)} W")
    for line in summary:
        print(line)
    with _out_stream(out) as stream:
        if stream is sys.stdout:
            print()
        _write_csv(stream, SWEEP_COLUMNS, rows)
    return 0


def _sweep_point(
    scenario: Scenario, variable: str, value: float
) -> tuple[ChannelGains, CircuitModel, float | None]:
    gains, circuit = scenario.gains, scenario.circuit
    if variable == "P0":
        return gains, circuit, value
    if variable in ("h_sr", "h_rd"):
        try:
            gains = replace(gains, **{variable: value})
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc
        return gains, circuit, scenario.p0
    try:
        circuit = CircuitModel.from_aggregates(
            alpha_d=value if variable == "alpha_d" else circuit.alpha_d,
            alpha_r=value if variable == "alpha_r" else circuit.alpha_r,
            alpha_e=circuit.alpha_e,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    return gains, circuit, scenario.p0


def cmd_sweep(scenario: Scenario, out: str | None) -> int:
    if scenario.sweep is None:
        raise ConfigError("sweep requires sweep_* keys in the scenario file")
    spec = scenario.sweep
    if spec.variable != "P0" and scenario.p0 is None:
        raise ConfigError(f"sweeping {spec.variable} requires a fixed p0")
    values = np.linspace(spec.start, spec.stop, spec.steps)
    rows = []
    for value in values:
        gains, circuit, p0 = _sweep_point(scenario, spec.variable, float(value))
        assert p0 is not None
        for scheme in scenario.modes:
            cells = _scheme_cells(scheme, p0, gains, circuit)
            rows.append(
                {"variable": spec.variable, "value": _fmt(float(value)), "mode": scheme}
                | cells
            )
    with _out_stream(out) as stream:
        _write_csv(stream, SWEEP_COLUMNS, rows)
    return 0


def cmd_region(scenario: Scenario, p0: float, out: str | None) -> int:
    if scenario.region is None:
        raise ConfigError("region requires region_* keys in the scenario file")
    spec = scenario.region
    rows = []
    for h_sr in np.linspace(spec.h_sr_start, spec.h_sr_stop, spec.h_sr_steps):
        for h_rd in np.linspace(spec.h_rd_start, spec.h_rd_stop, spec.h_rd_steps):
            try:
                gains = replace(scenario.gains, h_sr=float(h_sr), h_rd=float(h_rd))
            except ValidationError as exc:
                raise ConfigError(str(exc)) from exc
            sol = solve_mixed(p0, gains, scenario.circuit)
            if sol.theta_star >= 1.0:
                winner = "DLT"
            elif sol.theta_star <= 0.0:
                winner = "RAT_DL"
            else:
                winner = "MT"
            rows.append({
                "h_sr": _fmt(float(h_sr)),
                "h_rd": _fmt(float(h_rd)),
                "winner": winner,
                "theta": _fmt(sol.theta_star),
                "throughput": _fmt(sol.throughput),
            })
    with _out_stream(out) as stream:
        _write_csv(stream, REGION_COLUMNS, rows)
    return 0


def cmd_simulate(
    scenario: Scenario, p0: float, scheme: str, n_slots: int, seed: int,
    duty_cycle: bool, out: str | None,
) -> int:
    gains, circuit = scenario.gains, scenario.circuit
    if scheme == "DLT":
        alloc = solve_dlt(p0, gains, circuit).alloc
    elif scheme == "RAT_DL":
        alloc = solve_rat_dl(p0, gains, circuit).alloc
    elif scheme == "RAT_WDL":
        alloc = solve_rat_wdl(p0, gains, circuit).alloc
    elif scheme == "CDLT":
        alloc = baseline_cdlt(p0, gains, circuit)
    elif scheme == "CRAT_DL":
        alloc = baseline_crat_dl(p0, gains, circuit)
    elif scheme == "SILENT":
        from .model import ModeAllocation

        alloc = ModeAllocation.silent()
    else:
        raise ConfigError(
            f"simulate supports {list(SIM_SCHEMES)}, got {scheme!r}"
        )
    report = simulate(alloc, gains, circuit, n_slots=n_slots, seed=seed,
                      duty_cycle=duty_cycle)
    row = {
        "mode": scheme,
        "n_slots": str(report.n_slots),
        "empirical_throughput": _fmt(report.empirical_throughput),
        "empirical_avg_power": _fmt(report.empirical_avg_power),
        "analytic_throughput": _fmt(report.analytic_throughput),
        "budget": _fmt(report.budget),
        "rng_seed": str(report.rng_seed),
        "rng_algorithm": report.rng_algorithm,
        "throughput_stderr": _fmt(report.throughput_stderr),
        "power_stderr": _fmt(report.power_stderr),
    }
    with _out_stream(out) as stream:
        _write_csv(stream, SIM_COLUMNS, [row])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relayopt",
        description="Throughput-optimal power allocation for a half-duplex "
        "decode-and-forward relay link with circuit power.",
    )
    parser.add_argument("command", choices=("solve", "sweep", "region", "simulate"))
    parser.add_argument("--config", required=True, help="scenario file (key = value lines)")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--modes", default=None, help="comma list overriding scenario modes")
    parser.add_argument("--p0", type=float, default=None, help="budget override in Watts")
    parser.add_argument("--mode", default="RAT_DL", help="scheme to simulate")
    parser.add_argument("--seed", type=int, default=0, help="simulation RNG seed")
    parser.add_argument("--slots", type=int, default=100_000, help="simulation slot count")
    parser.add_argument("--db", action="store_true",
                        help="interpret scenario gains as dB values")
    parser.add_argument("--duty-cycle", action="store_true",
                        help="deterministic duty cycling instead of Bernoulli slots")
    parser.add_argument("--dump-config", action="store_true",
                        help="print the canonical scenario text and exit")
    return parser


def _run(argv: list[str] | None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
    scenario = parse_scenario(text, db_gains=args.db)
    if args.modes is not None:
        modes = tuple(m.strip() for m in args.modes.split(",") if m.strip())
        bad = [m for m in modes if m not in SCHEMES]
        if bad or not modes:
            raise ConfigError(f"--modes: unknown scheme(s) {bad or '(empty)'}")
        scenario = replace(scenario, modes=modes)

    if args.dump_config:
        with _out_stream(args.out) as stream:
            stream.write(dump_scenario(scenario))
        return 0

    if args.command == "solve":
        return cmd_solve(scenario, _require_p0(scenario, args.p0), args.out)
    if args.command == "sweep":
        return cmd_sweep(scenario, args.out)
    if args.command == "region":
        return cmd_region(scenario, _require_p0(scenario, args.p0), args.out)
    if args.command == "simulate":
        if args.slots <= 0:
            raise ConfigError(f"--slots must be positive, got {args.slots}")
        return cmd_simulate(
            scenario, _require_p0(scenario, args.p0), args.mode,
            args.slots, args.seed, args.duty_cycle, args.out,
        )
    raise ConfigError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    try:
        return _run(argv)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InconsistencyError, NumericsError) as exc:
        print(f"numerical inconsistency: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except SystemExit as exc:  # argparse
        code = exc.code
        return int(code) if isinstance(code, int) else 2


if __name__ == "__main__":
    raise SystemExit(main())
