"""Channel, rate, and power-consumption primitives for a three-node
half-duplex decode-and-forward relay link.

Powers are in Watts, channel gains are linear power gains, rates are in
b/s/Hz.  Receiver noise is normalized to unit variance throughout, so
transmit power times link gain is already an SNR.

The slot structure is the usual two-phase one: the source talks for the
first half slot (heard by relay and destination), the relay re-encodes
and talks for the second half.  Direct-link transmission uses the whole
slot.  Circuit power is constant while a radio is up and is folded into
three mode-level aggregates:

    alpha_d   direct link: source TX chain + destination RX chain
    alpha_r   relay mode with the destination listening in both halves
    alpha_e   relay mode with the destination listening only in the
              second half (no usable direct link)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

LN2 = math.log(2.0)

# Absolute comparison tolerance for power/rate bookkeeping checks.
POWER_TOL = 1e-9


class ValidationError(ValueError):
    """A domain object was constructed from invalid values."""


class DegenerateChannelError(ValidationError):
    """A link gain (or structurally required circuit power) is zero."""


class RelayInadmissibleError(ValidationError):
    """A relay-assisted mode was requested but h_sr < 2 * h_sd, so the
    relay can never help: decoding at the relay is then the bottleneck
    for every power split."""


class InconsistencyError(RuntimeError):
    """Two redundant solution routes disagreed beyond tolerance."""


def capacity(snr: float) -> float:
    """AWGN spectral efficiency log2(1 + snr) in b/s/Hz."""
    if not math.isfinite(snr):
        raise ValidationError(f"capacity: snr must be finite, got {snr}")
    if 1.0 + snr <= 0.0:
        raise ValidationError(f"capacity: 1 + snr must be positive, got snr={snr}")
    return math.log1p(snr) / LN2


@dataclass(frozen=True)
class ChannelGains:
    """Linear power gains of the three links."""

    h_sd: float  # source -> destination
    h_sr: float  # source -> relay
    h_rd: float  # relay -> destination

    def __post_init__(self) -> None:
        for name in ("h_sd", "h_sr", "h_rd"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val)):
                raise ValidationError(f"gain {name} must be finite, got {val!r}")
            if val < 0.0:
                raise ValidationError(f"gain {name} must be non-negative, got {val}")

    @property
    def relay_admissible(self) -> bool:
        # h_sr >= 2 h_sd makes the relay's decode constraint satisfiable with
        # a strictly positive destination-side gain left over.
        return self.h_sr >= 2.0 * self.h_sd

    def require_admissible(self) -> None:
        if not self.relay_admissible:
            raise RelayInadmissibleError(
                f"relay-assisted mode needs h_sr >= 2*h_sd; "
                f"got h_sr={self.h_sr}, h_sd={self.h_sd}"
            )


def df_rate(p_s: float, p_r: float, gains: ChannelGains) -> float:
    """Half-duplex decode-and-forward rate for burst powers (p_s, p_r).

    The relay must decode the source's half-slot transmission; the
    destination combines the direct observation with the relay's
    retransmission.  Either constraint can bind:

        0.5 * min{ C(p_s h_sr), C(p_s h_sd) + C(p_r h_rd) }
    """
    if p_s < 0.0 or p_r < 0.0:
        raise ValidationError(f"df_rate: powers must be non-negative, got {p_s}, {p_r}")
    relay_decode = capacity(p_s * gains.h_sr)
    combine = capacity(p_s * gains.h_sd) + capacity(p_r * gains.h_rd)
    return 0.5 * min(relay_decode, combine)


@dataclass(frozen=True)
class CircuitModel:
    """Mode-level circuit power aggregates, optionally carrying the raw
    per-chain draws they were derived from.

    alpha_e is only needed for the no-direct-link relay mode and may be
    left unset when that mode is not used.
    """

    alpha_d: float
    alpha_r: float
    alpha_e: float | None = None
    # raw per-chain draws (None when constructed directly from aggregates)
    p_ct_s: float | None = None
    p_cr_r: float | None = None
    p_ct_r: float | None = None
    p_cr_d: float | None = None

    def __post_init__(self) -> None:
        for name in ("alpha_d", "alpha_r"):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0.0:
                raise ValidationError(f"{name} must be finite and >= 0, got {val}")
        if self.alpha_e is not None:
            if not math.isfinite(self.alpha_e) or self.alpha_e < 0.0:
                raise ValidationError(f"alpha_e must be finite and >= 0, got {self.alpha_e}")
        raw = (self.p_ct_s, self.p_cr_r, self.p_ct_r, self.p_cr_d)
        if any(v is not None for v in raw):
            if any(v is None for v in raw):
                raise ValidationError("either give all four raw circuit draws or none")
            for name in ("p_ct_s", "p_cr_r", "p_ct_r", "p_cr_d"):
                val = getattr(self, name)
                if not math.isfinite(val) or val < 0.0:
                    raise ValidationError(f"{name} must be finite and >= 0, got {val}")

    @classmethod
    def from_aggregates(
        cls, alpha_d: float, alpha_r: float, alpha_e: float | None = None
    ) -> "CircuitModel":
        return cls(alpha_d=alpha_d, alpha_r=alpha_r, alpha_e=alpha_e)

    @classmethod
    def from_components(
        cls, p_ct_s: float, p_cr_r: float, p_ct_r: float, p_cr_d: float
    ) -> "CircuitModel":
        """Aggregate raw per-chain draws into the three mode constants.

        Direct link: the source TX chain and destination RX chain run for
        the whole slot.  Relay mode: first half-slot runs source TX, relay
        RX, destination RX; second half runs relay TX, destination RX.
        Without the direct link the destination sleeps through the first
        half, saving half its RX draw.
        """
        alpha_d = p_ct_s + p_cr_d
        alpha_r = 0.5 * (p_ct_s + p_cr_r + p_cr_d) + 0.5 * (p_ct_r + p_cr_d)
        alpha_e = alpha_r - 0.5 * p_cr_d
        return cls(
            alpha_d=alpha_d,
            alpha_r=alpha_r,
            alpha_e=alpha_e,
            p_ct_s=p_ct_s,
            p_cr_r=p_cr_r,
            p_ct_r=p_ct_r,
            p_cr_d=p_cr_d,
        )

    def require_alpha_e(self) -> float:
        if self.alpha_e is None:
            raise ValidationError(
                "alpha_e is required for the no-direct-link relay mode "
                "but was not set on this CircuitModel"
            )
        return self.alpha_e


def derive_aggregates(
    p_ct_s: float, p_cr_r: float, p_ct_r: float, p_cr_d: float
) -> CircuitModel:
    """Build a CircuitModel from raw per-chain circuit draws."""
    return CircuitModel.from_components(p_ct_s, p_cr_r, p_ct_r, p_cr_d)


class Mode(Enum):
    DLT = "DLT"          # direct-link transmission, whole slot
    RAT_DL = "RAT_DL"    # relay-assisted, destination also uses direct link
    RAT_WDL = "RAT_WDL"  # relay-assisted, direct link ignored/absent
    SILENT = "SILENT"    # no transmission at all

    def __str__(self) -> str:  # cleaner CLI/CSV text
        return self.value


@dataclass(frozen=True)
class ModeAllocation:
    """One mode's operating point: burst powers, transmission probability,
    and the resulting long-run averages."""

    mode: Mode
    p_s: float
    p_r: float
    prob: float
    throughput: float
    avg_power: float

    def __post_init__(self) -> None:
        for name in ("p_s", "p_r", "prob", "throughput", "avg_power"):
            val = getattr(self, name)
            if not math.isfinite(val):
                raise ValidationError(f"ModeAllocation.{name} must be finite, got {val}")
            if val < 0.0:
                raise ValidationError(f"ModeAllocation.{name} must be >= 0, got {val}")
        if self.prob > 1.0 + POWER_TOL:
            raise ValidationError(f"ModeAllocation.prob must be <= 1, got {self.prob}")
        if self.mode is Mode.DLT and self.p_r != 0.0:
            raise ValidationError("DLT allocation must have p_r = 0")
        if self.mode is Mode.SILENT:
            if any(getattr(self, n) != 0.0 for n in ("p_s", "p_r", "prob", "throughput", "avg_power")):
                raise ValidationError("SILENT allocation must be all zero")

    @classmethod
    def silent(cls) -> "ModeAllocation":
        return cls(Mode.SILENT, 0.0, 0.0, 0.0, 0.0, 0.0)


class MixedCase(Enum):
    """Shape of the throughput upper envelope over the two pure curves.

    CASE1: direct-link curve dominates everywhere (no common tangent).
    CASE2: one common tangent segment bridging relay curve -> direct curve.
    CASE3: relay curve pokes above in a middle band; two tangent segments.
    """

    CASE1 = "CASE1"
    CASE2 = "CASE2"
    CASE3 = "CASE3"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MixedSolution:
    """Optimal time-sharing between direct-link and relay-assisted
    operation under one average power budget.

    theta_star is the fraction of slots run as DLT with budget p_a_star;
    the remaining fraction runs relay-assisted with budget p_b_star, and
    theta * p_a + (1 - theta) * p_b equals the overall budget.
    """

    p_a_star: float
    p_b_star: float
    theta_star: float
    throughput: float
    case_label: MixedCase
    dlt_alloc: ModeAllocation
    rat_alloc: ModeAllocation

    def __post_init__(self) -> None:
        for name in ("p_a_star", "p_b_star", "theta_star", "throughput"):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0.0:
                raise ValidationError(f"MixedSolution.{name} must be finite and >= 0, got {val}")
        if self.theta_star > 1.0 + POWER_TOL:
            raise ValidationError(f"theta_star must be <= 1, got {self.theta_star}")
