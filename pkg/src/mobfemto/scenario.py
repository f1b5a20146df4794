"""Scenario topology, default configuration and the backhaul selection policy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .propagation import FemtoPropagationParams, MacroPropagationParams

ROLES = ("macro_bs", "satellite", "outside_transceiver", "fap", "ms")
VEHICLE_CLASSES = ("ship", "slow_medium", "high_speed")
CHOICES = ("macro", "satellite", "none")

# reasons that mean the vehicle is currently treated as "fast"
_FAST_REASONS = frozenset({"high_speed_satellite", "high_speed_no_satellite"})


@dataclass(frozen=True)
class NodeSpec:
    role: str
    tx_power_dbm: float
    antenna_gain_dbi: float = 0.0
    height_m: Optional[float] = None


@dataclass(frozen=True)
class InterferingBS:
    """Co-channel macro BS placed on the sweep axis, ``position_m`` from the serving BS."""

    position_m: float
    tx_power_dbm: float


@dataclass(frozen=True)
class NoiseSettings:
    bandwidth_hz: float = 10e6
    noise_figure_db: float = 9.0
    femto_interference_w: float = 0.0
    interferers: tuple[InterferingBS, ...] = ()


@dataclass(frozen=True)
class SatelliteLink:
    outage: float = 1e-2
    spectral_efficiency_bpshz: float = 1.0


@dataclass(frozen=True)
class BackhaulPolicy:
    vehicle_class: str = "slow_medium"
    speed_threshold_kmh: float = 120.0
    hysteresis_kmh: float = 10.0


@dataclass(frozen=True)
class SweepGrid:
    distance_min_m: float = 100.0
    distance_max_m: float = 3000.0
    step_m: float = 100.0


@dataclass(frozen=True)
class ScenarioConfig:
    macro_bs: NodeSpec
    outside_transceiver: NodeSpec
    fap: NodeSpec
    ms: NodeSpec
    macro: MacroPropagationParams = field(default_factory=MacroPropagationParams)
    femto: FemtoPropagationParams = field(default_factory=FemtoPropagationParams)
    fap_ms_distance_m: float = 5.0
    femto_through_wall: bool = False
    noise: NoiseSettings = field(default_factory=NoiseSettings)
    gamma_ms: float = 10.0
    gamma_transceiver: float = 7.0
    shadowing_correlation: float = 0.0
    satellite: SatelliteLink = field(default_factory=SatelliteLink)
    backhaul: BackhaulPolicy = field(default_factory=BackhaulPolicy)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    trials: int = 100
    seed: int = 20110501


def default_config() -> ScenarioConfig:
    """Baseline parameters for the vehicular deployment.

    Macro BS 1.5 kW at 100 m, FAP 15 mW at 5 m from the MS, both carriers
    at 1800 MHz, 20 dB penetration loss, 8 dB shadowing, SNIR thresholds
    10 at the MS and 7 at the outside transceiver, 100 trials.
    """
    return ScenarioConfig(
        macro_bs=NodeSpec("macro_bs", 10.0 * math.log10(1.5e6)),
        outside_transceiver=NodeSpec("outside_transceiver", 33.0, height_m=1.5),
        fap=NodeSpec("fap", 10.0 * math.log10(15.0), height_m=2.0),
        ms=NodeSpec("ms", 23.0),
    )


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_flag(x) -> bool:
    return isinstance(x, bool)


def _node_violations(node, name: str, role: str, needs_height: bool) -> list[str]:
    if not isinstance(node, NodeSpec):
        return [f"{name}: must be a node spec"]
    out = []
    if node.role != role:
        out.append(f"{name}.role: must be '{role}'")
    if not (_is_number(node.tx_power_dbm) and math.isfinite(node.tx_power_dbm)):
        out.append(f"{name}.tx_power_dbm: must be finite")
    if not (_is_number(node.antenna_gain_dbi) and math.isfinite(node.antenna_gain_dbi)):
        out.append(f"{name}.antenna_gain_dbi: must be finite")
    if needs_height and not (_is_number(node.height_m) and node.height_m > 0):
        out.append(f"{name}.height_m: must be > 0")
    elif node.height_m is not None and not (_is_number(node.height_m) and node.height_m > 0):
        out.append(f"{name}.height_m: must be > 0 when given")
    return out


def _numeric_violations(obj, prefix: str, names) -> list[str]:
    return [
        f"{prefix}.{n}: must be a finite number"
        for n in names
        if not (_is_number(getattr(obj, n)) and math.isfinite(getattr(obj, n)))
    ]


def validate(config: ScenarioConfig) -> list[str]:
    """Return one message per broken invariant, ``"<field>: <rule>"``; empty when valid."""
    v: list[str] = []
    v += _node_violations(config.macro_bs, "macro_bs", "macro_bs", False)
    v += _node_violations(config.outside_transceiver, "outside_transceiver", "outside_transceiver", True)
    v += _node_violations(config.fap, "fap", "fap", False)
    v += _node_violations(config.ms, "ms", "ms", False)

    bad = _numeric_violations(config.macro, "macro", (
        "carrier_freq_mhz", "bs_height_m", "ms_height_m", "shadowing_sigma_db", "penetration_loss_db"))
    v += bad or config.macro.violations("macro")
    bad = _numeric_violations(config.femto, "femto", ("carrier_freq_mhz", "distance_decay_coeff"))
    v += bad or config.femto.violations("femto")

    if not (_is_number(config.fap_ms_distance_m) and config.fap_ms_distance_m > 0):
        v.append("fap_ms_distance_m: must be > 0")
    if not _is_flag(config.femto_through_wall):
        v.append("femto_through_wall: must be a boolean")
    elif config.femto_through_wall and _is_number(config.femto.wall_count) and config.femto.wall_count < 1:
        v.append("femto.wall_count: must be >= 1 when femto_through_wall is set")

    noise = config.noise
    if not (_is_number(noise.bandwidth_hz) and noise.bandwidth_hz > 0):
        v.append("noise.bandwidth_hz: must be > 0")
    if not (_is_number(noise.noise_figure_db) and math.isfinite(noise.noise_figure_db)):
        v.append("noise.noise_figure_db: must be finite")
    if not (_is_number(noise.femto_interference_w) and noise.femto_interference_w >= 0):
        v.append("noise.femto_interference_w: must be >= 0")
    for i, bs in enumerate(noise.interferers):
        if not (_is_number(bs.position_m) and math.isfinite(bs.position_m)):
            v.append(f"noise.interferers[{i}].position_m: must be finite")
        if not (_is_number(bs.tx_power_dbm) and math.isfinite(bs.tx_power_dbm)):
            v.append(f"noise.interferers[{i}].tx_power_dbm: must be finite")

    for name in ("gamma_ms", "gamma_transceiver"):
        g = getattr(config, name)
        if not (_is_number(g) and g > 0 and math.isfinite(g)):
            v.append(f"{name}: must be > 0")
    rho = config.shadowing_correlation
    if not (_is_number(rho) and -1 <= rho <= 1):
        v.append("shadowing_correlation: must lie in [-1, 1]")

    sat = config.satellite
    if not (_is_number(sat.outage) and 0 <= sat.outage <= 1):
        v.append("satellite.outage: must lie in [0, 1]")
    if not (_is_number(sat.spectral_efficiency_bpshz) and sat.spectral_efficiency_bpshz >= 0):
        v.append("satellite.spectral_efficiency_bpshz: must be >= 0")

    pol = config.backhaul
    if pol.vehicle_class not in VEHICLE_CLASSES:
        v.append(f"backhaul.vehicle_class: must be one of {', '.join(VEHICLE_CLASSES)}")
    if not (_is_number(pol.speed_threshold_kmh) and pol.speed_threshold_kmh > 0):
        v.append("backhaul.speed_threshold_kmh: must be > 0")
    if not (_is_number(pol.hysteresis_kmh) and pol.hysteresis_kmh >= 0):
        v.append("backhaul.hysteresis_kmh: must be >= 0")

    grid = config.sweep
    lo, hi, step = grid.distance_min_m, grid.distance_max_m, grid.step_m
    if not (_is_number(lo) and lo > 0):
        v.append("sweep.distance_min_m: must be > 0")
    elif not (_is_number(hi) and hi > lo):
        v.append("sweep.distance_max_m: must be > sweep.distance_min_m")
    if not (_is_number(step) and step > 0):
        v.append("sweep.step_m: must be > 0")

    if not (isinstance(config.trials, int) and not isinstance(config.trials, bool) and config.trials >= 1):
        v.append("trials: must be an integer >= 1")
    if not (isinstance(config.seed, int) and not isinstance(config.seed, bool) and 0 <= config.seed < 2**64):
        v.append("seed: must be an unsigned 64-bit integer")
    return v


class ConfigError(ValueError):
    """Raised when a configuration, sweep or trace breaks its invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# --- backhaul selection --------------------------------------------------------


@dataclass(frozen=True)
class BackhaulContext:
    vehicle_class: str
    speed_kmh: float = 0.0
    macro_available: bool = True
    satellite_available: bool = True
    at_port: bool = False
    speed_threshold_kmh: float = 120.0
    hysteresis_kmh: float = 10.0

    def __post_init__(self):
        if self.vehicle_class not in VEHICLE_CLASSES:
            raise ValueError(f"unknown vehicle_class {self.vehicle_class!r}")
        if not self.speed_kmh >= 0:
            raise ValueError("speed_kmh must be >= 0")
        if not self.speed_threshold_kmh > 0:
            raise ValueError("speed_threshold_kmh must be > 0")
        if not self.hysteresis_kmh >= 0:
            raise ValueError("hysteresis_kmh must be >= 0")


@dataclass(frozen=True)
class BackhaulDecision:
    choice: str
    reason: str


def _speed_limit(ctx: BackhaulContext, previous: Optional[BackhaulDecision]) -> float:
    if previous is None:
        return ctx.speed_threshold_kmh
    if previous.reason in _FAST_REASONS:
        return ctx.speed_threshold_kmh - ctx.hysteresis_kmh
    return ctx.speed_threshold_kmh + ctx.hysteresis_kmh


def select_backhaul(
    ctx: BackhaulContext, previous: Optional[BackhaulDecision] = None
) -> BackhaulDecision:
    """Pick the network that carries the femtocell traffic.

    Ships use satellite unless docked inside macro coverage. Slow and
    medium speed vehicles prefer macro and fall back to satellite. Fast
    vehicles use satellite only; below the speed threshold they behave
    like slow vehicles. The threshold is widened by ``hysteresis_kmh`` in
    the direction that keeps the previous mode, so speeds jittering
    around the threshold do not flip the decision.
    """
    if ctx.vehicle_class == "ship":
        if ctx.at_port and ctx.macro_available:
            return BackhaulDecision("macro", "ship_at_port_macro")
        if ctx.satellite_available:
            return BackhaulDecision("satellite", "ship_satellite")
        return BackhaulDecision("none", "ship_no_satellite")

    if ctx.vehicle_class == "high_speed":
        if ctx.speed_kmh > _speed_limit(ctx, previous):
            if ctx.satellite_available:
                return BackhaulDecision("satellite", "high_speed_satellite")
            return BackhaulDecision("none", "high_speed_no_satellite")
        prefix = "high_speed_below_threshold"
    else:
        prefix = "slow_medium"

    if ctx.macro_available:
        return BackhaulDecision("macro", f"{prefix}_macro")
    if ctx.satellite_available:
        return BackhaulDecision("satellite", f"{prefix}_satellite")
    return BackhaulDecision("none", f"{prefix}_no_network")


# --- mobility traces -------------------------------------------------------------


@dataclass(frozen=True)
class TraceSample:
    time_s: float
    distance_m: float
    speed_kmh: float
    macro_available: bool
    satellite_available: bool
    at_port: bool = False


@dataclass(frozen=True)
class MobilityTrace:
    samples: tuple[TraceSample, ...]

    def violations(self) -> list[str]:
        if not self.samples:
            return ["trace: must contain at least one sample"]
        out = []
        prev_t = -math.inf
        for i, s in enumerate(self.samples):
            if not s.time_s > prev_t:
                out.append(f"sample {i}: time_s must be strictly increasing")
            if not s.distance_m > 0:
                out.append(f"sample {i}: distance_m must be > 0")
            if not s.speed_kmh >= 0:
                out.append(f"sample {i}: speed_kmh must be >= 0")
            prev_t = s.time_s
        return out

    def contexts(self, policy: BackhaulPolicy) -> list[BackhaulContext]:
        return [
            BackhaulContext(
                vehicle_class=policy.vehicle_class,
                speed_kmh=s.speed_kmh,
                macro_available=s.macro_available,
                satellite_available=s.satellite_available,
                at_port=s.at_port,
                speed_threshold_kmh=policy.speed_threshold_kmh,
                hysteresis_kmh=policy.hysteresis_kmh,
            )
            for s in self.samples
        ]


def replay_decisions(contexts: Sequence[BackhaulContext]) -> list[BackhaulDecision]:
    decisions: list[BackhaulDecision] = []
    previous = None
    for ctx in contexts:
        previous = select_backhaul(ctx, previous)
        decisions.append(previous)
    return decisions


def count_switches(decisions: Sequence[BackhaulDecision]) -> int:
    return sum(1 for a, b in zip(decisions, decisions[1:]) if a.choice != b.choice)
