"""Seeded Monte Carlo sweeps and trace replays comparing direct and relayed service.

Shadowing draws are keyed by ``(seed, trial, link)`` only, so the same
trial sees the same shadowing realisation at every sweep distance
(common random numbers). A distance point is the unit of parallel work
and is always evaluated over the full trial vector, which keeps results
bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linkmetrics as lm
from .propagation import (
    MacroPropagationParams,
    femto_path_loss,
    macro_path_loss,
    standard_normals,
)
from .scenario import (
    BackhaulDecision,
    ConfigError,
    MobilityTrace,
    ScenarioConfig,
    count_switches,
    replay_decisions,
    validate,
)

LINK_MS = "macro-ms"
LINK_TRANSCEIVER = "macro-transceiver"
MIN_INTERFERER_DISTANCE_M = 1.0


@dataclass(frozen=True)
class SweepSpec:
    distance_min_m: float
    distance_max_m: float
    step_m: float
    trials: int
    seed: int

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> SweepSpec:
        g = config.sweep
        return cls(g.distance_min_m, g.distance_max_m, g.step_m, config.trials, config.seed)

    def violations(self) -> list[str]:
        out = []
        if not 0 < self.distance_min_m < self.distance_max_m:
            out.append("sweep: require 0 < distance_min_m < distance_max_m")
        if not self.step_m > 0:
            out.append("sweep.step_m: must be > 0")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            out.append("trials: must be an integer >= 1")
        return out

    def distances(self) -> np.ndarray:
        n = int(math.floor((self.distance_max_m - self.distance_min_m) / self.step_m + 1e-9)) + 1
        return self.distance_min_m + self.step_m * np.arange(n, dtype=float)


@dataclass
class SweepResult:
    distance_m: np.ndarray
    snir_db_direct: np.ndarray
    snir_db_femto_access: np.ndarray
    snir_db_backhaul: np.ndarray
    ce_bpshz_direct: np.ndarray
    ce_bpshz_relayed: np.ndarray
    ce_bpshz_downlink_direct: np.ndarray
    ce_bpshz_downlink_backhaul: np.ndarray
    outage_direct: np.ndarray
    outage_backhaul: np.ndarray
    outage_access: np.ndarray
    outage_relayed: np.ndarray
    trials: int

    def __len__(self) -> int:
        return len(self.distance_m)


@dataclass(frozen=True)
class TraceRecord:
    time_s: float
    decision: BackhaulDecision
    snir_db: float
    ce_bpshz: float
    outage: float


@dataclass
class TraceResult:
    records: list[TraceRecord]
    switches: int


@dataclass(frozen=True)
class SweepSummary:
    crossover_distance_m: Optional[float]
    snir_gain_db_max: float
    snir_gain_db_min: float
    capacity_ratio_max: float
    capacity_ratio_min: float
    outage_reduction_max: float
    outage_reduction_min: float


@dataclass(frozen=True)
class _Draws:
    ms: np.ndarray            # shadowing offsets (dB) on BS -> MS, per trial
    transceiver: np.ndarray   # shadowing offsets (dB) on BS -> outside transceiver
    interferers_ms: tuple[np.ndarray, ...]
    interferers_transceiver: tuple[np.ndarray, ...]


def _draws(config: ScenarioConfig, trials: int, seed: int) -> _Draws:
    sigma = config.macro.shadowing_sigma_db
    idx = range(trials)
    n_int = len(config.noise.interferers)
    if sigma == 0:
        zero = np.zeros(trials)
        return _Draws(zero, zero, (zero,) * n_int, (zero,) * n_int)
    z_ms = standard_normals(seed, idx, LINK_MS)
    rho = config.shadowing_correlation
    if rho == 1:
        z_tr = z_ms
    else:
        z_tr = rho * z_ms + math.sqrt(1.0 - rho * rho) * standard_normals(seed, idx, LINK_TRANSCEIVER)
    int_ms = tuple(sigma * standard_normals(seed, idx, f"interferer-{k}-ms") for k in range(n_int))
    int_tr = tuple(
        sigma * standard_normals(seed, idx, f"interferer-{k}-transceiver") for k in range(n_int)
    )
    return _Draws(sigma * z_ms, sigma * z_tr, int_ms, int_tr)


def _transceiver_params(config: ScenarioConfig) -> MacroPropagationParams:
    p = config.macro
    return MacroPropagationParams(
        p.carrier_freq_mhz,
        p.bs_height_m,
        config.outside_transceiver.height_m,
        p.shadowing_sigma_db,
        p.penetration_loss_db,
    )


def noise_watts(config: ScenarioConfig) -> float:
    return lm.dbm_to_watts(lm.thermal_noise_dbm(config.noise.bandwidth_hz, config.noise.noise_figure_db))


def femto_access_snir(config: ScenarioConfig) -> float:
    """Deterministic downlink SNIR from the in-vehicle FAP to the MS."""
    loss = femto_path_loss(config.femto, config.fap_ms_distance_m, config.femto_through_wall)
    budget = lm.LinkBudget(
        config.fap.tx_power_dbm, loss, config.fap.antenna_gain_dbi, config.ms.antenna_gain_dbi
    )
    powers = lm.LinkPowers(
        lm.received_power(budget),
        femto_interference_w=config.noise.femto_interference_w,
        noise_w=noise_watts(config),
    )
    return lm.snir(powers)


def _rx_watts(tx_dbm: float, gains_dbi: float, base_loss_db: float, offsets_db: np.ndarray) -> np.ndarray:
    return lm.dbm_to_watts(tx_dbm + gains_dbi - (base_loss_db + offsets_db))


def _interference(config, distance_m, rx_params, indoor, rx_gain, offsets) -> np.ndarray:
    total = np.zeros_like(offsets[0]) if offsets else 0.0
    for bs, off in zip(config.noise.interferers, offsets):
        d = max(abs(bs.position_m - distance_m), MIN_INTERFERER_DISTANCE_M)
        base = macro_path_loss(rx_params, d / 1000.0, indoor)
        total = total + _rx_watts(bs.tx_power_dbm, rx_gain, base, off)
    return total


def _point(config: ScenarioConfig, distance_m: float, draws: _Draws) -> dict[str, np.ndarray]:
    """Per-trial link quantities at one BS-vehicle distance."""
    d_km = distance_m / 1000.0
    bs, ms, tr = config.macro_bs, config.ms, config.outside_transceiver
    noise = noise_watts(config)
    tr_params = _transceiver_params(config)

    loss_ms = macro_path_loss(config.macro, d_km, indoor_vehicle=True)
    loss_tr = macro_path_loss(tr_params, d_km, indoor_vehicle=False)

    i_ms = _interference(config, distance_m, config.macro, True, ms.antenna_gain_dbi, draws.interferers_ms)
    i_tr = _interference(config, distance_m, tr_params, False, tr.antenna_gain_dbi, draws.interferers_transceiver)

    dl_ms = _rx_watts(bs.tx_power_dbm, bs.antenna_gain_dbi + ms.antenna_gain_dbi, loss_ms, draws.ms)
    dl_tr = _rx_watts(bs.tx_power_dbm, bs.antenna_gain_dbi + tr.antenna_gain_dbi, loss_tr, draws.transceiver)
    # uplink reuses the downlink shadowing realisation (reciprocal channel)
    ul_ms = _rx_watts(ms.tx_power_dbm, bs.antenna_gain_dbi + ms.antenna_gain_dbi, loss_ms, draws.ms)
    ul_tr = _rx_watts(tr.tx_power_dbm, bs.antenna_gain_dbi + tr.antenna_gain_dbi, loss_tr, draws.transceiver)

    return {
        "snir_direct": dl_ms / (i_ms + noise),
        "snir_backhaul": dl_tr / (i_tr + noise),
        "snir_ul_direct": ul_ms / noise,
        "snir_ul_backhaul": ul_tr / noise,
    }


def _sweep_point(config: ScenarioConfig, distance_m: float, draws: _Draws, access: float):
    q = _point(config, distance_m, draws)
    g_ms = lm.OutageThreshold(config.gamma_ms)
    g_tr = lm.OutageThreshold(config.gamma_transceiver)
    p_acc = lm.outage_probability(access, g_ms)
    p_direct = lm.outage_probability(q["snir_direct"], g_ms)
    p_bh = lm.outage_probability(q["snir_backhaul"], g_tr)
    return (
        lm.linear_to_db(np.mean(q["snir_direct"])),
        lm.linear_to_db(np.mean(q["snir_backhaul"])),
        np.mean(lm.spectral_efficiency(q["snir_ul_direct"])),
        np.mean(lm.spectral_efficiency(q["snir_ul_backhaul"])),
        np.mean(lm.spectral_efficiency(q["snir_direct"])),
        np.mean(lm.spectral_efficiency(q["snir_backhaul"])),
        np.mean(p_direct),
        np.mean(p_bh),
        np.mean(lm.relay_outage(p_bh, p_acc)),
    )


def _check(config: ScenarioConfig, extra: list[str] = ()) -> None:
    problems = validate(config) + list(extra)
    if problems:
        raise ConfigError(problems)


def run_sweep(config: ScenarioConfig, spec: Optional[SweepSpec] = None, workers: int = 1) -> SweepResult:
    """Average direct, backhaul and access link metrics over ``spec.trials`` per distance."""
    spec = spec or SweepSpec.from_config(config)
    _check(config, spec.violations())
    distances = spec.distances()
    draws = _draws(config, spec.trials, spec.seed)
    access = femto_access_snir(config)

    def job(d):
        return _sweep_point(config, float(d), draws, access)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, distances))
    else:
        rows = [job(d) for d in distances]
    cols = [np.array(c, dtype=float) for c in zip(*rows)]
    n = len(distances)
    p_acc = lm.outage_probability(access, lm.OutageThreshold(config.gamma_ms))
    return SweepResult(
        distance_m=distances,
        snir_db_direct=cols[0],
        snir_db_femto_access=np.full(n, lm.linear_to_db(access)),
        snir_db_backhaul=cols[1],
        ce_bpshz_direct=cols[2],
        ce_bpshz_relayed=cols[3],
        ce_bpshz_downlink_direct=cols[4],
        ce_bpshz_downlink_backhaul=cols[5],
        outage_direct=cols[6],
        outage_backhaul=cols[7],
        outage_access=np.full(n, p_acc),
        outage_relayed=cols[8],
        trials=spec.trials,
    )


def run_trace(config: ScenarioConfig, trace: MobilityTrace) -> TraceResult:
    """Replay backhaul selection along a trace and score the end-to-end path per sample.

    Reported SNIR and efficiency are those of the weaker hop (backhaul or
    FAP access) on the downlink; outage composes both hops.
    """
    _check(config, trace.violations())
    decisions = replay_decisions(trace.contexts(config.backhaul))
    draws = _draws(config, config.trials, config.seed)
    access = femto_access_snir(config)
    ce_access = lm.spectral_efficiency(access)
    p_acc = lm.outage_probability(access, lm.OutageThreshold(config.gamma_ms))
    g_tr = lm.OutageThreshold(config.gamma_transceiver)

    records = []
    for sample, decision in zip(trace.samples, decisions):
        if decision.choice == "macro":
            snir_bh = _point(config, sample.distance_m, draws)["snir_backhaul"]
            snir_lin = min(float(np.mean(snir_bh)), access)
            ce = float(np.mean(np.minimum(lm.spectral_efficiency(snir_bh), ce_access)))
            outage = float(np.mean(lm.relay_outage(lm.outage_probability(snir_bh, g_tr), p_acc)))
        elif decision.choice == "satellite":
            sat = config.satellite
            snir_lin = min(2.0**sat.spectral_efficiency_bpshz - 1.0, access)
            ce = min(sat.spectral_efficiency_bpshz, ce_access)
            outage = lm.relay_outage(sat.outage, p_acc)
        else:
            snir_lin, ce, outage = 0.0, 0.0, 1.0
        snir_db = 10.0 * math.log10(snir_lin) if snir_lin > 0 else -math.inf
        records.append(TraceRecord(sample.time_s, decision, snir_db, ce, outage))
    return TraceResult(records, count_switches(decisions))


def summarize(result: SweepResult, gamma_ms: float) -> SweepSummary:
    """Crossover distance and relayed-over-direct improvement ranges.

    The crossover is the first grid point whose direct mean SNIR falls
    below ``gamma_ms`` (linear). The relayed SNIR is the weaker of the
    backhaul and access hops.
    """
    if len(result) == 0:
        raise ValueError("cannot summarize an empty sweep")
    gamma_db = 10.0 * math.log10(gamma_ms)
    below = np.nonzero(result.snir_db_direct < gamma_db)[0]
    crossover = float(result.distance_m[below[0]]) if below.size else None
    relayed_db = np.minimum(result.snir_db_backhaul, result.snir_db_femto_access)
    gain = relayed_db - result.snir_db_direct
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = result.ce_bpshz_relayed / result.ce_bpshz_direct
    diff = result.outage_direct - result.outage_relayed
    return SweepSummary(
        crossover_distance_m=crossover,
        snir_gain_db_max=float(np.max(gain)),
        snir_gain_db_min=float(np.min(gain)),
        capacity_ratio_max=float(np.max(ratio)),
        capacity_ratio_min=float(np.min(ratio)),
        outage_reduction_max=float(np.max(diff)),
        outage_reduction_min=float(np.min(diff)),
    )
