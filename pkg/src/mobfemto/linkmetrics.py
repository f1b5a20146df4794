"""Received power, SNIR, Shannon efficiency and outage for single and relayed links."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

THERMAL_NOISE_DBM_PER_HZ = -174.0


@dataclass(frozen=True)
class LinkPowers:
    desired_w: float
    femto_interference_w: float = 0.0
    macro_interference_w: float = 0.0
    noise_w: float = 1e-12

    def __post_init__(self):
        for name in ("desired_w", "femto_interference_w", "macro_interference_w"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.noise_w > 0:
            raise ValueError("noise_w must be > 0")

    @property
    def interference_plus_noise_w(self) -> float:
        return self.femto_interference_w + self.macro_interference_w + self.noise_w


@dataclass(frozen=True)
class OutageThreshold:
    gamma_linear: float

    def __post_init__(self):
        if not self.gamma_linear > 0:
            raise ValueError(f"gamma_linear must be > 0, got {self.gamma_linear}")


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dbm: float
    path_loss_db: float
    tx_gain_dbi: float = 0.0
    rx_gain_dbi: float = 0.0

    @property
    def rx_power_dbm(self) -> float:
        return self.tx_power_dbm + self.tx_gain_dbi + self.rx_gain_dbi - self.path_loss_db


def dbm_to_watts(dbm):
    if np.ndim(dbm):
        return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts):
    if np.ndim(watts):
        return 10.0 * np.log10(watts) + 30.0
    return 10.0 * math.log10(watts) + 30.0


def linear_to_db(x):
    return 10.0 * np.log10(x)


def db_to_linear(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def thermal_noise_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    if not bandwidth_hz > 0:
        raise ValueError("bandwidth_hz must be > 0")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def received_power(budget: LinkBudget) -> float:
    """Received power in watts."""
    values = (budget.tx_power_dbm, budget.path_loss_db, budget.tx_gain_dbi, budget.rx_gain_dbi)
    if not all(math.isfinite(v) for v in values):
        raise ValueError("link budget fields must be finite")
    return dbm_to_watts(budget.rx_power_dbm)


def snir(powers: LinkPowers) -> float:
    return powers.desired_w / powers.interference_plus_noise_w


def spectral_efficiency(snir_linear):
    """Shannon efficiency log2(1 + SNIR) in bps/Hz; accepts scalars or arrays."""
    x = np.asarray(snir_linear, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("snir_linear must be >= 0")
    out = np.log2(1.0 + x)
    return float(out) if out.ndim == 0 else out


def outage_probability(mean_snir_linear, threshold: OutageThreshold):
    """Closed-form outage under Rayleigh fading of the desired signal.

    With the received desired power exponential about its mean and the
    interference plus noise held fixed, P(SNIR < gamma) = 1 - exp(-gamma / mean).
    """
    x = np.asarray(mean_snir_linear, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("mean_snir_linear must be > 0")
    out = -np.expm1(-threshold.gamma_linear / x)
    return float(out) if out.ndim == 0 else out


def outage_probability_empirical(snir_samples, threshold: OutageThreshold) -> float:
    samples = np.asarray(snir_samples, dtype=float)
    if samples.size == 0:
        raise ValueError("snir_samples must be non-empty")
    return float(np.count_nonzero(samples < threshold.gamma_linear)) / samples.size


def relay_outage(backhaul_outage, access_outage):
    """End-to-end outage of a two-hop path that fails when either hop fails."""
    p_b = np.asarray(backhaul_outage, dtype=float)
    p_a = np.asarray(access_outage, dtype=float)
    for p in (p_b, p_a):
        if np.any(~((p >= 0) & (p <= 1))):
            raise ValueError("outage probabilities must lie in [0, 1]")
    # hi + lo*(1 - hi) keeps (0, p) -> p and (1, x) -> 1 exact in floating point
    hi = np.maximum(p_b, p_a)
    lo = np.minimum(p_b, p_a)
    out = np.minimum(hi + lo * (1.0 - hi), 1.0)
    return float(out) if out.ndim == 0 else out
