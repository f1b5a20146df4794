"""Path-loss models for the macrocell and in-vehicle femtocell links.

Macro links use the Hata-style urban formula with a mobile-antenna
correction term; distances are in kilometres. Femto links use the
indoor distance-power law; distances are in metres. Shadowing is a
zero-mean normal offset in dB whose random stream is keyed by
``(seed, trial_index, link_id)`` so every draw can be reproduced in
isolation.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MacroPropagationParams:
    carrier_freq_mhz: float = 1800.0
    bs_height_m: float = 100.0
    ms_height_m: float = 1.5
    shadowing_sigma_db: float = 8.0
    penetration_loss_db: float = 20.0

    def violations(self, prefix: str = "macro") -> list[str]:
        out = []
        for name in ("carrier_freq_mhz", "bs_height_m", "ms_height_m"):
            if not getattr(self, name) > 0:
                out.append(f"{prefix}.{name}: must be > 0")
        for name in ("shadowing_sigma_db", "penetration_loss_db"):
            if not getattr(self, name) >= 0:
                out.append(f"{prefix}.{name}: must be >= 0")
        return out


@dataclass(frozen=True)
class FemtoPropagationParams:
    carrier_freq_mhz: float = 1800.0
    distance_decay_coeff: float = 30.0
    wall_count: int = 0

    def violations(self, prefix: str = "femto") -> list[str]:
        out = []
        for name in ("carrier_freq_mhz", "distance_decay_coeff"):
            if not getattr(self, name) > 0:
                out.append(f"{prefix}.{name}: must be > 0")
        if not isinstance(self.wall_count, int) or isinstance(self.wall_count, bool):
            out.append(f"{prefix}.wall_count: must be an integer")
        elif self.wall_count < 0:
            out.append(f"{prefix}.wall_count: must be >= 0")
        return out


@dataclass(frozen=True)
class ShadowingSample:
    offset_db: float = 0.0


NO_SHADOW = ShadowingSample(0.0)


def ms_antenna_correction(carrier_freq_mhz: float, ms_height_m: float) -> float:
    """Mobile antenna height correction a(h_m) in dB."""
    if not carrier_freq_mhz > 0:
        raise ValueError(f"carrier_freq_mhz must be > 0, got {carrier_freq_mhz}")
    if not ms_height_m > 0:
        raise ValueError(f"ms_height_m must be > 0, got {ms_height_m}")
    log_f = math.log10(carrier_freq_mhz)
    return (1.1 * log_f - 0.7) * ms_height_m - (1.56 * log_f - 0.8)


def macro_distance_slope_db(bs_height_m: float) -> float:
    """Path-loss increase per decade of distance for a BS of the given height."""
    return 44.9 - 6.55 * math.log10(bs_height_m)


def macro_path_loss(
    params: MacroPropagationParams,
    distance_km: float,
    indoor_vehicle: bool = False,
    shadow: ShadowingSample = NO_SHADOW,
) -> float:
    """Macrocell path loss in dB.

    ``indoor_vehicle`` adds the vehicle-body penetration loss, i.e. the
    receiver sits inside the vehicle rather than on its roof.
    """
    if not distance_km > 0:
        raise ValueError(f"distance_km must be > 0, got {distance_km}")
    if not params.bs_height_m > 0:
        raise ValueError(f"bs_height_m must be > 0, got {params.bs_height_m}")
    f = params.carrier_freq_mhz
    loss = (
        36.55
        + 26.16 * math.log10(f)
        - 3.82 * math.log10(params.bs_height_m)
        - ms_antenna_correction(f, params.ms_height_m)
        + macro_distance_slope_db(params.bs_height_m) * math.log10(distance_km)
        + shadow.offset_db
    )
    if indoor_vehicle:
        loss += params.penetration_loss_db
    return loss


def femto_path_loss(
    params: FemtoPropagationParams, distance_m: float, through_wall: bool = False
) -> float:
    """Femtocell path loss in dB; ``through_wall`` adds 4 dB per squared wall count."""
    if not distance_m > 0:
        raise ValueError(f"distance_m must be > 0, got {distance_m}")
    if not params.carrier_freq_mhz > 0:
        raise ValueError(f"carrier_freq_mhz must be > 0, got {params.carrier_freq_mhz}")
    loss = (
        20.0 * math.log10(params.carrier_freq_mhz)
        + params.distance_decay_coeff * math.log10(distance_m)
        - 28.0
    )
    if through_wall:
        if params.wall_count < 1:
            raise ValueError("through_wall requires wall_count >= 1")
        loss += 4.0 * params.wall_count**2
    return loss


def link_code(link_id: str) -> int:
    return zlib.crc32(link_id.encode("utf-8"))


def _generator(seed: int, trial_index: int, link_id: str) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial_index, link_code(link_id)))
    return np.random.default_rng(ss)


def sample_shadowing(
    sigma_db: float, seed: int, trial_index: int, link_id: str
) -> ShadowingSample:
    if not sigma_db >= 0:
        raise ValueError(f"sigma_db must be >= 0, got {sigma_db}")
    if sigma_db == 0:
        return NO_SHADOW
    z = _generator(seed, trial_index, link_id).standard_normal()
    return ShadowingSample(float(sigma_db * z))


def standard_normals(seed: int, trial_indices, link_id: str) -> np.ndarray:
    """Unit normal draw per trial, identical to what ``sample_shadowing`` uses."""
    return np.array(
        [_generator(seed, int(t), link_id).standard_normal() for t in trial_indices],
        dtype=float,
    )
