"""SVG plots of a sweep: SNIR, uplink efficiency and outage against distance."""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .configio import atomic_write  # noqa: E402

_PANELS = [
    ("snir", "Mean SNIR [dB]", [
        ("snir_db_femto_access", "MS from in-vehicle FAP"),
        ("snir_db_direct", "MS from macro BS (inside vehicle)"),
        ("snir_db_backhaul", "Outside transceiver from macro BS"),
    ]),
    ("efficiency", "Uplink spectral efficiency [bps/Hz]", [
        ("ce_bpshz_relayed", "Outside transceiver to macro BS"),
        ("ce_bpshz_direct", "MS to macro BS"),
    ]),
    ("outage", "Outage probability", [
        ("outage_relayed", "Via mobile femtocell"),
        ("outage_direct", "Direct from macro BS"),
    ]),
]


def write_sweep_plots(result, csv_path: Path) -> list[Path]:
    written = []
    with plt.rc_context({"svg.hashsalt": "mobfemto"}):
        for suffix, ylabel, series in _PANELS:
            written.append(_panel(result, csv_path, suffix, ylabel, series))
    return written


def _panel(result, csv_path, suffix, ylabel, series) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    for attr, label in series:
        ax.plot(result.distance_m, getattr(result, attr), marker="o", markersize=3, label=label)
    ax.set_xlabel("Distance between macro BS and vehicle [m]")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    buf = io.StringIO()
    # fixed hashsalt and no date keep the SVG reproducible
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    path = csv_path.with_name(f"{csv_path.stem}_{suffix}.svg")
    atomic_write(path, buf.getvalue())
    return path
