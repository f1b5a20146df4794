"""JSON scenario files, ``key=value`` overrides and mobility-trace CSV parsing.

A scenario file is a JSON object whose keys mirror :class:`ScenarioConfig`;
nested sections (``macro``, ``femto``, ``noise``...) mirror the nested
dataclasses. Any key left out keeps its default value, so ``{}`` is a
valid file.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

from .propagation import FemtoPropagationParams, MacroPropagationParams
from .scenario import (
    BackhaulPolicy,
    ConfigError,
    InterferingBS,
    MobilityTrace,
    NodeSpec,
    NoiseSettings,
    SatelliteLink,
    ScenarioConfig,
    SweepGrid,
    TraceSample,
    default_config,
)

TRACE_HEADER = ["time_s", "distance_m", "speed_kmh", "macro_available", "satellite_available", "at_port"]

_SECTIONS = {
    "macro_bs": NodeSpec,
    "outside_transceiver": NodeSpec,
    "fap": NodeSpec,
    "ms": NodeSpec,
    "macro": MacroPropagationParams,
    "femto": FemtoPropagationParams,
    "noise": NoiseSettings,
    "satellite": SatelliteLink,
    "backhaul": BackhaulPolicy,
    "sweep": SweepGrid,
}


class TraceFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def config_to_dict(config: ScenarioConfig) -> dict[str, Any]:
    d = dataclasses.asdict(config)
    d["noise"]["interferers"] = [dict(i) for i in d["noise"]["interferers"]]
    return d


def _build(cls, data: dict, base, path: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError([f"{path}.{k}: unknown key" for k in unknown])
    values = {**dataclasses.asdict(base), **data} if base is not None else dict(data)
    if cls is NoiseSettings:
        values["interferers"] = _interferers(values.get("interferers", ()), f"{path}.interferers")
    try:
        return cls(**{k: v for k, v in values.items() if k in names})
    except TypeError as exc:
        raise ConfigError([f"{path}: {exc}"]) from None


def _interferers(items, path: str) -> tuple[InterferingBS, ...]:
    if isinstance(items, tuple) and all(isinstance(i, InterferingBS) for i in items):
        return items
    if not isinstance(items, (list, tuple)):
        raise ConfigError([f"{path}: must be a list"])
    out = []
    for i, item in enumerate(items):
        if isinstance(item, InterferingBS):
            out.append(item)
        elif isinstance(item, dict):
            out.append(_build(InterferingBS, item, None, f"{path}[{i}]"))
        else:
            raise ConfigError([f"{path}[{i}]: must be an object"])
    return tuple(out)


def config_from_dict(data: dict[str, Any]) -> ScenarioConfig:
    """Overlay ``data`` onto the defaults; raises ConfigError for unknown or mistyped keys."""
    if not isinstance(data, dict):
        raise ConfigError(["config: top level must be an object"])
    base = default_config()
    top = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = sorted(set(data) - top)
    if unknown:
        raise ConfigError([f"{k}: unknown key" for k in unknown])
    values = {}
    for name in top:
        current = getattr(base, name)
        if name not in data:
            values[name] = current
        elif name in _SECTIONS:
            section = data[name]
            if not isinstance(section, dict):
                raise ConfigError([f"{name}: must be an object"])
            values[name] = _build(_SECTIONS[name], section, current, name)
        else:
            values[name] = data[name]
    return ScenarioConfig(**values)


def load_config(path: str | os.PathLike) -> ScenarioConfig:
    """Read a JSON scenario file. OSError propagates; bad content raises ConfigError."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: invalid JSON ({exc})"]) from None
    return config_from_dict(data)


def dump_config(config: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2) + "\n"


def _leaf_paths(d: dict, prefix: str = "") -> list[str]:
    out = []
    for k, v in d.items():
        path = f"{prefix}{k}"
        if isinstance(v, dict):
            out += _leaf_paths(v, path + ".")
        else:
            out.append(path)
    return out


def resolve_key(key: str, config: ScenarioConfig) -> str:
    """Map a dotted path or an unambiguous leaf name to its dotted path."""
    paths = _leaf_paths(config_to_dict(config))
    if key in paths:
        return key
    matches = [p for p in paths if p.rsplit(".", 1)[-1] == key]
    if len(matches) == 1:
        return matches[0]
    if not matches:
        raise ConfigError([f"{key}: unknown key"])
    raise ConfigError([f"{key}: ambiguous, use one of {', '.join(matches)}"])


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(config: ScenarioConfig, assignments: Iterable[str]) -> ScenarioConfig:
    """Apply ``key=value`` strings; values are read as JSON, falling back to plain strings."""
    data = config_to_dict(config)
    for item in assignments:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError([f"{item!r}: expected key=value"])
        node = data
        *parents, leaf = resolve_key(key.strip(), config).split(".")
        for p in parents:
            node = node[p]
        node[leaf] = _parse_value(raw.strip())
    return config_from_dict(data)


# --- traces ----------------------------------------------------------------------


def _flag(text: str, line: int, column: str) -> bool:
    if text == "1":
        return True
    if text == "0":
        return False
    raise TraceFormatError(line, f"{column} must be 0 or 1, got {text!r}")


def _number(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise TraceFormatError(line, f"{column} is not a number: {text!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise TraceFormatError(line, f"{column} must be finite")
    return value


def parse_trace(text: str) -> MobilityTrace:
    """Parse trace CSV text; line numbers in errors count the header as line 1."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise TraceFormatError(1, "empty trace file")
    header = [h.strip() for h in rows[0]]
    if header != TRACE_HEADER:
        raise TraceFormatError(1, f"header must be {','.join(TRACE_HEADER)}")
    samples = []
    prev_time = None
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(TRACE_HEADER):
            raise TraceFormatError(line, f"expected {len(TRACE_HEADER)} fields, got {len(row)}")
        cells = [c.strip() for c in row]
        t = _number(cells[0], line, "time_s")
        dist = _number(cells[1], line, "distance_m")
        speed = _number(cells[2], line, "speed_kmh")
        if prev_time is not None and not t > prev_time:
            raise TraceFormatError(line, "time_s must be strictly increasing")
        if not dist > 0:
            raise TraceFormatError(line, "distance_m must be > 0")
        if not speed >= 0:
            raise TraceFormatError(line, "speed_kmh must be >= 0")
        samples.append(
            TraceSample(
                t, dist, speed,
                _flag(cells[3], line, "macro_available"),
                _flag(cells[4], line, "satellite_available"),
                _flag(cells[5], line, "at_port"),
            )
        )
        prev_time = t
    if not samples:
        raise TraceFormatError(2, "trace has no samples")
    return MobilityTrace(tuple(samples))


def load_trace(path: str | os.PathLike) -> MobilityTrace:
    return parse_trace(Path(path).read_text(encoding="utf-8"))


def trace_to_csv(trace: MobilityTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for s in trace.samples:
        w.writerow([repr(s.time_s), repr(s.distance_m), repr(s.speed_kmh),
                    int(s.macro_available), int(s.satellite_available), int(s.at_port)])
    return buf.getvalue()


def atomic_write(path: str | os.PathLike, data: str | bytes) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
