import json
from importlib import resources

import pytest

from mobfemto.configio import (
    TraceFormatError,
    apply_overrides,
    atomic_write,
    config_from_dict,
    config_to_dict,
    dump_config,
    load_config,
    parse_trace,
    resolve_key,
    trace_to_csv,
)
from mobfemto.scenario import ConfigError, InterferingBS, default_config, validate

HEADER = "time_s,distance_m,speed_kmh,macro_available,satellite_available,at_port\n"


def test_round_trip():
    c = default_config()
    assert config_from_dict(json.loads(dump_config(c))) == c


def test_shipped_default_matches_code():
    text = resources.files("mobfemto").joinpath("data/default_config.json").read_text()
    assert config_from_dict(json.loads(text)) == default_config()


def test_empty_object_is_defaults():
    assert config_from_dict({}) == default_config()


def test_partial_section_keeps_other_defaults():
    c = config_from_dict({"macro": {"penetration_loss_db": 5}})
    assert c.macro.penetration_loss_db == 5
    assert c.macro.bs_height_m == 100.0


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError, match="bogus"):
        config_from_dict({"bogus": 1})
    with pytest.raises(ConfigError, match="macro.bogus"):
        config_from_dict({"macro": {"bogus": 1}})


def test_interferers_from_json():
    c = config_from_dict({"noise": {"interferers": [{"position_m": 4000, "tx_power_dbm": 60}]}})
    assert c.noise.interferers == (InterferingBS(4000, 60),)
    assert config_to_dict(c)["noise"]["interferers"] == [{"position_m": 4000, "tx_power_dbm": 60}]


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"trials": 7}')
    assert load_config(p).trials == 7
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")


class TestOverrides:
    def test_leaf_name(self):
        c = apply_overrides(default_config(), ["trials=1", "shadowing_sigma_db=0"])
        assert c.trials == 1 and c.macro.shadowing_sigma_db == 0

    def test_dotted_path(self):
        c = apply_overrides(default_config(), ["femto.carrier_freq_mhz=2000"])
        assert c.femto.carrier_freq_mhz == 2000 and c.macro.carrier_freq_mhz == 1800

    def test_changes_exactly_one_field(self):
        base = config_to_dict(default_config())
        new = config_to_dict(apply_overrides(default_config(), ["gamma_ms=3"]))
        base["gamma_ms"] = 3
        assert new == base

    def test_string_value(self):
        c = apply_overrides(default_config(), ["vehicle_class=ship"])
        assert c.backhaul.vehicle_class == "ship"

    def test_unknown_and_ambiguous(self):
        with pytest.raises(ConfigError, match="unknown"):
            apply_overrides(default_config(), ["nope=1"])
        with pytest.raises(ConfigError, match="ambiguous"):
            resolve_key("carrier_freq_mhz", default_config())
        with pytest.raises(ConfigError):
            apply_overrides(default_config(), ["trials"])

    def test_bad_value_reaches_validation(self):
        c = apply_overrides(default_config(), ["trials=0"])
        assert validate(c) == ["trials: must be an integer >= 1"]


class TestTraceParsing:
    def test_parse(self):
        t = parse_trace(HEADER + "0,100,50,1,0,0\n1.5,200,60,0,1,1\n")
        assert len(t.samples) == 2
        s = t.samples[1]
        assert (s.time_s, s.distance_m, s.speed_kmh) == (1.5, 200, 60)
        assert (s.macro_available, s.satellite_available, s.at_port) == (False, True, True)

    def test_round_trip(self):
        t = parse_trace(HEADER + "0,100,50,1,0,0\n1.5,200,60,0,1,1\n")
        assert parse_trace(trace_to_csv(t)) == t

    @pytest.mark.parametrize(
        "body, line",
        [
            ("0,100,50,1,1,0\n0,100,50,1,1,0\n", 3),
            ("0,100,50,1,1,0\n1,100,50,2,1,0\n", 3),
            ("0,100,50,1,1\n", 2),
            ("0,-5,50,1,1,0\n", 2),
            ("0,100,abc,1,1,0\n", 2),
            ("0,100,-1,1,1,0\n", 2),
        ],
    )
    def test_errors_name_line(self, body, line):
        with pytest.raises(TraceFormatError) as exc:
            parse_trace(HEADER + body)
        assert exc.value.line == line
        assert f"line {line}" in str(exc.value)

    def test_empty(self):
        with pytest.raises(TraceFormatError):
            parse_trace("")
        with pytest.raises(TraceFormatError):
            parse_trace(HEADER)

    def test_bad_header(self):
        with pytest.raises(TraceFormatError) as exc:
            parse_trace("t,d\n0,1\n")
        assert exc.value.line == 1


def test_atomic_write(tmp_path):
    p = tmp_path / "out.csv"
    atomic_write(p, "a,b\n")
    assert p.read_text() == "a,b\n"
    assert [x.name for x in tmp_path.iterdir()] == ["out.csv"]
    with pytest.raises(OSError):
        atomic_write(tmp_path / "missing_dir" / "x.csv", "data")
