import csv
import io
import json
import subprocess
import sys
from importlib import resources

import pytest

import oracle
from mobfemto.cli import SWEEP_COLUMNS, main
from mobfemto.configio import apply_overrides
from mobfemto.scenario import default_config

HEADER = "time_s,distance_m,speed_kmh,macro_available,satellite_available,at_port\n"
DEFAULT_CONFIG = str(resources.files("mobfemto").joinpath("data/default_config.json"))


def rows(path):
    return list(csv.reader(io.StringIO(path.read_text())))


class TestSweep:
    def test_default_grid(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--out", str(out)]) == 0
        r = rows(out)
        assert r[0] == SWEEP_COLUMNS
        assert ",".join(r[0]) == ("distance_m,snir_db_direct,snir_db_femto_access,snir_db_backhaul,"
                                  "ce_bpshz_direct,ce_bpshz_relayed,outage_direct,outage_relayed")
        assert len(r) == 31
        assert [float(x[0]) for x in r[1:]] == [100.0 * k for k in range(1, 31)]

    def test_shadow_free_single_trial_matches_oracle(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--out", str(out), "--set", "trials=1", "--set", "shadowing_sigma_db=0"]) == 0
        c = apply_overrides(default_config(), ["trials=1", "shadowing_sigma_db=0"])
        for row in rows(out)[1:]:
            ref = oracle.deterministic_point(c, float(row[0]))
            for name, cell in zip(SWEEP_COLUMNS, row):
                assert float(cell) == pytest.approx(float(ref[name]), rel=6e-6), name

    def test_six_significant_digits(self, tmp_path):
        out = tmp_path / "s.csv"
        main(["sweep", "--out", str(out)])
        for row in rows(out)[1:]:
            for cell in row:
                mantissa = cell.split("e")[0].replace("-", "").replace(".", "").lstrip("0")
                assert len(mantissa) <= 6

    def test_missing_config_writes_nothing(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", str(tmp_path / "nope.json"), "--out", str(out)]) == 2
        assert not out.exists()

    def test_invalid_config_exit_1(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"trials": 0}))
        out = tmp_path / "s.csv"
        assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 1
        assert "trials" in capsys.readouterr().err
        assert not out.exists()

    def test_unwritable_output(self, tmp_path):
        assert main(["sweep", "--out", str(tmp_path / "no" / "s.csv")]) == 2

    def test_unknown_override(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--set", "warp=9", "--out", str(out)]) == 1
        assert not out.exists()

    def test_seed_flag(self, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        main(["sweep", "--seed", "5", "--out", str(a)])
        main(["sweep", "--set", "seed=5", "--out", str(b)])
        main(["sweep", "--seed", "6", "--out", str(c)])
        assert a.read_bytes() == b.read_bytes() != c.read_bytes()

    def test_plot(self, tmp_path):
        out = tmp_path / "fig.csv"
        assert main(["sweep", "--out", str(out), "--plot"]) == 0
        for suffix in ("snir", "efficiency", "outage"):
            svg = tmp_path / f"fig_{suffix}.svg"
            assert svg.read_text().lstrip().startswith("<?xml")

    def test_stdout(self, capsys):
        assert main(["sweep", "--set", "trials=2"]) == 0
        assert capsys.readouterr().out.startswith("distance_m,")


class TestTrace:
    def test_high_speed_all_satellite(self, tmp_path):
        t = tmp_path / "t.csv"
        t.write_text(HEADER + "".join(f"{i},{500 + 100 * i},300,1,1,0\n" for i in range(10)))
        out = tmp_path / "o.csv"
        assert main(["trace", "--trace", str(t), "--out", str(out), "--set", "vehicle_class=high_speed"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "time_s,backhaul,snir_db,ce_bpshz,outage"
        assert [l.split(",")[1] for l in lines[1:-1]] == ["satellite"] * 10
        assert lines[-1] == "# switches=0"

    def test_empty_trace(self, tmp_path):
        t = tmp_path / "t.csv"
        t.write_text("")
        assert main(["trace", "--trace", str(t), "--out", str(tmp_path / "o.csv")]) == 1
        assert not (tmp_path / "o.csv").exists()

    def test_non_monotone_time_names_line(self, tmp_path, capsys):
        t = tmp_path / "t.csv"
        t.write_text(HEADER + "0,500,30,1,1,0\n5,500,30,1,1,0\n4,500,30,1,1,0\n")
        assert main(["trace", "--trace", str(t)]) == 1
        assert "line 4" in capsys.readouterr().err

    def test_missing_trace(self, tmp_path):
        assert main(["trace", "--trace", str(tmp_path / "missing.csv")]) == 2


class TestValidate:
    def test_shipped_default(self, capsys):
        assert main(["validate", "--config", DEFAULT_CONFIG]) == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_negative_penetration(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"macro": {"penetration_loss_db": -3}}))
        assert main(["validate", "--config", str(cfg)]) == 1
        assert "penetration_loss_db" in capsys.readouterr().err

    def test_gamma_zero(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"gamma_ms": 0}))
        assert main(["validate", "--config", str(cfg)]) == 1
        assert "gamma_ms" in capsys.readouterr().err

    def test_unreadable(self, tmp_path):
        assert main(["validate", "--config", str(tmp_path)]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mobfemto", "validate"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "ok"
