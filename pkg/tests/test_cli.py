import csv
import json
import math
import subprocess
import sys

import pytest

from casimir_spectrum import __version__
from casimir_spectrum.cli import (
    ConfigError,
    RunConfig,
    load_config,
    main,
    parse_config_text,
    round9,
)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def run(*args):
    return main(list(args))


class TestConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("")
        cfg = load_config(cfg_file)
        assert cfg == RunConfig()
        system = cfg.system()
        assert system.gap == 1e-4 and system.temperature == 300.0
        assert (system.metal.sigma0, system.metal.tau) == (3e17, 1.88e-14)

    def test_flags_override_file(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("temp_k = 600  # hot\n# comment line\n\nmodel = Dielectric\n")
        cfg = load_config(cfg_file, {"temp_k": 300.0, "gap_um": None})
        assert cfg.temp_k == 300.0 and cfg.model == "dielectric" and cfg.gap_um == 1.0

    def test_unknown_key_has_line_number(self):
        with pytest.raises(ConfigError, match=r"<config>:2: unknown key 'colour'"):
            parse_config_text("gap_um = 1\ncolour = red\n")

    def test_parse_errors_listed(self):
        with pytest.raises(ConfigError) as info:
            parse_config_text("gap_um = wide\nnot a pair\npoints = 2.5\n")
        assert len(info.value.problems) == 3
        assert info.value.problems[1].startswith("<config>:2:")

    def test_range_violations_listed_exhaustively(self):
        with pytest.raises(ConfigError) as info:
            load_config(overrides={"gap_um": -1.0, "temp_k": 0.0, "model": "steel", "points": 1})
        text = " ".join(info.value.problems)
        assert len(info.value.problems) == 4
        for field in ("gap_um", "temp_k", "model", "points"):
            assert field in text

    def test_bound_hi_auto(self):
        assert parse_config_text("bound_hi = auto\n")["bound_hi"] is None
        assert load_config(overrides={"bound_hi": 2e14}).bounds().omega_hi == 2e14

    def test_mode_contour_expansion(self):
        cfg = load_config(overrides={"mode": "both", "contour": "c2"})
        assert [m.value for m in cfg.modes] == ["te", "tm"]
        assert [c.value for c in cfg.contours] == ["c2"]


def test_round9():
    assert round9(1.0 / 3.0) == 0.333333333
    assert round9({"a": [2.0 / 3.0, 1], "b": "x"}) == {"a": [0.666666667, 1], "b": "x"}
    assert math.isnan(round9(math.nan))


class TestSpectrum:
    def test_defaults(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run("spectrum", "--out", str(out)) == 0
        rows = read_csv(out)
        assert rows[0] == ["omega_rad_s", "log10_omega", "f_te_c1_impedance", "f_te_c2_impedance"]
        assert len(rows) == 401
        assert b"\r" not in out.read_bytes()
        assert float(rows[1][0]) == pytest.approx(1e10) and float(rows[-1][1]) == pytest.approx(14.0)

    def test_perfect_c2_column_is_zero(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run("spectrum", "--model", "perfect", "--contour", "c2", "--mode", "both",
                   "--points", "30", "--out", str(out)) == 0
        rows = read_csv(out)
        assert rows[0][2:] == ["f_te_c2_perfect", "f_tm_c2_perfect"]
        assert all(float(v) == 0.0 for r in rows[1:] for v in r[2:])

    @pytest.mark.parametrize("mode, contour, ncols", [("te", "c1", 3), ("both", "c1", 4), ("both", "both", 6)])
    def test_column_count(self, tmp_path, mode, contour, ncols):
        out = tmp_path / "s.csv"
        run("spectrum", "--mode", mode, "--contour", contour, "--points", "3", "--out", str(out))
        assert all(len(r) == ncols for r in read_csv(out))

    def test_failed_points_are_nan(self, tmp_path, capsys):
        cfg = tmp_path / "starved.cfg"
        cfg.write_text("max_subdivisions = 1\nrel_tol = 1e-15\nabs_tol = 0\npoints = 3\n")
        out = tmp_path / "s.csv"
        assert run("spectrum", "--config", str(cfg), "--out", str(out)) == 2
        assert "nan" in read_csv(out)[1]
        assert "warning: omega=" in capsys.readouterr().err

    def test_numbers_are_nine_digits(self, tmp_path):
        out = tmp_path / "s.csv"
        run("spectrum", "--points", "5", "--out", str(out))
        for row in read_csv(out)[1:]:
            for v in row:
                assert float(f"{float(v):.9g}") == float(v)


@pytest.fixture(scope="module")
def doc(tmp_path_factory):
    out = tmp_path_factory.mktemp("force") / "f.json"
    assert main(["force", "--out", str(out)]) == 0
    return json.loads(out.read_text(encoding="utf-8")), out


class TestForce:
    def test_structure(self, doc):
        d, _ = doc
        assert d["tool"] == "casimir-spectrum" and d["version"] == __version__
        assert list(d)[:4] == ["tool", "version", "command", "config"]
        assert d["converged"] is True
        assert set(d["ratios"]) == {"c2_over_c1_te", "total_over_perfect_conductor", "te_total_over_perfect_conductor_te"}

    def test_headline_ratio(self, doc):
        assert doc[0]["ratios"]["c2_over_c1_te"] == pytest.approx(38, rel=0.15)

    def test_nine_significant_digits(self, doc):
        d, _ = doc
        for comp in d["components"].values():
            assert float(f"{comp['force']:.9g}") == comp["force"]

    def test_echo_reproduces(self, doc, tmp_path):
        d, _ = doc
        cfg = tmp_path / "echo.cfg"
        lines = [f"{k} = {'auto' if v is None and k == 'bound_hi' else v}" for k, v in d["config"].items() if v is not None]
        cfg.write_text("\n".join(lines) + "\n")
        out = tmp_path / "again.json"
        assert main(["force", "--config", str(cfg), "--out", str(out)]) == 0
        again = json.loads(out.read_text())
        assert again["components"] == d["components"] and again["ratios"] == d["ratios"]

    def test_perfect_conductor(self, tmp_path):
        out = tmp_path / "pc.json"
        assert main(["force", "--model", "perfect", "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        assert d["ratios"]["total_over_perfect_conductor"] == 1.0
        assert d["components"]["te_c2_perfect"]["force"] == 0.0

    def test_wider_bound_shifts_little(self, tmp_path):
        docs = []
        for hi in ("1e14", "3e14"):
            out = tmp_path / f"{hi}.json"
            assert main(["force", "--bound-hi", hi, "--out", str(out)]) == 0
            docs.append(json.loads(out.read_text()))
        totals = [sum(c["force"] for k, c in d["components"].items() if k.endswith("impedance")) for d in docs]
        assert abs(totals[1] - totals[0]) < 0.05 * abs(totals[0])


def test_compare(tmp_path):
    out = tmp_path / "cmp.json"
    assert main(["compare", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["te_c2_sign"] == {"impedance": 1, "dielectric": -1} and d["te_c2_sign_flip"] is True
    assert abs(d["sectors"]["tm"]["relative_difference"]) < 1e-2
    rows = read_csv(tmp_path / "cmp.csv")
    assert rows[0] == ["sector", "impedance", "dielectric", "relative_difference", "sign_impedance", "sign_dielectric"]
    te_c2 = next(r for r in rows if r[0] == "te_c2")
    assert te_c2[4:] == ["1", "-1"]


class TestExitCodes:
    def test_validation(self, tmp_path, capsys):
        assert main(["force", "--gap-um", "-1", "--out", str(tmp_path / "x.json")]) == 1
        assert "gap_um" in capsys.readouterr().err

    def test_bad_config_file(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("gap = 1\n")
        assert main(["spectrum", "--config", str(cfg)]) == 1

    def test_missing_config_file(self, tmp_path):
        assert main(["spectrum", "--config", str(tmp_path / "nope.cfg")]) == 3

    def test_unwritable_output(self, tmp_path):
        assert main(["spectrum", "--points", "2", "--out", str(tmp_path / "no" / "dir.csv")]) == 3

    def test_nonconvergence(self, tmp_path):
        cfg = tmp_path / "starved.cfg"
        cfg.write_text("max_subdivisions = 1\nrel_tol = 1e-15\nabs_tol = 0\n")
        assert main(["force", "--config", str(cfg), "--out", str(tmp_path / "f.json")]) == 2

    def test_bad_choice_is_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["spectrum", "--model", "steel"])
        assert info.value.code == 1


def test_console_script_stdout():
    proc = subprocess.run(
        [sys.executable, "-m", "casimir_spectrum.cli", "spectrum", "--points", "2", "--out", "-"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[0].startswith("omega_rad_s,log10_omega")
