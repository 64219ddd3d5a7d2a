import math

import numpy as np
import pytest

from djcsim import IntegrationError
from djcsim.cli import main, parse_number

SINGLE_HEADER = "t,c_ab,pop1,pop2,pop_cav_a,pop_cav_b,norm,re_c1,im_c1,re_c2,im_c2"
DOUBLE_HEADER = "t,c_ab,p11,p2,p3,p4,p00,norm"
KERNEL_HEADER = "tau,re_k,im_k,abs_k"


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, {name: data[:, i] for i, name in enumerate(header)}


def test_parse_number():
    assert parse_number("0.5") == 0.5
    assert parse_number("pi") == pytest.approx(math.pi)
    assert parse_number("pi/4") == pytest.approx(math.pi / 4)
    assert parse_number("3pi/8") == pytest.approx(3 * math.pi / 8)
    with pytest.raises(ValueError):
        parse_number("two")


def test_single_mode_run_matches_closed_form(tmp_path):
    out = tmp_path / "run.csv"
    code = main(["single", "--modes", "1", "--theta", "pi/4",
                 "--tmax", repr(2 * math.pi), "--stride", "1",
                 "--out", str(out)])
    assert code == 0
    header, cols = read_csv(out)
    assert ",".join(header) == SINGLE_HEADER
    exact = math.sin(math.pi / 2) * np.cos(cols["t"]) ** 2
    assert np.max(np.abs(cols["c_ab"] - exact)) <= 1e-6
    assert np.max(np.abs(cols["norm"] - 1.0)) <= 1e-6
    assert cols["t"][0] == 0.0


def test_single_fields_initial_state(tmp_path):
    out = tmp_path / "fields.csv"
    code = main(["single", "--initial", "fields", "--modes", "3",
                 "--theta", "pi/6", "--tmax", "0.5", "--out", str(out)])
    assert code == 0
    _, cols = read_csv(out)
    assert cols["pop_cav_a"][0] == pytest.approx(0.75)
    assert cols["pop_cav_b"][0] == pytest.approx(0.25)
    assert cols["c_ab"][0] == 0.0


def test_double_run_columns_and_summary(tmp_path, capsys):
    out = tmp_path / "double.csv"
    code = main(["double", "--modes", "1", "--theta", "pi/4",
                 "--tmax", "3.0", "--out", str(out)])
    assert code == 0
    header, cols = read_csv(out)
    assert ",".join(header) == DOUBLE_HEADER
    assert cols["c_ab"][0] == pytest.approx(1.0)
    captured = capsys.readouterr().out
    assert "initial concurrence: 1.000000" in captured
    assert "Rabi-periodic" in captured  # single-mode note on predicted times


def test_angle_convention_controls_sudden_death(tmp_path):
    # theta = pi/6 < pi/4: the as-printed state never dies suddenly; the
    # swapped convention produces finite zero intervals
    printed = tmp_path / "printed.csv"
    swapped = tmp_path / "swapped.csv"
    for conv, out in (("printed", printed), ("swapped", swapped)):
        code = main(["double", "--modes", "1", "--theta", "pi/6",
                     "--tmax", repr(2 * math.pi), "--stride", "1",
                     "--angle-convention", conv, "--out", str(out)])
        assert code == 0
    _, cols_printed = read_csv(printed)
    _, cols_swapped = read_csv(swapped)
    assert np.all(cols_printed["c_ab"] > 0.0)
    zeros = cols_swapped["c_ab"] == 0.0
    assert zeros.any()
    # longest zero run spans a finite interval, not an isolated sample
    spans = np.flatnonzero(np.diff(np.concatenate(([0], zeros.view(np.int8), [0]))))
    longest = max(b - a for a, b in zip(spans[::2], spans[1::2]))
    t = cols_swapped["t"]
    assert longest * (t[1] - t[0]) > 0.5


def test_kernel_csv_maxima_at_round_trips(tmp_path):
    out = tmp_path / "kernel.csv"
    code = main(["kernel", "--modes", "19", "--profile", "uniform",
                 "--out", str(out)])
    assert code == 0
    header, cols = read_csv(out)
    assert ",".join(header) == KERNEL_HEADER
    t_r = 2 * math.pi * 670.0 / 4840.0
    mag = cols["abs_k"]
    taus = cols["tau"]
    assert mag[0] == pytest.approx(19.0)
    big = mag >= 0.5 * mag[0]
    # rephasing maxima at 0, t_r, 2 t_r and the boundary sample at 3 t_r
    clusters = taus[big]
    for m in range(4):
        assert np.min(np.abs(clusters - m * t_r)) <= taus[1] + 1e-12


def test_sweep_theta_initial_concurrences(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--axis", "theta", "--values", "pi/4,pi/6,pi/12",
                 "--modes", "1", "--tmax", "1.0", "--out", str(out)])
    assert code == 0
    expected = [1.0, math.sin(math.pi / 3), 0.5]
    for index, value in enumerate(expected):
        _, cols = read_csv(tmp_path / f"sweep_theta_{index:02d}.csv")
        assert cols["c_ab"][0] == pytest.approx(value, abs=1e-12)
    summary = (tmp_path / "sweep_summary.csv").read_text().splitlines()
    assert summary[0] == "value,first_revival_peak,first_dead_start"
    assert len(summary) == 4


def test_sweep_double_scenario(tmp_path):
    out = tmp_path / "dsweep.csv"
    code = main(["sweep", "--initial", "double", "--axis", "theta",
                 "--values", "pi/4", "--modes", "1", "--tmax", "1.0",
                 "--out", str(out)])
    assert code == 0
    header, cols = read_csv(tmp_path / "dsweep_theta_00.csv")
    assert ",".join(header) == DOUBLE_HEADER
    assert cols["c_ab"][0] == pytest.approx(1.0)


def test_sweep_fields_scenario(tmp_path):
    out = tmp_path / "fsweep.csv"
    code = main(["sweep", "--initial", "fields", "--axis", "length_ratio",
                 "--values", "670,1340", "--modes", "3", "--tmax", "0.5",
                 "--out", str(out)])
    assert code == 0
    _, cols = read_csv(tmp_path / "fsweep_length_ratio_01.csv")
    assert cols["pop_cav_a"][0] == pytest.approx(0.5)


def test_sweep_requires_axis_and_values(tmp_path, capsys):
    assert main(["sweep", "--values", "1,2"]) == 2
    assert "axis" in capsys.readouterr().err
    assert main(["sweep", "--axis", "theta"]) == 2
    assert "values" in capsys.readouterr().err
    assert main(["sweep", "--axis", "theta", "--values", " , "]) == 2
    assert "empty" in capsys.readouterr().err


def test_sweep_rejects_fractional_mode_count(capsys):
    assert main(["sweep", "--axis", "n_modes", "--values", "3.5"]) == 2
    assert "integer" in capsys.readouterr().err


def test_invalid_parameters_exit_2(tmp_path, capsys):
    assert main(["single", "--modes", "4", "--out", str(tmp_path / "x.csv")]) == 2
    assert "n_modes" in capsys.readouterr().err
    assert main(["single", "--theta", "3.0"]) == 2
    assert "theta" in capsys.readouterr().err
    assert main(["single", "--modes", "1", "--dt", "5.0",
                 "--out", str(tmp_path / "y.csv")]) == 2
    assert "stability" in capsys.readouterr().err


def test_unwritable_output_exits_2(capsys):
    code = main(["single", "--modes", "1", "--tmax", "0.5",
                 "--out", "/nonexistent-dir/run.csv"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_numerical_failure_exits_3(tmp_path, monkeypatch, capsys):
    import djcsim.cli as cli

    def blow_up(*args, **kwargs):
        raise IntegrationError("nonfinite amplitudes at t=1")

    monkeypatch.setattr(cli, "run_single", blow_up)
    code = main(["single", "--modes", "1", "--out", str(tmp_path / "z.csv")])
    assert code == 3
    assert "numerical failure" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("theta=pi/6\nmodes=3\ntmax=0.5\n# a comment\n")
    out1 = tmp_path / "a.csv"
    assert main(["single", "--config", str(cfg), "--out", str(out1)]) == 0
    _, cols = read_csv(out1)
    assert cols["c_ab"][0] == pytest.approx(math.sin(math.pi / 3))
    # the flag overrides the file value
    out2 = tmp_path / "b.csv"
    assert main(["single", "--config", str(cfg), "--theta", "pi/4",
                 "--out", str(out2)]) == 0
    _, cols = read_csv(out2)
    assert cols["c_ab"][0] == pytest.approx(1.0)


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("volume=11\n")
    assert main(["single", "--config", str(cfg)]) == 2
    assert "volume" in capsys.readouterr().err


def test_repeated_runs_are_byte_identical(tmp_path):
    args = ["single", "--modes", "19", "--profile", "uniform",
            "--tmax", "2.0", "--theta", "pi/4"]
    out1 = tmp_path / "r1.csv"
    out2 = tmp_path / "r2.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
