"""Command-line interface tests: configs, outputs, exit codes, determinism."""

import csv
import json
import math

import pytest

from afc.analytic import efficiency_backward
from afc.cli import main

TWO_PI = 2.0 * math.pi

COMB_CFG = """\
# desk-scale comb
delta_hz = 100e3
big_gamma_hz = 3e6
finesse = 10
d = 40
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestAnalyticCommand:
    def test_point_evaluation(self, capsys):
        assert main(["analytic", "--d", "40", "--finesse", "10"]) == 0
        out = capsys.readouterr().out
        assert "eta = 0.905" in out

    def test_spin_loss_multiplier(self, capsys):
        assert main(["analytic", "--d", "40", "--finesse", "10",
                     "--spin-loss", "0.7"]) == 0
        out = capsys.readouterr().out
        expected = efficiency_backward(40.0, 10.0) * 0.49
        assert f"eta = {expected:.3f}" in out

    def test_missing_arguments(self, capsys):
        assert main(["analytic"]) == 2

    def test_figure3_outputs(self, tmp_path, capsys):
        assert main(["analytic", "--figure", "3",
                     "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "figure3.csv")
        assert header == ["finesse", "eta_d5", "eta_d10", "eta_d20",
                         "eta_d40"]
        assert len(rows) > 50
        assert (tmp_path / "figure3.png").exists()


class TestCombCommand:
    def test_outputs(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG)
        out = tmp_path / "out"
        assert main(["comb", "--params", cfg, "--out", str(out),
                     "--ft"]) == 0
        header, rows = read_csv(out / "comb.csv")
        assert header == ["delta_hz", "density"]
        assert len(rows) == 2001
        center = min(rows, key=lambda r: abs(float(r[0])))
        assert float(center[1]) == pytest.approx(1.0, abs=0.01)
        ft_header, ft_rows = read_csv(out / "comb_ft.csv")
        assert ft_header == ["t_s", "re", "im", "abs"]
        assert (out / "comb.png").exists()

    def test_missing_config(self, tmp_path, capsys):
        assert main(["comb", "--params", str(tmp_path / "nope.cfg"),
                     "--out", str(tmp_path)]) == 2
        assert not (tmp_path / "comb.csv").exists()

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG + "volume = 11\n")
        assert main(["comb", "--params", cfg, "--out", str(tmp_path)]) == 2
        err = capsys.readouterr().err
        assert "volume" in err and ":6" in err
        assert not (tmp_path / "comb.csv").exists()

    def test_conflicting_width_keys(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG + "gamma_fwhm_hz = 10e3\n")
        assert main(["comb", "--params", cfg, "--out", str(tmp_path)]) == 2

    def test_byte_identical_reruns(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG)
        for d in ("a", "b"):
            assert main(["comb", "--params", cfg, "--ft",
                         "--out", str(tmp_path / d)]) == 0
        for name in ("comb.csv", "comb_ft.csv", "comb.png"):
            assert (tmp_path / "a" / name).read_bytes() \
                == (tmp_path / "b" / name).read_bytes(), name


class TestSimulateCommand:
    def test_backward_run(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        result = json.loads((out / "result.json").read_text())
        assert abs(result["eta"] - result["eta_analytic"]) < 0.02
        assert result["in_regime"] is True
        assert abs(result["echo_delay_s"] - result["rephasing_period_s"]) \
            < 1e-7
        header, rows = read_csv(out / "fields.csv")
        assert header == ["t_s", "abs_e_in", "phase_in_rad", "abs_e_trans",
                          "phase_trans_rad", "abs_e_out", "phase_out_rad"]
        assert len(rows) > 100
        assert (out / "fields.png").exists()

    def test_forward_with_flip_rejected(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG
                        + "retrieval = forward\nflip_time_s = 1e-5\n")
        assert main(["simulate", "--config", cfg,
                     "--out", str(tmp_path)]) == 2

    def test_zero_depth_rejected(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG.replace("d = 40", "d = 0"))
        assert main(["simulate", "--config", cfg,
                     "--out", str(tmp_path)]) == 2


class TestMultimodeCommand:
    def test_small_train(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG + "n_modes = 2\n")
        out = tmp_path / "out"
        assert main(["multimode", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out / "modes.csv")
        assert header == ["k", "eta_k", "centroid_in_s", "centroid_out_s"]
        assert len(rows) == 2
        ct_header, ct_rows = read_csv(out / "crosstalk.csv")
        assert ct_header == ["k", "j", "overlap_sq"]
        assert len(ct_rows) == 4
        summary = json.loads((out / "result.json").read_text())
        assert summary["fifo_order"] is True
        assert 0.0 < summary["eta_mean"] <= 1.0
        assert (out / "modes.png").exists()

    def test_oversized_train_rejected(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, COMB_CFG + "n_modes = 500\n")
        assert main(["multimode", "--config", cfg,
                     "--out", str(tmp_path)]) == 2


class TestCapacityCommand:
    def test_europium_report(self, capsys):
        assert main(["capacity", "--material", "eu_yso",
                     "--gamma-khz", "2", "--finesse", "10"]) == 0
        out = capsys.readouterr().out
        payload = json.loads(out[:out.index("\n\n")])
        assert payload["n_peaks"] == 600
        assert payload["n_modes"] == 100
        assert "CRIB-equivalent d" in out

    def test_writes_artifacts(self, tmp_path, capsys):
        assert main(["capacity", "--material", "eu_yso",
                     "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "capacity.json").read_text())
        assert payload["material"] == "eu_yso"
        assert (tmp_path / "capacity.png").exists()

    def test_unknown_material(self, capsys):
        assert main(["capacity", "--material", "kryptonite"]) == 2

    def test_unreachable_target(self, capsys):
        assert main(["capacity", "--material", "tm_yag",
                     "--target-eta", "0.95"]) == 1


class TestReproduceCommand:
    def test_figure2_analytic_only(self, tmp_path, capsys):
        assert main(["reproduce", "figure2", "--analytic-only",
                     "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "figure2_curves.csv")
        assert header == ["d", "eta_F4", "eta_F6", "eta_F10"]
        anchor = [r for r in rows if float(r[0]) == 40.0][0]
        assert float(anchor[3]) == pytest.approx(0.9051, abs=1e-3)
        assert (tmp_path / "figure2.png").exists()
        assert not (tmp_path / "figure2_numeric.csv").exists()

    def test_figure3(self, tmp_path, capsys):
        assert main(["reproduce", "figure3", "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "figure3.csv")
        # The d = 40 curve has an interior maximum in finesse.
        curve = [float(r[4]) for r in rows]
        peak = curve.index(max(curve))
        assert 0 < peak < len(curve) - 1
