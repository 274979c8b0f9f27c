import subprocess
import sys

import numpy as np
import pytest

from ctdt.cli import main

ACC = """node in input
node s sum
node d delay
node g gain 1.0
node out output
edge in s
edge g s +
edge s d
edge d g
edge s out
"""


def _csv(text):
    lines = text.strip().splitlines()
    return lines[0].split(","), np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


class TestResponse:
    def test_ct_lpf_grid(self, capsys):
        assert main(["response", "--ct", "lpf", "--tau", "1", "--f", "0:10:1000"]) == 0
        header, data = _csv(capsys.readouterr().out)
        assert header == ["freq_hz", "magnitude_db", "phase_rad"]
        assert data.shape == (1000, 3)
        fc = 1 / (2 * np.pi)
        row = np.argmin(np.abs(data[:, 0] - fc))
        exact = -10 * np.log10(1 + (2 * np.pi * data[row, 0]) ** 2)
        assert data[row, 1] == pytest.approx(exact, abs=1e-12)
        # the nearest row is off the cutoff by at most half a grid step
        slope = 20 / np.log(10) * 2 * np.pi * (2 * np.pi * fc) / 2  # |d dB / d f| at fc
        half_step = 0.5 * (data[1, 0] - data[0, 0])
        assert abs(data[row, 1] - 20 * np.log10(1 / np.sqrt(2))) <= 1.2 * slope * half_step

    def test_dt_accumulator(self, capsys):
        assert main(["response", "--dt", "accumulator", "--fs", "1", "--f", "0.5"]) == 0
        _, data = _csv(capsys.readouterr().out)
        assert data[0, 1] == pytest.approx(-6.02, abs=0.005)

    @pytest.mark.parametrize("grid", ["", "0:1:0", "a,b", "1:2"])
    def test_bad_grid(self, grid, capsys):
        assert main(["response", "--ct", "lpf", "--tau", "1", "--f", grid]) == 2

    def test_pole_on_grid_is_numeric_error(self, capsys):
        assert main(["response", "--dt", "accumulator", "--f", "0"]) == 3

    def test_missing_system(self, capsys):
        assert main(["response", "--f", "1"]) == 2


class TestDiscretize:
    def test_euler(self, capsys):
        assert main(["discretize", "lpf", "--tau", "1", "--ts", "0.5", "--method", "euler"]) == 0
        assert "0.6666666667" in capsys.readouterr().out

    def test_matched(self, capsys, tmp_path):
        out = tmp_path / "c.csv"
        assert main(["discretize", "lpf", "--tau", "1", "--ts", "0.1", "--method", "matched",
                     "--csv", str(out)]) == 0
        assert "0.904837" in capsys.readouterr().out
        assert out.read_text().startswith("k,b,a\n")

    def test_bad_ts(self, capsys):
        assert main(["discretize", "lpf", "--tau", "1", "--ts", "0"]) == 2
        assert main(["discretize", "lpf", "--tau", "1", "--ts", "-1"]) == 2

    def test_nyquist_violation(self, capsys):
        assert main(["discretize", "custom", "--num", "1", "--den", "101 2 1", "--ts", "0.5",
                     "--method", "matched"]) == 3


class TestGraphs:
    def test_simulate_and_flatten(self, tmp_path, capsys):
        net = tmp_path / "acc.net"
        net.write_text(ACC)
        assert main(["simulate", "--netlist", str(net), "--n", "4"]) == 0
        _, data = _csv(capsys.readouterr().out)
        assert np.array_equal(data[:, 1], [1, 1, 1, 1])
        assert main(["flatten", "--netlist", str(net)]) == 0
        out = capsys.readouterr().out
        assert "a: 1.0 -1.0" in out

    def test_bad_netlist(self, tmp_path, capsys):
        net = tmp_path / "bad.net"
        net.write_text("node x frob\n")
        assert main(["flatten", "--netlist", str(net)]) == 2
        assert main(["flatten", "--netlist", str(tmp_path / "missing.net")]) == 2


class TestFigureCommand:
    def test_writes_files(self, tmp_path, capsys):
        assert main(["figure", "f6", "--out", str(tmp_path)]) == 0
        _, data = _csv((tmp_path / "f6_transient.csv").read_text())
        assert np.array_equal(data[:, 1], [(-1.0) ** k for k in range(16)])
        assert (tmp_path / "f6.svg").exists()

    def test_bad_zp(self, tmp_path, capsys):
        assert main(["figure", "f7", "--zp", "1.5", "--out", str(tmp_path)]) == 3

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "ctdt", "figure", "f3", "--out", str(tmp_path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert (tmp_path / "f3_frequency.csv").exists()
