from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from nldiff.cli import build_parser, config_from_args, main
from nldiff.io import read_image, read_signal_csv, write_image, write_signal_csv


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def spikes(tmp_path):
    out = tmp_path / "s.csv"
    assert run("synth", "--kind", "spiketrain", "--seed", 7, "--size", 300, "--out", out) == 0
    return out


def test_synth_writes_truth(spikes):
    clean = spikes.with_name("s_clean.csv")
    assert read_signal_csv(spikes).values.size == 300
    assert read_signal_csv(clean).values.size == 300


def test_denoise1d_and_pm1d_report(spikes, tmp_path, capsys):
    truth = spikes.with_name("s_clean.csv")
    for mode in ("denoise1d", "pm1d"):
        out = tmp_path / f"{mode}.csv"
        rc = run(mode, "--in", spikes, "--out", out, "--l", 20, "--tau", 0.1, "--steps", 20, "--sigma0", 1, "--truth", truth, "--snapshot-stride", 10)
        assert rc == 0
        line = capsys.readouterr().out
        assert "psnr=" in line and "tv=" in line
        metrics = (tmp_path / f"{mode}_metrics.csv").read_text().splitlines()
        assert metrics[0] == "step,mean,l2,tv" and len(metrics) == 22
        assert (tmp_path / f"{mode}_t10.csv").exists()
        means = [float(r.split(",")[1]) for r in metrics[1:]]
        assert max(means) - min(means) < 1e-12


def test_denoise2d_small(tmp_path):
    rs = np.random.RandomState(0)
    img = np.clip(0.5 + 0.05 * rs.randn(16, 16), 0, 1)
    src = tmp_path / "n.pgm"
    write_image(src, img, 255)
    out = tmp_path / "d.pgm"
    rc = run("denoise2d", "--in", src, "--out", out, "--q", 2, "--modes", 1, "--bmesh", 96, "--steps", 3)
    assert rc == 0
    den, maxval = read_image(out)
    assert maxval == 255 and den.pixels.std() < img.std()


def test_pm2d_and_linear_and_metrics(tmp_path, capsys):
    rs = np.random.RandomState(1)
    src = tmp_path / "n.png"
    write_image(src, rs.rand(20, 20))
    assert run("pm2d", "--in", src, "--out", tmp_path / "p.png", "--steps", 5) == 0
    assert run("linear", "--in", src, "--out", tmp_path / "l.png", "--time", 2) == 0
    capsys.readouterr()
    assert run("metrics", "--in", tmp_path / "l.png", "--truth", src) == 0
    assert "psnr=" in capsys.readouterr().out
    sig = tmp_path / "x.csv"
    write_signal_csv(sig, rs.rand(30))
    assert run("linear", "--in", sig, "--out", tmp_path / "y.csv") == 0


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("tau = 0.05\nsteps=12\nl=7\n")
    args = build_parser().parse_args(["denoise1d", "--config", str(cfg), "--steps", "3"])
    c = config_from_args(args)
    assert (c.tau, c.steps, c.l) == (0.05, 3, 7)


def test_exit_codes(tmp_path, capsys):
    assert run("denoise1d") == 2  # missing --in/--out
    assert run("bogus") == 2
    assert run("denoise1d", "--in", tmp_path / "missing.csv", "--out", tmp_path / "o.csv") == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("1\nx\n")
    assert run("denoise1d", "--in", bad, "--out", tmp_path / "o.csv") == 2
    sig = tmp_path / "s.csv"
    write_signal_csv(sig, np.arange(10.0))
    assert run("denoise1d", "--in", sig, "--out", tmp_path / "o.csv", "--l", 50) == 2
    # an explicit step beyond the 2D stability bound is a usage error
    img = tmp_path / "i.pgm"
    write_image(img, np.zeros((8, 8)))
    assert run("pm2d", "--in", img, "--out", tmp_path / "o.pgm", "--tau", 5) == 2
    capsys.readouterr()


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    from nldiff import cli
    from nldiff.errors import NumericalError

    def boom(cfg):
        raise NumericalError("diverged")

    monkeypatch.setitem(cli._RUNNERS, "linear", boom)
    assert run("linear", "--in", "a.csv", "--out", "b.csv") == 1


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "nldiff.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "denoise2d" in r.stdout


def test_cli_outputs_byte_identical(tmp_path):
    for d in ("a", "b"):
        (tmp_path / d).mkdir()
        run("synth", "--kind", "spiketrain", "--seed", 3, "--size", 200, "--out", tmp_path / d / "s.csv")
        run("denoise1d", "--in", tmp_path / d / "s.csv", "--out", tmp_path / d / "o.csv", "--steps", 10)
    for name in ("s.csv", "s_clean.csv", "o.csv", "o_metrics.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
