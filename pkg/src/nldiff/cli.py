"""Command-line entry point: ``nldiff <mode> [options]``.

Exit status: 0 on success, 2 on usage or input errors, 1 on numerical
failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .baselines import linear_diffusion, run_pm_1d, run_pm_2d
from .errors import FormatError, NumericalError
from .grid import EdgeStopSpec, Signal1D, SolverParams, Window
from .io import (
    MODES,
    SYNTH_KINDS,
    RunConfig,
    mse,
    psnr,
    read_image,
    read_signal_csv,
    snapshot_path,
    synth,
    write_image,
    write_signal_csv,
)
from .solver1d import run_1d
from .solver2d import run_2d

log = logging.getLogger("nldiff")

# flag -> RunConfig field
_FLAGS = {
    "in": "input",
    "out": "output",
    "truth": "truth",
    "metrics": "metrics",
    "l": "l",
    "q": "q",
    "q1": "q1",
    "q2": "q2",
    "modes": "modes",
    "bmesh": "bmesh",
    "tau": "tau",
    "steps": "steps",
    "sigma0": "sigma0",
    "eps_tv": "eps_tv",
    "eps_g": "eps_g",
    "edge_stop": "edge_stop",
    "lambda": "lam",
    "refresh_every": "refresh_every",
    "snapshot_stride": "snapshot_stride",
    "stencil": "stencil",
    "time": "time",
    "kind": "kind",
    "sigma_noise": "sigma_noise",
    "size": "size",
    "seed": "seed",
    "threads": "threads",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nldiff", description="Nonlocal ratio diffusion filters for signals and images.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="key=value file; flags override its values")
    p.add_argument("--in", dest="in", help="input signal (.csv) or image (.pgm/.png)")
    p.add_argument("--out", help="output path")
    p.add_argument("--truth", help="ground truth for PSNR reporting")
    p.add_argument("--metrics", help="per-step metrics CSV (default: <out>_metrics.csv)")
    g = p.add_argument_group("window and basis")
    g.add_argument("--l", type=int, help="1D forward window length in samples (default 20)")
    g.add_argument("--q", type=int, help="2D window half-width, both axes (default 2)")
    g.add_argument("--q1", type=int, help="2D half-width along x (columns)")
    g.add_argument("--q2", type=int, help="2D half-width along y (rows)")
    g.add_argument("--modes", type=int, help="harmonic modes per family M (default 3)")
    g.add_argument("--bmesh", type=int, help="boundary mesh points L (default 400)")
    g = p.add_argument_group("time stepping")
    g.add_argument("--tau", type=float, help="time step (default 0.1 in 1D, 0.2 in 2D)")
    g.add_argument("--steps", type=int, help="iterations (default 300)")
    g.add_argument("--sigma0", type=float, help="presmoothing sigma; 1D in abscissa units, 2D in pixels")
    g.add_argument("--eps-tv", dest="eps_tv", type=float, help="ratio denominator regularizer (default 1e-4 of range)")
    g.add_argument("--eps-g", dest="eps_g", type=float, help="minimum diffusivity (default 0.05)")
    g.add_argument("--edge-stop", dest="edge_stop", choices=("poly", "pm"), help="edge-stopping form")
    g.add_argument("--lambda", dest="lambda", type=float, help="PM contrast (pm modes, default 0.1 of range) or pm edge-stop scale (default 0.5)")
    g.add_argument("--refresh-every", dest="refresh_every", type=int, help="recompute the 2D diffusivity every k steps (default 1)")
    g.add_argument("--snapshot-stride", dest="snapshot_stride", type=int, help="write a snapshot every k steps (0 = none)")
    g.add_argument("--stencil", choices=("compact", "central"), help="2D divergence stencil (default compact)")
    g.add_argument("--time", type=float, help="total diffusion time for the linear mode (default 1)")
    g = p.add_argument_group("synthetic data")
    g.add_argument("--kind", choices=SYNTH_KINDS, help="synthetic data kind (default spiketrain)")
    g.add_argument("--sigma-noise", dest="sigma_noise", type=float, help="noise standard deviation (default 0.05)")
    g.add_argument("--size", type=int, help="samples (1D) or image side (2D)")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--threads", type=int, help="worker threads for 2D fields; 0 = all cores (default 1)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return p


def config_from_args(args) -> RunConfig:
    overrides = {field: getattr(args, flag) for flag, field in _FLAGS.items() if getattr(args, flag) is not None}
    overrides["mode"] = args.mode
    if args.config:
        return RunConfig.from_file(args.config, **overrides)
    return RunConfig(**overrides)


def _threads(n: int) -> int:
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def _params(cfg: RunConfig, tau: float, sigma0: float) -> SolverParams:
    form = "polynomial" if cfg.edge_stop == "poly" else "perona-malik"
    lam = cfg.lam if (cfg.lam is not None and cfg.mode in ("denoise1d", "denoise2d")) else 0.5
    return SolverParams(
        tau=cfg.tau if cfg.tau is not None else tau,
        steps=cfg.steps,
        eps_tv=cfg.eps_tv,
        edge_stop=EdgeStopSpec(form=form, eps_g=cfg.eps_g, lam=lam),
        sigma0=sigma0,
    )


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        flags = {v: k for k, v in _FLAGS.items()}
        raise FormatError("missing " + ", ".join("--" + flags[n].replace("_", "-") for n in missing))


def write_metrics(path, history) -> None:
    lines = ["step,mean,l2,tv"] + [f"{k},{m:.17g},{l2:.17g},{tv:.17g}" for k, m, l2, tv in history]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _metrics_path(cfg: RunConfig) -> Path:
    if cfg.metrics:
        return Path(cfg.metrics)
    out = Path(cfg.output)
    return out.with_name(f"{out.stem}_metrics.csv")


def _report(cfg: RunConfig, final, history) -> None:
    write_metrics(_metrics_path(cfg), history)
    k, mean, l2, tv = history[-1]
    line = f"steps={k} mean={mean:.10g} l2={l2:.10g} tv={tv:.10g}"
    if cfg.truth:
        ref = read_signal_csv(cfg.truth) if Path(cfg.truth).suffix.lower() == ".csv" else read_image(cfg.truth)[0]
        line += f" mse={mse(ref, final):.6g} psnr={psnr(ref, final):.4f}"
    print(line)


def run_signal(cfg: RunConfig) -> None:
    _require(cfg, "input", "output")
    sig = read_signal_csv(cfg.input)
    # 1D sigma0 is given in abscissa units; the solver wants samples
    sigma0 = (cfg.sigma0 or 0.0) / sig.h
    params = _params(cfg, 0.1, sigma0)
    if cfg.mode == "denoise1d":
        run = run_1d(sig, params, Window(l=cfg.l), cfg.snapshot_stride)
    else:
        run = run_pm_1d(sig, params, cfg.lam, snapshot_stride=cfg.snapshot_stride)
    write_signal_csv(cfg.output, run.final, run.snapshots)
    _report(cfg, run.final, run.history)


def run_image(cfg: RunConfig) -> None:
    _require(cfg, "input", "output")
    img, maxval = read_image(cfg.input)
    sigma0 = 0.5 if cfg.sigma0 is None else cfg.sigma0
    params = _params(cfg, 0.2, sigma0)

    def progress(k):
        if k % 10 == 0 or k == params.steps:
            log.info("step %d/%d", k, params.steps)

    if cfg.mode == "denoise2d":
        w = Window(q1=cfg.q1 or cfg.q, q2=cfg.q2 or cfg.q)
        run = run_2d(
            img,
            params,
            w,
            M=cfg.modes,
            L=cfg.bmesh,
            stride=cfg.snapshot_stride,
            refresh_every=cfg.refresh_every,
            threads=_threads(cfg.threads),
            stencil=cfg.stencil,
            progress=progress,
        )
        if run.clamped:
            log.warning("ratio clamped to 1 at %d of %d pixel evaluations", run.clamped, run.pixels)
    else:
        run = run_pm_2d(img, params, cfg.lam, stride=cfg.snapshot_stride, stencil=cfg.stencil, progress=progress)
    write_image(cfg.output, run.final, maxval)
    for k, snap in run.snapshots:
        write_image(snapshot_path(cfg.output, k), snap, maxval)
    _report(cfg, run.final, run.history)


def run_linear(cfg: RunConfig) -> None:
    _require(cfg, "input", "output")
    if Path(cfg.input).suffix.lower() == ".csv":
        sig = read_signal_csv(cfg.input)
        write_signal_csv(cfg.output, linear_diffusion(sig, cfg.time))
    else:
        img, maxval = read_image(cfg.input)
        write_image(cfg.output, linear_diffusion(img, cfg.time), maxval)


def run_synth(cfg: RunConfig) -> None:
    _require(cfg, "output")
    params = {"sigma": cfg.sigma_noise}
    if cfg.size is not None:
        params["n" if cfg.kind in ("piecewise", "spiketrain") else "size"] = cfg.size
    data = synth(cfg.kind, params, cfg.seed)
    out = Path(cfg.output)
    clean = out.with_name(f"{out.stem}_clean{out.suffix}")
    if isinstance(data.noisy, Signal1D):
        write_signal_csv(out, data.noisy)
        write_signal_csv(clean, data.clean)
    else:
        # 16-bit samples keep the noise essentially unquantized
        maxval = 65535 if out.suffix.lower() in (".pgm", ".pnm") else 255
        write_image(out, data.noisy, maxval)
        write_image(clean, data.clean, maxval)
    print(f"wrote {out} and {clean}")


def run_metrics(cfg: RunConfig) -> None:
    _require(cfg, "input", "truth")
    if Path(cfg.input).suffix.lower() == ".csv":
        test, ref = read_signal_csv(cfg.input), read_signal_csv(cfg.truth)
    else:
        test, ref = read_image(cfg.input)[0], read_image(cfg.truth)[0]
    print(f"mse={mse(ref, test):.6g} psnr={psnr(ref, test):.4f}")


_RUNNERS = {
    "denoise1d": run_signal,
    "pm1d": run_signal,
    "denoise2d": run_image,
    "pm2d": run_image,
    "linear": run_linear,
    "synth": run_synth,
    "metrics": run_metrics,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        _RUNNERS[cfg.mode](cfg)
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"nldiff: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (FormatError, ValueError, OSError) as exc:
        print(f"nldiff: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
