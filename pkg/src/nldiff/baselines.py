"""Reference filters: Perona-Malik and linear diffusion.

Perona-Malik reuses the stepping code of the nonlocal solvers with a local
diffusivity 1 / (1 + (|grad u| / lam)^2), so the two filters differ only
in the g field they are fed.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import dctn, idctn

from .grid import Image2D, Signal1D, SolverParams, Window, mirror_pad_1d
from .solver1d import Run1D, diffusion_step_1d, run_1d
from .solver2d import Run2D, euler_step_2d, gradient_field, run_2d


def default_lambda(values) -> float:
    """Contrast parameter: a tenth of the dynamic range (0.1 if flat)."""
    v = np.asarray(values, dtype=np.float64)
    span = float(v.max() - v.min())
    return 0.1 * span if span > 0 else 0.1


def gradient_magnitude(u, h: float = 1.0) -> np.ndarray:
    """|grad u| by central differences with reflected borders (1D or 2D)."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim == 1:
        p = mirror_pad_1d(u, 1)
        return np.abs(p[2:] - p[:-2]) / (2.0 * h)
    gx, gy = gradient_field(u)
    return np.hypot(gx, gy)


def pm_diffusivity(u, lam: float, h: float = 1.0) -> np.ndarray:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    s = gradient_magnitude(u, h) / lam
    return 1.0 / (1.0 + s * s)


def perona_malik_step(U, lam: float, tau: float, h: float = 1.0, stencil: str = "compact") -> np.ndarray:
    """One PM step: semi-implicit for signals, explicit Euler for images."""
    u = np.asarray(getattr(U, "values", getattr(U, "pixels", U)), dtype=np.float64)
    g = pm_diffusivity(u, lam, h)
    if u.ndim == 1:
        return diffusion_step_1d(u, g, tau, h)
    return euler_step_2d(u, g, tau, stencil)


def linear_step(U, tau: float, h: float = 1.0, stencil: str = "compact") -> np.ndarray:
    """The main solvers' step with g = 1."""
    u = np.asarray(getattr(U, "values", getattr(U, "pixels", U)), dtype=np.float64)
    g = np.ones_like(u)
    if u.ndim == 1:
        return diffusion_step_1d(u, g, tau, h)
    return euler_step_2d(u, g, tau, stencil)


def run_pm_1d(u_I: Signal1D, params: SolverParams, lam: float | None = None, window: Window | None = None, snapshot_stride: int = 0) -> Run1D:
    """Perona-Malik through the nonlocal solver's loop (same presmoothing)."""
    lam = default_lambda(u_I.values) if lam is None else lam
    window = window or Window(l=1)
    return run_1d(u_I, params, window, snapshot_stride, g_fn=lambda v: pm_diffusivity(v, lam, u_I.h))


def run_pm_2d(img, params: SolverParams, lam: float | None = None, stride: int = 0, stencil: str = "compact", progress=None) -> Run2D:
    u = np.asarray(getattr(img, "pixels", img), dtype=np.float64)
    lam = default_lambda(u) if lam is None else lam
    return run_2d(u, params, Window.square(1), stride=stride, stencil=stencil, g_fn=lambda v: pm_diffusivity(v, lam), progress=progress)


def linear_diffusion(U, t_total: float, h: float = 1.0):
    """Exact solution of u_t = laplace(u) after time ``t_total``.

    Uses the discrete Neumann Laplacian (zero flux through the outer faces,
    the stencil of the main solvers with g = 1), diagonalized by the type-II
    DCT. This is the discrete heat semigroup, so diffusing for t1 and then
    t2 equals diffusing for t1 + t2, mean and extrema bounds hold, and for
    t >> 1 the impulse response approaches a Gaussian with sigma = sqrt(2t).
    Accepts arrays, :class:`Signal1D` (spacing from the signal) and
    :class:`Image2D`; returns the same kind.
    """
    if t_total < 0:
        raise ValueError(f"t_total must be >= 0, got {t_total}")
    if isinstance(U, Signal1D):
        return U.with_values(linear_diffusion(U.values, t_total, U.h))
    if isinstance(U, Image2D):
        return Image2D(linear_diffusion(U.pixels, t_total, h))
    u = np.asarray(U, dtype=np.float64)
    if t_total == 0:
        return u.copy()
    decay = np.ones(u.shape)
    for axis, n in enumerate(u.shape):
        lam = (2.0 - 2.0 * np.cos(np.pi * np.arange(n) / n)) / (h * h)
        shape = [1] * u.ndim
        shape[axis] = n
        decay = decay * np.exp(-t_total * lam).reshape(shape)
    return idctn(dctn(u, type=2, norm="ortho") * decay, type=2, norm="ortho")
