"""Local variation, total variation and the nonlocal ratio field in 1D,
and the edge-stopping diffusivity shared by both dimensions."""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .grid import EdgeStopSpec, Window, mirror_pad_1d

__all__ = [
    "EdgeStopSpec",
    "edge_stop",
    "local_variation_1d",
    "total_variation_1d",
    "ratio_field_1d",
]


def edge_stop(spec: EdgeStopSpec, s):
    """Diffusivity for ratio values ``s``; inputs are clamped to [0, 1].

    polynomial:   eps_g + (1 - eps_g) * (1 - s^2)^2
    perona-malik: 1 / (1 + (s/lam)^2), rescaled affinely so that
                  g(0) = 1 and g(1) = eps_g.
    """
    s = np.clip(np.asarray(s, dtype=np.float64), 0.0, 1.0)
    eps = spec.eps_g
    if spec.form == "polynomial":
        out = eps + (1.0 - eps) * (1.0 - s * s) ** 2
    else:
        p = 1.0 / (1.0 + (s / spec.lam) ** 2)
        p1 = 1.0 / (1.0 + (1.0 / spec.lam) ** 2)
        out = eps + (1.0 - eps) * (p - p1) / (1.0 - p1)
    return out if out.ndim else float(out)


def _check_window(u: np.ndarray, i: int, l: int) -> None:
    if l < 1 or i < 0 or i + l >= u.size:
        raise IndexError(f"window [{i}, {i + l}] outside signal of length {u.size}")


def local_variation_1d(u, i: int, l: int) -> float:
    """|u[i+l] - u[i]|."""
    u = np.asarray(getattr(u, "values", u), dtype=np.float64)
    _check_window(u, i, l)
    return abs(u[i + l] - u[i])


def total_variation_1d(u, i: int, l: int) -> float:
    """Sum of |u[j+1] - u[j]| for j = i .. i+l-1."""
    u = np.asarray(getattr(u, "values", u), dtype=np.float64)
    _check_window(u, i, l)
    return float(np.abs(np.diff(u[i : i + l + 1])).sum())


def ratio_field_1d(u, w: Window, eps_tv: float) -> np.ndarray:
    """R[i] = LV_i / (eps_tv + TV_i) over the forward window of every sample.

    The signal is reflected at the right end so the window always exists.
    """
    if not eps_tv > 0:
        raise ValueError(f"eps_tv must be positive, got {eps_tv}")
    u = np.asarray(getattr(u, "values", u), dtype=np.float64)
    w.check_1d(u.size)
    l = w.l
    padded = mirror_pad_1d(u, l)[l:]
    lv = np.abs(padded[l:] - padded[:-l])
    tv = sliding_window_view(np.abs(np.diff(padded)), l).sum(axis=1)
    return lv / (eps_tv + tv)
