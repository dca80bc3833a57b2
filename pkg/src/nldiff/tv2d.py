"""Anisotropic total variation of the bilinear (Q1) interpolant.

On the unit cell with corners u00, u10, u01, u11 (first index x) the
interpolant P has

    dP/dx = a (1 - y) + b y,   a = u10 - u00,  b = u11 - u01
    dP/dy = c (1 - x) + d x,   c = u01 - u00,  d = u11 - u10

so the integral of |grad P|_1 splits into two integrals of the absolute
value of a linear function over [0, 1]:

    I(p, q) = (|p| + |q|) / 2                     if p q >= 0
            = (p^2 + q^2) / (2 (|p| + |q|))       otherwise
"""

from __future__ import annotations

import numpy as np

from .grid import Window


def abs_linear_integral(p, q):
    """Integral over [0, 1] of |p (1 - t) + q t|."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    ap, aq = np.abs(p), np.abs(q)
    s = ap + aq
    same = p * q >= 0
    with np.errstate(invalid="ignore", divide="ignore"):
        crossing = (p * p + q * q) / (2.0 * s)
    return np.where(same, 0.5 * s, crossing)


def cell_tv(u00, u10, u01, u11):
    """Exact integral of |grad P|_1 over one unit cell."""
    out = abs_linear_integral(u10 - np.asarray(u00), np.asarray(u11) - u01) + abs_linear_integral(
        u01 - np.asarray(u00), np.asarray(u11) - u10
    )
    return out if np.ndim(out) else float(out)


def cell_tv_field(a) -> np.ndarray:
    """Cell TV for every cell of a ``(H, W)`` raster; result is ``(H-1, W-1)``.

    Entry ``[r, c]`` is the cell spanned by pixels ``(r..r+1, c..c+1)``.
    """
    a = np.asarray(getattr(a, "pixels", a), dtype=np.float64)
    u00 = a[:-1, :-1]
    u10 = a[:-1, 1:]
    u01 = a[1:, :-1]
    u11 = a[1:, 1:]
    return cell_tv(u00, u10, u01, u11)


def box_sum(field: np.ndarray, ny: int, nx: int) -> np.ndarray:
    """Sums of every ``ny x nx`` block via a summed-area table.

    Output has shape ``(H - ny + 1, W - nx + 1)``; entry ``[r, c]`` covers
    rows ``r..r+ny-1`` and columns ``c..c+nx-1``.
    """
    s = np.zeros((field.shape[0] + 1, field.shape[1] + 1))
    s[1:, 1:] = field.cumsum(axis=0).cumsum(axis=1)
    return s[ny:, nx:] - s[:-ny, nx:] - s[ny:, :-nx] + s[:-ny, :-nx]


def tv_field(padded, w: Window) -> np.ndarray:
    """Integral of |grad P|_1 over x + Q for every unpadded pixel x.

    ``padded`` must already carry ``q1`` reflected columns and ``q2``
    reflected rows on each side. Each window holds ``2q2 x 2q1`` cells.
    """
    cells = cell_tv_field(padded)
    return np.maximum(box_sum(cells, 2 * w.q2, 2 * w.q1), 0.0)
