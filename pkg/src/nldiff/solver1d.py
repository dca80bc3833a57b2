"""Semi-implicit 1D solver: (I - tau A(U^k)) U^{k+1} = U^k."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalError
from .grid import Signal1D, SolverParams, Window
from .ratio1d import edge_stop, ratio_field_1d


@dataclass(frozen=True, eq=False)
class Tridiagonal:
    """Tridiagonal matrix; ``lower[i]`` sits at (i+1, i), ``upper[i]`` at (i, i+1)."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise ValueError("off-diagonals must have length len(diag) - 1")

    @property
    def n(self) -> int:
        return len(self.diag)

    def dominance_margin(self) -> np.ndarray:
        """|diag| - (|lower| + |upper|) per row; positive means strictly dominant."""
        off = np.zeros(self.n)
        off[1:] += np.abs(self.lower)
        off[:-1] += np.abs(self.upper)
        return np.abs(self.diag) - off

    def is_strictly_dominant(self) -> bool:
        return bool(np.all(self.dominance_margin() > 0))

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        y = self.diag * x
        y[1:] += self.lower * x[:-1]
        y[:-1] += self.upper * x[1:]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)


def assemble_1d(U, g_field, tau: float, h: float) -> Tridiagonal:
    """Build B = I - tau*A for the flux-form operator d/dx(g du/dx).

    Half-node diffusivities are arithmetic means of the nodal values. The
    end rows carry no flux through the boundary, so every row of A sums to
    zero and B is symmetric with unit row and column sums.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    g = np.asarray(g_field, dtype=np.float64)
    n = len(getattr(U, "values", U))
    if g.shape != (n,):
        raise ValueError(f"g_field has shape {g.shape}, expected ({n},)")
    # half-node coefficients (g_i + g_{i+1}) / (2h^2), i = 0..n-2
    half = (g[:-1] + g[1:]) / (2.0 * h * h)
    alpha = np.zeros(n)
    alpha[:-1] += half  # gamma_i
    alpha[1:] += half  # beta_i
    return Tridiagonal(lower=-tau * half, diag=1.0 + tau * alpha, upper=-tau * half)


def thomas_solve(m: Tridiagonal, rhs) -> np.ndarray:
    """Solve m x = rhs without pivoting; m must be strictly diagonally dominant."""
    if not m.is_strictly_dominant():
        raise NumericalError("matrix is not strictly diagonally dominant; refusing to solve without pivoting")
    d = np.asarray(rhs, dtype=np.float64)
    n = m.n
    if d.shape != (n,):
        raise ValueError(f"rhs has shape {d.shape}, expected ({n},)")
    a = m.lower.tolist()
    b = m.diag.tolist()
    c = m.upper.tolist()
    dd = d.tolist()
    cp = [0.0] * n
    dp = [0.0] * n
    cp[0] = c[0] / b[0] if n > 1 else 0.0
    dp[0] = dd[0] / b[0]
    for i in range(1, n):
        denom = b[i] - a[i - 1] * cp[i - 1]
        if i < n - 1:
            cp[i] = c[i] / denom
        dp[i] = (dd[i] - a[i - 1] * dp[i - 1]) / denom
    x = [0.0] * n
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.array(x)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled Gaussian truncated at 4 sigma, normalized to unit sum."""
    if sigma <= 0:
        return np.ones(1)
    radius = max(1, math.ceil(4.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def smooth_axis(a: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    """Correlate ``a`` with a symmetric kernel along one axis, reflecting at the ends."""
    r = kernel.size // 2
    if r == 0:
        return np.array(a, dtype=np.float64, copy=True)
    a = np.moveaxis(np.asarray(a, dtype=np.float64), axis, -1)
    n = a.shape[-1]
    if n == 1:
        return np.moveaxis(a.copy(), -1, axis)
    # numpy reflects repeatedly when the margin exceeds the length
    pad = [(0, 0)] * (a.ndim - 1) + [(r, r)]
    p = np.pad(a, pad, mode="reflect")
    out = np.zeros_like(a)
    for j, kj in enumerate(kernel):
        out += kj * p[..., j : j + n]
    return np.moveaxis(out, -1, axis)


def gaussian_presmooth(u, sigma0: float):
    """Gaussian smoothing with reflecting ends; ``sigma0`` in samples.

    Accepts a :class:`Signal1D` (returned as one) or a plain array.
    """
    if sigma0 < 0:
        raise ValueError(f"sigma0 must be >= 0, got {sigma0}")
    values = np.asarray(getattr(u, "values", u), dtype=np.float64)
    out = smooth_axis(values, gaussian_kernel(sigma0), axis=0)
    return u.with_values(out) if isinstance(u, Signal1D) else out


def diffusion_step_1d(U: np.ndarray, g_field, tau: float, h: float) -> np.ndarray:
    """One semi-implicit step with a given nodal diffusivity."""
    return thomas_solve(assemble_1d(U, g_field, tau, h), U)


def nonlocal_diffusivity_1d(U: np.ndarray, params: SolverParams, window: Window, eps_tv: float) -> np.ndarray:
    return edge_stop(params.edge_stop, ratio_field_1d(U, window, eps_tv))


def step_1d(U, params: SolverParams, window: Window, eps_tv: float | None = None) -> np.ndarray:
    """Advance one time step: ratio field -> diffusivity -> tridiagonal solve."""
    h = getattr(U, "h", 1.0)
    U = np.asarray(getattr(U, "values", U), dtype=np.float64)
    eps = params.resolve_eps_tv(U) if eps_tv is None else eps_tv
    g = nonlocal_diffusivity_1d(U, params, window, eps)
    return diffusion_step_1d(U, g, params.tau, h)


@dataclass
class Run1D:
    final: Signal1D
    snapshots: list[tuple[int, np.ndarray]]
    history: list[tuple[int, float, float, float]]  # (step, mean, l2, tv)


def signal_stats(U: np.ndarray) -> tuple[float, float, float]:
    """(mean, L2 norm, total variation)."""
    return float(U.mean()), float(np.sqrt(np.sum(U * U))), float(np.abs(np.diff(U)).sum())


def run_1d(
    u_I: Signal1D,
    params: SolverParams,
    window: Window,
    snapshot_stride: int = 0,
    g_fn: Callable[[np.ndarray], np.ndarray] | None = None,
) -> Run1D:
    """Presmooth once, then take ``params.steps`` semi-implicit steps.

    ``g_fn`` overrides the nonlocal diffusivity (used by the Perona-Malik
    baseline so both filters share this loop). ``eps_tv`` is fixed from the
    presmoothed data when left on auto.
    """
    window.check_1d(len(u_I))
    U = gaussian_presmooth(u_I.values, params.sigma0)
    eps = params.resolve_eps_tv(U)
    if g_fn is None:
        g_fn = lambda v: nonlocal_diffusivity_1d(v, params, window, eps)  # noqa: E731
    snapshots = []
    history = [(0, *signal_stats(U))]
    for k in range(1, params.steps + 1):
        U = diffusion_step_1d(U, g_fn(U), params.tau, u_I.h)
        history.append((k, *signal_stats(U)))
        if snapshot_stride and k % snapshot_stride == 0:
            snapshots.append((k, U.copy()))
    return Run1D(final=u_I.with_values(U), snapshots=snapshots, history=history)
