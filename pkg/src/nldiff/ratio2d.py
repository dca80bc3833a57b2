"""Nonlocal ratio field in 2D.

numerator   N(x) = sup over harmonic h with |grad h|_1 <= 1 of the boundary
                   integral of u (grad h . n) on x + dQ, computed by an LP
                   over the truncated harmonic basis;
denominator D(x) = anisotropic TV of the Q1 interpolant on x + Q.

R = clamp(N / (eps_tv + D), 0, 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .grid import Window, mirror_pad_2d
from .harmonic import BoundaryTables, boundary_tables, build_basis, constraint_levels
from .simplex import ActiveSetLP, LPResult, Vertices
from .tv2d import tv_field

log = logging.getLogger(__name__)


def make_tables(w: Window, M: int = 3, L: int = 400) -> BoundaryTables:
    return boundary_tables(build_basis(w, M), w, L)


def boundary_values(padded: np.ndarray, tables: BoundaryTables, shape: tuple[int, int]) -> np.ndarray:
    """Node values on x + dQ for every unpadded pixel, shape (H*W, nodes)."""
    q1, q2 = tables.basis.q1, tables.basis.q2
    H, W = shape
    cols = []
    for dx, dy in tables.nodes:
        cols.append(padded[q2 + dy : q2 + dy + H, q1 + dx : q1 + dx + W].ravel())
    return np.stack(cols, axis=1)


def lv_numerator(padded, x: tuple[int, int], tables: BoundaryTables, lp: ActiveSetLP | None = None) -> LPResult:
    """LP optimum for a single pixel ``x = (row, col)`` of the unpadded image.

    ``padded`` carries (q1, q2) reflected margins. Returns the certified
    :class:`LPResult`; its ``value`` is the numerator.
    """
    padded = np.asarray(getattr(padded, "pixels", padded), dtype=np.float64)
    q1, q2 = tables.basis.q1, tables.basis.q2
    r, c = x
    H, W = padded.shape[0] - 2 * q2, padded.shape[1] - 2 * q1
    if not (0 <= r < H and 0 <= c < W):
        raise IndexError(f"pixel {x} outside the {W}x{H} image")
    u = np.array([padded[q2 + r + dy, q1 + c + dx] for dx, dy in tables.nodes])
    if lp is None:
        lp = ActiveSetLP(tables.constraints)
    return lp.solve(tables.objective(u))


@dataclass
class RatioStats:
    clamped: int = 0
    pixels: int = 0
    pivots: int = 0


class RatioField2D:
    """Reusable ratio-field evaluator for one window and basis.

    Holds the shared tables and each pixel's optimal LP vertex from the
    previous call. After a small time step most of those optima are still
    optimal, which one pricing pass detects; the remaining pixels are
    re-solved through the coarse constraint levels, starting from their
    previous coarse optima. ``threads`` > 1 pivots independent
    chunks of pixels concurrently.
    """

    def __init__(self, tables: BoundaryTables, threads: int = 1):
        self.tables = tables
        self.window = Window(q1=tables.basis.q1, q2=tables.basis.q2)
        q1, q2 = tables.basis.q1, tables.basis.q2
        levels = constraint_levels(q1, q2, tables.L)
        self.lp = ActiveSetLP(tables.constraints, levels=levels, threads=threads)
        self.threads = threads
        self._state: Vertices | None = None  # optima of the full LPs
        self._warm: Vertices | None = None  # optima on the coarsest level
        self._shape: tuple[int, int] | None = None
        self.stats = RatioStats()

    @classmethod
    def build(cls, w: Window, M: int = 3, L: int = 400, threads: int = 1) -> RatioField2D:
        return cls(make_tables(w, M, L), threads)

    def numerator(self, padded: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
        u = boundary_values(padded, self.tables, shape)
        # H annihilates constants; removing the mean first keeps flat
        # patches exactly zero and shrinks rounding elsewhere
        C = self.tables.objective(u - u.mean(axis=1, keepdims=True))
        if self._shape == tuple(shape):
            sol = self.lp.solve_many(C, self._warm, start=self._state)
        else:
            sol = self.lp.solve_many(C)
        self._state, self._warm = sol.vertices, sol.warm
        self._shape = tuple(shape)
        self.stats.pivots += sol.pivots
        return np.maximum(sol.values, 0.0).reshape(shape)

    def __call__(self, img, eps_tv: float) -> np.ndarray:
        a = np.asarray(getattr(img, "pixels", img), dtype=np.float64)
        w = self.window
        w.check_2d(a.shape[1], a.shape[0])
        padded = mirror_pad_2d(a, w.q1, w.q2)
        D = tv_field(padded, w)
        N = self.numerator(padded, a.shape)
        R = N / (eps_tv + D)
        over = R > 1.0
        self.stats.clamped += int(over.sum())
        self.stats.pixels += R.size
        if over.any():
            log.debug("clamped %d ratio values above 1 (max %.6f)", over.sum(), R.max())
        return np.clip(R, 0.0, 1.0)


def ratio_field_2d(img, w: Window, tables_or_engine=None, eps_tv: float = 1e-4, M: int = 3, L: int = 400) -> np.ndarray:
    """Per-pixel ratio field in [0, 1].

    Pass a :class:`RatioField2D` to reuse its tables and warm starts across
    calls; otherwise a fresh evaluator is built from ``M`` and ``L``.
    """
    engine = tables_or_engine
    if engine is None:
        engine = RatioField2D.build(w, M, L)
    elif isinstance(engine, BoundaryTables):
        engine = RatioField2D(engine)
    if (engine.window.q1, engine.window.q2) != (w.q1, w.q2):
        raise ValueError("tables were built for a different window")
    return engine(img, eps_tv)
