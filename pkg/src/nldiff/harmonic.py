"""Truncated harmonic basis on the window rectangle and the boundary
quantities needed by the local-variation LP.

Coordinates are centred on the window: Q = (-q1, q1) x (-q2, q2), with
x along image columns and y along rows. With X = x + q1 in [0, a] and
Y = y + q2 in [0, b] (a = 2 q1, b = 2 q2) the basis is

    x, y, x y,
    sin(kx X) sinh(kx (b - Y)),  sin(ky Y) sinh(ky X),
    sin(kx X) sinh(kx Y),        sin(ky Y) sinh(ky (a - X)),

for k = 1..M, with kx = k pi / a and ky = k pi / b. Each family is
harmonic on the rectangle for any aspect ratio; on a square it is the
affine image of the unit-square basis. Every function is rescaled so that
max |grad f|_1 = 1 on a fixed fine boundary sampling; the LP optimum does
not depend on this scaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Window

# Gauss-Legendre order per unit boundary segment for the H coefficients
GAUSS_ORDER = 12
# boundary samples per unit length used only to fix the basis scaling
_NORM_DENSITY = 64


@dataclass(frozen=True, eq=False)
class HarmonicBasis:
    q1: int
    q2: int
    M: int
    scale: np.ndarray  # multiplier applied to each raw mode

    @property
    def size(self) -> int:
        return 4 * self.M + 3

    def _raw(self, x, y):
        """Raw (unscaled) values and gradients, each of shape (size, npts)."""
        x = np.asarray(x, dtype=np.float64).ravel()
        y = np.asarray(y, dtype=np.float64).ravel()
        a, b = 2.0 * self.q1, 2.0 * self.q2
        X, Y = x + self.q1, y + self.q2
        f = [x, y, x * y]
        fx = [np.ones_like(x), np.zeros_like(x), y]
        fy = [np.zeros_like(x), np.ones_like(x), x]
        for k in range(1, self.M + 1):
            kx, ky = k * np.pi / a, k * np.pi / b
            # divide by cosh of the full extent to keep magnitudes O(1)
            cx, cy = np.cosh(kx * b), np.cosh(ky * a)
            sX, cX = np.sin(kx * X), np.cos(kx * X)
            sY, cY = np.sin(ky * Y), np.cos(ky * Y)
            # sin(kx X) sinh(kx (b - Y))
            f.append(sX * np.sinh(kx * (b - Y)) / cx)
            fx.append(kx * cX * np.sinh(kx * (b - Y)) / cx)
            fy.append(-kx * sX * np.cosh(kx * (b - Y)) / cx)
            # sin(ky Y) sinh(ky X)
            f.append(sY * np.sinh(ky * X) / cy)
            fx.append(ky * sY * np.cosh(ky * X) / cy)
            fy.append(ky * cY * np.sinh(ky * X) / cy)
            # sin(kx X) sinh(kx Y)
            f.append(sX * np.sinh(kx * Y) / cx)
            fx.append(kx * cX * np.sinh(kx * Y) / cx)
            fy.append(kx * sX * np.cosh(kx * Y) / cx)
            # sin(ky Y) sinh(ky (a - X))
            f.append(sY * np.sinh(ky * (a - X)) / cy)
            fx.append(-ky * sY * np.cosh(ky * (a - X)) / cy)
            fy.append(ky * cY * np.sinh(ky * (a - X)) / cy)
        return np.array(f), np.array(fx), np.array(fy)

    def values(self, x, y) -> np.ndarray:
        return self._raw(x, y)[0] * self.scale[:, None]

    def gradients(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        _, fx, fy = self._raw(x, y)
        return fx * self.scale[:, None], fy * self.scale[:, None]


def build_basis(w: Window, M: int) -> HarmonicBasis:
    """The 4M+3 harmonic modes adapted to the window rectangle."""
    if M < 0:
        raise ValueError(f"M must be >= 0, got {M}")
    if w.q1 is None or w.q2 is None:
        raise ValueError("harmonic basis needs a 2D window")
    raw = HarmonicBasis(w.q1, w.q2, M, np.ones(4 * M + 3))
    mesh = _perimeter_points(w.q1, w.q2, _NORM_DENSITY * 2 * (w.q1 + w.q2) * 2)[0]
    fx, fy = raw.gradients(mesh[:, 0], mesh[:, 1])
    peak = (np.abs(fx) + np.abs(fy)).max(axis=1)
    return HarmonicBasis(w.q1, w.q2, M, 1.0 / peak)


def _perimeter_points(q1: int, q2: int, L: int):
    """L points on the rectangle boundary, counter-clockwise from (-q1, -q2).

    Points are spaced uniformly on each edge, the count per edge
    proportional to its length; every corner is included once.
    """
    per = 2 * (q1 + q2)
    if not _splits(q1, q2, L):
        raise ValueError(f"L={L} cannot be split evenly over edges of lengths {2 * q1} and {2 * q2}")
    nx, ny = L * q1 // per, L * q2 // per
    tx = np.arange(nx) / nx
    ty = np.arange(ny) / ny
    pts, normals = [], []
    edges = [
        ((-q1, -q2), (2 * q1, 0), tx, (0.0, -1.0)),  # bottom, left to right
        ((q1, -q2), (0, 2 * q2), ty, (1.0, 0.0)),  # right, upwards
        ((q1, q2), (-2 * q1, 0), tx, (0.0, 1.0)),  # top, right to left
        ((-q1, q2), (0, -2 * q2), ty, (-1.0, 0.0)),  # left, downwards
    ]
    for (x0, y0), (dx, dy), t, nrm in edges:
        pts.append(np.column_stack([x0 + t * dx, y0 + t * dy]))
        normals.append(np.tile(nrm, (t.size, 1)))
    return np.vstack(pts), np.vstack(normals)


def boundary_nodes(q1: int, q2: int) -> np.ndarray:
    """Integer offsets (dx, dy) of the pixel nodes on the window boundary,
    counter-clockwise from (-q1, -q2); 4 (q1 + q2) nodes."""
    nodes = [(dx, -q2) for dx in range(-q1, q1)]
    nodes += [(q1, dy) for dy in range(-q2, q2)]
    nodes += [(dx, q2) for dx in range(q1, -q1, -1)]
    nodes += [(-q1, dy) for dy in range(q2, -q2, -1)]
    return np.array(nodes, dtype=np.intp)


@dataclass(frozen=True, eq=False)
class BoundaryTables:
    """Everything the per-pixel LP needs, computed once per (window, M, L).

    mesh, normals: L boundary points and outward normals.
    grad_x, grad_y: basis gradients at the mesh points, shape (size, L).
    nodes: boundary pixel offsets, shape (4(q1+q2), 2).
    H: H[h, j] = integral over the boundary of phi_j (grad f_h . n), where
       phi_j is the piecewise-linear hat of node j along the boundary.
    constraints: the 4L x size matrix of rows +-df/dx +- df/dy at each mesh
       point (point-major, sign pairs ++, +-, -+, --).
    """

    basis: HarmonicBasis
    mesh: np.ndarray
    normals: np.ndarray
    grad_x: np.ndarray
    grad_y: np.ndarray
    nodes: np.ndarray
    H: np.ndarray
    constraints: np.ndarray

    @property
    def L(self) -> int:
        return self.mesh.shape[0]

    def objective(self, boundary_values: np.ndarray) -> np.ndarray:
        """LP objective(s) c = H u for node values ordered like ``nodes``."""
        return boundary_values @ self.H.T


def boundary_tables(basis: HarmonicBasis, w: Window, L: int) -> BoundaryTables:
    q1, q2 = w.q1, w.q2
    if (q1, q2) != (basis.q1, basis.q2):
        raise ValueError("basis was built for a different window")
    nodes = boundary_nodes(q1, q2)
    if L < 4 * len(nodes):
        raise ValueError(f"L={L} too small; need at least {4 * len(nodes)} boundary points")
    mesh, normals = _perimeter_points(q1, q2, L)
    gx, gy = basis.gradients(mesh[:, 0], mesh[:, 1])

    signs = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=np.float64)
    rows = signs[None, :, 0, None] * gx.T[:, None, :] + signs[None, :, 1, None] * gy.T[:, None, :]
    constraints = rows.reshape(4 * L, basis.size)

    H = _hat_integrals(basis, nodes)
    return BoundaryTables(basis, mesh, normals, gx, gy, nodes, H, constraints)


def constraint_levels(q1: int, q2: int, L: int, sizes=None) -> list[np.ndarray]:
    """Nested constraint-row subsets from coarser boundary meshes, coarsest
    first and ending with all 4L rows.

    ``sizes`` lists the coarse mesh sizes; each mesh must be splittable
    over the edges and its points must be a subset of every finer mesh.
    By default there is a middle level of L/4 points (if that mesh is
    nested and has at least 16 (q1 + q2) points, four per boundary node)
    and a coarsest level: the smallest nested mesh with at least
    5 (q1 + q2) points.
    """
    if sizes is None:
        sizes, Lc = [], L
        if L % 4 == 0 and L // 4 >= 16 * (q1 + q2) and _splits(q1, q2, L // 4) and _nested(q1, q2, L // 4, L):
            Lc = L // 4
            sizes.append(Lc)
        for k in range(5 * (q1 + q2), Lc):
            if Lc % k == 0 and _splits(q1, q2, k) and _nested(q1, q2, k, Lc):
                sizes.append(k)
                break
    fine = _perimeter_points(q1, q2, L)[0]
    lookup = {(round(px * 1e9), round(py * 1e9)): k for k, (px, py) in enumerate(fine)}
    levels = [np.arange(4 * L)]
    for Lc in sorted(sizes, reverse=True):
        if Lc >= L:
            raise ValueError(f"coarse mesh size {Lc} must be below L={L}")
        pts = _perimeter_points(q1, q2, Lc)[0]
        idx = np.array([lookup.get((round(px * 1e9), round(py * 1e9)), -1) for px, py in pts])
        if (idx < 0).any():
            raise ValueError(f"a {Lc}-point mesh is not a subset of the {L}-point mesh")
        rows = np.sort((4 * idx[:, None] + np.arange(4)).ravel())
        if not np.isin(rows, levels[0]).all():
            raise ValueError(f"mesh sizes {sorted(sizes)} are not nested")
        levels.insert(0, rows)
    return levels


def _nested(q1: int, q2: int, coarse: int, fine: int) -> bool:
    # per-edge counts must divide: edge point t = k / n_coarse = (k r) / n_fine
    per = 2 * (q1 + q2)
    nx_c, ny_c = coarse * q1 // per, coarse * q2 // per
    nx_f, ny_f = fine * q1 // per, fine * q2 // per
    return nx_f % nx_c == 0 and ny_f % ny_c == 0


def _splits(q1: int, q2: int, L: int) -> bool:
    per = 2 * (q1 + q2)
    return (L * q1) % per == 0 and (L * q2) % per == 0


def _hat_integrals(basis: HarmonicBasis, nodes: np.ndarray) -> np.ndarray:
    """Gauss-Legendre quadrature of (grad f . n) against boundary hat functions."""
    gs, gw = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    s = 0.5 * (gs + 1.0)  # on [0, 1]
    wq = 0.5 * gw
    nn = len(nodes)
    start = nodes.astype(np.float64)
    end = np.roll(start, -1, axis=0)
    step = end - start  # unit vectors along the boundary
    # outward normal of a counter-clockwise boundary: (dy, -dx)
    normal = np.column_stack([step[:, 1], -step[:, 0]])
    px = start[:, 0, None] + s[None, :] * step[:, 0, None]
    py = start[:, 1, None] + s[None, :] * step[:, 1, None]
    gx, gy = basis.gradients(px, py)
    flux = (gx * np.repeat(normal[:, 0], s.size) + gy * np.repeat(normal[:, 1], s.size)).reshape(basis.size, nn, s.size)
    H = np.zeros((basis.size, nn))
    H += flux @ (wq * (1.0 - s))  # hat of the segment's start node
    H += np.roll(flux @ (wq * s), 1, axis=1)  # hat of its end node
    return H
