"""Value types shared by the 1D and 2D pipelines, plus normalization and
reflection padding.

Homogeneous Neumann boundaries are realized everywhere by whole-sample
symmetric reflection (``numpy.pad(mode="reflect")``): the edge sample is
not repeated, so a central difference taken at the edge vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError

EDGE_STOP_FORMS = ("polynomial", "perona-malik")


def _frozen(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Signal1D:
    """Uniformly sampled real signal with grid spacing ``h``."""

    values: np.ndarray
    h: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 1))
        if self.values.size < 2:
            raise ValueError("a signal needs at least 2 samples")
        if not self.h > 0:
            raise ValueError(f"grid spacing must be positive, got {self.h}")

    def __len__(self) -> int:
        return self.values.size

    def with_values(self, values) -> Signal1D:
        return Signal1D(values, self.h)


@dataclass(frozen=True, eq=False)
class Image2D:
    """Grayscale raster, stored as a ``(height, width)`` array.

    Column index is the x axis, row index the y axis.
    """

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _frozen(self.pixels, 2))
        if self.pixels.size == 0:
            raise ValueError("empty image")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class Window:
    """Nonlocal neighbourhood.

    1D windows are forward intervals of ``l`` samples, ``[x, x + l*h]``.
    2D windows are the rectangle ``(-q1, q1) x (-q2, q2)`` in pixels, ``q1``
    along x (columns) and ``q2`` along y (rows).
    """

    l: int | None = None
    q1: int | None = None
    q2: int | None = None

    def __post_init__(self):
        if self.l is None and (self.q1 is None or self.q2 is None):
            raise ValueError("give either l (1D) or both q1 and q2 (2D)")
        if self.l is not None and self.l < 1:
            raise ValueError(f"window length must be >= 1, got {self.l}")
        for q in (self.q1, self.q2):
            if q is not None and q < 1:
                raise ValueError(f"window half-widths must be >= 1, got {q}")

    @classmethod
    def square(cls, q: int) -> Window:
        return cls(q1=q, q2=q)

    def check_1d(self, n: int) -> None:
        if self.l is None:
            raise ValueError("window has no 1D length")
        if self.l >= n:
            raise ValueError(f"window length {self.l} must be shorter than the signal ({n})")

    def check_2d(self, width: int, height: int) -> None:
        if self.q1 is None or self.q2 is None:
            raise ValueError("window has no 2D extent")
        if 2 * self.q1 >= width or 2 * self.q2 >= height:
            raise ValueError(
                f"window (q1={self.q1}, q2={self.q2}) too large for a {width}x{height} image"
            )


@dataclass(frozen=True)
class EdgeStopSpec:
    """Edge-stopping diffusivity g: [0, 1] -> [eps_g, 1].

    ``lam`` is only used by the Perona-Malik form.
    """

    form: str = "polynomial"
    eps_g: float = 0.05
    lam: float = 0.5

    def __post_init__(self):
        if self.form not in EDGE_STOP_FORMS:
            raise ValueError(f"unknown edge-stop form {self.form!r}; expected one of {EDGE_STOP_FORMS}")
        if not 0 < self.eps_g < 1:
            raise ValueError(f"eps_g must lie in (0, 1), got {self.eps_g}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")


@dataclass(frozen=True)
class SolverParams:
    """Time stepping and diffusivity parameters.

    ``eps_tv=None`` selects 1e-4 of the input's dynamic range at run time.
    ``sigma0`` is the presmoothing standard deviation in samples (pixels).
    """

    tau: float = 0.1
    steps: int = 300
    eps_tv: float | None = None
    edge_stop: EdgeStopSpec = field(default_factory=EdgeStopSpec)
    sigma0: float = 0.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.eps_tv is not None and not self.eps_tv > 0:
            raise ValueError(f"eps_tv must be positive, got {self.eps_tv}")
        if self.sigma0 < 0:
            raise ValueError(f"sigma0 must be >= 0, got {self.sigma0}")

    def resolve_eps_tv(self, values) -> float:
        if self.eps_tv is not None:
            return self.eps_tv
        return default_eps_tv(values)


def default_eps_tv(values) -> float:
    """1e-4 of the dynamic range (1e-4 for constant data)."""
    v = np.asarray(values)
    span = float(v.max() - v.min())
    return 1e-4 * span if span > 0 else 1e-4


def normalize(raw, maxval: int) -> np.ndarray:
    """Map integer samples in ``[0, maxval]`` onto ``[0, 1]``."""
    if maxval < 1:
        raise FormatError(f"maxval must be >= 1, got {maxval}")
    arr = np.asarray(raw)
    if arr.size and (arr.min() < 0 or arr.max() > maxval):
        raise FormatError(f"raw values outside [0, {maxval}]")
    return arr.astype(np.float64) / maxval


def quantize(values, maxval: int) -> np.ndarray:
    """Inverse of :func:`normalize`; values are clipped to ``[0, 1]`` first."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    dtype = np.uint8 if maxval < 256 else np.uint16
    return np.rint(v * maxval).astype(dtype)


def mirror_pad_1d(u, m: int) -> np.ndarray:
    """Reflect ``m`` samples onto each end: ``[1,2,3], 1 -> [2,1,2,3,2]``."""
    u = np.asarray(getattr(u, "values", u), dtype=np.float64)
    if m < 0 or m >= u.size:
        raise ValueError(f"margin {m} must satisfy 0 <= m < {u.size}")
    return np.pad(u, m, mode="reflect")


def mirror_pad_2d(img, q1: int, q2: int) -> np.ndarray:
    """Reflect ``q1`` columns left/right and ``q2`` rows top/bottom."""
    a = np.asarray(getattr(img, "pixels", img), dtype=np.float64)
    if q1 < 0 or q2 < 0 or q1 >= a.shape[1] or q2 >= a.shape[0]:
        raise ValueError(f"margins (q1={q1}, q2={q2}) too large for shape {a.shape}")
    return np.pad(a, ((q2, q2), (q1, q1)), mode="reflect")
