"""Signal and image files, synthetic data, noise and quality metrics."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import FormatError
from .grid import Image2D, Signal1D, normalize, quantize

# -- 1D signals ---------------------------------------------------------------


def read_signal_csv(path) -> Signal1D:
    """One sample per line, optionally preceded by an ``h=<spacing>`` line.

    Blank lines and lines starting with ``#`` are ignored.
    """
    path = Path(path)
    h = 1.0
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if text.startswith("h="):
                if values:
                    raise FormatError(f"{path}:{lineno}: h= header after the first sample")
                try:
                    h = float(text[2:])
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: bad spacing {text[2:]!r}") from None
                if not (h > 0 and math.isfinite(h)):
                    raise FormatError(f"{path}:{lineno}: spacing must be positive and finite")
                continue
            try:
                v = float(text)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a number: {text!r}") from None
            if not math.isfinite(v):
                raise FormatError(f"{path}:{lineno}: non-finite sample {text!r}")
            values.append(v)
    if not values:
        raise FormatError(f"{path}: no samples")
    if len(values) < 2:
        raise FormatError(f"{path}: need at least 2 samples, got 1")
    return Signal1D(np.array(values), h)


def snapshot_path(path, k: int) -> Path:
    """``out.csv`` -> ``out_t<k>.csv``."""
    p = Path(path)
    return p.with_name(f"{p.stem}_t{k}{p.suffix}")


def write_signal_csv(path, signal, snapshots=(), h: float | None = None) -> list[Path]:
    """Write samples at 17 significant digits (lossless for doubles).

    ``snapshots`` is a sequence of (step, values); each goes to its own
    ``_t<step>`` file. Returns every path written.
    """
    values = np.asarray(getattr(signal, "values", signal), dtype=np.float64)
    h = getattr(signal, "h", 1.0) if h is None else h
    written = [Path(path)]
    _write_samples(path, values, h)
    for k, snap in snapshots:
        p = snapshot_path(path, k)
        _write_samples(p, np.asarray(snap, dtype=np.float64), h)
        written.append(p)
    return written


def _write_samples(path, values: np.ndarray, h: float) -> None:
    lines = [f"h={h:.17g}"] + [f"{v:.17g}" for v in values]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- PGM / PNG ----------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*")


def _header_tokens(data: bytes, count: int, path) -> tuple[list[int], int]:
    """Parse ``count`` integer header tokens after the magic; returns the
    tokens and the offset just past the single whitespace that follows."""
    pos = 2
    out = []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        pos = m.end()
        start = pos
        while pos < len(data) and data[pos : pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated or malformed PGM header")
        out.append(int(data[start:pos]))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError(f"{path}: truncated or malformed PGM header")
    return out, pos + 1


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Raw samples (uint16 array, rows x cols) and maxval from a P2 or P5 file."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a PGM file (magic {magic!r})")
    (width, height, maxval), pos = _header_tokens(data, 3, path)
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise FormatError(f"{path}: maxval {maxval} outside [1, 65535]")
    count = width * height
    if magic == b"P5":
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        if len(data) - pos < need:
            raise FormatError(f"{path}: truncated pixel data ({len(data) - pos} of {need} bytes)")
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    else:
        body = re.sub(rb"#[^\n]*", b" ", data[pos:]).split()
        if len(body) < count:
            raise FormatError(f"{path}: truncated pixel data ({len(body)} of {count} samples)")
        try:
            raw = np.array([int(t) for t in body[:count]])
        except ValueError:
            raise FormatError(f"{path}: non-integer sample in P2 data") from None
    if raw.max() > maxval:
        raise FormatError(f"{path}: sample {raw.max()} exceeds maxval {maxval}")
    return raw.astype(np.uint16).reshape(height, width), maxval


def write_pgm(path, raw, maxval: int = 255, binary: bool = True) -> None:
    """Write integer samples; P5 (binary, big-endian when 16-bit) or P2."""
    raw = np.asarray(raw)
    if raw.ndim != 2:
        raise ValueError("PGM data must be 2-D")
    if not 1 <= maxval <= 65535:
        raise ValueError(f"maxval {maxval} outside [1, 65535]")
    if raw.size and (raw.min() < 0 or raw.max() > maxval):
        raise ValueError(f"samples outside [0, {maxval}]")
    height, width = raw.shape
    header = f"{'P5' if binary else 'P2'}\n{width} {height}\n{maxval}\n".encode("ascii")
    if binary:
        body = raw.astype(">u2" if maxval > 255 else "u1").tobytes()
    else:
        body = ("\n".join(" ".join(str(int(v)) for v in row) for row in raw) + "\n").encode("ascii")
    Path(path).write_bytes(header + body)


def read_png(path) -> np.ndarray:
    """8-bit grayscale PNG as a uint8 array."""
    from PIL import Image

    with Image.open(path) as im:
        if im.format != "PNG":
            raise FormatError(f"{path}: not a PNG file")
        if im.mode != "L":
            raise FormatError(f"{path}: unsupported PNG mode {im.mode!r} (only 8-bit grayscale)")
        return np.asarray(im, dtype=np.uint8).copy()


def write_png(path, raw) -> None:
    from PIL import Image

    raw = np.asarray(raw)
    if raw.ndim != 2 or raw.dtype != np.uint8:
        raise ValueError("PNG output must be a 2-D uint8 array")
    Image.fromarray(raw, mode="L").save(path, format="PNG")


def read_image(path) -> tuple[Image2D, int]:
    """Normalized image and its maxval; the format follows the extension."""
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        raw, maxval = read_png(path), 255
    elif suffix in (".pgm", ".pnm"):
        raw, maxval = read_pgm(path)
    else:
        raise FormatError(f"{path}: unknown image extension {suffix!r}")
    return Image2D(normalize(raw, maxval)), maxval


def write_image(path, img, maxval: int = 255) -> None:
    """Quantize a [0, 1] image and write it (PNG forces maxval 255)."""
    values = np.clip(np.asarray(getattr(img, "pixels", img), dtype=np.float64), 0.0, 1.0)
    suffix = Path(path).suffix.lower()
    if suffix == ".png":
        write_png(path, quantize(values, 255))
    elif suffix in (".pgm", ".pnm"):
        write_pgm(path, quantize(values, maxval), maxval)
    else:
        raise FormatError(f"{path}: unknown image extension {suffix!r}")


# -- noise, synthetic data, metrics ---------------------------------------------


def rng_for(seed: int) -> np.random.RandomState:
    """The artifact's random generator.

    NumPy's legacy ``RandomState`` (MT19937 with the polar Box-Muller normal
    sampler) has a stream frozen by NumPy's compatibility policy, so seeded
    regression data is reproducible across versions and platforms.
    """
    return np.random.RandomState(seed)


def add_awgn(data, sigma_noise: float, seed: int):
    """Add i.i.d. N(0, sigma^2) noise. Images (2-D) are clamped to [0, 1]."""
    if sigma_noise < 0:
        raise ValueError(f"sigma_noise must be >= 0, got {sigma_noise}")
    if isinstance(data, Signal1D):
        return data.with_values(add_awgn(data.values, sigma_noise, seed))
    if isinstance(data, Image2D):
        return Image2D(add_awgn(data.pixels, sigma_noise, seed))
    u = np.asarray(data, dtype=np.float64)
    if sigma_noise == 0:
        return u.copy()
    out = u + sigma_noise * rng_for(seed).standard_normal(u.shape)
    return np.clip(out, 0.0, 1.0) if u.ndim == 2 else out


@dataclass
class Synthetic:
    clean: Signal1D | Image2D
    noisy: Signal1D | Image2D
    events: np.ndarray | None = None  # jump positions / spike onsets (1D)


SYNTH_KINDS = ("piecewise", "spiketrain", "stepedge", "testcard")


def synth(kind: str, params: dict | None = None, seed: int = 0) -> Synthetic:
    """Deterministic synthetic data with its noise-free ground truth.

    piecewise   n=512, plateaus=3, sigma=0.05: random distinct levels in
                [0, 1] on random segments.
    spiketrain  n=1000, spikes=6, rise=4, decay=15, amp=1, sigma=0.05,
                h=1: EPSP-like events with a linear rise over ``rise``
                samples and an exponential decay (time constant
                ``decay``), so an event is about as wide as ``rise +
                decay ln 2`` samples, less than the default 1D window, with
                flat stretches between events.
    stepedge    size=64, height=1, sigma=0.05: vertical edge from 0 to
                ``height`` at the middle column.
    testcard    size=126, sigma=0.05: flat regions, straight and curved
                edges and a fine checker texture.
    """
    p = dict(params or {})
    rng = rng_for(seed)
    noise_seed = int(rng.randint(0, 2**31 - 1))

    def take(key, default):
        return type(default)(p.pop(key, default))

    events = None
    if kind == "piecewise":
        n, k, sigma = take("n", 512), take("plateaus", 3), take("sigma", 0.05)
        if not 1 <= k <= n // 4:
            raise ValueError(f"plateaus must be in [1, {n // 4}]")
        events = np.sort(rng.choice(np.arange(4, n - 3, 4), k - 1, replace=False))
        levels = rng.uniform(0.1, 0.9, k)
        while k > 1 and np.min(np.abs(np.diff(levels))) < 0.1:
            levels = rng.uniform(0.1, 0.9, k)
        clean = np.repeat(levels, np.diff(np.concatenate([[0], events, [n]])))
        out_clean = Signal1D(clean, take("h", 1.0))
    elif kind == "spiketrain":
        n, k = take("n", 1000), take("spikes", 6)
        rise, decay, amp, sigma = take("rise", 4), take("decay", 15.0), take("amp", 1.0), take("sigma", 0.05)
        if rise < 1 or decay <= 0:
            raise ValueError("rise must be >= 1 and decay > 0")
        gap = n // (k + 1)
        events = np.array([gap * (j + 1) + rng.randint(-gap // 4, gap // 4 + 1) for j in range(k)])
        t = np.arange(n)
        clean = np.zeros(n)
        for s in events:
            d = t - s
            up = (d >= 0) & (d < rise)
            down = d >= rise
            clean[up] += amp * (d[up] + 1) / rise
            clean[down] += amp * np.exp(-(d[down] - rise + 1) / decay)
        out_clean = Signal1D(clean, take("h", 1.0))
    elif kind == "stepedge":
        size, height, sigma = take("size", 64), take("height", 1.0), take("sigma", 0.05)
        img = np.zeros((size, size))
        img[:, size // 2 :] = height
        out_clean = Image2D(img)
    elif kind == "testcard":
        size, sigma = take("size", 126), take("sigma", 0.05)
        out_clean = Image2D(test_card(size))
    else:
        raise ValueError(f"unknown kind {kind!r}; expected one of {SYNTH_KINDS}")
    if p:
        raise ValueError(f"unknown parameters for {kind}: {sorted(p)}")
    noisy = add_awgn(out_clean, sigma, noise_seed)
    return Synthetic(out_clean, noisy, events)


def test_card(size: int = 126) -> np.ndarray:
    """Flat background, a bright rectangle, a dark disk and a checker patch."""
    if size < 16:
        raise ValueError("test card needs size >= 16")
    r, c = np.mgrid[0:size, 0:size] / size
    img = np.full((size, size), 0.25)
    img[(r > 0.1) & (r < 0.45) & (c > 0.1) & (c < 0.9)] = 0.75
    img[(r - 0.72) ** 2 + (c - 0.3) ** 2 < 0.18**2] = 0.05
    rr, cc = np.mgrid[0:size, 0:size]
    patch = (r > 0.58) & (r < 0.9) & (c > 0.58) & (c < 0.9)
    img[patch] = np.where(((rr // 2 + cc // 2) % 2 == 0)[patch], 0.45, 0.65)
    return img


def mse(reference, test) -> float:
    a = np.asarray(getattr(reference, "pixels", getattr(reference, "values", reference)), dtype=np.float64)
    b = np.asarray(getattr(test, "pixels", getattr(test, "values", test)), dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr(reference, test, peak: float = 1.0) -> float:
    """10 log10(peak^2 / mse) in dB; ``inf`` for identical inputs."""
    m = mse(reference, test)
    return math.inf if m == 0 else 10.0 * math.log10(peak * peak / m)


# -- run configuration ----------------------------------------------------------

MODES = ("denoise1d", "denoise2d", "pm1d", "pm2d", "linear", "synth", "metrics")


@dataclass
class RunConfig:
    mode: str = "denoise1d"
    input: str | None = None
    output: str | None = None
    truth: str | None = None
    metrics: str | None = None
    l: int = 20
    q: int = 2
    q1: int | None = None
    q2: int | None = None
    modes: int = 3
    bmesh: int = 400
    tau: float | None = None
    steps: int = 300
    sigma0: float | None = None
    eps_tv: float | None = None
    eps_g: float = 0.05
    edge_stop: str = "poly"
    lam: float | None = None
    refresh_every: int = 1
    snapshot_stride: int = 0
    stencil: str = "compact"
    time: float = 1.0
    kind: str = "spiketrain"
    sigma_noise: float = 0.05
    size: int | None = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.edge_stop not in ("poly", "pm"):
            raise ValueError(f"edge_stop must be 'poly' or 'pm', got {self.edge_stop!r}")

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> dict:
        """Parse ``key=value`` lines into a dict of typed overrides."""
        types = {f.name: f.type for f in fields(cls)}
        out = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"{source}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise FormatError(f"{source}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(value, types[key], f"{source}:{lineno}")
        return out

    @classmethod
    def from_file(cls, path, **overrides) -> RunConfig:
        values = cls.from_text(Path(path).read_text(encoding="utf-8"), str(path))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_text(self) -> str:
        return "".join(f"{f.name}={'' if getattr(self, f.name) is None else getattr(self, f.name)}\n" for f in fields(self))


def _coerce(value: str, typ, where: str):
    typ = str(typ)
    if value == "" and "None" in typ:
        return None
    try:
        if typ.startswith("int"):
            return int(value)
        if typ.startswith("float"):
            return float(value)
    except ValueError:
        raise FormatError(f"{where}: bad value {value!r} for {typ}") from None
    return value
