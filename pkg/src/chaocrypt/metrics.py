"""Security and fidelity metrics for 8-bit images.

Channel-level functions take 2-D ``uint8`` arrays; the image-level helpers
split ``(h, w, c)`` images into channels and assemble a
:class:`MetricsReport`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateChannelError, DomainError, ShapeMismatchError

# PSNR of identical images
INFINITE_PSNR = math.inf
# chi-square critical value, 255 degrees of freedom, p = 0.01
CHI2_CRITICAL_255 = 310.457


class Direction(str, enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"


def _channel(c) -> np.ndarray:
    c = np.asarray(c)
    if c.ndim != 2:
        raise DomainError(f"expected a 2-D channel, got shape {c.shape}")
    return c


def _pair(c1, c2):
    c1, c2 = _channel(c1), _channel(c2)
    if c1.shape != c2.shape:
        raise ShapeMismatchError(f"channel shapes differ: {c1.shape} vs {c2.shape}")
    if c1.size == 0:
        raise DomainError("empty channel")
    return c1, c2


def npcr(c1, c2) -> float:
    """Percentage of positions at which the two channels differ."""
    c1, c2 = _pair(c1, c2)
    return 100.0 * np.count_nonzero(c1 != c2) / c1.size


def uaci(c1, c2) -> float:
    """Mean absolute difference as a percentage of 255."""
    c1, c2 = _pair(c1, c2)
    diff = np.abs(c1.astype(np.int64) - c2.astype(np.int64))
    return 100.0 * int(diff.sum()) / (255.0 * c1.size)


def histogram(c) -> np.ndarray:
    return np.bincount(_channel(c).ravel(), minlength=256)


def shannon_entropy(c) -> float:
    """Entropy in bits per symbol of the empirical 256-value distribution."""
    c = _channel(c)
    if c.size == 0:
        raise DomainError("entropy of an empty channel is undefined")
    p = histogram(c) / c.size
    p = p[p > 0]
    return float(np.sum(p * np.log2(1.0 / p)))


def chi_square_uniformity(hist) -> float:
    hist = np.asarray(hist, dtype=np.float64)
    total = hist.sum()
    if total <= 0:
        raise DomainError("chi-square of an empty histogram is undefined")
    expected = total / hist.size
    return float(np.sum((hist - expected) ** 2) / expected)


def adjacent_pairs(c, direction) -> tuple[np.ndarray, np.ndarray]:
    """All neighbouring pixel pairs in ``direction`` as two flat arrays."""
    c = _channel(c)
    direction = Direction(direction)
    if direction is Direction.HORIZONTAL:
        return c[:, :-1].ravel(), c[:, 1:].ravel()
    if direction is Direction.VERTICAL:
        return c[:-1, :].ravel(), c[1:, :].ravel()
    return c[:-1, :-1].ravel(), c[1:, 1:].ravel()


def adjacent_correlation(c, direction) -> float:
    """Pearson correlation over every adjacent pair in ``direction``."""
    c = _channel(c)
    if c.shape[0] < 2 or c.shape[1] < 2:
        raise DomainError(f"correlation needs at least a 2x2 channel, got {c.shape}")
    u, v = adjacent_pairs(c, direction)
    u = u.astype(np.float64)
    v = v.astype(np.float64)
    du = u - u.mean()
    dv = v - v.mean()
    denom = math.sqrt(float(np.dot(du, du)) * float(np.dot(dv, dv)))
    if denom == 0.0:
        raise DegenerateChannelError(f"zero variance along {Direction(direction).value} pairs")
    return float(np.dot(du, dv)) / denom


def _images(i1, i2):
    i1 = np.asarray(i1)
    i2 = np.asarray(i2)
    if i1.ndim == 2:
        i1 = i1[:, :, None]
    if i2.ndim == 2:
        i2 = i2[:, :, None]
    if i1.shape != i2.shape:
        raise ShapeMismatchError(f"image shapes differ: {i1.shape} vs {i2.shape}")
    if i1.size == 0:
        raise DomainError("empty image")
    return i1, i2


def mse(i1, i2) -> np.ndarray:
    """Per-channel mean squared error."""
    i1, i2 = _images(i1, i2)
    d = i1.astype(np.int64) - i2.astype(np.int64)
    return (d * d).sum(axis=(0, 1)) / (i1.shape[0] * i1.shape[1])


def psnr_from_mse(err) -> float:
    return INFINITE_PSNR if err == 0 else 10.0 * math.log10(255.0 ** 2 / err)


def psnr(i1, i2) -> np.ndarray:
    """Per-channel PSNR in dB; identical channels give ``inf``."""
    return np.array([psnr_from_mse(e) for e in mse(i1, i2)])


def channel_names(n: int) -> list[str]:
    if n == 3:
        return ["red", "green", "blue"]
    if n == 1:
        return ["gray"]
    return [f"c{i}" for i in range(n)]


@dataclass
class ChannelMetrics:
    name: str
    entropy: float | None = None
    chi_square: float | None = None
    correlation: dict[str, float] = field(default_factory=dict)
    histogram: np.ndarray | None = None
    npcr: float | None = None
    uaci: float | None = None
    mse: float | None = None
    psnr: float | None = None


@dataclass
class MetricsReport:
    channels: list[ChannelMetrics]

    def to_text(self) -> str:
        """``channel.metric=value`` lines; histograms are left to :meth:`histogram_csv`."""
        lines = []
        for ch in self.channels:
            for metric in ("entropy", "chi_square", "npcr", "uaci", "mse", "psnr"):
                value = getattr(ch, metric)
                if value is not None:
                    lines.append(f"{ch.name}.{metric}={_fmt(value)}")
            for direction, r in ch.correlation.items():
                lines.append(f"{ch.name}.correlation.{direction}={_fmt(r)}")
        return "\n".join(lines) + "\n"

    def histogram_csv(self, name: str) -> str:
        ch = next(c for c in self.channels if c.name == name)
        if ch.histogram is None:
            raise ValueError(f"no histogram recorded for channel {name!r}")
        return "value,count\n" + "".join(f"{i},{int(n)}\n" for i, n in enumerate(ch.histogram))


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.6f}"


def _split(image) -> list[np.ndarray]:
    img = np.asarray(image)
    if img.ndim == 2:
        img = img[:, :, None]
    return [img[:, :, k] for k in range(img.shape[2])]


def analyze_image(image, against=None) -> MetricsReport:
    """Entropy, histogram chi-square and three-direction correlation per
    channel; with ``against``, also MSE and PSNR."""
    chans = _split(image)
    report = MetricsReport([])
    errs = mse(image, against) if against is not None else None
    for k, (name, c) in enumerate(zip(channel_names(len(chans)), chans)):
        hist = histogram(c)
        cm = ChannelMetrics(name, entropy=shannon_entropy(c),
                            chi_square=chi_square_uniformity(hist), histogram=hist)
        for d in Direction:
            try:
                cm.correlation[d.value] = adjacent_correlation(c, d)
            except DomainError:
                cm.correlation[d.value] = math.nan
        if errs is not None:
            cm.mse = float(errs[k])
            cm.psnr = psnr_from_mse(cm.mse)
        report.channels.append(cm)
    return report


def differential_report(c1, c2) -> MetricsReport:
    """Per-channel NPCR and UACI between two ciphertext images."""
    a, b = _images(c1, c2)
    names = channel_names(a.shape[2])
    return MetricsReport([
        ChannelMetrics(n, npcr=npcr(x, y), uaci=uaci(x, y))
        for n, x, y in zip(names, _split(a), _split(b))
    ])
