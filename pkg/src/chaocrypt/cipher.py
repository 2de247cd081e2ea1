"""Block-permutation + XOR image cipher.

Encryption: sum the plaintext into a 32-bit digest, perturb the key's
initial conditions with it, draw a logistic stream and a Duffing stream,
reorder the logistic stream by the Duffing stream's sort order, use the
first ``n_blocks`` values to shuffle ``m x m`` tiles and the rest as an XOR
mask over the shuffled image. The digest travels in the envelope header so
decryption can rebuild the same keystream.

Images are ``uint8`` arrays of shape ``(height, width, channels)``.
"""
from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass

import numpy as np

from . import _backend
from .chaos import (DEFAULT_BURN_IN, DUFFING_A, DUFFING_B, MU_MAX, MU_MIN,
                    combine_streams, floats_to_bytes, floats_to_permutation)
from .errors import DimensionError, DomainError, KeyRangeError, ShapeMismatchError

DEFAULT_BLOCK_SIZE = 32

_GOLDEN = 0.6180339887
_DIGEST_SCALE = 2.0 ** -32
# fractional golden-ratio multiples spread one digest over y, v, w
_MULT_Y = _GOLDEN
_MULT_V = math.fmod(2 * _GOLDEN, 1.0)
_MULT_W = math.fmod(3 * _GOLDEN, 1.0)
# y' enters the Duffing orbit as a small x-kick halfway through burn-in;
# 0.01 keeps the kicked state inside the basin of the attractor
_DUFFING_KICK = 0.01

KEY_FIELDS = ("x", "y", "v", "w", "mu", "a", "b", "n_iter")


def _frac(z):
    return z - math.floor(z)


@dataclass(frozen=True)
class MasterKey:
    """The secret: four initial conditions, the logistic control
    parameter, the Duffing constants and the burn-in count."""

    x: float
    y: float
    v: float
    w: float
    mu: float = 3.99
    a: float = DUFFING_A
    b: float = DUFFING_B
    n_iter: int = DEFAULT_BURN_IN

    def __post_init__(self):
        for name in ("x", "y", "v", "w"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise KeyRangeError(f"{name}={value!r} must lie in (0, 1)")
        if not MU_MIN <= self.mu <= MU_MAX:
            raise KeyRangeError(f"mu={self.mu!r} must lie in [{MU_MIN}, {MU_MAX}]")
        for name in ("a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise KeyRangeError(f"{name} must be finite")
        if isinstance(self.n_iter, bool) or not isinstance(self.n_iter, (int, np.integer)) \
                or self.n_iter < 1:
            raise KeyRangeError(f"n_iter={self.n_iter!r} must be a positive integer")

    def replace(self, **changes) -> "MasterKey":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class CipherEnvelope:
    width: int
    height: int
    channels: int
    block_size: int
    digest: int
    ciphertext: bytes

    def __post_init__(self):
        if min(self.width, self.height, self.channels, self.block_size) < 1:
            raise DimensionError("envelope dimensions and block size must be positive")
        if self.width % self.block_size or self.height % self.block_size:
            raise DimensionError(
                f"block size {self.block_size} does not divide {self.width}x{self.height}")
        if not 0 <= self.digest < 2 ** 32:
            raise DomainError(f"digest {self.digest!r} is not a 32-bit unsigned value")
        expected = self.width * self.height * self.channels
        if len(self.ciphertext) != expected:
            raise ShapeMismatchError(
                f"ciphertext has {len(self.ciphertext)} bytes, header implies {expected}")

    @property
    def shape(self):
        return (self.height, self.width, self.channels)

    def pixels(self) -> np.ndarray:
        """Ciphertext viewed as a (read-only) image."""
        return np.frombuffer(self.ciphertext, dtype=np.uint8).reshape(self.shape)

    def with_pixels(self, pixels) -> "CipherEnvelope":
        """Same header, new ciphertext (e.g. after a channel attack)."""
        pixels = as_image(pixels)
        if pixels.shape != self.shape:
            raise ShapeMismatchError(f"expected shape {self.shape}, got {pixels.shape}")
        return dataclasses.replace(self, ciphertext=pixels.tobytes())


@dataclass
class BlockGrid:
    blocks: np.ndarray  # (rows * cols, m, m, channels)
    grid_dims: tuple[int, int]

    def __len__(self):
        return len(self.blocks)


def as_image(image) -> np.ndarray:
    """Validate and normalise to a C-contiguous ``(h, w, c)`` uint8 array."""
    arr = np.asarray(image)
    if arr.ndim == 2:
        arr = arr[:, :, np.newaxis]
    if arr.ndim != 3 or 0 in arr.shape:
        raise DimensionError(f"expected a non-empty (h, w, c) image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() > 255:
            raise DomainError("pixel values must be integers in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def plaintext_digest(image) -> int:
    """Sum of all pixel values modulo 2**32."""
    return int(as_image(image).sum(dtype=np.uint64)) & 0xFFFFFFFF


def derive_initial_conditions(key: MasterKey, digest: int) -> MasterKey:
    """Mix the plaintext digest into x, y, v, w; everything else is kept."""
    if not 0 <= digest < 2 ** 32:
        raise DomainError(f"digest {digest!r} is not a 32-bit unsigned value")
    t = digest * _DIGEST_SCALE
    return key.replace(
        x=0.01 + 0.98 * _frac(key.x + t),
        y=0.01 + 0.98 * _frac(key.y + _frac(_MULT_Y * t)),
        v=0.01 + 0.98 * _frac(key.v + _frac(_MULT_V * t)),
        w=0.01 + 0.98 * _frac(key.w + _frac(_MULT_W * t)),
    )


def build_keystream(key: MasterKey, digest: int, n_pixels: int, n_blocks: int):
    """Return ``(block_permutation, xor_mask)``.

    ``n_pixels`` is the number of mask bytes (one per stored 8-bit value).
    """
    if n_pixels < 1 or n_blocks < 1:
        raise DomainError("n_pixels and n_blocks must be at least 1")
    eff = derive_initial_conditions(key, digest)
    length = n_blocks + n_pixels
    k = _backend.kernels

    xs = k.logistic_orbit(eff.x, eff.mu, length, eff.n_iter)

    half = eff.n_iter // 2
    _, dx, dy = k.duffing_orbit(eff.v - 0.5, eff.w - 0.5, eff.a, eff.b, 0, half)
    ys, _, _ = k.duffing_orbit(dx + _DUFFING_KICK * eff.y, dy, eff.a, eff.b,
                               length, eff.n_iter - half)

    combined = combine_streams(xs, ys)
    return floats_to_permutation(combined[:n_blocks]), floats_to_bytes(combined[n_blocks:])


def partition_blocks(image, m: int) -> BlockGrid:
    """Cut into row-major ``m x m`` tiles, each carrying all channels."""
    img = as_image(image)
    h, w, c = img.shape
    if m < 1 or h % m or w % m:
        raise DimensionError(f"block size {m} does not divide {w}x{h}")
    rows, cols = h // m, w // m
    blocks = img.reshape(rows, m, cols, m, c).swapaxes(1, 2).reshape(rows * cols, m, m, c)
    return BlockGrid(blocks, (rows, cols))


def merge_blocks(grid: BlockGrid) -> np.ndarray:
    rows, cols = grid.grid_dims
    n, m, _, c = grid.blocks.shape
    if n != rows * cols:
        raise ShapeMismatchError(f"{n} blocks do not fill a {rows}x{cols} grid")
    return np.ascontiguousarray(
        grid.blocks.reshape(rows, cols, m, m, c).swapaxes(1, 2).reshape(rows * m, cols * m, c))


def apply_block_permutation(grid: BlockGrid, perm) -> BlockGrid:
    """Output block ``j`` is input block ``perm[j]``."""
    perm = np.asarray(perm)
    if perm.shape != (len(grid),):
        raise ShapeMismatchError(f"permutation of length {perm.size} for {len(grid)} blocks")
    return BlockGrid(grid.blocks[perm], grid.grid_dims)


def invert_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size, dtype=perm.dtype)
    return inv


def xor_diffuse(pixels, mask) -> np.ndarray:
    pixels = np.asarray(pixels, dtype=np.uint8)
    mask = np.asarray(mask, dtype=np.uint8)
    if pixels.size != mask.size:
        raise ShapeMismatchError(f"{pixels.size} pixel bytes vs {mask.size} mask bytes")
    return np.bitwise_xor(pixels.reshape(-1), mask.reshape(-1))


def encrypt(image, key: MasterKey, block_size: int = DEFAULT_BLOCK_SIZE, *,
            timings: dict | None = None) -> CipherEnvelope:
    """Encrypt an image.

    If ``timings`` is given it receives wall-clock seconds for the
    ``keystream``, ``permutation`` and ``diffusion`` phases.
    """
    img = as_image(image)
    h, w, c = img.shape
    if block_size < 1 or h % block_size or w % block_size:
        raise DimensionError(f"block size {block_size} does not divide {w}x{h}")
    n_blocks = (h // block_size) * (w // block_size)

    t0 = time.perf_counter()
    digest = plaintext_digest(img)
    perm, mask = build_keystream(key, digest, img.size, n_blocks)
    t1 = time.perf_counter()
    scrambled = merge_blocks(apply_block_permutation(partition_blocks(img, block_size), perm))
    t2 = time.perf_counter()
    cipher = xor_diffuse(scrambled, mask)
    t3 = time.perf_counter()
    if timings is not None:
        timings.update(keystream=t1 - t0, permutation=t2 - t1, diffusion=t3 - t2)
    return CipherEnvelope(w, h, c, block_size, digest, cipher.tobytes())


def decrypt(envelope: CipherEnvelope, key: MasterKey) -> np.ndarray:
    h, w, c = envelope.shape
    m = envelope.block_size
    n_blocks = (h // m) * (w // m)
    perm, mask = build_keystream(key, envelope.digest, h * w * c, n_blocks)
    scrambled = xor_diffuse(envelope.pixels(), mask).reshape(h, w, c)
    grid = apply_block_permutation(partition_blocks(scrambled, m), invert_permutation(perm))
    return merge_blocks(grid)
