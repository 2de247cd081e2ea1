"""Channel attacks on ciphertext and the decrypt-then-PSNR evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cipher import MasterKey, as_image, decrypt, encrypt
from .errors import DomainError
from .metrics import channel_names, mse, psnr_from_mse


@dataclass(frozen=True)
class Speckle:
    alpha: float
    seed: int = 0

    kind = "speckle"

    def __post_init__(self):
        if not self.alpha >= 0:
            raise DomainError(f"speckle variance must be >= 0, got {self.alpha!r}")

    @property
    def parameter(self):
        return self.alpha

    def apply(self, image):
        return speckle_noise(image, self.alpha, self.seed)


@dataclass(frozen=True)
class Crop:
    fraction: float

    kind = "crop"

    def __post_init__(self):
        if not 0.0 <= self.fraction <= 1.0:
            raise DomainError(f"crop fraction must lie in [0, 1], got {self.fraction!r}")

    @property
    def parameter(self):
        return self.fraction

    def apply(self, image):
        return crop_loss(image, self.fraction)


AttackSpec = Speckle | Crop


def speckle_field(shape, alpha: float, seed: int) -> np.ndarray:
    """Zero-mean uniform noise with variance ``alpha``.

    The underlying uniforms depend only on ``seed`` and ``shape``, so for a
    fixed seed the field scales monotonically with ``alpha``.
    """
    if not alpha >= 0:
        raise DomainError(f"speckle variance must be >= 0, got {alpha!r}")
    u = np.random.default_rng(seed).uniform(-1.0, 1.0, size=shape)
    return math.sqrt(3.0 * alpha) * u


def speckle_noise(image, alpha: float, seed: int = 0) -> np.ndarray:
    """Multiplicative speckle ``v + n*v``, rounded and clipped to [0, 255]."""
    img = as_image(image)
    v = img.astype(np.float64)
    noisy = np.rint(v + speckle_field(img.shape, alpha, seed) * v)
    return np.clip(noisy, 0, 255).astype(np.uint8)


def crop_side(height: int, width: int, fraction: float) -> int:
    return int(math.floor(min(height, width) * math.sqrt(fraction) + 0.5))


def crop_loss(image, fraction: float) -> np.ndarray:
    """Zero a top-left square covering about ``fraction`` of the area."""
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"crop fraction must lie in [0, 1], got {fraction!r}")
    out = as_image(image).copy()
    s = crop_side(out.shape[0], out.shape[1], fraction)
    out[:s, :s, :] = 0
    return out


@dataclass
class AttackResult:
    kind: str
    parameter: float
    channel: str
    psnr: float
    incorrect_fraction: float


CSV_HEADER = "kind,parameter,channel,psnr_db,incorrect_fraction"


def robustness_report(plain, key: MasterKey, m: int, attacks) -> list[AttackResult]:
    """Encrypt, attack the ciphertext, decrypt, and score against ``plain``.

    One row per (attack, channel). ``incorrect_fraction`` is the share of
    recovered bytes in that channel that differ from the plaintext.
    """
    attacks = list(attacks)
    if not attacks:
        return []
    plain = as_image(plain)
    env = encrypt(plain, key, m)
    names = channel_names(plain.shape[2])
    rows = []
    for attack in attacks:
        recovered = decrypt(env.with_pixels(attack.apply(env.pixels())), key)
        errs = mse(plain, recovered)
        wrong = (recovered != plain).mean(axis=(0, 1))
        for k, name in enumerate(names):
            rows.append(AttackResult(attack.kind, float(attack.parameter), name,
                                     psnr_from_mse(float(errs[k])), float(wrong[k])))
    return rows


def to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        p = "inf" if math.isinf(r.psnr) else f"{r.psnr:.4f}"
        lines.append(f"{r.kind},{r.parameter:g},{r.channel},{p},{r.incorrect_fraction:.6f}")
    return "\n".join(lines) + "\n"
