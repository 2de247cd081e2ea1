"""Chaotic block-permutation + XOR color image cipher and its evaluation
harness (differential metrics, entropy, correlation, robustness)."""
from . import _backend
from .cipher import (CipherEnvelope, MasterKey, decrypt, encrypt)
from .errors import ChaocryptError

__version__ = "0.1.0"
__all__ = ["CipherEnvelope", "MasterKey", "encrypt", "decrypt", "ChaocryptError", "backend"]


def backend() -> str:
    """Name of the active orbit-kernel backend (``compiled`` or ``python``)."""
    return _backend.name
