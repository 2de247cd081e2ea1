"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise, or
when ``CHAOCRYPT_PURE_PYTHON=1`` is set, the pure-Python ``_pykernels``.
"""
import importlib
import os

from . import _pykernels

name = "python"
kernels = _pykernels

if os.environ.get("CHAOCRYPT_PURE_PYTHON") != "1":
    try:
        kernels = importlib.import_module("chaocrypt._kernels")
        name = "compiled"
    except ImportError:
        pass


def available():
    """Names of the backends that can be selected in this process."""
    names = ["python"]
    try:
        importlib.import_module("chaocrypt._kernels")
    except ImportError:
        return names
    return ["compiled"] + names


def use(backend):
    """Switch the active backend (``"compiled"`` or ``"python"``)."""
    global kernels, name
    if backend == "python":
        kernels = _pykernels
    elif backend == "compiled":
        kernels = importlib.import_module("chaocrypt._kernels")
    else:
        raise ValueError(f"unknown backend {backend!r}")
    name = backend
