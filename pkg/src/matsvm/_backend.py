"""Kernel backend selection.

``MATSVM_BACKEND=numba`` (default when numba imports) or ``numpy`` picks the
implementation at import time; ``use_backend`` switches it temporarily.
"""

import contextlib
import importlib
import os
import warnings

ENV_VAR = "MATSVM_BACKEND"
_MODULES = {"numba": "._numba_kernels", "numpy": "._numpy_kernels"}


def load(name):
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_MODULES)}")
    return importlib.import_module(_MODULES[name], __package__)


def available():
    names = ["numpy"]
    try:
        load("numba")
    except ImportError:
        pass
    else:
        names.insert(0, "numba")
    return names


def _from_env():
    requested = os.environ.get(ENV_VAR, "").strip().lower()
    if requested:
        return load(requested)
    try:
        return load("numba")
    except ImportError:
        warnings.warn("numba not importable; using the numpy backend", RuntimeWarning)
        return load("numpy")


_active = _from_env()


def active():
    return _active


def name():
    return _active.NAME


@contextlib.contextmanager
def use_backend(backend):
    """Temporarily route kernel calls to ``backend`` ("numba" or "numpy")."""
    global _active
    previous = _active
    _active = load(backend)
    try:
        yield _active
    finally:
        _active = previous
