"""Kernel backend selection: compiled extension with pure-numpy fallback.

The compiled module is used when importable; set LEVYFLUCT_BACKEND=python to
force the fallback (used by the equivalence tests and the benchmark).
"""
from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels  # compiled twin
    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _kernels = None
    HAVE_COMPILED = False


def get_kernels(name=None):
    """Return the kernel module for ``name`` in {None, "auto", "compiled", "python"}."""
    if name in (None, "auto"):
        name = os.environ.get("LEVYFLUCT_BACKEND", "").strip() or (
            "compiled" if HAVE_COMPILED else "python")
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not available in this install")
        return _kernels
    if name == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {name!r}")


def backend_name(name=None):
    mod = get_kernels(name)
    return "compiled" if mod is _kernels and HAVE_COMPILED else "python"
