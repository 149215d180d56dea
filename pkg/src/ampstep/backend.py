"""Kernel backend selection.

Two implementations of the strided gate kernel exist: a numba @njit version
(kernels_numba) and a pure-numpy version (kernels_numpy). The active one is
picked from the AMPSTEP_BACKEND environment variable ("numba" or "numpy");
if unset, numba is used when importable. Both produce identical results up
to floating-point noise; the benchmark in benchmarks/ compares them.
"""

import os

_VALID = ("numba", "numpy")
_active = None


def _default_name() -> str:
    name = os.environ.get("AMPSTEP_BACKEND", "").strip().lower()
    if name:
        if name not in _VALID:
            raise ValueError(f"AMPSTEP_BACKEND must be one of {_VALID}, got {name!r}")
        return name
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


def _load(name: str):
    if name == "numba":
        from ampstep import kernels_numba
        return kernels_numba
    from ampstep import kernels_numpy
    return kernels_numpy


def active_backend():
    """Return the active kernel module, loading it on first use."""
    global _active
    if _active is None:
        _active = _load(_default_name())
    return _active


def set_backend(name: str):
    """Force a backend by name ("numba" or "numpy"). Returns the module."""
    global _active
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    _active = _load(name)
    return _active
