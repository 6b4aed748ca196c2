"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when it was built; otherwise the
numpy fallback is loaded.  Setting ``BERGMAN_RIGIDITY_PURE=1`` forces the
fallback.
"""
import importlib
import os

from . import _fallback


def _load():
    if os.environ.get("BERGMAN_RIGIDITY_PURE", "") not in ("", "0"):
        return _fallback, "python"
    try:
        return importlib.import_module(f"{__package__}._core"), "cython"
    except ImportError:
        return _fallback, "python"


_impl, BACKEND = _load()


def get_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _fallback
    if name == "cython":
        return importlib.import_module(f"{__package__}._core")
    raise ValueError(f"unknown backend {name!r}")


def kerzman_stein_matrix(z, tangent, ds):
    return _impl.kerzman_stein_matrix(z, tangent, ds)


def cauchy_sum(targets, src, dzw, dens, power=1):
    return _impl.cauchy_sum(targets, src, dzw, dens, int(power))


def annulus_green(z, w, q, nterms):
    return _impl.annulus_green(z, w, float(q), int(nterms))
