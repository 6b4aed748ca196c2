"""Closed-form kernels used as independent references.

None of these go through the dictionary, Nystrom or layer-potential code
paths; they are the comparison side of every oracle check.
"""
import numpy as np


def disk_bergman(z, w, center=0j, radius=1.0):
    u, v = np.asarray(z) - center, np.asarray(w) - center
    return radius**2 / (np.pi * (radius**2 - u * np.conj(v)) ** 2)


def disk_szego(z, a, center=0j, radius=1.0):
    u, v = np.asarray(z) - center, np.asarray(a) - center
    return radius / (2 * np.pi * (radius**2 - u * np.conj(v)))


def disk_green(z, w, center=0j, radius=1.0):
    u, v = np.asarray(z) - center, np.asarray(w) - center
    return np.log(radius * np.abs(u - v)) - np.log(np.abs(radius**2 - u * np.conj(v)))


def disk_robin(z, center=0j, radius=1.0):
    u = np.abs(np.asarray(z) - center)
    return np.log(radius) - np.log(radius**2 - u**2)


def _laurent_powers(terms):
    return np.arange(-terms, terms + 1)


def annulus_bergman(z, w, inner, outer, terms=400):
    """Laurent series ``sum_k (z conj w)^k / ||z^k||^2`` with analytic norms."""
    k = _laurent_powers(terms)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        norms = np.where(
            k == -1,
            2 * np.pi * np.log(outer / inner),
            np.pi * (outer ** (2.0 * k + 2) - inner ** (2.0 * k + 2)) / np.where(k == -1, 1, k + 1),
        )
    zw = np.asarray(z, dtype=complex)[..., None] * np.conj(np.asarray(w, dtype=complex))[..., None]
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        terms_ = zw**k / norms
    terms_ = np.where(np.isfinite(terms_), terms_, 0)
    return np.sum(terms_, axis=-1)


def annulus_szego(z, a, inner, outer, terms=400):
    """Laurent series for the Szego kernel, ``||z^k||^2 = 2 pi (R^(2k+1) + rho^(2k+1))``."""
    k = _laurent_powers(terms)
    with np.errstate(over="ignore", under="ignore"):
        norms = 2 * np.pi * (outer ** (2.0 * k + 1) + inner ** (2.0 * k + 1))
        za = np.asarray(z, dtype=complex)[..., None] * np.conj(np.asarray(a, dtype=complex))[..., None]
        terms_ = za**k / norms
    terms_ = np.where(np.isfinite(terms_), terms_, 0)
    return np.sum(terms_, axis=-1)


def annulus_harmonic_measure(z, inner, outer):
    """Harmonic function equal to 1 on the inner circle and 0 on the outer one."""
    return np.log(np.abs(z) / outer) / np.log(inner / outer)


def annulus_f_field(z, inner, outer):
    """``2 d/dz`` of :func:`annulus_harmonic_measure`."""
    return 1.0 / (np.asarray(z, dtype=complex) * np.log(inner / outer))
