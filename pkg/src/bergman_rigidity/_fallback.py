"""Pure numpy implementations of the hot kernels.

Semantics match the compiled ``_core`` module exactly; see ``kernels`` for
backend selection.
"""
import numpy as np

_CHUNK = 256


def kerzman_stein_matrix(z, tangent, ds):
    """``A[i, j] = (H(w_i, z_j) - conj(H(z_j, w_i))) * ds_j`` with zero diagonal.

    ``H(w, z) = T(z) / (2 pi i (z - w))`` is the Cauchy kernel against arc length.
    """
    z = np.asarray(z, dtype=complex)
    tangent = np.asarray(tangent, dtype=complex)
    diff = z[None, :] - z[:, None]
    np.fill_diagonal(diff, 1.0)
    a = (tangent[None, :] / diff - np.conj(tangent[:, None] / diff)) / (2j * np.pi)
    np.fill_diagonal(a, 0.0)
    return a * np.asarray(ds, dtype=float)[None, :]


def cauchy_sum(targets, src, dzw, dens, power):
    """``out[t, c] = sum_j dens[j, c] * dzw[j] / (src[j] - targets[t]) ** power``."""
    targets = np.asarray(targets, dtype=complex).ravel()
    src = np.asarray(src, dtype=complex)
    dens = np.asarray(dens, dtype=complex).reshape(src.size, -1)
    wd = dens * np.asarray(dzw, dtype=complex)[:, None]
    out = np.empty((targets.size, dens.shape[1]), dtype=complex)
    for start in range(0, targets.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        inv = 1.0 / (src[None, :] - targets[sl, None])
        if power != 1:
            inv = inv**power
        out[sl] = inv @ wd
    return out


def _prime(zeta, q, nterms):
    out = 1.0 - zeta
    q2 = q * q
    qk = q2
    for _ in range(nterms):
        out = out * (1.0 - qk * zeta) * (1.0 - qk / zeta)
        qk *= q2
    return out


def annulus_green(z, w, q, nterms):
    """Green's function of ``{q < |z| < 1}`` from the Schottky-Klein product."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    lq = np.log(q)
    lz = np.log(np.abs(z))
    lw = np.log(np.abs(w))
    return (
        np.log(np.abs(_prime(z / w, q, nterms)))
        - np.log(np.abs(_prime(z * np.conj(w), q, nterms)))
        + lw
        - lz * lw / lq
    )
