"""Bergman kernels from orthonormalized holomorphic dictionaries.

The Gram matrix of a dictionary is assembled from Stokes-reduced boundary
integrals, equilibrated, and factored by Cholesky; the constant function is
always first so the leading orthonormal element is ``v(Omega)^{-1/2}``.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DomainError, GuardBandWarning, IllConditionedBasisWarning, NumericalFailureWarning
from .geometry import Annulus, Disk, PlanarDomain
from .quadrature import Atom, atom_matrix, cross_gram, gram_matrix

log = logging.getLogger(__name__)

DEFAULT_DEGREE = 30
MAX_CONDITION = 1e12
#: Guard band as a fraction of the inradius.
DEFAULT_GUARD = 0.1
VOLUME_TOL = 1e-8


@dataclass(frozen=True)
class BasisDictionary:
    atoms: tuple
    degree: int
    kind: str

    def __len__(self):
        return len(self.atoms)


def monomial_dictionary(center: complex, scale: float, degree: int) -> BasisDictionary:
    atoms = tuple(Atom(complex(center), float(scale), k) for k in range(degree + 1))
    return BasisDictionary(atoms, degree, "monomial")


def laurent_dictionary(center: complex, scale: float, degree: int) -> BasisDictionary:
    atoms = [Atom(complex(center), float(scale), 0)]
    for k in range(1, degree + 1):
        atoms += [Atom(complex(center), float(scale), k), Atom(complex(center), float(scale), -k)]
    return BasisDictionary(tuple(atoms), degree, "laurent")


def pole_dictionary(domain: PlanarDomain, degree: int, pole_degree: int | None = None) -> BasisDictionary:
    """Monomials about the centroid plus negative powers about each hole point."""
    pole_degree = degree if pole_degree is None else pole_degree
    c = domain.centroid
    outer = domain._dense[-1]
    scale = float(np.max(np.abs(outer - c)))
    hole_scales = [float(np.mean(np.abs(pts - h.center))) for h, pts in zip(domain.holes, domain._dense)]
    atoms = [Atom(c, scale, 0)]
    for k in range(1, max(degree, pole_degree) + 1):
        if k <= degree:
            atoms.append(Atom(c, scale, k))
        if k <= pole_degree:
            atoms += [Atom(h.center, s, -k) for h, s in zip(domain.holes, hole_scales)]
    return BasisDictionary(tuple(atoms), degree, "monomial+poles")


def default_dictionary(domain: PlanarDomain, degree: int = DEFAULT_DEGREE) -> BasisDictionary:
    if isinstance(domain, Disk):
        return monomial_dictionary(domain.center, domain.radius, degree)
    if isinstance(domain, Annulus):
        return laurent_dictionary(domain.center, np.sqrt(domain.inner * domain.outer), degree)
    if domain.connectivity == 1:
        c = domain.centroid
        return monomial_dictionary(c, float(np.max(np.abs(domain._dense[-1] - c))), degree)
    return pole_dictionary(domain, degree)


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal functions ``phi_n = sum_k coefficients[n, k] * atoms[k]``."""

    domain: PlanarDomain
    dictionary: BasisDictionary
    coefficients: np.ndarray
    gram: np.ndarray
    condition: float
    nodes: int
    guard: float
    truncated_from: int | None = None
    warnings: tuple = field(default=())

    @property
    def atoms(self) -> tuple:
        return self.dictionary.atoms[: self.size]

    @property
    def size(self) -> int:
        return self.coefficients.shape[0]

    @property
    def volume(self) -> float:
        return float(self.gram[0, 0].real)

    def values(self, z) -> np.ndarray:
        """``Phi[p, n] = phi_n(z[p])``."""
        return atom_matrix(self.atoms, z) @ self.coefficients.T

    def kernel_matrix(self, z, w) -> np.ndarray:
        return self.values(z) @ self.values(w).conj().T

    def diag(self, z) -> np.ndarray:
        return np.sum(np.abs(self.values(z)) ** 2, axis=1)

    def orthonormality_defect(self) -> float:
        c = self.coefficients
        inner = c.conj() @ self.gram[: self.size, : self.size] @ c.T
        return float(np.max(np.abs(inner - np.eye(self.size))))

    def tail_estimate(self, z, w) -> float:
        """Size of the last tenth of the series at ``(z, w)``, a proxy for truncation error."""
        pz, pw = self.values([z])[0], self.values([w])[0]
        start = max(1, self.size - max(1, self.size // 10))
        return float(np.sum(np.abs(pz[start:] * pw[start:].conj())))

    def guard_distance(self) -> float:
        return self.guard * self.domain.inradius


def _leading_well_conditioned(gs: np.ndarray, limit: float) -> int:
    n = gs.shape[0]
    if np.linalg.cond(gs) <= limit:
        return n
    lo, hi = 1, n  # cond of leading blocks is nondecreasing (interlacing)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if np.linalg.cond(gs[:mid, :mid]) <= limit:
            lo = mid
        else:
            hi = mid
    return lo


def orthonormalize(
    domain: PlanarDomain,
    dictionary: BasisDictionary | None = None,
    *,
    degree: int = DEFAULT_DEGREE,
    guard: float = DEFAULT_GUARD,
    nodes: int | None = None,
    max_condition: float = MAX_CONDITION,
) -> OrthonormalBasis:
    """Orthonormalize ``dictionary`` (default chosen from the domain type) in ``A^2(domain)``."""
    if not getattr(domain, "bounded", True):
        raise DomainError("Bergman bases are only built for bounded domains")
    dictionary = dictionary or default_dictionary(domain, degree)
    if dictionary.atoms[0].power != 0:
        raise DomainError("the first dictionary element must be the constant function")
    g, used = gram_matrix(domain, dictionary.atoms, nodes)
    d = np.sqrt(np.real(np.diag(g)))
    gs = g / np.outer(d, d)
    n = _leading_well_conditioned(gs, max_condition)
    notes: list[str] = []
    truncated = None
    if n < len(dictionary):
        truncated = len(dictionary)
        msg = f"Gram condition exceeds {max_condition:.0e}; basis truncated from {truncated} to {n} functions"
        warnings.warn(msg, IllConditionedBasisWarning, stacklevel=2)
        log.warning(msg)
        notes.append(msg)
    gs_n = gs[:n, :n]
    chol = np.linalg.cholesky(gs_n)
    linv = solve_triangular(chol, np.eye(n), lower=True)
    coeffs = linv.conj() / d[None, :n]
    return OrthonormalBasis(
        domain=domain,
        dictionary=dictionary,
        coefficients=coeffs,
        gram=g,
        condition=float(np.linalg.cond(gs_n)),
        nodes=used,
        guard=guard,
        truncated_from=truncated,
        warnings=tuple(notes),
    )


def converged_basis(
    domain: PlanarDomain,
    points,
    tol: float,
    *,
    degree: int = DEFAULT_DEGREE,
    max_degree: int = 8 * DEFAULT_DEGREE,
    guard: float = DEFAULT_GUARD,
) -> OrthonormalBasis:
    """Double the degree until ``K(z, z)`` moves by at most ``tol`` at every point.

    The diagonal change bounds the off-diagonal one as well, since the
    series tail at ``(z, w)`` is at most ``sqrt(tail(z) tail(w))``.  Warns and
    returns the largest basis if ``max_degree`` is reached first.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    basis = orthonormalize(domain, degree=degree, guard=guard)
    while basis.dictionary.degree < max_degree and basis.truncated_from is None:
        finer = orthonormalize(domain, degree=min(2 * basis.dictionary.degree, max_degree), guard=guard)
        change = float(np.max(np.abs(finer.diag(points) - basis.diag(points))))
        basis = finer
        if change <= tol:
            return basis
    warnings.warn(
        f"kernel diagonal not converged to {tol:.3g} by degree {basis.dictionary.degree} ({basis.size} functions)",
        NumericalFailureWarning,
        stacklevel=2,
    )
    return basis


def _check_band(basis: OrthonormalBasis, *points: complex) -> None:
    delta = basis.guard_distance()
    dist = basis.domain.boundary_distance(np.array(points, dtype=complex))
    if np.any(dist < delta):
        est = basis.tail_estimate(points[0], points[-1])
        warnings.warn(
            f"kernel evaluated within the guard band ({float(np.min(dist)):.3g} < {delta:.3g}); "
            f"estimated truncation error {est:.3g}",
            GuardBandWarning,
            stacklevel=3,
        )


def kernel(basis: OrthonormalBasis, z: complex, w: complex) -> complex:
    """Truncated ``K(z, w) = sum_n phi_n(z) conj(phi_n(w))``."""
    _check_band(basis, z, w)
    return complex(basis.kernel_matrix([z], [w])[0, 0])


def _laurent_atoms(f) -> tuple[list[Atom], np.ndarray]:
    if isinstance(f, Mapping):
        items = sorted(f.items())
    elif isinstance(f, np.polynomial.Polynomial):
        items = list(enumerate(f.coef))
    else:
        items = list(enumerate(f))
    atoms = [Atom(0j, 1.0, int(k)) for k, _ in items]
    return atoms, np.array([complex(c) for _, c in items])


def _projection(basis: OrthonormalBasis, f) -> tuple[np.ndarray, float]:
    atoms, coef = _laurent_atoms(f)
    x, _ = cross_gram(basis.domain, basis.atoms, atoms, m=basis.nodes)
    inner_e = x @ coef  # <f, e_k>
    inner_phi = basis.coefficients.conj() @ inner_e  # <f, phi_n>
    ff, _ = cross_gram(basis.domain, atoms, atoms, m=basis.nodes)
    norm2 = float(np.real(coef.conj() @ ff @ coef))
    defect = max(0.0, norm2 - float(np.sum(np.abs(inner_phi) ** 2)))
    return inner_phi, defect / max(norm2, 1e-300)


def reproduce_residual(basis: OrthonormalBasis, f, z: complex, span_tol: float = 1e-10) -> float:
    """``|f(z) - int f(w) K(z, w) dv(w)|`` with the integral evaluated from moments.

    ``f`` is a Laurent polynomial about 0: a mapping ``{power: coefficient}``,
    a ``numpy.polynomial.Polynomial`` or an ascending coefficient sequence.
    """
    inner_phi, defect = _projection(basis, f)
    if defect > span_tol:
        warnings.warn(
            f"f is not in the span of the basis (relative defect {defect:.3g}); nonzero residual expected",
            NumericalFailureWarning,
            stacklevel=2,
        )
    atoms, coef = _laurent_atoms(f)
    fz = complex(atom_matrix(atoms, [z])[0] @ coef)
    reproduced = complex(basis.values([z])[0] @ inner_phi)
    return abs(fz - reproduced)


def mean_integral(basis: OrthonormalBasis, z0: complex) -> complex:
    """``int_Omega K(w, z0) dv(w)`` computed exactly from the Gram data."""
    inner_e = basis.gram[: basis.size, 0]  # <1, e_k> = int conj(e_k)
    inner_phi = basis.coefficients.conj() @ inner_e  # int conj(phi_n)
    return complex(np.sum(basis.values([z0])[0] * inner_phi).conjugate())


def minimality_margin(basis: OrthonormalBasis, z: complex, tol: float = VOLUME_TOL) -> float:
    """``K(z, z) v(Omega) - 1``; nonnegative by the volume inequality."""
    _check_band(basis, z)
    margin = float(basis.diag([z])[0]) * basis.domain.area - 1.0
    if margin < -tol:
        warnings.warn(f"volume inequality violated at {z}: margin {margin:.3g}", NumericalFailureWarning, stacklevel=2)
    return margin


def transformation_residual(c: complex, degree: int = 20) -> float:
    """Check the transformation law for ``f(z) = c z`` from ``D(0,1)`` onto ``D(0,|c|)``."""
    c = complex(c)
    if c == 0:
        raise DomainError("the linear map needs c != 0")
    b1 = orthonormalize(Disk(0j, 1.0), degree=degree)
    b2 = orthonormalize(Disk(0j, abs(c)), degree=degree)
    g = np.linspace(-0.5, 0.5, 5)
    pts = (g[None, :] + 1j * g[:, None]).ravel()
    k1 = b1.kernel_matrix(pts, pts)
    k2 = b2.kernel_matrix(c * pts, c * pts)
    return float(np.max(np.abs(k1 - c * k2 * np.conj(c))))
