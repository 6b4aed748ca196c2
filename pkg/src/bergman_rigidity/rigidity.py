"""Minimal points and the disk classification.

A bounded domain has a minimal point ``z0`` (``K(z0, z0) v = 1``) exactly when
it is a disk centred at ``z0`` minus a polar set, and then the whole kernel
row ``K(., z0)`` is the constant ``1/v``.  The classifier looks for such a
point on a grid, refines it, and cross-checks the row.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .bergman import DEFAULT_DEGREE, OrthonormalBasis, mean_integral, orthonormalize
from .errors import DomainError
from .geometry import PlanarDomain, interior_grid, interior_samples

log = logging.getLogger(__name__)

MINIMAL_THRESHOLD = 1e-4
CONSTANCY_THRESHOLD = 1e-4
DEFAULT_GRID = 51
REFINE_FLOOR = 1e-8
#: Relative tolerance used to call two scan margins a tie.
TIE_RTOL = 1e-12
BOUNDARY_FIT_TOL = 1e-3


@dataclass(frozen=True)
class DiskMinusPolar:
    """``Omega = D(center, radius) minus a possibly empty polar set``."""

    center: complex
    radius: float
    name = "DiskMinusPolar"

    def describe(self) -> str:
        return f"DiskMinusPolar center={_fmt(self.center)} radius={self.radius:.10g}"


@dataclass(frozen=True)
class NotMinimal:
    margin: float
    argmin: complex
    name = "NotMinimal"

    def describe(self) -> str:
        return f"NotMinimal margin={self.margin:.6g} argmin={_fmt(self.argmin)}"


@dataclass(frozen=True)
class InfiniteVolumeCase:
    """``C`` minus a closed polar set: the kernel vanishes identically."""

    label: str
    name = "InfiniteVolumeCase"

    def describe(self) -> str:
        return f"InfiniteVolumeCase {self.label}"


@dataclass(frozen=True)
class InconsistentEvidence:
    """Scan margin and kernel-row test disagree, which the theorem rules out."""

    margin: float
    constancy: float
    reason: str
    name = "InconsistentEvidence"

    def describe(self) -> str:
        return f"InconsistentEvidence margin={self.margin:.6g} constancy={self.constancy:.6g} ({self.reason})"


Verdict = Union[DiskMinusPolar, NotMinimal, InfiniteVolumeCase, InconsistentEvidence]


@dataclass(frozen=True)
class ClassificationVerdict:
    verdict: Verdict
    evidence: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.verdict.name

    @property
    def consistent(self) -> bool:
        return not isinstance(self.verdict, InconsistentEvidence)


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.10g}{z.imag:+.10g}i"


def _filled(domain: PlanarDomain) -> PlanarDomain:
    """The domain with its punctures filled in.

    Finite point sets are removable for ``A^2``, so the kernel extends across
    them and the minimal point may well sit on a puncture.
    """
    underlying = getattr(domain, "underlying", None)
    return underlying() if underlying is not None else domain


def _scan_points(domain: PlanarDomain, basis: OrthonormalBasis, grid: int) -> np.ndarray:
    return interior_grid(_filled(domain), grid, basis.guard_distance())


def _margins(basis: OrthonormalBasis, z) -> np.ndarray:
    return basis.diag(np.atleast_1d(z)) * basis.domain.area - 1.0


def minimal_scan(domain: PlanarDomain, basis: OrthonormalBasis, grid: int = DEFAULT_GRID) -> tuple[float, complex]:
    """Minimum of ``K(z, z) v - 1`` over a row-major grid outside the guard band.

    Near-ties (relative ``TIE_RTOL``) go to the point closest to the
    centroid, then to the smallest ``(re, im)``.
    """
    pts = _scan_points(domain, basis, grid)
    if pts.size == 0:
        raise DomainError(f"no admissible grid points at resolution {grid} with guard {basis.guard_distance():.3g}")
    m = _margins(basis, pts)
    best = float(m.min())
    tied = np.flatnonzero(m <= best + TIE_RTOL * max(1.0, abs(best)))
    c = domain.centroid
    order = sorted(tied, key=lambda i: (round(abs(pts[i] - c), 12), pts[i].real, pts[i].imag))
    i = order[0]
    return float(m[i]), complex(pts[i])


def refine_argmin(basis: OrthonormalBasis, z0: complex, step: float, floor: float = REFINE_FLOOR) -> tuple[float, complex]:
    """Coordinate descent on the scan margin with step halving down to ``floor``."""
    z = complex(z0)
    f = float(_margins(basis, z)[0])
    band = basis.guard_distance()
    domain = _filled(basis.domain)
    moves = np.array([1, -1, 1j, -1j])
    while step >= floor:
        cand = z + step * moves
        ok = domain.inside_mask(cand, band)
        if np.any(ok):
            vals = _margins(basis, cand[ok])
            j = int(np.argmin(vals))
            if vals[j] < f:
                z, f = complex(cand[ok][j]), float(vals[j])
                continue
        step *= 0.5
    return f, z


def _require_interior(domain: PlanarDomain, z: np.ndarray) -> None:
    bad = z[~_filled(domain).inside_mask(z)]
    if bad.size:
        raise DomainError(f"{complex(bad[0])} is not an interior point")


def kernel_row_constancy(basis: OrthonormalBasis, z0: complex, samples) -> float:
    """``max |K(z, z0) - 1/v|`` over the sample points (punctures count as interior)."""
    samples = np.atleast_1d(np.asarray(samples, dtype=complex))
    _require_interior(basis.domain, np.append(samples, complex(z0)))
    row = basis.kernel_matrix(samples, [complex(z0)])[:, 0]
    return float(np.max(np.abs(row - 1.0 / basis.domain.area)))


def mean_one_check(basis: OrthonormalBasis, z0: complex) -> float:
    """``|int K(w, z0) dv(w) - 1|`` from the Gram data (the reproducing property for ``f = 1``)."""
    _require_interior(basis.domain, np.array([complex(z0)]))
    return abs(mean_integral(basis, z0) - 1.0)


def _boundary_fit(domain: PlanarDomain, center: complex, radius: float) -> float:
    """Relative deviation of the boundary from the circle ``|z - center| = radius``."""
    worst = 0.0
    for pts in domain._dense:
        worst = max(worst, float(np.max(np.abs(np.abs(pts - center) - radius))))
    return worst / radius


def classify(
    domain,
    basis: OrthonormalBasis | None = None,
    *,
    grid: int = DEFAULT_GRID,
    degree: int = DEFAULT_DEGREE,
    threshold: float = MINIMAL_THRESHOLD,
    constancy_tol: float = CONSTANCY_THRESHOLD,
    samples: int = 20,
    seed: int = 0,
) -> ClassificationVerdict:
    """Decide whether ``domain`` is a disk minus a polar set.

    Finite punctures are invisible to ``A^2``, so a punctured disk gets the
    same verdict as the disk, wherever the punctures are; no attempt is made
    to recover the polar part.
    """
    if not getattr(domain, "bounded", True):
        return ClassificationVerdict(InfiniteVolumeCase(domain.label), {"volume": float("inf")})
    basis = basis or orthonormalize(domain, degree=degree)
    v = domain.area
    margin, argmin = minimal_scan(domain, basis, grid)
    x0, x1, y0, y1 = domain.bounding_box
    spacing = max(x1 - x0, y1 - y0) / (grid - 1)
    rng = np.random.default_rng(seed)
    pts = interior_samples(_filled(domain), samples, rng, basis.guard_distance())
    evidence = {
        "grid": grid,
        "guard": basis.guard_distance(),
        "threshold": threshold,
        "constancy_threshold": constancy_tol,
        "basis_size": basis.size,
        "volume": v,
        "scan_margin": margin,
        "scan_argmin": argmin,
    }
    if margin <= threshold:
        refined_margin, center = refine_argmin(basis, argmin, spacing)
        constancy = kernel_row_constancy(basis, center, pts)
        radius = float(np.sqrt(v / np.pi))
        fit = _boundary_fit(domain, center, radius)
        evidence.update(refined_margin=refined_margin, center=center, constancy=constancy, boundary_fit=fit)
        if constancy >= constancy_tol:
            verdict = InconsistentEvidence(refined_margin, constancy, "minimal point without a constant kernel row")
        elif fit > BOUNDARY_FIT_TOL:
            verdict = InconsistentEvidence(refined_margin, constancy, f"boundary is not the circle of radius sqrt(v/pi) ({fit:.3g})")
        else:
            verdict = DiskMinusPolar(center, radius)
    else:
        constancy = kernel_row_constancy(basis, argmin, pts)
        evidence.update(constancy=constancy)
        if constancy < constancy_tol:
            verdict = InconsistentEvidence(margin, constancy, "constant kernel row at a non-minimal point")
        else:
            verdict = NotMinimal(margin, argmin)
    log.info("classify: %s", verdict.describe())
    return ClassificationVerdict(verdict, evidence)
