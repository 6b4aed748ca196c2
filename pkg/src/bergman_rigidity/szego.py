"""Szego kernel, harmonic measures, and the Bergman-Szego identity.

The Szego kernel is obtained from the Kerzman-Stein equation

    S_a(w) - int A(w, z) S_a(z) ds(z) = C_a(w),    w on the boundary,

discretized by the trapezoid (Nystrom) rule.  ``A`` is smooth on smooth
curves and vanishes on the diagonal, so convergence is spectral.  Interior
values come from the barycentric form of the Cauchy integral, which stays
accurate close to the boundary.

Harmonic measures use a double-layer potential plus logarithmic terms
centred in the holes, with a zero-mean constraint on each hole density.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from . import kernels
from .bergman import OrthonormalBasis
from .errors import DomainError, NumericalFailure
from .geometry import Annulus, Disk, PlanarDomain, interior_samples
from .oracles import annulus_f_field, annulus_harmonic_measure
from .quadrature import QuadratureRule, boundary_rules

log = logging.getLogger(__name__)

DEFAULT_NODES = 512
UPSAMPLE = 4


def _fft_upsample(values: np.ndarray, factor: int) -> np.ndarray:
    """Trigonometric interpolation of periodic samples onto a ``factor``-times finer grid."""
    m = values.shape[0]
    coef = np.fft.fft(values, axis=0)
    big = np.zeros((m * factor,) + values.shape[1:], dtype=complex)
    half = m // 2
    big[:half] = coef[:half]
    big[-half:] = coef[-half:]
    if m % 2 == 0:  # split the Nyquist mode
        big[half] = 0.5 * coef[half]
        big[-half] = 0.5 * coef[half]
    return np.fft.ifft(big, axis=0) * factor


@dataclass
class BoundaryData:
    """Nodes of all boundary components, concatenated in component order."""

    rules: list[QuadratureRule]

    @cached_property
    def z(self):
        return np.concatenate([r.z for r in self.rules])

    @cached_property
    def dz(self):
        return np.concatenate([r.dz for r in self.rules])

    @cached_property
    def dzw(self):
        return np.concatenate([r.dzw for r in self.rules])

    @cached_property
    def ds(self):
        return np.concatenate([r.ds for r in self.rules])

    @cached_property
    def tangent(self):
        return self.dz / np.abs(self.dz)

    @cached_property
    def component(self):
        return np.concatenate([np.full(r.m, i) for i, r in enumerate(self.rules)])

    def upsampled(self, domain: PlanarDomain, values: np.ndarray, factor: int = UPSAMPLE):
        """Fine nodes, complex weights, and interpolated ``values`` (per component)."""
        fine = boundary_rules(domain, self.rules[0].m * factor)
        parts, start = [], 0
        for r in self.rules:
            parts.append(_fft_upsample(values[start : start + r.m], factor))
            start += r.m
        z = np.concatenate([f.z for f in fine])
        w = np.concatenate([f.dzw for f in fine])
        return z, w, np.concatenate(parts)


def cauchy_barycentric(targets, z, dzw, values) -> np.ndarray:
    """Interior values of the holomorphic extension of boundary data ``values``."""
    values = np.asarray(values, dtype=complex).reshape(z.size, -1)
    dens = np.concatenate([values, np.ones((z.size, 1))], axis=1)
    sums = kernels.cauchy_sum(targets, z, dzw, dens, 1)
    return sums[:, :-1] / sums[:, -1:]


# -- Szego kernel -------------------------------------------------------------


@dataclass
class SzegoSolution:
    """Boundary values of ``S(., a)`` and an interior evaluator."""

    domain: PlanarDomain
    a: complex
    boundary: BoundaryData
    values: np.ndarray

    @cached_property
    def _fine(self):
        return self.boundary.upsampled(self.domain, self.values)

    def __call__(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        fz, fw, fv = self._fine
        return cauchy_barycentric(z.ravel(), fz, fw, fv)[:, 0].reshape(z.shape)

    @property
    def diagonal(self) -> float:
        return float(self(self.a)[0].real)


class SzegoSolver:
    """Factors the Kerzman-Stein system for a domain once; solves for any base point."""

    def __init__(self, domain: PlanarDomain, nodes: int = DEFAULT_NODES):
        if not getattr(domain, "bounded", True) or domain.punctures:
            raise DomainError("the Szego kernel needs a bounded domain with smooth boundary curves only")
        self.domain = domain
        self.nodes = nodes
        self.boundary = BoundaryData(boundary_rules(domain, nodes))
        b = self.boundary
        a = kernels.kerzman_stein_matrix(b.z, b.tangent, b.ds)
        system = np.eye(b.z.size) - a
        self._lu = sla.lu_factor(system)
        diag = np.abs(np.diag(self._lu[0]))
        if diag.min() < 1e-13 * diag.max():
            raise NumericalFailure(f"singular Kerzman-Stein discretization at {b.z.size} nodes")

    def cauchy_density(self, a: complex) -> np.ndarray:
        b = self.boundary
        return np.conj(b.tangent / (b.z - a) / (2j * np.pi))

    def solve(self, a: complex) -> SzegoSolution:
        a = complex(a)
        if not bool(self.domain.inside_mask(np.array([a]))[0]):
            raise DomainError(f"base point {a} is not interior")
        values = sla.lu_solve(self._lu, self.cauchy_density(a))
        return SzegoSolution(self.domain, a, self.boundary, values)


def szego_kernel(domain: PlanarDomain, a: complex, nodes: int = DEFAULT_NODES) -> SzegoSolution:
    return SzegoSolver(domain, nodes).solve(a)


def _inward_contour(domain: PlanarDomain, offset: float, m: int) -> list[np.ndarray]:
    out = []
    for r in boundary_rules(domain, m):
        out.append(r.z + offset * 1j * r.tangent)  # left normal points into the domain
    return out


def _winding(values: np.ndarray) -> float:
    steps = np.angle(np.roll(values, -1) / values)
    return float(np.sum(steps) / (2 * np.pi)), float(np.max(np.abs(steps)))


def _boundary_winding(sol: SzegoSolution, factor: int = 16) -> tuple[float, float, float]:
    """Winding of the boundary values of ``S(., a)`` around the oriented boundary.

    Returns the total winding, the largest phase step between neighbouring
    (trigonometrically upsampled) samples and ``min |S|`` relative to ``max |S|``.
    """
    total, worst, start = 0.0, 0.0, 0
    low = np.inf
    scale = float(np.max(np.abs(sol.values)))
    for r in sol.boundary.rules:
        vals = _fft_upsample(sol.values[start : start + r.m], factor)
        start += r.m
        wn, step = _winding(vals)
        total += wn
        worst = max(worst, step)
        low = min(low, float(np.min(np.abs(vals))) / scale)
    return total, worst, low


def szego_zero_count(domain: PlanarDomain, a: complex, nodes: int = DEFAULT_NODES, solution: SzegoSolution | None = None) -> int:
    """Zeros of ``S(., a)`` in the domain, by the argument principle.

    The primary count winds the computed boundary values themselves, so
    zeros close to the boundary are not missed.  If ``S`` nearly vanishes on
    the boundary the count falls back to contours pushed inward by
    ``0.05 * inradius`` (nudged by 2% per retry).
    """
    sol = solution or szego_kernel(domain, a, nodes)
    total, worst, low = _boundary_winding(sol)
    if low > 1e-6 and worst < 0.5 and abs(total - round(total)) < 1e-6:
        return int(round(total))
    base = 0.05 * domain.inradius
    scale = float(np.max(np.abs(sol.values)))
    for attempt in range(6):
        offset = base * (1.0 + 0.02 * attempt)
        m = 4 * nodes
        while True:
            total = 0.0
            worst = 0.0
            small = False
            for path in _inward_contour(domain, offset, m):
                vals = sol(path)
                if np.min(np.abs(vals)) < 1e-6 * scale:
                    small = True
                wn, step = _winding(vals)
                total += wn
                worst = max(worst, step)
            if worst < 0.5 or m >= 64 * nodes:
                break
            m *= 2
        if not small and abs(total - round(total)) < 1e-6:
            return int(round(total))
    raise NumericalFailure(f"ambiguous zero count for S(., {a}) (winding {total:.6f})")


# -- harmonic measures --------------------------------------------------------


class DirichletSolver:
    """Interior Dirichlet problems by a double layer plus hole logarithms.

    ``u = Re( (1/2 pi i) oint mu(w) dw / (w - z) ) + sum_m A_m log|z - p_m|``
    with ``int_{hole m} mu ds = 0``.  The bordered system is factored once.
    """

    def __init__(self, domain: PlanarDomain, nodes: int = DEFAULT_NODES):
        self.domain = domain
        self.nodes = nodes
        self.boundary = b = BoundaryData(boundary_rules(domain, nodes))
        self.poles = np.array(domain.hole_points, dtype=complex)
        n, h = b.z.size, self.poles.size
        diff = b.z[None, :] - b.z[:, None]  # z_j - z_i
        np.fill_diagonal(diff, 1.0)
        k = np.real(b.dzw[None, :] / diff / (2j * np.pi))
        d2 = self._second_derivative()
        np.fill_diagonal(k, np.imag(d2 / b.dz) * (1.0 / b.rules[0].m) / (4 * np.pi))
        mat = np.zeros((n + h, n + h))
        mat[:n, :n] = 0.5 * np.eye(n) + k
        if h:
            mat[:n, n:] = np.log(np.abs(b.z[:, None] - self.poles[None, :]))
            for m_ in range(h):
                mat[n + m_, :n] = np.where(b.component == m_, b.ds, 0.0)
        self.matrix = mat
        self._lu = sla.lu_factor(mat)

    def _second_derivative(self) -> np.ndarray:
        parts = []
        for r in self.boundary.rules:
            k = np.fft.fftfreq(r.m, 1.0 / r.m)
            parts.append(np.fft.ifft(np.fft.fft(r.dz) * 2j * np.pi * k))
        return np.concatenate(parts)

    def solve(self, data: np.ndarray) -> "LayerPotential":
        n = self.boundary.z.size
        rhs = np.concatenate([np.asarray(data, dtype=float), np.zeros(self.poles.size)])
        sol = sla.lu_solve(self._lu, rhs)
        return LayerPotential(self, sol[:n], sol[n:])


@dataclass
class LayerPotential:
    solver: DirichletSolver
    density: np.ndarray
    log_coeffs: np.ndarray

    @cached_property
    def _fine(self):
        return self.solver.boundary.upsampled(self.solver.domain, self.density.astype(complex))

    def cauchy_part(self, z) -> np.ndarray:
        fz, fw, fv = self._fine
        return cauchy_barycentric(z, fz, fw, fv)[:, 0]

    def __call__(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        flat = z.ravel()
        out = np.real(self.cauchy_part(flat))
        for c, p in zip(self.log_coeffs, self.solver.poles):
            out = out + c * np.log(np.abs(flat - p))
        return out.reshape(z.shape)

    def holomorphic_derivative(self, z) -> np.ndarray:
        """``2 du/dz``: derivative of the Cauchy part plus ``A_m / (z - p_m)``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        flat = z.ravel()
        fz, fw, fv = self._fine
        out = kernels.cauchy_sum(flat, fz, fw, fv, 2)[:, 0] / (2j * np.pi)
        for c, p in zip(self.log_coeffs, self.solver.poles):
            out = out + c / (flat - p)
        return out.reshape(z.shape)

    def boundary_trace(self) -> np.ndarray:
        n = self.density.size
        return self.solver.matrix[:n] @ np.concatenate([self.density, self.log_coeffs])


@dataclass
class HarmonicMeasureField:
    """``omega_j`` (1 on hole ``j``, 0 elsewhere) and ``F_j = 2 d omega_j / dz``."""

    domain: PlanarDomain
    j: int
    omega: object
    f_field: object
    potential: LayerPotential | None = None
    closed_form: bool = False


def harmonic_measure(
    domain: PlanarDomain, j: int, nodes: int = DEFAULT_NODES, solver: DirichletSolver | None = None,
    closed_form: bool = True,
) -> HarmonicMeasureField:
    if domain.connectivity < 2:
        raise DomainError("harmonic measures of holes need connectivity >= 2")
    if not 0 <= j < domain.connectivity - 1:
        raise DomainError(f"hole index {j} out of range")
    if closed_form and isinstance(domain, Annulus):
        c, ri, ro = domain.center, domain.inner, domain.outer
        return HarmonicMeasureField(
            domain, j,
            omega=lambda z: annulus_harmonic_measure(np.asarray(z) - c, ri, ro),
            f_field=lambda z: annulus_f_field(np.asarray(z) - c, ri, ro),
            closed_form=True,
        )
    solver = solver or DirichletSolver(domain, nodes)
    data = (solver.boundary.component == j).astype(float)
    pot = solver.solve(data)
    return HarmonicMeasureField(domain, j, omega=pot, f_field=pot.holomorphic_derivative, potential=pot)


def f_field_mean(domain: PlanarDomain, j: int, nodes: int = DEFAULT_NODES, field_: HarmonicMeasureField | None = None) -> complex:
    """``(1/v) int F_j dv = (-1/(i v)) oint omega_j dwbar`` using the computed boundary trace of ``omega_j``."""
    field_ = field_ or harmonic_measure(domain, j, nodes, closed_form=False)
    rules = boundary_rules(domain, nodes)
    if field_.potential is not None:
        trace = field_.potential.boundary_trace()
    else:
        trace = np.concatenate([field_.omega(r.z) for r in rules])
    dwbar = np.concatenate([np.conj(r.dzw) for r in rules])
    return complex(-np.sum(trace * dwbar) / (1j * domain.area))


# -- Bergman-Szego identity ----------------------------------------------------


@dataclass
class MatchCoefficients:
    a: complex
    coefficients: np.ndarray
    residual: float
    fit_residual: float
    singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))


def fit_samples(domain: PlanarDomain, count: int, rng: np.random.Generator) -> np.ndarray:
    """Interior points away from the boundary, where truncated kernels are reliable."""
    if isinstance(domain, Annulus):
        r = rng.uniform(domain.inner + 0.25 * (domain.outer - domain.inner),
                        domain.outer - 0.25 * (domain.outer - domain.inner), count)
        return domain.center + r * np.exp(2j * np.pi * rng.uniform(0, 1, count))
    if isinstance(domain, Disk):
        r = domain.radius * np.sqrt(rng.uniform(0, 0.5**2, count))
        return domain.center + r * np.exp(2j * np.pi * rng.uniform(0, 1, count))
    return interior_samples(domain, count, rng, band=0.3 * domain.inradius)


def bergman_szego_fit(
    domain: PlanarDomain,
    a: complex,
    basis: OrthonormalBasis,
    nodes: int = DEFAULT_NODES,
    seed: int = 0,
    samples_per_field: int = 10,
    solver: SzegoSolver | None = None,
    fields: list[HarmonicMeasureField] | None = None,
) -> MatchCoefficients:
    """Least-squares ``lambda_j`` in ``K(z, a) = 4 pi S(z, a)^2 + sum lambda_j F_j(z)``.

    Fits on one random sample set, reports the maximal residual on a second,
    held-out set.
    """
    rng = np.random.default_rng(seed)
    nh = domain.connectivity - 1
    count = max(10, samples_per_field * nh)
    fit_pts = fit_samples(domain, count, rng)
    held = fit_samples(domain, count, rng)
    sol = (solver or SzegoSolver(domain, nodes)).solve(a)
    if fields is None:
        fields = [harmonic_measure(domain, j, nodes) for j in range(nh)]

    def lhs(z):
        return basis.kernel_matrix(z, [a])[:, 0] - 4 * np.pi * sol(z) ** 2

    def design(z):
        return np.stack([f.f_field(z) for f in fields], axis=1) if fields else np.zeros((z.size, 0))

    y, x = lhs(fit_pts), design(fit_pts)
    if nh:
        sv = np.linalg.svd(x, compute_uv=False)
        if sv[-1] < 1e-12 * sv[0]:
            raise NumericalFailure(f"F_j sample matrix is rank deficient (singular values {sv})")
        lam, *_ = np.linalg.lstsq(x, y, rcond=None)
    else:
        sv, lam = np.zeros(0), np.zeros(0, dtype=complex)
    fit_res = float(np.max(np.abs(y - x @ lam)))
    res = float(np.max(np.abs(lhs(held) - design(held) @ lam)))
    return MatchCoefficients(complex(a), lam, res, fit_res, sv)
