"""Boundary quadrature, Stokes-reduced area integrals and 1-D radial integrals.

Every area integral over a curve-bounded domain is turned into a boundary
integral through

    int_Omega f conj(g) dA = (1/2i) oint f(z) Gbar(z) dz,

where ``f`` and ``g`` are holomorphic on the closure and ``Gbar`` is any
smooth function with ``d Gbar / d zbar = conj(g)``.  With the periodic
trapezoid rule this is spectrally accurate.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError
from .geometry import Annulus, PlanarDomain, ReinhardtProfile2

_MAX_NODES = 1 << 15


@dataclass(frozen=True)
class QuadratureRule:
    """Trapezoid rule on one boundary component: weight ``1/m`` per node in ``t``."""

    t: np.ndarray
    z: np.ndarray
    dz: np.ndarray

    @property
    def m(self) -> int:
        return self.t.size

    @property
    def speed(self) -> np.ndarray:
        return np.abs(self.dz)

    @property
    def tangent(self) -> np.ndarray:
        return self.dz / np.abs(self.dz)

    @property
    def ds(self) -> np.ndarray:
        """Arc-length weights."""
        return np.abs(self.dz) / self.m

    @property
    def dzw(self) -> np.ndarray:
        """Complex weights for ``oint ... dz``."""
        return self.dz / self.m

    def length(self) -> float:
        return float(np.sum(self.ds))


def boundary_rules(domain: PlanarDomain, m: int) -> list[QuadratureRule]:
    return [QuadratureRule(*curve.sample(m)) for curve in domain.curves]


def contour_integral(domain: PlanarDomain, f, m: int) -> complex:
    """``oint_{b Omega} f(z) dz`` over the oriented boundary."""
    return complex(sum(np.sum(f(r.z) * r.dzw) for r in boundary_rules(domain, m)))


# -- dictionary atoms -------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """Holomorphic dictionary element ``((z - center) / scale) ** power``."""

    center: complex
    scale: float
    power: int

    def __call__(self, z):
        return ((np.asarray(z, dtype=complex) - self.center) / self.scale) ** self.power

    def zbar_primitive(self, z):
        """A smooth ``Gbar`` with ``d Gbar / d zbar = conj(self(z))``."""
        u = np.asarray(z, dtype=complex) - self.center
        if self.power == -1:
            return self.scale * np.log(np.abs(u) ** 2)
        k1 = self.power + 1
        return np.conj((u / self.scale) ** k1) * (self.scale / k1)

    def singular_at(self) -> complex | None:
        return self.center if self.power < 0 else None


def _check_atoms(domain: PlanarDomain, atoms: Sequence[Atom]) -> None:
    for a in atoms:
        needs_exclusion = a.power < 0
        if needs_exclusion and bool(domain._winding_inside(np.array([a.center]))[0]):
            raise DomainError(f"atom {a} has a pole inside the domain")


def atom_matrix(atoms: Sequence[Atom], z) -> np.ndarray:
    """Values ``E[n, k] = atoms[k](z[n])``."""
    z = np.asarray(z, dtype=complex).ravel()
    out = np.empty((z.size, len(atoms)), dtype=complex)
    for k, a in enumerate(atoms):
        out[:, k] = a(z)
    return out


def _gram_at(domain: PlanarDomain, left: Sequence[Atom], right: Sequence[Atom], m: int) -> np.ndarray:
    g = np.zeros((len(left), len(right)), dtype=complex)
    for rule in boundary_rules(domain, m):
        e = atom_matrix(right, rule.z) * rule.dzw[:, None]
        b = np.empty((rule.m, len(left)), dtype=complex)
        for i, a in enumerate(left):
            b[:, i] = a.zbar_primitive(rule.z)
        g += b.T @ e
    return g / 2j


def cross_gram(
    domain: PlanarDomain, left: Sequence[Atom], right: Sequence[Atom], m: int | None = None, tol: float = 1e-12
) -> tuple[np.ndarray, int]:
    """``G[i, j] = <right[j], left[i]> = int right[j] * conj(left[i]) dA``.

    Without an explicit ``m`` the node count doubles from 256 until the
    diagonally scaled matrix changes by less than ``tol``.  Returns the matrix
    and the node count used.
    """
    _check_atoms(domain, left)
    _check_atoms(domain, right)
    if m is not None:
        return _gram_at(domain, left, right, m), m
    m = max(256, 4 * (max(abs(a.power) for a in (*left, *right)) + 1))
    prev = _gram_at(domain, left, right, m)
    while True:
        m2 = 2 * m
        cur = _gram_at(domain, left, right, m2)
        scale = np.sqrt(np.abs(np.diag(cur))) if cur.shape[0] == cur.shape[1] else None
        diff = np.abs(cur - prev)
        if scale is not None and np.all(scale > 0):
            diff = diff / np.outer(scale, scale)
        else:
            diff = diff / max(1.0, np.max(np.abs(cur)))
        if np.max(diff) < tol or m2 >= _MAX_NODES:
            return cur, m2
        m, prev = m2, cur


def gram_matrix(domain: PlanarDomain, atoms: Sequence[Atom], m: int | None = None) -> tuple[np.ndarray, int]:
    g, used = cross_gram(domain, atoms, atoms, m)
    return 0.5 * (g + g.conj().T), used


# -- monomial moments -------------------------------------------------------


def _moment_at(domain: PlanarDomain, j: int, k: int, m: int) -> complex:
    total = 0j
    for rule in boundary_rules(domain, m):
        z = rule.z
        if k == -1:
            integrand = z**j * np.log(np.abs(z) ** 2)
            total += np.sum(integrand * rule.dzw) / 2j
        else:
            integrand = z**j * np.conj(z) ** (k + 1)
            total += np.sum(integrand * rule.dzw) / (2j * (k + 1))
    return complex(total)


def area_moment(domain: PlanarDomain, j: int, k: int, m: int | None = None) -> complex:
    """``int_Omega z^j zbar^k dA`` by Stokes reduction to the boundary.

    Negative exponents are accepted only when the origin lies outside the
    closed domain.  ``k = -1`` uses the primitive ``log|z|^2``.
    """
    j, k = int(j), int(k)
    if (j < 0 or k < 0) and not _origin_excluded(domain):
        raise DomainError(f"z^{j} zbar^{k} is not integrable on this domain")
    if m is not None:
        return _moment_at(domain, j, k, m)
    m = max(256, 4 * (abs(j) + abs(k) + 2))
    prev = _moment_at(domain, j, k, m)
    while m < _MAX_NODES:
        m *= 2
        cur = _moment_at(domain, j, k, m)
        if abs(cur - prev) < 1e-12 * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def _origin_excluded(domain: PlanarDomain) -> bool:
    # origin strictly outside the closed domain (punctures count as part of the closure)
    origin = np.array([0j])
    return not bool(domain._winding_inside(origin)[0]) and float(domain.boundary_distance(origin)[0]) > 1e-10


def laurent_norm(annulus: Annulus, k: int) -> float:
    """``||z^k||^2`` on an annulus centred at the origin."""
    if annulus.center != 0:
        raise DomainError("laurent_norm needs an annulus centred at 0")
    rho, big = annulus.inner, annulus.outer
    k = int(k)
    if k == -1:
        return float(2.0 * np.pi * np.log(big / rho))
    return float(np.pi * (big ** (2 * k + 2) - rho ** (2 * k + 2)) / (k + 1))


# -- radial integrals for the Reinhardt domain ------------------------------

_GAUSS_ORDER = 16


@lru_cache(maxsize=None)
def _gauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _composite_gauss(f, a: float, b: float, panels: int) -> float:
    x, w = _gauss(_GAUSS_ORDER)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    return float(np.sum(f(pts) * w[None, :] * half[:, None]))


def adaptive_gauss(f, a: float, b: float, tol: float = 1e-13, max_panels: int = 1 << 14) -> float:
    """Composite Gauss-Legendre with panel halving until successive estimates agree."""
    panels = 1
    prev = _composite_gauss(f, a, b, panels)
    while panels < max_panels:
        panels *= 2
        cur = _composite_gauss(f, a, b, panels)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def reinhardt_radial_integral(p: int, q: int, profile: ReinhardtProfile2 | None = None) -> float:
    """``I(p, q) = int_0^{t*} t^p (1 - p(t))^(q+1) dt``."""
    profile = profile or ReinhardtProfile2()
    if p < 0 or q < 0:
        raise DomainError("radial integral needs nonnegative exponents")
    poly = profile.poly
    ts = profile.t_star
    return adaptive_gauss(lambda t: t**p * np.clip(1.0 - poly(t), 0.0, None) ** (q + 1), 0.0, ts)


def reinhardt_radial_integral_closed(p: int, q: int, profile: ReinhardtProfile2 | None = None) -> float:
    """Same integral through an exact polynomial antiderivative."""
    profile = profile or ReinhardtProfile2()
    integrand = np.polynomial.Polynomial([0.0] * p + [1.0]) * (1.0 - profile.poly) ** (q + 1)
    anti = integrand.integ()
    return float(anti(profile.t_star) - anti(0.0))
