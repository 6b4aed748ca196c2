"""Green's functions, Robin constants, the Suita quantity and sublevel volumes.

``g(z, w) = log|z - w| + h(z, w)`` with ``h`` harmonic in ``z`` and ``g = 0``
on the boundary; the Robin constant is ``h(w, w)``.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from . import kernels
from .bergman import OrthonormalBasis
from .errors import DomainError, NumericalFailureWarning
from .geometry import Annulus, Disk, PlanarDomain
from .oracles import disk_green, disk_robin
from .szego import DEFAULT_NODES, DirichletSolver

log = logging.getLogger(__name__)

POLE_GUARD = 1e-10
SUITA_TOL = 1e-6
RICHARDSON_EPS = (1e-3, 5e-4)
ROBIN_SPREAD_TOL = 1e-6
DEFAULT_RAYS = 720


class GreenFunction:
    """Evaluator for ``g(z, w)`` on one domain."""

    domain: PlanarDomain

    def __call__(self, z, w) -> np.ndarray:
        raise NotImplementedError

    def robin_closed_form(self, z0: complex) -> float | None:
        return None


@dataclass
class DiskGreen(GreenFunction):
    domain: Disk

    def __call__(self, z, w):
        return disk_green(z, w, self.domain.center, self.domain.radius)

    def robin_closed_form(self, z0):
        return float(disk_robin(z0, self.domain.center, self.domain.radius))


def _prime_terms(q: float, tol: float = 1e-14) -> int:
    return max(1, int(np.ceil(np.log(tol) / (2.0 * np.log(q)))))


@dataclass
class AnnulusGreen(GreenFunction):
    """Product formula in normalized coordinates ``u = (z - c) / R`` on ``{q < |u| < 1}``."""

    domain: Annulus

    @cached_property
    def q(self) -> float:
        return self.domain.inner / self.domain.outer

    @cached_property
    def nterms(self) -> int:
        return _prime_terms(self.q)

    def _norm(self, z):
        return (np.asarray(z, dtype=complex) - self.domain.center) / self.domain.outer

    def __call__(self, z, w):
        return kernels.annulus_green(self._norm(z), self._norm(w), self.q, self.nterms)

    def robin_closed_form(self, z0):
        q, u = self.q, abs(complex(self._norm(z0)))
        k = np.arange(1, self.nterms + 1)
        prime = (1.0 - u * u) * np.prod((1.0 - q ** (2 * k) * u * u) * (1.0 - q ** (2 * k) / (u * u)))
        lam = 2.0 * np.sum(np.log1p(-(q ** (2 * k)))) - np.log(abs(prime)) - np.log(u) ** 2 / np.log(q)
        return float(lam - np.log(self.domain.outer))


class LayerGreen(GreenFunction):
    """Green's function of a general smooth domain through a Dirichlet solve for ``h(., w)``."""

    def __init__(self, domain: PlanarDomain, nodes: int = DEFAULT_NODES):
        self.domain = domain
        self.solver = DirichletSolver(domain, nodes)
        self._cache: dict[complex, object] = {}

    def regular(self, w: complex):
        w = complex(w)
        if w not in self._cache:
            data = -np.log(np.abs(self.solver.boundary.z - w))
            self._cache[w] = self.solver.solve(data)
        return self._cache[w]

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        zb, wb = np.broadcast_arrays(z, w)
        out = np.empty(zb.shape)
        for wv in np.unique(wb):
            sel = wb == wv
            out[sel] = np.log(np.abs(zb[sel] - wv)) + self.regular(wv)(zb[sel])
        return out

    def robin_closed_form(self, z0):
        return float(self.regular(z0)(np.array([complex(z0)]))[0])


def green_function(domain: PlanarDomain, nodes: int = DEFAULT_NODES) -> GreenFunction:
    if not getattr(domain, "bounded", True):
        raise DomainError("no Green's function is computed for unbounded domains")
    if isinstance(domain, Disk):  # punctures are polar, so they do not change g
        return DiskGreen(Disk(domain.center, domain.radius))
    if isinstance(domain, Annulus):
        return AnnulusGreen(domain)
    return LayerGreen(domain, nodes)


def green(domain: PlanarDomain, z: complex, w: complex, gf: GreenFunction | None = None) -> float:
    if abs(complex(z) - complex(w)) < POLE_GUARD:
        raise DomainError("z is at the pole; use robin() for the diagonal")
    gf = gf or green_function(domain)
    return float(np.asarray(gf(np.array([z]), np.array([w])))[0])


@dataclass(frozen=True)
class RobinValue:
    z0: complex
    value: float
    method: str
    angular_spread: float = 0.0


def _quarter_turn_estimate(gf: GreenFunction, z0: complex, eps, phase: float) -> float:
    angles = np.exp(1j * (phase + np.pi * np.arange(4) / 2))
    e1, e2 = eps
    v1 = np.asarray(gf(z0 + e1 * angles, np.full(4, z0))) - np.log(e1)
    v2 = np.asarray(gf(z0 + e2 * angles, np.full(4, z0))) - np.log(e2)
    ratio = (e1 / e2) ** 4
    return float((ratio * v2.mean() - v1.mean()) / (ratio - 1.0))


def extrapolated_robin(gf: GreenFunction, z0: complex, eps=RICHARDSON_EPS) -> tuple[float, float]:
    """Four-angle average of ``g(z0 + eps e^{i theta}, z0) - log eps``, Richardson-extrapolated.

    Averaging over quarter turns leaves an ``eps^4`` remainder, hence the
    factor 16.  The second return value is the disagreement with the same
    estimate on the angle set rotated by ``pi/4``.
    """
    z0 = complex(z0)
    value = _quarter_turn_estimate(gf, z0, eps, 0.0)
    rotated = _quarter_turn_estimate(gf, z0, eps, np.pi / 4)
    return value, abs(value - rotated)


def robin(domain: PlanarDomain, z0: complex, method: str = "auto", gf: GreenFunction | None = None) -> RobinValue:
    """Robin constant ``lim_{z -> z0} g(z, z0) - log|z - z0|``."""
    z0 = complex(z0)
    if not bool(domain.inside_mask(np.array([z0]))[0]):
        raise DomainError(f"{z0} is not an interior point")
    gf = gf or green_function(domain)
    if method == "auto":
        closed = gf.robin_closed_form(z0) if not isinstance(gf, LayerGreen) else None
        if closed is not None:
            return RobinValue(z0, closed, "closed-form")
        method = "extrapolate"
    if method != "extrapolate":
        raise ValueError(f"unknown Robin method {method!r}")
    value, spread = extrapolated_robin(gf, z0)
    if spread > ROBIN_SPREAD_TOL:
        msg = f"Robin extrapolation at {z0}: rotated angle sets disagree by {spread:.3g}"
        warnings.warn(msg, NumericalFailureWarning, stacklevel=2)
        log.warning(msg)
    return RobinValue(z0, value, "extrapolate", spread)


def suita_margin(domain: PlanarDomain, basis: OrthonormalBasis, z: complex, tol: float = SUITA_TOL,
                 gf: GreenFunction | None = None) -> float:
    """``pi K(z, z) - exp(2 lambda(z))``; nonnegative by the Suita inequality."""
    lam = robin(domain, z, gf=gf).value
    margin = float(np.pi * basis.diag([z])[0] - np.exp(2.0 * lam))
    if margin < -tol:
        warnings.warn(f"Suita inequality violated at {z}: margin {margin:.3g}", NumericalFailureWarning, stacklevel=2)
    return margin


# -- sublevel sets --------------------------------------------------------------


@dataclass
class SublevelProfile:
    z0: complex
    rows: list = field(default_factory=list)  # (tau, volume, ratio)
    dropped: list = field(default_factory=list)
    rays: int = DEFAULT_RAYS

    @property
    def taus(self):
        return np.array([r[0] for r in self.rows])

    @property
    def volumes(self):
        return np.array([r[1] for r in self.rows])

    @property
    def ratios(self):
        return np.array([r[2] for r in self.rows])


def _ray_exit(domain: PlanarDomain, z0: complex, dirs: np.ndarray) -> np.ndarray:
    """Distance from ``z0`` along each direction to the first boundary crossing."""
    if isinstance(domain, (Disk, Annulus)):
        c = domain.center
        u = z0 - c
        radii = [domain.radius] if isinstance(domain, Disk) else [domain.inner, domain.outer]
        best = np.full(dirs.shape, np.inf)
        b = np.real(np.conj(dirs) * u)
        for r in radii:
            disc = b * b - (abs(u) ** 2 - r * r)
            ok = disc >= 0
            sq = np.sqrt(np.where(ok, disc, 0.0))
            for root in (-b - sq, -b + sq):
                good = ok & (root > 0)
                best = np.where(good & (root < best), root, best)
        return best
    best = np.full(dirs.shape, np.inf)
    for pts in domain._dense:
        p, d = pts, np.roll(pts, -1) - pts
        for i, di in enumerate(dirs):
            # z0 + r di = p + s d
            det = np.imag(np.conj(di) * d)
            with np.errstate(divide="ignore", invalid="ignore"):
                s = np.imag(np.conj(di) * (z0 - p)) / det
                r = np.imag(np.conj(d) * (z0 - p)) / det
            hit = (s >= 0) & (s <= 1) & (r > 0) & np.isfinite(r)
            if np.any(hit):
                best[i] = min(best[i], float(np.min(r[hit])))
    return best


def _level_radii(gf, z0, dirs, rmax, probe, probe_vals, first, tau, iterations):
    """Radius along each ray where ``g`` crosses ``tau``.

    Bracketed false position (Illinois variant) in ``s = log r``, where
    ``g - tau`` is nearly linear; the bracket comes from the probe samples and
    a step that leaves it falls back to bisection.
    """
    n = dirs.size
    poles = np.full(n, z0)
    idx = np.arange(n)

    def f(s, sel=slice(None)):
        return np.asarray(gf(z0 + np.exp(s) * dirs[sel], poles[sel])) - tau

    hi = np.log(probe[first] * rmax)
    fb = probe_vals[idx, first] - tau
    has_lo = first > 0
    lo = np.where(has_lo, np.log(probe[np.maximum(first - 1, 0)] * rmax), 0.0)
    fa = np.where(has_lo, probe_vals[idx, np.maximum(first - 1, 0)] - tau, 0.0)
    # near the pole g ~ log r + const: step down until g < tau
    need = ~has_lo
    lo[need] = hi[need] + np.minimum(-fb[need], 0.0) - 1.0
    while np.any(need):
        fa[need] = f(lo[need], need)
        need = fa >= 0
        lo[need] -= 1.0
    side = np.zeros(n, dtype=int)
    s = 0.5 * (lo + hi)
    for _ in range(iterations):
        s = (lo * fb - hi * fa) / (fb - fa)
        bad = ~((s > lo) & (s < hi))
        s[bad] = 0.5 * (lo[bad] + hi[bad])
        fs = f(s)
        below = fs < 0
        lo, fa = np.where(below, s, lo), np.where(below, fs, fa)
        hi, fb = np.where(below, hi, s), np.where(below, fb, fs)
        fb = np.where(below & (side == -1), 0.5 * fb, fb)
        fa = np.where(~below & (side == 1), 0.5 * fa, fa)
        side = np.where(below, -1, 1)
        if np.all((hi - lo < 1e-14) | (np.abs(fs) < 1e-15)):
            break
    return np.exp(s)


def sublevel_profile(
    domain: PlanarDomain,
    z0: complex,
    taus,
    rays: int = DEFAULT_RAYS,
    gf: GreenFunction | None = None,
    iterations: int = 40,
) -> SublevelProfile:
    """Volumes of ``{g(., z0) < tau}`` by bracketed root-finding along ``rays`` rays from ``z0``.

    Valid while the sublevel set is star-shaped about ``z0``; a level where
    ``g`` crosses ``tau`` more than once along some ray is dropped with a
    warning.
    """
    z0 = complex(z0)
    gf = gf or green_function(domain)
    theta = 2 * np.pi * np.arange(rays) / rays
    dirs = np.exp(1j * theta)
    rmax = _ray_exit(domain, z0, dirs) * (1.0 - 1e-9)
    poles = np.full(rays, z0)
    probe = np.linspace(0.0, 1.0, 65)[1:-1]
    probe_vals = np.stack([np.asarray(gf(z0 + s * rmax * dirs, poles)) for s in probe], axis=1)
    profile = SublevelProfile(z0, rays=rays)
    for tau in sorted(float(t) for t in taus):
        if tau >= 0:
            raise DomainError("sublevel thresholds must be negative")
        above = probe_vals >= tau
        first = np.argmax(above, axis=1)
        resolvable = np.all(above.any(axis=1)) and all(np.all(above[k, first[k]:]) for k in range(rays))
        if not resolvable:
            msg = f"sublevel set at tau={tau} is not star-shaped about {z0}; dropped"
            warnings.warn(msg, NumericalFailureWarning, stacklevel=2)
            profile.dropped.append(tau)
            continue
        r = _level_radii(gf, z0, dirs, rmax, probe, probe_vals, first, tau, iterations)
        volume = float(np.pi * np.mean(r * r))  # int_0^{2pi} r^2/2 dtheta
        profile.rows.append((tau, volume, float(np.exp(2 * tau) / volume)))
    return profile


def finite_difference_green(annulus: Annulus, w: complex, n: int = 161):
    """Independent polar finite-difference solve for ``g(., w)`` on an annulus.

    Solves for the smooth part ``h = g - log|z - w|`` on an ``n x (n-1)``
    polar grid and on the half-resolution grid, then Richardson-combines the
    shared nodes.  Returns ``(points, values)`` on the coarse grid.
    """
    def solve(nr, nt):
        rho, big, c = annulus.inner, annulus.outer, annulus.center
        r = np.linspace(rho, big, nr)
        t = 2 * np.pi * np.arange(nt) / nt
        dr, dt = r[1] - r[0], t[1] - t[0]
        ri = r[1:-1]
        ni = ri.size
        idx = np.arange(ni * nt).reshape(ni, nt)
        rows, cols, vals = [], [], []
        rhs = np.zeros(ni * nt)
        bc_in = -np.log(np.abs(c + rho * np.exp(1j * t) - w))
        bc_out = -np.log(np.abs(c + big * np.exp(1j * t) - w))
        for i, rr in enumerate(ri):
            cm = 1 / dr**2 - 1 / (2 * rr * dr)
            cp = 1 / dr**2 + 1 / (2 * rr * dr)
            ct = 1 / (rr * dt) ** 2
            for j in range(nt):
                k = idx[i, j]
                rows.append(k); cols.append(k); vals.append(-2 / dr**2 - 2 * ct)
                for jj in ((j - 1) % nt, (j + 1) % nt):
                    rows.append(k); cols.append(idx[i, jj]); vals.append(ct)
                if i > 0:
                    rows.append(k); cols.append(idx[i - 1, j]); vals.append(cm)
                else:
                    rhs[k] -= cm * bc_in[j]
                if i < ni - 1:
                    rows.append(k); cols.append(idx[i + 1, j]); vals.append(cp)
                else:
                    rhs[k] -= cp * bc_out[j]
        a = sps.csr_matrix((vals, (rows, cols)), shape=(ni * nt, ni * nt))
        h = spla.spsolve(a, rhs).reshape(ni, nt)
        pts = c + ri[:, None] * np.exp(1j * t[None, :])
        return pts, h

    fine_pts, fine_h = solve(n, n - 1 if (n - 1) % 2 == 0 else n)
    nc = (n + 1) // 2
    coarse_pts, coarse_h = solve(nc, fine_h.shape[1] // 2)
    # coarse interior node i sits at fine interior node 2i+1; angular node j at 2j
    fine_on_coarse = fine_h[1::2, ::2][: coarse_h.shape[0], : coarse_h.shape[1]]
    h = (4 * fine_on_coarse - coarse_h) / 3
    return coarse_pts, np.log(np.abs(coarse_pts - w)) + h
