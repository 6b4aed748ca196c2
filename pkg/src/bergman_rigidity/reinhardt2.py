"""The complete Reinhardt domain ``|z1|^4 + |z1|^2 + |z2|^2 < 1`` in ``C^2``.

Monomials are orthogonal here, so every quantity reduces to the radial
integrals ``I(p, q)`` over ``t = |z1|^2``.  The last part checks why no linear
map sends the ball onto this domain: a linear biholomorphism must fix the
ball's boundary circles, and the two constraints it gets on ``|a1|^2`` have
different roots.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .geometry import ReinhardtProfile2
from .quadrature import reinhardt_radial_integral, reinhardt_radial_integral_closed

DEFAULT_N = 8
BOUNDARY_TOL = 1e-10
THETA_POINTS = 36
OSCILLATION_TOL = 1e-12
MC_SAMPLES = 1_000_000


def _profile(profile: ReinhardtProfile2 | None) -> ReinhardtProfile2:
    return profile or ReinhardtProfile2()


def volume(profile: ReinhardtProfile2 | None = None, method: str = "quadrature") -> float:
    """``v = pi^2 I(0, 0)``.

    ``method="quadrature"`` uses adaptive Gauss-Legendre on the radial
    integral, ``"antiderivative"`` the exact polynomial antiderivative.
    """
    profile = _profile(profile)
    if method == "quadrature":
        return float(np.pi**2 * reinhardt_radial_integral(0, 0, profile))
    if method == "antiderivative":
        return float(np.pi**2 * reinhardt_radial_integral_closed(0, 0, profile))
    raise ValueError(f"unknown volume method {method!r}")


def volume_closed_form() -> float:
    """``pi^2 (t* - t*^2/2 - t*^3/3)`` for the default profile ``t + t^2``."""
    ts = (np.sqrt(5.0) - 1.0) / 2.0
    return float(np.pi**2 * (ts - ts**2 / 2.0 - ts**3 / 3.0))


def monomial_norm(p: int, q: int, profile: ReinhardtProfile2 | None = None, method: str = "antiderivative") -> float:
    """``||z1^p z2^q||^2 = pi^2 / (q + 1) * I(p, q)``."""
    if p < 0 or q < 0:
        raise DomainError("monomial exponents must be nonnegative")
    integral = reinhardt_radial_integral_closed if method == "antiderivative" else reinhardt_radial_integral
    return float(np.pi**2 / (q + 1) * integral(p, q, _profile(profile)))


@dataclass(frozen=True)
class MonomialNormTable:
    norms: np.ndarray  # norms[p, q]
    profile: ReinhardtProfile2 = field(default_factory=ReinhardtProfile2)

    @property
    def N(self) -> int:
        return self.norms.shape[0] - 1

    def __getitem__(self, pq) -> float:
        return float(self.norms[pq])

    def violations(self) -> list[str]:
        """Invariant breaches: nonpositive entries or failure to decrease in either index."""
        out = []
        if np.any(self.norms <= 0):
            out.append("nonpositive entry")
        if np.any(np.diff(self.norms, axis=0) >= 0):
            out.append("not decreasing in p")
        if np.any(np.diff(self.norms, axis=1) >= 0):
            out.append("not decreasing in q")
        return out


def norm_table(n: int = DEFAULT_N, profile: ReinhardtProfile2 | None = None) -> MonomialNormTable:
    profile = _profile(profile)
    norms = np.array([[monomial_norm(p, q, profile) for q in range(n + 1)] for p in range(n + 1)])
    return MonomialNormTable(norms, profile)


@dataclass(frozen=True)
class KernelOrigin:
    value: float
    contributing: tuple  # (p, q) pairs with a nonzero term at the origin


def kernel_origin(table: MonomialNormTable | None = None) -> KernelOrigin:
    """``K(0, 0) = sum |0^p 0^q|^2 / ||z1^p z2^q||^2`` over the table; only ``(0, 0)`` survives."""
    table = table or norm_table()
    n = table.N
    p, q = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    terms = (0.0**p) ** 2 * (0.0**q) ** 2 / table.norms
    nz = tuple(zip(*np.nonzero(terms)))
    return KernelOrigin(float(terms.sum()), tuple((int(a), int(b)) for a, b in nz))


# -- strong convexity -----------------------------------------------------------


@dataclass(frozen=True)
class HessianReport:
    point: np.ndarray
    hessian: np.ndarray
    min_eig: float


def defining_real(x, profile: ReinhardtProfile2 | None = None) -> np.ndarray:
    """``rho`` in real coordinates ``(x1, x2, x3, x4) = (Re z1, Im z1, Re z2, Im z2)``."""
    x = np.asarray(x, dtype=float)
    u = x[..., 0] ** 2 + x[..., 1] ** 2
    return _profile(profile).poly(u) + x[..., 2] ** 2 + x[..., 3] ** 2 - 1.0


def hessian(x, profile: ReinhardtProfile2 | None = None) -> np.ndarray:
    """Real Hessian of ``rho``: ``2 P'(u) I + 4 P''(u) x x^T`` on the z1 block, ``2 I`` on the z2 block.

    Accepts a single point or a stack of shape ``(n, 4)``.
    """
    poly = _profile(profile).poly
    x = np.asarray(x, dtype=float)
    u = x[..., 0] ** 2 + x[..., 1] ** 2
    xy = x[..., :2]
    h = np.zeros(x.shape[:-1] + (4, 4))
    d1 = np.asarray(poly.deriv(1)(u))[..., None, None]
    d2 = np.asarray(poly.deriv(2)(u))[..., None, None]
    h[..., :2, :2] = 2.0 * d1 * np.eye(2) + 4.0 * d2 * xy[..., :, None] * xy[..., None, :]
    h[..., 2:, 2:] = 2.0 * np.eye(2)
    return h


def hessian_report(x, profile: ReinhardtProfile2 | None = None, tol: float = BOUNDARY_TOL) -> HessianReport:
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise DomainError("expected a point of R^4")
    r = float(defining_real(x, profile))
    if abs(r) >= tol:
        raise DomainError(f"point is not on the boundary (rho = {r:.3g})")
    h = hessian(x, profile)
    return HessianReport(x, h, float(np.linalg.eigvalsh(h)[0]))


def hessian_min_eig(x, profile: ReinhardtProfile2 | None = None) -> float:
    return hessian_report(x, profile).min_eig


def boundary_samples(n: int, rng: np.random.Generator, profile: ReinhardtProfile2 | None = None) -> np.ndarray:
    """Gaussian directions in ``R^4`` pushed radially onto the boundary.

    Along a ray ``rho(sqrt(mu) x)`` is a convex increasing polynomial in
    ``mu``, so Newton from the linearized root converges monotonically.
    """
    profile = _profile(profile)
    x = rng.standard_normal((n, 4))
    u = x[:, 0] ** 2 + x[:, 1] ** 2
    v = x[:, 2] ** 2 + x[:, 3] ** 2
    c = np.asarray(profile.coefficients)
    powers = np.arange(1, c.size + 1)

    def f(mu):
        return np.sum(c * (mu[:, None] * u[:, None]) ** powers, axis=1) + mu * v - 1.0

    def df(mu):
        return np.sum(c * powers * u[:, None] ** powers * mu[:, None] ** (powers - 1), axis=1) + v

    mu = 1.0 / (c[0] * u + v)
    for _ in range(60):
        step = f(mu) / df(mu)
        mu = mu - step
        if np.max(np.abs(step) / mu) < 1e-16:
            break
    return x * np.sqrt(mu)[:, None]


def min_hessian_eig_sampled(n: int = 10_000, seed: int = 0, profile: ReinhardtProfile2 | None = None) -> tuple[float, float]:
    """Minimum eigenvalue over ``n`` boundary samples, and the largest ``|rho|`` among them."""
    pts = boundary_samples(n, np.random.default_rng(seed), profile)
    resid = float(np.max(np.abs(defining_real(pts, profile))))
    if resid >= BOUNDARY_TOL:
        raise DomainError(f"boundary projection failed (|rho| up to {resid:.3g})")
    return float(np.linalg.eigvalsh(hessian(pts, profile))[:, 0].min()), resid


# -- the obstruction ---------------------------------------------------------


@dataclass(frozen=True)
class CircleConstraint:
    residual: np.ndarray | float
    mean: float
    oscillation: float


def circle_constraint_residual(a1: complex, a3: complex, theta=None, points: int = THETA_POINTS) -> CircleConstraint:
    """``rho(F(1/sqrt2, e^{i theta}/sqrt2))`` for ``F(z) = (a1 z1, a3 z1 + z2)``.

    Mean and oscillation (max - min) are taken over ``points`` equally spaced
    angles; a nonzero oscillation means ``F`` cannot map the ball's boundary
    circle into the boundary, which forces ``a3 = 0``.
    """
    grid = 2.0 * np.pi * np.arange(points) / points

    def rho(th):
        s = 1.0 / np.sqrt(2.0)
        w1 = a1 * s * np.ones_like(th)
        w2 = (a3 + np.exp(1j * th)) * s
        return np.abs(w1) ** 4 + np.abs(w1) ** 2 + np.abs(w2) ** 2 - 1.0

    on_grid = rho(grid)
    if theta is None:
        residual = on_grid
    else:
        residual = rho(np.asarray(theta, dtype=float))
        if residual.ndim == 0:
            residual = float(residual)
    return CircleConstraint(residual, float(on_grid.mean()), float(on_grid.max() - on_grid.min()))


@dataclass(frozen=True)
class ObstructionRoots:
    circle_root: float  # |a1|^4 + 2|a1|^2 = 2
    axis_root: float  # |a1|^4 + |a1|^2 = 1
    difference: float

    @property
    def incompatible(self) -> bool:
        return self.difference > 0.1


def _positive_root(b: float, c: float) -> float:
    roots = np.roots([1.0, b, c])
    pos = [r.real for r in roots if abs(r.imag) < 1e-14 and r.real > 0]
    if len(pos) != 1:
        raise DomainError("expected exactly one positive root")
    x = pos[0]
    return float(x - (x * x + b * x + c) / (2 * x + b))


def obstruction_roots() -> ObstructionRoots:
    """Positive roots in ``x = |a1|^2`` of ``x^2 + 2x - 2`` and ``x^2 + x - 1``."""
    r6 = _positive_root(2.0, -2.0)
    r7 = _positive_root(1.0, -1.0)
    return ObstructionRoots(r6, r7, abs(r6 - r7))


# -- statistical sanity check -------------------------------------------------


@dataclass(frozen=True)
class MonteCarloInner:
    value: complex
    sigma: float
    samples: int

    @property
    def consistent_with_zero(self) -> bool:
        return abs(self.value) < 3.0 * self.sigma


def monte_carlo_inner(f, g, samples: int = MC_SAMPLES, seed: int = 0, profile: ReinhardtProfile2 | None = None) -> MonteCarloInner:
    """``<f, g> = int f conj(g)`` by uniform sampling of the bidisk ``|z1|^2 < t*, |z2| < 1``.

    Statistical only: the estimate carries its standard error.
    """
    profile = _profile(profile)
    rng = np.random.default_rng(seed)
    r1 = np.sqrt(profile.t_star)
    z1 = r1 * np.sqrt(rng.random(samples)) * np.exp(2j * np.pi * rng.random(samples))
    z2 = np.sqrt(rng.random(samples)) * np.exp(2j * np.pi * rng.random(samples))
    box = (np.pi * r1**2) * np.pi
    vals = np.where(profile.contains(z1, z2), f(z1, z2) * np.conj(g(z1, z2)), 0.0) * box
    sigma = float(np.sqrt((vals.real.var() + vals.imag.var()) / samples))
    return MonteCarloInner(complex(vals.mean()), sigma, samples)


# -- report -------------------------------------------------------------------


@dataclass(frozen=True)
class Reinhardt2Report:
    volume: float
    volume_alt: float
    kernel_origin: float
    min_hessian_eig: float
    roots: ObstructionRoots
    oscillation_zero: float
    oscillation_nonzero: float

    @property
    def verdict(self) -> str:
        ok = self.roots.incompatible and self.min_hessian_eig > 0 and self.oscillation_nonzero > OSCILLATION_TOL
        return "not biholomorphic to the ball" if ok else "inconclusive"

    def lines(self) -> list[str]:
        return [
            f"volume (quadrature)      {self.volume:.10f}",
            f"volume (antiderivative)  {self.volume_alt:.10f}",
            f"K(0,0)                   {self.kernel_origin:.10f}",
            f"min Hessian eigenvalue   {self.min_hessian_eig:.10f}",
            f"|a1|^2 roots             {self.roots.circle_root:.10f} {self.roots.axis_root:.10f}",
            f"root difference          {self.roots.difference:.10f}",
            f"verdict                  {self.verdict}",
        ]


def summary(samples: int = 10_000, seed: int = 0) -> Reinhardt2Report:
    table = norm_table()
    roots = obstruction_roots()
    a1 = np.sqrt(roots.circle_root)
    return Reinhardt2Report(
        volume=volume(method="quadrature"),
        volume_alt=volume(method="antiderivative"),
        kernel_origin=kernel_origin(table).value,
        min_hessian_eig=min_hessian_eig_sampled(samples, seed)[0],
        roots=roots,
        oscillation_zero=circle_constraint_residual(a1, 0.0).oscillation,
        oscillation_nonzero=circle_constraint_residual(a1, 0.1).oscillation,
    )
