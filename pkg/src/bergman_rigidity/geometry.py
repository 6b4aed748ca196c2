"""Planar domains bounded by smooth closed curves, and their basic geometry.

Domains are immutable. Boundary components are stored as periodic
parametrizations ``t -> z(t)`` on ``[0, 1)`` together with their velocity
``z'(t)``; the outer component runs counterclockwise and holes run clockwise,
so every Stokes-type formula is a single sum over components.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError

TWO_PI = 2.0 * np.pi

#: Width of the band around the boundary where membership is undecided.
AMBIGUITY_BAND = 1e-10

_DENSE_SAMPLES = 4096
_COARSE_SAMPLES = 512
_COARSE_BAND = 1e-3


class Membership(enum.Enum):
    OUTSIDE = 0
    INSIDE = 1
    BOUNDARY = 2

    def __bool__(self) -> bool:
        raise TypeError("Membership is tri-state; compare against a member explicitly")


@dataclass(frozen=True)
class BoundaryCurve:
    """A smooth closed curve ``z(t)``, ``t`` in ``[0, 1)``.

    ``center`` is a point enclosed by the curve; for a hole it is used as the
    pole location of Laurent-type dictionary terms and of logarithmic
    corrections in layer potentials.
    """

    z: Callable[[np.ndarray], np.ndarray]
    dz: Callable[[np.ndarray], np.ndarray]
    positive: bool
    center: complex
    family: str = "custom"
    params: tuple = ()

    def __post_init__(self):
        t = np.arange(256) / 256.0
        speed = np.abs(self.dz(t))
        if np.min(speed) < 1e-13:
            raise DomainError(f"{self.family} curve is not regular (min |z'| = {np.min(speed):.3g})")
        gap = abs(complex(self.z(np.array([0.0]))[0]) - complex(self.z(np.array([1.0]))[0]))
        if gap > 1e-12:
            raise DomainError(f"{self.family} curve is not closed (gap {gap:.3g})")

    def sample(self, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Equispaced nodes ``t_k = k/m`` with points and velocities."""
        t = np.arange(m) / m
        return t, self.z(t), self.dz(t)

    def reversed(self) -> "BoundaryCurve":
        z, dz = self.z, self.dz
        return BoundaryCurve(
            z=lambda t: z(1.0 - np.asarray(t, dtype=float)),
            dz=lambda t: -dz(1.0 - np.asarray(t, dtype=float)),
            positive=not self.positive,
            center=self.center,
            family=self.family,
            params=self.params,
        )


def _radial_curve(center: complex, r, dr, positive: bool, family: str, params: tuple) -> BoundaryCurve:
    # r, dr: functions of the angle theta
    sign = 1.0 if positive else -1.0
    c = complex(center)

    def z(t):
        th = sign * TWO_PI * np.asarray(t, dtype=float)
        return c + r(th) * np.exp(1j * th)

    def dz(t):
        th = sign * TWO_PI * np.asarray(t, dtype=float)
        return sign * TWO_PI * (dr(th) + 1j * r(th)) * np.exp(1j * th)

    return BoundaryCurve(z=z, dz=dz, positive=positive, center=c, family=family, params=params)


def circle(center: complex, radius: float, positive: bool = True) -> BoundaryCurve:
    if radius <= 0:
        raise DomainError("circle radius must be positive")
    radius = float(radius)
    return _radial_curve(
        center,
        lambda th: radius + 0.0 * th,
        lambda th: 0.0 * th,
        positive,
        "circle",
        (("center", complex(center)), ("radius", radius)),
    )


def rose(center: complex, radius: float, amplitude: float, lobes: int, positive: bool = True) -> BoundaryCurve:
    """Star-shaped curve ``r(theta) = radius * (1 + amplitude * cos(lobes * theta))``."""
    if radius <= 0 or not 0 <= amplitude < 1:
        raise DomainError("rose needs radius > 0 and 0 <= amplitude < 1")
    lobes = int(lobes)
    return _radial_curve(
        center,
        lambda th: radius * (1.0 + amplitude * np.cos(lobes * th)),
        lambda th: -radius * amplitude * lobes * np.sin(lobes * th),
        positive,
        "rose",
        (("center", complex(center)), ("radius", float(radius)), ("amplitude", float(amplitude)), ("lobes", lobes)),
    )


def ellipse(center: complex, a: float, b: float, angle: float = 0.0, positive: bool = True) -> BoundaryCurve:
    if a <= 0 or b <= 0:
        raise DomainError("ellipse semi-axes must be positive")
    c = complex(center)
    rot = np.exp(1j * angle)
    sign = 1.0 if positive else -1.0

    def z(t):
        th = sign * TWO_PI * np.asarray(t, dtype=float)
        return c + rot * (a * np.cos(th) + 1j * b * np.sin(th))

    def dz(t):
        th = sign * TWO_PI * np.asarray(t, dtype=float)
        return sign * TWO_PI * rot * (-a * np.sin(th) + 1j * b * np.cos(th))

    return BoundaryCurve(
        z=z, dz=dz, positive=positive, center=c, family="ellipse",
        params=(("center", c), ("a", float(a)), ("b", float(b)), ("angle", float(angle))),
    )


CURVE_FAMILIES = {"circle": circle, "ellipse": ellipse, "rose": rose}


class PlanarDomain:
    """Common behaviour of bounded, curve-bounded planar domains.

    Subclasses provide ``curves`` (outermost last) and may override the
    analytic helpers.
    """

    kind = "domain"
    bounded = True
    punctures: tuple = ()

    @property
    def curves(self) -> tuple[BoundaryCurve, ...]:
        raise NotImplementedError

    @property
    def connectivity(self) -> int:
        return len(self.curves)

    @property
    def holes(self) -> tuple[BoundaryCurve, ...]:
        return self.curves[:-1]

    @property
    def hole_points(self) -> tuple[complex, ...]:
        return tuple(c.center for c in self.holes)

    # -- areas -------------------------------------------------------------

    def stokes_area(self, m: int) -> float:
        total = 0.0
        for curve in self.curves:
            _, z, dz = curve.sample(m)
            total += np.mean(np.conj(z) * dz).imag / 2.0
        return float(total)

    def exact_area(self) -> float | None:
        return None

    @cached_property
    def area(self) -> float:
        m = 256
        prev = self.stokes_area(m)
        while m < 1 << 16:
            m *= 2
            cur = self.stokes_area(m)
            if abs(cur - prev) < 1e-12 * max(1.0, abs(cur)):
                return cur
            prev = cur
        return prev

    @cached_property
    def centroid(self) -> complex:
        return complex(_first_moment(self) / self.area)

    # -- membership --------------------------------------------------------

    @cached_property
    def _dense(self) -> list[np.ndarray]:
        return [curve.sample(_DENSE_SAMPLES)[1] for curve in self.curves]

    @cached_property
    def bounding_box(self) -> tuple[float, float, float, float]:
        pts = self._dense[-1]
        return float(pts.real.min()), float(pts.real.max()), float(pts.imag.min()), float(pts.imag.max())

    @cached_property
    def _tree(self) -> cKDTree:
        pts = np.concatenate(self._dense)
        return cKDTree(np.column_stack([pts.real, pts.imag]))

    def boundary_distance(self, z) -> np.ndarray:
        """Distance to the nearest dense boundary sample."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        d, _ = self._tree.query(np.column_stack([z.real.ravel(), z.imag.ravel()]))
        return d.reshape(z.shape)

    @cached_property
    def _coarse(self) -> list[np.ndarray]:
        return [curve.sample(_COARSE_SAMPLES)[1] for curve in self.curves]

    def _winding_inside(self, z: np.ndarray) -> np.ndarray:
        # even-odd test on a coarse polygon; points near the boundary are redone on the dense one
        z = np.asarray(z, dtype=complex)
        inside = _parity_inside(z.ravel(), self.curves, self._coarse)
        near = self.boundary_distance(z).ravel() < _COARSE_BAND
        if np.any(near):
            inside[near] = _parity_inside(z.ravel()[near], self.curves, self._dense)
        return inside.reshape(z.shape)

    def inside_mask(self, z, band: float = 0.0) -> np.ndarray:
        """Points strictly inside, not punctures, at distance >= ``band`` from the boundary."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        mask = self._winding_inside(z)
        dist = self.boundary_distance(z)
        mask &= dist >= max(band, AMBIGUITY_BAND)
        for p in self.punctures:
            mask &= np.abs(z - p) > max(band, AMBIGUITY_BAND)
        return mask

    def contains(self, z: complex) -> Membership:
        z = complex(z)
        if float(self.boundary_distance(z)[0]) < AMBIGUITY_BAND:
            return Membership.BOUNDARY
        if any(abs(z - p) < AMBIGUITY_BAND for p in self.punctures):
            return Membership.OUTSIDE
        return Membership.INSIDE if bool(self._winding_inside(np.array([z]))[0]) else Membership.OUTSIDE

    @cached_property
    def inradius(self) -> float:
        """Largest distance from an interior point to the boundary, on a 96x96 grid."""
        x0, x1, y0, y1 = self.bounding_box
        xs, ys = np.linspace(x0, x1, 96), np.linspace(y0, y1, 96)
        grid = (xs[None, :] + 1j * ys[:, None]).ravel()
        grid = grid[self._winding_inside(grid)]
        return float(np.max(self.boundary_distance(grid)))

    def unit_tangent(self, component: int, t: float) -> complex:
        return unit_tangent(self, component, t)


def _first_moment(domain: PlanarDomain) -> complex:
    # int z dA = (1/2i) oint z * zbar dz over the oriented boundary
    m = 1024
    total = 0j
    for curve in domain.curves:
        _, z, dz = curve.sample(m)
        total += np.mean(z * np.conj(z) * dz)
    return total / 2j


def _parity_inside(z: np.ndarray, curves, polygons) -> np.ndarray:
    inside = np.ones(z.size, dtype=bool)
    for curve, pts in zip(curves, polygons):
        x, y = pts.real, pts.imag
        x2, y2 = np.roll(x, -1), np.roll(y, -1)
        odd = np.empty(z.size, dtype=bool)
        for chunk in _chunks(z.size):
            zx, zy = z[chunk].real[:, None], z[chunk].imag[:, None]
            straddle = (y > zy) != (y2 > zy)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = x + (zy - y) * (x2 - x) / (y2 - y)
            odd[chunk] = np.count_nonzero(straddle & (zx < xint), axis=1) % 2 == 1
        inside &= odd == curve.positive
    return inside


def _chunks(n: int, size: int = 512):
    for start in range(0, n, size):
        yield slice(start, min(n, start + size))


@dataclass(frozen=True)
class Disk(PlanarDomain):
    center: complex = 0j
    radius: float = 1.0
    kind = "disk"

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("disk radius must be positive")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    @cached_property
    def curves(self):
        return (circle(self.center, self.radius),)

    def exact_area(self):
        return np.pi * self.radius**2

    @cached_property
    def centroid(self):
        return self.center

    @cached_property
    def inradius(self):
        return self.radius

    def boundary_distance(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.abs(self.radius - np.abs(z - self.center))

    def _winding_inside(self, z):
        return np.abs(z - self.center) < self.radius


@dataclass(frozen=True)
class PuncturedDisk(Disk):
    punctures: tuple = ()
    kind = "punctured_disk"

    def __post_init__(self):
        super().__post_init__()
        pts = tuple(complex(p) for p in self.punctures)
        object.__setattr__(self, "punctures", pts)
        for p in pts:
            if abs(p - self.center) >= self.radius:
                raise DomainError(f"puncture {p} is not inside the disk")
        if len(set(pts)) != len(pts):
            raise DomainError("punctures must be pairwise distinct")

    def underlying(self) -> Disk:
        return Disk(self.center, self.radius)


@dataclass(frozen=True)
class Annulus(PlanarDomain):
    center: complex = 0j
    inner: float = 0.5
    outer: float = 1.0
    kind = "annulus"

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise DomainError("annulus needs 0 < inner < outer")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "inner", float(self.inner))
        object.__setattr__(self, "outer", float(self.outer))

    @cached_property
    def curves(self):
        return (circle(self.center, self.inner, positive=False), circle(self.center, self.outer))

    def exact_area(self):
        return np.pi * (self.outer**2 - self.inner**2)

    @cached_property
    def centroid(self):
        return self.center

    @cached_property
    def inradius(self):
        return 0.5 * (self.outer - self.inner)

    def boundary_distance(self, z):
        r = np.abs(np.atleast_1d(np.asarray(z, dtype=complex)) - self.center)
        return np.minimum(np.abs(r - self.inner), np.abs(self.outer - r))

    def _winding_inside(self, z):
        r = np.abs(z - self.center)
        return (r > self.inner) & (r < self.outer)


@dataclass(frozen=True)
class SmoothDomain(PlanarDomain):
    """Multiply connected domain given by smooth boundary curves, outermost last."""

    boundary: tuple = field(default_factory=tuple)
    kind = "smooth"

    def __post_init__(self):
        curves = tuple(self.boundary)
        if not curves:
            raise DomainError("a smooth domain needs at least one boundary curve")
        fixed = []
        for i, c in enumerate(curves):
            want_positive = i == len(curves) - 1
            fixed.append(c if c.positive == want_positive else c.reversed())
        object.__setattr__(self, "boundary", tuple(fixed))
        samples = [c.sample(512)[1] for c in fixed]
        outer = fixed[-1]
        for i, hole in enumerate(fixed[:-1]):
            # each hole lies inside the outer curve and outside every other hole
            if not np.all(_parity_inside(samples[i], [outer], [samples[-1]])):
                raise DomainError(f"hole {i} is not enclosed by the outer boundary")
            for j in range(i + 1, len(fixed) - 1):
                if np.any(_parity_inside(samples[i], [fixed[j].reversed()], [samples[j]])) or np.any(
                    _parity_inside(samples[j], [hole.reversed()], [samples[i]])
                ):
                    raise DomainError(f"holes {i} and {j} overlap")
        if not self.stokes_area(1024) > 0:
            raise DomainError("domain area must be positive (check component order)")

    @property
    def curves(self):
        return self.boundary


@dataclass(frozen=True)
class UnboundedDomain:
    """Label for the plane minus a closed polar set; carries no geometry."""

    label: str = "C minus a closed polar set"
    kind = "unbounded"
    bounded = False


def unit_tangent(domain: PlanarDomain, component: int, t: float) -> complex:
    curves = domain.curves
    if not 0 <= component < len(curves):
        raise DomainError(f"component {component} out of range for connectivity {len(curves)}")
    v = complex(curves[component].dz(np.array([float(t)]))[0])
    if abs(v) < 1e-13:
        raise DomainError("degenerate curve: |z'(t)| < 1e-13")
    return v / abs(v)


def domain_area(domain: PlanarDomain) -> float:
    return domain.area


def contains(domain: PlanarDomain, z: complex) -> Membership:
    return domain.contains(z)


def interior_samples(
    domain: PlanarDomain, n: int, rng: np.random.Generator, band: float = 0.0
) -> np.ndarray:
    """``n`` uniform random points inside ``domain`` at distance >= ``band`` from the boundary."""
    x0, x1, y0, y1 = domain.bounding_box
    out: list[complex] = []
    while len(out) < n:
        cand = rng.uniform(x0, x1, 4 * n) + 1j * rng.uniform(y0, y1, 4 * n)
        out.extend(cand[domain.inside_mask(cand, band)].tolist())
    return np.array(out[:n])


def interior_grid(domain: PlanarDomain, resolution: int, band: float) -> np.ndarray:
    """Row-major ``resolution x resolution`` grid over the bounding box, filtered to the band interior."""
    x0, x1, y0, y1 = domain.bounding_box
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    grid = (xs[None, :] + 1j * ys[:, None]).ravel()
    return grid[domain.inside_mask(grid, band)]


def build_smooth(outer: BoundaryCurve, holes: Sequence[BoundaryCurve] = ()) -> SmoothDomain:
    return SmoothDomain(boundary=tuple(holes) + (outer,))


@dataclass(frozen=True)
class ReinhardtProfile2:
    """Complete Reinhardt domain ``{(z1, z2): p(|z1|^2) + |z2|^2 < 1}`` in C^2.

    ``coefficients[i]`` multiplies ``t**(i + 1)``; the default ``(1, 1)`` is
    ``p(t) = t + t^2``, i.e. ``|z1|^4 + |z1|^2 + |z2|^2 < 1``.  ``(1,)`` gives
    the unit ball.
    """

    coefficients: tuple = (1.0, 1.0)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs or any(c < 0 for c in coeffs) or coeffs[0] <= 0:
            raise DomainError("profile needs nonnegative coefficients with a positive linear term")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def poly(self) -> np.polynomial.Polynomial:
        return np.polynomial.Polynomial((0.0,) + self.coefficients)

    @cached_property
    def t_star(self) -> float:
        """Positive root of ``p(t) = 1``; the range of ``|z1|^2`` over the domain."""
        roots = (self.poly - 1.0).roots()
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0)
        t = real[0]
        dp = self.poly.deriv()
        for _ in range(3):
            t -= (self.poly(t) - 1.0) / dp(t)
        return float(t)

    def defining(self, z1, z2):
        """``rho = p(|z1|^2) + |z2|^2 - 1``; negative inside."""
        return self.poly(np.abs(z1) ** 2) + np.abs(z2) ** 2 - 1.0

    def contains(self, z1, z2):
        return self.defining(z1, z2) < 0
