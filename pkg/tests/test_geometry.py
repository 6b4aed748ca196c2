import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_rigidity.errors import DomainError
from bergman_rigidity.geometry import (
    Annulus,
    Disk,
    Membership,
    PuncturedDisk,
    ReinhardtProfile2,
    build_smooth,
    circle,
    ellipse,
    interior_grid,
    interior_samples,
    rose,
    unit_tangent,
)

from conftest import triply_connected

centers = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
radii = st.floats(0.1, 10)


@settings(max_examples=25, deadline=None)
@given(centers, radii)
def test_disk_stokes_area_is_exact(c, r):
    d = Disk(c, r)
    assert d.stokes_area(64) == pytest.approx(np.pi * r * r, rel=1e-13)


def test_annulus_area(annulus):
    assert annulus.area == pytest.approx(0.75 * np.pi, rel=1e-14)


def test_ellipse_area_converges():
    d = build_smooth(ellipse(0.2j, 2.0, 0.5, angle=0.7))
    assert d.area == pytest.approx(np.pi, rel=1e-12)


def test_triply_connected_area_matches_refined(tc_domain):
    # rose r(t) = 1 + 0.1 cos 3t has area pi (1 + 0.01 / 2)
    exact = np.pi * (1 + 0.005) - np.pi * (0.15**2 + 0.12**2)
    assert tc_domain.area == pytest.approx(exact, rel=1e-12)
    assert tc_domain.connectivity == 3


def test_membership_is_tristate(disk):
    assert disk.contains(0.5) is Membership.INSIDE
    assert disk.contains(1.0) is Membership.BOUNDARY
    assert disk.contains(1.5) is Membership.OUTSIDE
    with pytest.raises(TypeError):
        bool(disk.contains(0.5))


def test_punctures_are_outside(punctured):
    assert punctured.contains(0.3) is Membership.OUTSIDE
    assert punctured.contains(0.31) is Membership.INSIDE
    assert punctured.area == pytest.approx(np.pi)


def test_holes_excluded(tc_domain):
    assert tc_domain.contains(-0.45) is Membership.OUTSIDE
    assert tc_domain.contains(0.4 + 0.2j) is Membership.OUTSIDE
    assert tc_domain.contains(0.0) is Membership.INSIDE
    assert tc_domain.contains(1.05) is Membership.INSIDE  # inside a lobe
    assert tc_domain.contains(0.0 + 1.05j) is Membership.OUTSIDE


def test_inside_mask_matches_analytic_annulus(rng):
    # the generic polygon test agrees with |z| in (0.5, 1) away from the circles
    generic = build_smooth(circle(0j, 1.0), [circle(0j, 0.5)])
    z = rng.uniform(-1.1, 1.1, 4000) + 1j * rng.uniform(-1.1, 1.1, 4000)
    r = np.abs(z)
    keep = (np.abs(r - 0.5) > 1e-6) & (np.abs(r - 1.0) > 1e-6)
    got = generic.inside_mask(z[keep])
    assert np.array_equal(got, (r[keep] > 0.5) & (r[keep] < 1.0))


def test_hole_orientation_is_fixed():
    d = build_smooth(circle(0j, 1.0), [circle(0.1, 0.3)])
    assert not d.curves[0].positive and d.curves[-1].positive
    assert d.area == pytest.approx(np.pi * (1 - 0.09), rel=1e-12)


def test_unit_tangent_on_circle(disk):
    assert unit_tangent(disk, 0, 0.0) == pytest.approx(1j)
    assert unit_tangent(disk, 0, 0.25) == pytest.approx(-1)
    with pytest.raises(DomainError):
        unit_tangent(disk, 1, 0.0)


def test_unit_tangent_hole_runs_clockwise(annulus):
    assert unit_tangent(annulus, 0, 0.0) == pytest.approx(-1j)


@pytest.mark.parametrize(
    "make",
    [
        lambda: Disk(0, -1.0),
        lambda: Annulus(0, 1.0, 0.5),
        lambda: PuncturedDisk(0, 1.0, (2.0,)),
        lambda: PuncturedDisk(0, 1.0, (0.1, 0.1)),
        lambda: rose(0, 1.0, 1.0, 3),
        lambda: build_smooth(circle(0, 1.0), [circle(0.9, 0.3)]),
        lambda: build_smooth(circle(0, 1.0), [circle(0.1, 0.3), circle(-0.1, 0.3)]),
        lambda: build_smooth(circle(0, 1.0), [circle(0.0, 0.5), circle(0.0, 0.2)]),
        lambda: ReinhardtProfile2((0.0, 1.0)),
    ],
)
def test_invalid_domains_rejected(make):
    with pytest.raises(DomainError):
        make()


def test_interior_samples_respect_band(tc_domain, rng):
    pts = interior_samples(tc_domain, 200, rng, band=0.05)
    assert pts.size == 200
    assert np.all(tc_domain.boundary_distance(pts) >= 0.05)
    assert np.all(tc_domain.inside_mask(pts))


def test_interior_grid_row_major(disk):
    g = interior_grid(disk, 11, 0.0)
    assert g[0].imag <= g[-1].imag
    # within a row the real part increases
    row = g[np.isclose(g.imag, 0)]
    assert np.all(np.diff(row.real) > 0)


def test_centroid(tc_domain):
    d = build_smooth(circle(0.3 - 0.2j, 0.7))
    assert d.centroid == pytest.approx(0.3 - 0.2j, abs=1e-12)
    assert abs(tc_domain.centroid) < 0.1


def test_reinhardt_profile():
    p = ReinhardtProfile2()
    assert p.t_star == pytest.approx((np.sqrt(5) - 1) / 2, abs=1e-15)
    assert p.contains(0.1, 0.1) and not p.contains(0.9, 0.5)
    assert ReinhardtProfile2((1.0,)).t_star == pytest.approx(1.0)


def test_triply_connected_helper_is_deterministic():
    a, b = triply_connected(), triply_connected()
    assert a.area == b.area
