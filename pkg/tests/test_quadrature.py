import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_rigidity.errors import DomainError
from bergman_rigidity.geometry import Annulus, Disk, ReinhardtProfile2, build_smooth, ellipse
from bergman_rigidity.quadrature import (
    Atom,
    adaptive_gauss,
    area_moment,
    contour_integral,
    cross_gram,
    gram_matrix,
    laurent_norm,
    reinhardt_radial_integral,
    reinhardt_radial_integral_closed,
)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 12), st.integers(0, 12))
def test_disk_moments(j, k):
    got = area_moment(Disk(0j, 1.0), j, k)
    want = np.pi / (j + 1) if j == k else 0.0
    assert abs(got - want) < 1e-12


@pytest.mark.parametrize("k", [-3, -2, -1, 0, 1, 4])
def test_annulus_laurent_norms(annulus, k):
    assert area_moment(annulus, k, k).real == pytest.approx(laurent_norm(annulus, k), rel=1e-12)


def test_negative_moment_needs_excluded_origin(disk):
    with pytest.raises(DomainError):
        area_moment(disk, -1, -1)


def test_contour_integral_cauchy(tc_domain):
    # oint 1/(z - a) dz = 2 pi i for a inside, 0 for a in a hole
    assert contour_integral(tc_domain, lambda z: 1 / (z - 0.1j), 512) == pytest.approx(2j * np.pi, abs=1e-12)
    assert contour_integral(tc_domain, lambda z: 1 / (z + 0.45), 512) == pytest.approx(0, abs=1e-12)


def test_gram_is_hermitian_positive(tc_domain):
    atoms = [Atom(0j, 1.0, k) for k in range(6)] + [Atom(-0.45, 0.15, -1)]
    g, m = gram_matrix(tc_domain, atoms)
    assert np.allclose(g, g.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(g).min() > 0
    assert g[0, 0].real == pytest.approx(tc_domain.area, rel=1e-12)


def test_cross_gram_refines_until_stable():
    d = build_smooth(ellipse(0j, 1.5, 0.7))
    atoms = [Atom(0j, 1.0, k) for k in range(10)]
    g1, m = cross_gram(d, atoms, atoms)
    g2, _ = cross_gram(d, atoms, atoms, m=2 * m)
    assert np.max(np.abs(g1 - g2)) < 1e-10
    assert m >= 256


def test_pole_inside_rejected(disk):
    with pytest.raises(DomainError):
        gram_matrix(disk, [Atom(0j, 1.0, 0), Atom(0j, 1.0, -1)])


def test_adaptive_gauss():
    assert adaptive_gauss(np.exp, 0.0, 1.0) == pytest.approx(np.e - 1, rel=1e-14)
    assert adaptive_gauss(np.sqrt, 0.0, 1.0, tol=1e-10) == pytest.approx(2 / 3, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7))
def test_radial_integral_two_paths(p, q):
    a = reinhardt_radial_integral(p, q)
    b = reinhardt_radial_integral_closed(p, q)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-16)


def test_radial_integral_ball():
    # p(t) = t: I(p, q) = Beta(p + 1, q + 2)
    ball = ReinhardtProfile2((1.0,))
    assert reinhardt_radial_integral(0, 0, ball) == pytest.approx(0.5, rel=1e-14)
    assert reinhardt_radial_integral(1, 1, ball) == pytest.approx(1 / 12, rel=1e-13)


def test_laurent_norm_requires_centred(annulus):
    with pytest.raises(DomainError):
        laurent_norm(Annulus(0.1, 0.5, 1.0), 1)
