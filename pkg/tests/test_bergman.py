import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_rigidity import bergman, oracles
from bergman_rigidity.errors import DomainError, GuardBandWarning, IllConditionedBasisWarning, NumericalFailureWarning
from bergman_rigidity.geometry import Disk, UnboundedDomain, build_smooth, ellipse, interior_grid, interior_samples


def _pairs(radius=0.7, n=5):
    g = np.exp(2j * np.pi * np.arange(n) / n)
    z = radius * np.array([0, 0.5, 1.0, 0.8, 0.3]) * g
    w = radius * np.array([1.0, 0.2, 0.6, 0.0, 0.9]) * np.conj(g)
    zz, ww = np.meshgrid(z, w, indexing="ij")
    return zz.ravel(), ww.ravel()


def test_disk_kernel_oracle(disk_basis):
    z, w = _pairs()
    k = np.array([disk_basis.kernel_matrix([a], [b])[0, 0] for a, b in zip(z, w)])
    assert np.max(np.abs(k - oracles.disk_bergman(z, w))) < 1e-6


@settings(max_examples=5, deadline=None)
@given(
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    st.floats(0.2, 4.0),
)
def test_disk_kernel_covariant_under_rigid_motion(c, r):
    b = bergman.orthonormalize(Disk(c, r), degree=30)
    z, w = _pairs()
    k = b.kernel_matrix(c + r * z, c + r * w)
    ref = oracles.disk_bergman(c + r * z[:, None], c + r * w[None, :], c, r)
    assert np.max(np.abs(k - ref)) * r * r < 1e-6


def test_orthonormality(disk_basis, annulus_basis, tc_basis):
    for b in (disk_basis, annulus_basis, tc_basis):
        assert b.orthonormality_defect() < 1e-8


def test_annulus_kernel_oracle(annulus_fine):
    r = np.array([0.6, 0.7, 0.8, 0.9])
    z = r * np.exp(1j * np.array([0.0, 1.0, 2.5, 4.0]))
    k = annulus_fine.kernel_matrix(z, z)
    ref = oracles.annulus_bergman(z[:, None], z[None, :], 0.5, 1.0)
    assert np.max(np.abs(k - ref)) < 1e-8


def test_kernel_is_hermitian(tc_basis, tc_domain):
    pts = interior_samples(tc_domain, 8, np.random.default_rng(1), 0.05)
    k = tc_basis.kernel_matrix(pts, pts)
    assert np.allclose(k, k.conj().T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(k) > -1e-10)
    assert np.allclose(np.diag(k).real, tc_basis.diag(pts))


@pytest.mark.parametrize("name", ["disk_basis", "annulus_basis", "punctured_basis", "tc_basis"])
def test_volume_inequality(request, name):
    b = request.getfixturevalue(name)
    pts = interior_grid(b.domain, 51, b.guard_distance())
    assert pts.size > 100
    assert np.min(b.diag(pts) * b.domain.area - 1.0) >= -1e-8


@pytest.mark.parametrize("name", ["disk_basis", "annulus_basis", "punctured_basis", "tc_basis"])
def test_mean_value_identity(request, name, rng):
    b = request.getfixturevalue(name)
    for z0 in interior_samples(b.domain, 5, rng, b.guard_distance()):
        assert abs(bergman.mean_integral(b, z0) - 1.0) < 1e-10


def test_punctures_are_invisible(disk_basis, punctured_basis):
    z, w = _pairs()
    assert np.max(np.abs(disk_basis.kernel_matrix(z, w) - punctured_basis.kernel_matrix(z, w))) < 1e-12


@settings(max_examples=10, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_reproduces_polynomials(disk_basis, coeffs):
    res = bergman.reproduce_residual(disk_basis, coeffs, 0.3 - 0.2j)
    assert res < 1e-9 * max(1.0, sum(abs(c) for c in coeffs))


def test_reproduces_laurent_on_annulus(annulus_basis):
    assert bergman.reproduce_residual(annulus_basis, {-2: 1.0, 1: 0.5j}, 0.7j) < 1e-9


def test_outside_span_warns(disk_basis):
    with pytest.warns(NumericalFailureWarning):
        bergman.reproduce_residual(disk_basis, {k: 1.0 for k in range(40)}, 0.1)


@pytest.mark.parametrize("c", [0.5, 2.0j, 1.5 * np.exp(0.7j)])
def test_transformation_law(c):
    assert bergman.transformation_residual(c) < 1e-10


def test_transformation_rejects_zero():
    with pytest.raises(DomainError):
        bergman.transformation_residual(0)


def test_guard_band_warning(disk_basis):
    with pytest.warns(GuardBandWarning):
        bergman.kernel(disk_basis, 0.95, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bergman.kernel(disk_basis, 0.5, 0.0)


def test_condition_truncation_warns():
    # monomials are far from orthogonal on an elongated ellipse
    d = build_smooth(ellipse(0j, 1.0, 0.3))
    with pytest.warns(IllConditionedBasisWarning):
        b = bergman.orthonormalize(d, degree=30, max_condition=1e6)
    assert b.truncated_from == 31 and b.size < 31
    assert b.condition <= 1e6
    assert b.orthonormality_defect() < 1e-8


def test_unbounded_rejected():
    with pytest.raises(DomainError):
        bergman.orthonormalize(UnboundedDomain())


def test_converged_basis_annulus(annulus):
    pts = np.array([np.sqrt(0.5), -0.3 + 0.55j, 0.1 - 0.8j])
    b = bergman.converged_basis(annulus, pts, 1e-8)
    ref = oracles.annulus_bergman(pts, pts, 0.5, 1.0)
    assert np.max(np.abs(b.diag(pts) - ref.real)) < 1e-8
    assert b.dictionary.degree > bergman.DEFAULT_DEGREE


def test_converged_basis_warns_at_cap(annulus):
    with pytest.warns(NumericalFailureWarning):
        bergman.converged_basis(annulus, [0.51], 1e-14, degree=4, max_degree=8)


def test_minimality_margin_disk_center(disk_basis):
    assert abs(bergman.minimality_margin(disk_basis, 0j)) < 1e-12
    assert bergman.minimality_margin(disk_basis, 0.5) == pytest.approx(1 / 0.75**2 - 1, rel=1e-10)
