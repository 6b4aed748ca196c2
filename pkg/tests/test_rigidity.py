import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from bergman_rigidity import bergman, oracles, rigidity
from bergman_rigidity.errors import DomainError
from bergman_rigidity.geometry import Disk, PuncturedDisk, UnboundedDomain, build_smooth, ellipse, interior_samples


def _biconditional(verdict, tol=1e-4):
    ev = verdict.evidence
    return (ev["scan_margin"] <= tol) == (ev["constancy"] < tol)


def test_unit_disk(disk, disk_basis):
    v = rigidity.classify(disk, disk_basis)
    assert isinstance(v.verdict, rigidity.DiskMinusPolar)
    assert abs(v.verdict.center) < 1e-3
    assert abs(v.verdict.radius - 1) < 1e-3
    assert v.evidence["constancy"] < 1e-12
    assert _biconditional(v)


@settings(max_examples=5, deadline=None)
@given(
    st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
    st.floats(0.3, 3.0),
)
def test_classification_invariant_under_rigid_motion(c, r):
    v = rigidity.classify(Disk(c, r))
    assert isinstance(v.verdict, rigidity.DiskMinusPolar)
    assert abs(v.verdict.center - c) < 1e-3 * r
    assert abs(v.verdict.radius - r) < 1e-3 * r


def test_punctured_disk_same_verdict(disk_basis, punctured, punctured_basis):
    a = rigidity.classify(disk_basis.domain, disk_basis)
    b = rigidity.classify(punctured, punctured_basis)
    assert b.name == a.name == "DiskMinusPolar"
    assert abs(b.verdict.center - a.verdict.center) < 1e-6
    assert abs(b.verdict.radius - a.verdict.radius) < 1e-12


@pytest.mark.parametrize("holes", [(0.5j,), (-0.7, 0.1 + 0.1j), (0.0,), (0.0, 0.2, 0.4j, -0.6, 0.3 - 0.3j)])
def test_puncture_placement_does_not_matter(holes):
    # including a puncture at the centre: the kernel extends across it
    base = rigidity.classify(Disk(0.3, 2.0))
    v = rigidity.classify(PuncturedDisk(0.3, 2.0, tuple(0.3 + 2 * np.asarray(holes))))
    assert v.verdict == base.verdict
    assert v.evidence == base.evidence


def test_annulus_not_minimal(annulus, annulus_basis):
    v = rigidity.classify(annulus, annulus_basis)
    assert isinstance(v.verdict, rigidity.NotMinimal)
    assert v.verdict.margin > 1e-3
    assert _biconditional(v)


def test_annulus_argmin_is_oracle_minimizer(annulus, annulus_basis):
    # K(z, z) is not symmetric under z -> rho/z, so the minimum of K v - 1 is
    # off the middle circle |z| = sqrt(0.5)
    def margin(r):
        return oracles.annulus_bergman(np.array([r]), np.array([r]), 0.5, 1.0)[0].real * annulus.area - 1

    best = minimize_scalar(margin, bounds=(0.55, 0.95), method="bounded", options={"xatol": 1e-10})
    m, z = rigidity.minimal_scan(annulus, annulus_basis)
    fm, zz = rigidity.refine_argmin(annulus_basis, z, 0.04)
    assert abs(abs(zz) - best.x) < 1e-4
    assert fm == pytest.approx(best.fun, abs=1e-5)
    assert best.x == pytest.approx(0.74181, abs=1e-5)
    assert abs(best.x - np.sqrt(0.5)) > 0.03


def test_scan_tie_break_prefers_centroid_then_lexicographic(annulus, annulus_basis):
    # four grid points related by the symmetries of the square tie; the one with the smallest (re, im) wins
    m, z = rigidity.minimal_scan(annulus, annulus_basis)
    assert z.real < 0 and z.imag < 0


def test_triply_connected_not_minimal(tc_domain, tc_basis):
    v = rigidity.classify(tc_domain, tc_basis)
    assert v.name == "NotMinimal"
    assert v.verdict.margin > 1e-3
    assert _biconditional(v)


def test_ellipse_not_minimal():
    d = build_smooth(ellipse(0j, 1.0, 0.6))
    v = rigidity.classify(d)
    assert v.name == "NotMinimal"
    assert _biconditional(v)


def test_unbounded_case():
    v = rigidity.classify(UnboundedDomain())
    assert isinstance(v.verdict, rigidity.InfiniteVolumeCase)
    assert v.evidence["volume"] == np.inf


@pytest.mark.parametrize("name", ["disk_basis", "annulus_basis", "punctured_basis", "tc_basis"])
def test_mean_one(request, name, rng):
    b = request.getfixturevalue(name)
    for z0 in interior_samples(b.domain, 4, rng, b.guard_distance()):
        assert rigidity.mean_one_check(b, z0) < 1e-10


def test_mean_one_rejects_exterior(annulus_basis):
    with pytest.raises(DomainError):
        rigidity.mean_one_check(annulus_basis, 0.05)


def test_row_constancy_rejects_exterior(disk_basis):
    with pytest.raises(DomainError):
        rigidity.kernel_row_constancy(disk_basis, 0j, [0.2, 1.5])


def test_empty_grid_rejected(disk_basis):
    with pytest.raises(DomainError):
        rigidity.minimal_scan(disk_basis.domain, disk_basis, grid=2)


def test_inconsistent_evidence_reported(disk, disk_basis, monkeypatch):
    monkeypatch.setattr(rigidity, "kernel_row_constancy", lambda *a, **k: 1.0)
    v = rigidity.classify(disk, disk_basis)
    assert isinstance(v.verdict, rigidity.InconsistentEvidence)
    assert not v.consistent


def test_refine_argmin_disk_center():
    d = Disk(0.5 + 0.5j, 1.0)
    b = bergman.orthonormalize(d, degree=10)
    f, z = rigidity.refine_argmin(b, 0.45 + 0.6j, 0.1)
    assert abs(z - d.center) < 1e-7
    assert abs(f) < 1e-12


def test_describe_strings():
    assert rigidity.DiskMinusPolar(1 + 2j, 1.5).describe() == "DiskMinusPolar center=1+2i radius=1.5"
    assert rigidity.NotMinimal(0.5, -1j).describe().startswith("NotMinimal margin=0.5")
