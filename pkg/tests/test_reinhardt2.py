import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_rigidity import reinhardt2
from bergman_rigidity.errors import DomainError
from bergman_rigidity.geometry import ReinhardtProfile2

BALL = ReinhardtProfile2((1.0,))


def test_volume_two_paths_agree():
    vq = reinhardt2.volume(method="quadrature")
    va = reinhardt2.volume(method="antiderivative")
    assert vq == pytest.approx(va, abs=1e-12)
    assert vq == pytest.approx(reinhardt2.volume_closed_form(), abs=1e-12)
    assert vq == pytest.approx(3.4381917459757, abs=1e-12)


def test_ball_volume_and_kernel():
    assert reinhardt2.volume(BALL) == pytest.approx(np.pi**2 / 2, rel=1e-14)
    k = reinhardt2.kernel_origin(reinhardt2.norm_table(profile=BALL)).value
    assert k == pytest.approx(2 / np.pi**2, rel=1e-14)


def test_unknown_volume_method():
    with pytest.raises(ValueError):
        reinhardt2.volume(method="guess")


def test_monomial_norms():
    assert reinhardt2.monomial_norm(0, 0) == pytest.approx(reinhardt2.volume(), rel=1e-14)
    # |z1|^2 integrates to pi^2 int_0^t* t (1 - t - t^2) dt
    ts = (np.sqrt(5) - 1) / 2
    want = np.pi**2 * (ts**2 / 2 - ts**3 / 3 - ts**4 / 4)
    assert reinhardt2.monomial_norm(1, 0) == pytest.approx(want, rel=1e-13)
    assert reinhardt2.monomial_norm(1, 0) == pytest.approx(0.748305227, abs=1e-9)
    with pytest.raises(DomainError):
        reinhardt2.monomial_norm(-1, 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_norm_two_methods(p, q):
    a = reinhardt2.monomial_norm(p, q, method="antiderivative")
    b = reinhardt2.monomial_norm(p, q, method="quadrature")
    assert a == pytest.approx(b, rel=1e-11)


def test_norm_table_invariants():
    table = reinhardt2.norm_table(8)
    assert table.N == 8
    assert table.violations() == []
    assert table[0, 0] == pytest.approx(reinhardt2.volume())


def test_norm_table_violation_detection():
    table = reinhardt2.norm_table(3)
    bad = reinhardt2.MonomialNormTable(table.norms[::-1].copy())
    assert "not decreasing in p" in bad.violations()


def test_kernel_origin_identity():
    ko = reinhardt2.kernel_origin()
    assert ko.contributing == ((0, 0),)
    assert ko.value * reinhardt2.volume() == pytest.approx(1.0, abs=1e-12)
    assert ko.value == pytest.approx(0.290850562, abs=1e-9)


def test_hessian_is_constant_on_z2_block():
    x = np.array([[0.3, -0.2, 0.1, 0.5]])
    h = reinhardt2.hessian(x)[0]
    assert np.allclose(h[2:, 2:], 2 * np.eye(2))
    assert np.allclose(h[:2, 2:], 0)
    assert np.allclose(h, h.T)


def test_hessian_against_finite_differences():
    x0 = np.array([0.4, 0.3, -0.2, 0.1])
    eps = 1e-4
    fd = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            e_i, e_j = np.eye(4)[i] * eps, np.eye(4)[j] * eps
            f = lambda y: float(reinhardt2.defining_real(y[None, :])[0])
            fd[i, j] = (f(x0 + e_i + e_j) - f(x0 + e_i - e_j) - f(x0 - e_i + e_j) + f(x0 - e_i - e_j)) / (4 * eps * eps)
    assert np.max(np.abs(fd - reinhardt2.hessian(x0[None, :])[0])) < 1e-6


def test_boundary_samples_on_boundary(rng):
    x = reinhardt2.boundary_samples(500, rng)
    assert np.max(np.abs(reinhardt2.defining_real(x))) < 1e-10


def test_min_hessian_eig_is_two():
    eig, resid = reinhardt2.min_hessian_eig_sampled(10_000, seed=0)
    assert eig == pytest.approx(2.0, abs=1e-9)
    assert resid < 1e-10


def test_min_hessian_eig_ball():
    eig, _ = reinhardt2.min_hessian_eig_sampled(1000, seed=1, profile=BALL)
    assert eig == pytest.approx(2.0, abs=1e-12)


def test_hessian_report_rejects_interior_points():
    with pytest.raises(DomainError):
        reinhardt2.hessian_report(np.array([0.1, 0.0, 0.0, 0.0]))


def test_obstruction_roots():
    r = reinhardt2.obstruction_roots()
    assert r.circle_root == pytest.approx(np.sqrt(3) - 1, abs=1e-15)
    assert r.axis_root == pytest.approx((np.sqrt(5) - 1) / 2, abs=1e-15)
    assert r.difference == pytest.approx(0.1140168, abs=1e-7)
    assert r.incompatible


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False))
def test_oscillation_iff_a3_nonzero(a3):
    a1 = np.sqrt(np.sqrt(3) - 1)
    cc = reinhardt2.circle_constraint_residual(a1, a3)
    if abs(a3) < 1e-12:
        assert cc.oscillation < 1e-12
    elif abs(a3) > 1e-6:
        # rho varies like sqrt2 |a3| cos(theta - arg a3) around the circle
        assert cc.oscillation > abs(a3)


def test_circle_constraint_vanishes_at_root():
    a1 = np.sqrt(np.sqrt(3) - 1)
    cc = reinhardt2.circle_constraint_residual(a1, 0.0, theta=0.7)
    assert abs(cc.residual) < 1e-14
    assert abs(cc.mean) < 1e-14


def test_monte_carlo_orthogonality_and_norm():
    mc = reinhardt2.monte_carlo_inner(lambda z1, z2: z1, lambda z1, z2: z2, samples=200_000, seed=3)
    assert mc.consistent_with_zero
    norm = reinhardt2.monte_carlo_inner(lambda z1, z2: z1, lambda z1, z2: z1, samples=200_000, seed=3)
    assert abs(norm.value - reinhardt2.monomial_norm(1, 0)) < 4 * norm.sigma


def test_summary_verdict():
    rep = reinhardt2.summary()
    assert rep.verdict == "not biholomorphic to the ball"
    assert rep.oscillation_zero < 1e-12 < rep.oscillation_nonzero
    assert any("verdict" in line for line in rep.lines())
