import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergman_rigidity import kernels
from bergman_rigidity.quadrature import boundary_rules

try:
    cy = kernels.get_backend("cython")
except ImportError:  # extension not built
    cy = None
py = kernels.get_backend("python")

needs_cython = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def _boundary(domain, m):
    rules = boundary_rules(domain, m)
    z = np.concatenate([r.z for r in rules])
    dz = np.concatenate([r.dz for r in rules])
    dzw = np.concatenate([r.dzw for r in rules])
    ds = np.concatenate([r.ds for r in rules])
    return z, dz / np.abs(dz), ds, dzw


@needs_cython
def test_kerzman_stein_agree(tc_domain):
    z, tan, ds, _ = _boundary(tc_domain, 64)
    a, b = cy.kerzman_stein_matrix(z, tan, ds), py.kerzman_stein_matrix(z, tan, ds)
    assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(b))


@needs_cython
@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2]))
def test_cauchy_sum_agree(seed, power):
    rng = np.random.default_rng(seed)
    m, n = 96, 40
    t = np.arange(m) / m
    src = np.exp(2j * np.pi * t)
    dzw = 2j * np.pi * src / m
    dens = rng.standard_normal((m, 3)) + 1j * rng.standard_normal((m, 3))
    targets = 0.9 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    a = cy.cauchy_sum(targets, src, dzw, dens, power)
    b = py.cauchy_sum(targets, src, dzw, dens, power)
    assert np.max(np.abs(a - b)) < 1e-11 * max(1.0, np.max(np.abs(b)))


@needs_cython
def test_annulus_green_agree(rng):
    z = (0.3 + 0.6 * rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
    w = (0.3 + 0.6 * rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
    a, b = cy.annulus_green(z, w, 0.25, 14), py.annulus_green(z, w, 0.25, 14)
    assert np.max(np.abs(a - b)) < 1e-13


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_pure_python_switch():
    env = dict(os.environ, BERGMAN_RIGIDITY_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from bergman_rigidity import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_cython
def test_default_backend_is_compiled():
    assert kernels.BACKEND == "cython"
