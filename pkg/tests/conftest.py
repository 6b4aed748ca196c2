import numpy as np
import pytest

from bergman_rigidity import bergman
from bergman_rigidity.geometry import Annulus, Disk, PuncturedDisk, build_smooth, circle, rose


def triply_connected():
    """Three-lobed outer curve with two circular holes."""
    return build_smooth(rose(0j, 1.0, 0.1, 3), [circle(-0.45, 0.15), circle(0.4 + 0.2j, 0.12)])


@pytest.fixture(scope="session")
def disk():
    return Disk(0j, 1.0)


@pytest.fixture(scope="session")
def annulus():
    return Annulus(0j, 0.5, 1.0)


@pytest.fixture(scope="session")
def punctured():
    return PuncturedDisk(0j, 1.0, (0.3, -0.2j))


@pytest.fixture(scope="session")
def tc_domain():
    return triply_connected()


@pytest.fixture(scope="session")
def disk_basis(disk):
    return bergman.orthonormalize(disk, degree=30)


@pytest.fixture(scope="session")
def annulus_basis(annulus):
    return bergman.orthonormalize(annulus, degree=30)


@pytest.fixture(scope="session")
def punctured_basis(punctured):
    return bergman.orthonormalize(punctured, degree=30)


@pytest.fixture(scope="session")
def tc_basis(tc_domain):
    return bergman.orthonormalize(tc_domain, degree=30)


@pytest.fixture(scope="session")
def annulus_fine(annulus):
    # resolves the annulus kernel to ~1e-12 in the middle band
    return bergman.orthonormalize(annulus, degree=120)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def acceptance(request):
    """Collects one summary line per acceptance criterion."""
    lines = getattr(request.config, "acceptance_lines", None)
    if lines is None:
        lines = request.config.acceptance_lines = []
    return lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
