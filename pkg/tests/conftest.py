import numpy as np
import pytest

from complementarity import Kernel, assemble_operator, build_grid, eigendecompose


@pytest.fixture(scope="session")
def ref_kernel():
    return Kernel("gaussian", 1.0, 0.5)


@pytest.fixture(scope="session")
def ref_grid():
    return build_grid(3, 1.0, 6, 1.0)


@pytest.fixture(scope="session")
def ref_operator(ref_grid, ref_kernel):
    return assemble_operator(ref_grid, ref_kernel)


@pytest.fixture(scope="session")
def ref_dec(ref_operator):
    return eigendecompose(ref_operator)


@pytest.fixture(scope="session")
def small_setup(ref_kernel):
    """Cheap full-rank 2D problem for property tests."""
    g = build_grid(2, 1.0, 5, 1.0)
    M = assemble_operator(g, ref_kernel)
    return g, M, eigendecompose(M)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
