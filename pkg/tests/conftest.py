import numpy as np
import pytest

from isoext import PairedSample, Weights
from isoext.generate import isometric


def wnorm(a, v):
    """Weighted norm by direct summation, independent of the package kernel."""
    v = np.atleast_2d(v)
    return np.sqrt(np.sum((np.asarray(a.values) * v) ** 2, axis=-1))


def sample_from(inst):
    return inst.sample()


@pytest.fixture
def rotation_sample():
    a = Weights([1.0, 1.0])
    return PairedSample(a, [[0, 0], [1, 0], [0, 1]], [[0, 0], [0, 1], [-1, 0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_isometric(n, k, m, seed):
    inst, truth = isometric(n, k, m, seed)
    return inst.sample(), truth


def euclid_projector(a, basis):
    """Orthogonal projector of the a-span of ``basis`` rows, in scaled coordinates.

    x -> D x (D = diag(a)) turns <., .>_a into the dot product, so the
    projector is U U^T for an orthonormal U from an SVD of D basis^T.
    """
    basis = np.atleast_2d(basis)
    n = len(a.values)
    if basis.size == 0:
        return np.zeros((n, n))
    Y = np.asarray(a.values)[:, None] * basis.T
    U, sv, _ = np.linalg.svd(Y, full_matrices=False)
    U = U[:, sv > 1e-12 * sv.max()]
    return U @ U.T


def subspace_gap(a, B1, B2):
    """Spectral-norm distance between the two projectors (sine of the largest angle)."""
    return np.linalg.norm(euclid_projector(a, B1) - euclid_projector(a, B2), 2)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = []


def record(name, passed, detail):
    ACCEPTANCE.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
