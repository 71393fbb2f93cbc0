import numpy as np
import pytest

from bcasc.codes import Field, SphericalCode, normalize_columns


def random_code(n, m, seed=0, field=Field.COMPLEX):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, m))
    if Field(field) is Field.COMPLEX:
        a = a + 1j * rng.standard_normal((n, m))
    return normalize_columns(a, field)


def random_unitary(n, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def basis(n, field=Field.COMPLEX):
    return SphericalCode(np.eye(n), field)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
